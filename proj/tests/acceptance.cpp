// Acceptance gate: one PASS/FAIL line per criterion; exits nonzero on any failure.

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "atten/atten.hpp"

namespace fs = std::filesystem;
using namespace atten;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s [%.1fs]%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) { return format_double(v); }

bool all_passed(const std::vector<ExperimentReport>& reps, Outcome& o) {
  bool ok = true;
  for (const auto& r : reps)
    if (!r.passed()) {
      ok = false;
      o.require(false, r.name + ": " + r.violations.front().where + " " + r.violations.front().what);
    }
  return ok;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ATTEN_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<fs::path> csv_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") out.push_back(e.path().filename());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int main() {
  criterion(1, "normal-normal posterior means match the closed form", [] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = verify_normal_oracle({0.5, 1, 2}, {0.5, 1, 2}, linear_points(-6, 6, 25), {}, 1e-8);
    const double t = seconds_since(t0);
    o.require(rep.table.rows.size() == 225, "expected 225 rows");
    o.require(rep.passed(), "max error " + fmt(rep.metric("max_abs_error")));
    o.require(t < 10.0, "took " + fmt(t) + "s");
    o.detail = o.pass ? "225 points, max error " + fmt(rep.metric("max_abs_error")) : o.detail;
    return o;
  });

  criterion(2, "posterior mean lies between signal and prior mean", [] {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = verify_betweenness(preset_priors(), preset_noises(), 25, {}, 1e-7);
    const double t = seconds_since(t0);
    o.require(rep.table.rows.size() == 625, "expected 625 rows");
    o.require(rep.passed(), std::to_string(rep.violations.size()) + " violations");
    o.require(t < 120.0, "took " + fmt(t) + "s");
    if (o.pass) o.detail = "625 rows, 0 violations";
    return o;
  });

  criterion(3, "less precise noise attenuates under log-concave priors", [] {
    Outcome o;
    const auto rep = verify_attenuation_matrix(preset_priors(), noise_pool(), 25, {}, 1e-7);
    const double combos = rep.metric("combinations");
    bool logistic_prior = false, de_ladder = false;
    for (const auto& in : rep.inputs) {
      logistic_prior = logistic_prior || in.rfind("logistic", 0) == 0;
      const auto bar = in.find('|');
      de_ladder = de_ladder || (in.find("doubleexponential", bar) != std::string::npos &&
                                in.find("doubleexponential", in.find('<')) != std::string::npos);
    }
    o.require(combos >= 10, "only " + fmt(combos) + " combinations");
    o.require(logistic_prior, "no logistic prior");
    o.require(de_ladder, "no double-exponential ladder pair");
    o.require(rep.passed(), std::to_string(rep.violations.size()) + " violations");
    if (o.pass)
      o.detail = fmt(rep.metric("certified_pairs")) + " certified pairs, " + fmt(combos) + " combinations, " +
                 std::to_string(rep.table.rows.size()) + " rows";
    return o;
  });

  criterion(4, "counterexamples for incomparable noise pairs", [] {
    Outcome o;
    const std::vector<std::pair<Density, Density>> pairs = {{normal(0, 1), double_exponential(0, 1)},
                                                            {cauchy(0, 1), cauchy_uniform(0, 1)}};
    std::string summary;
    for (const auto& [e, et] : pairs) {
      const auto t0 = std::chrono::steady_clock::now();
      const Counterexample c = find_counterexample(e, et);
      const double t = seconds_since(t0);
      const std::string tag = e.to_string() + " vs " + et.to_string();
      o.require(c.margin > 1e-5, tag + " margin " + fmt(c.margin));
      o.require(c.prior_symmetric && c.prior_logconcave, tag + " prior not symmetric log-concave");
      o.require(c.echo_converged && c.echo_gap <= 1e-6, tag + " echo gap " + fmt(c.echo_gap));
      o.require(t < 60.0, tag + " took " + fmt(t) + "s");
      summary += (summary.empty() ? "" : "; ") + tag + ": s*=" + fmt(c.s_star) + " margin=" + fmt(c.margin);
    }
    if (o.pass) o.detail = summary;
    return o;
  });

  criterion(5, "log-exp concavity and monotone scale ladders", [] {
    Outcome o;
    const std::vector<Density> required = {normal(0, 1),          logistic(0, 1),        double_exponential(0, 1),
                                           student_t(0, 1, 1),    student_t(0, 1, 3),    student_t(0, 1, 10),
                                           double_pareto(0, 1, 1), double_pareto(0, 1, 2)};
    const auto lec = verify_log_exp_concavity(required, required);
    o.require(lec.passed(), "log-exp concavity failed for " + (lec.passed() ? "" : lec.violations.front().where));
    std::vector<Density> fams = ladder_families();
    fams.push_back(double_pareto(0, 1, 2));
    const auto sc = verify_scale_monotonicity(preset_priors(), fams, ladder_sigmas(), 25, {}, 1e-7);
    o.require(sc.passed(), std::to_string(sc.violations.size()) + " ladder violations");
    if (o.pass) o.detail = std::to_string(sc.table.rows.size()) + " ladder rows, 0 violations";
    return o;
  });

  criterion(6, "prior duality and the swap identity", [] {
    Outcome o;
    const auto reps = run_suite("duality", {});
    double worst = 0.0;
    for (const auto& r : reps) worst = std::max(worst, r.metric("max_swap_residual", INFINITY));
    all_passed(reps, o);
    o.require(worst <= 1e-8, "swap residual " + fmt(worst));
    if (o.pass) o.detail = std::to_string(reps.size()) + " combinations, max swap residual " + fmt(worst);
    return o;
  });

  criterion(7, "average posterior means: sandwich, orderings, Monte Carlo, closed forms", [] {
    Outcome o;
    SuiteConfig cfg;
    cfg.mc_draws = 1000000;
    const auto reps = run_suite("average", cfg);
    all_passed(reps, o);
    std::size_t conf = 0, prior = 0;
    double max_z = 0.0;
    for (const auto& r : reps) {
      conf += r.name.rfind("compare-confidence", 0) == 0;
      prior += r.name.rfind("compare-prior", 0) == 0;
      if (r.name == "monte-carlo")
        for (const auto& row : r.table.rows) max_z = std::max(max_z, std::get<double>(row[7]));
      if (r.name == "average-closed-form")
        for (const auto& row : r.table.rows) o.require(std::get<double>(row[4]) <= 1e-6, "closed-form spot off");
    }
    o.require(conf >= 3 && prior >= 3, "fewer than 3 combinations per ordering");
    if (o.pass) o.detail = "max MC z = " + fmt(max_z);
    return o;
  });

  criterion(8, "posterior ratio at zero signal is strictly increasing", [] {
    Outcome o;
    std::string summary;
    for (const Density& prior : {normal(-0.5, 1), logistic(-0.5, 1), logistic(-0.5, 0.5)}) {
      const auto rep = verify_posterior_ratio(prior, normal(0, 1));
      const double m = rep.metric("min_slope");
      o.require(rep.passed() && m > 0, prior.to_string() + " min slope " + fmt(m));
      summary += (summary.empty() ? "" : "; ") + prior.to_string() + " min slope " + fmt(m);
    }
    if (o.pass) o.detail = summary;
    return o;
  });

  criterion(9, "verify output is reproducible and re-parses exactly", [] {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "atten_acceptance";
    fs::remove_all(root);
    const fs::path a = root / "a", b = root / "b";
    const int ca = run_cli("verify --suite all --out " + a.string());
    const int cb = run_cli("verify --suite all --out " + b.string());
    o.require(ca == 0 && cb == 0, "exit codes " + std::to_string(ca) + ", " + std::to_string(cb));
    const auto fa = csv_files(a), fb = csv_files(b);
    o.require(!fa.empty() && fa == fb, "different file sets");
    for (const auto& f : fa) {
      const std::string ta = read_text_file((a / f).string());
      if (fs::exists(b / f)) o.require(ta == read_text_file((b / f).string()), f.string() + " differs between runs");
      o.require(format_csv(parse_csv(ta)) == ta, f.string() + " does not re-format identically");
    }
    // values in the oracle CSV are bit-identical to an in-process run
    const auto mem = run_suite("oracle", {});
    const Table disk = parse_csv(read_text_file((a / "normal-oracle.csv").string()));
    const Table& ref = mem.front().table;
    bool exact = disk.rows.size() == ref.rows.size();
    for (std::size_t i = 0; exact && i < ref.rows.size(); ++i)
      for (std::size_t j = 0; j < ref.rows[i].size(); ++j) {
        const double* x = std::get_if<double>(&ref.rows[i][j]);
        const double* y = std::get_if<double>(&disk.rows[i][j]);
        if (x && (!y || std::bit_cast<std::uint64_t>(*x) != std::bit_cast<std::uint64_t>(*y))) exact = false;
      }
    o.require(exact, "normal-oracle.csv values differ from the in-process run");
    if (o.pass) o.detail = std::to_string(fa.size()) + " CSV files byte-identical";
    fs::remove_all(root);
    return o;
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
