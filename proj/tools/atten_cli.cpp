#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atten/atten.hpp"

namespace fs = std::filesystem;
using namespace atten;

namespace {

enum Exit : int { ok = 0, failed = 1, config = 2, numerical = 3 };

struct Globals {
  std::string config_path;
  std::string out;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string format;
};

std::string num(double v) { return format_double(v); }

bool want_csv(const std::string& f) { return f == "csv" || f == "both"; }
bool want_svg(const std::string& f) { return f == "svg" || f == "both"; }

class Session {
 public:
  explicit Session(const Globals& g) : g_(g) {
    if (!g_.config_path.empty()) cfg_ = parse_config(g_.config_path);
  }

  const ExperimentConfig* config() const { return cfg_ ? &*cfg_ : nullptr; }

  QuadratureConfig quad() const { return cfg_ ? cfg_->quad : QuadratureConfig{}; }

  /// A density name from the config, or a literal spec.
  Density density(const std::string& text) const {
    if (cfg_ && cfg_->densities.count(text)) return cfg_->density(text);
    return parse_density(text);
  }

  std::vector<double> grid(const std::string& text, bool signal, const std::string& fallback) const {
    if (!text.empty()) return detail::parse_grid(text);
    if (cfg_) {
      const auto& g = signal ? cfg_->signal_grid : cfg_->state_grid;
      if (g) return *g;
    }
    return detail::parse_grid(fallback);
  }

  /// Table to --out (or stdout), plus an SVG next to it when requested.
  void emit(const Table& t, const std::optional<Chart>& chart) const {
    const std::string fmt = format();
    if (g_.out.empty()) {
      if (want_svg(fmt) && !want_csv(fmt)) throw invalid_parameter("--format svg needs --out");
      std::cout << format_csv(t);
      return;
    }
    if (want_csv(fmt)) emit_csv(t, g_.out);
    if (want_svg(fmt) && chart) emit_plot(*chart, fs::path(g_.out).replace_extension(".svg").string());
  }

  std::string format() const { return cfg_ && g_.format.empty() ? cfg_->format : (g_.format.empty() ? "csv" : g_.format); }

 private:
  const Globals& g_;
  std::optional<ExperimentConfig> cfg_;
};

void print_verdict(const OrderVerdict& v) {
  std::printf("relation: %s\n", std::string(relation_name(v.relation)).c_str());
  std::printf("method: %s\n", v.method.c_str());
  std::printf("strict: %s\n", v.strict ? "yes" : "no");
  std::printf("min_slope: %s\nmax_slope: %s\n", num(v.min_slope).c_str(), num(v.max_slope).c_str());
  if (v.witness_decrease)
    std::printf("decreasing at x = %s (slope %s)\n", num(v.witness_decrease->x).c_str(),
                num(v.witness_decrease->slope).c_str());
  if (v.witness_increase)
    std::printf("increasing at x = %s (slope %s)\n", num(v.witness_increase->x).c_str(),
                num(v.witness_increase->slope).c_str());
  std::printf("grid: %s\n", v.grid.to_string().c_str());
}

Chart sweep_chart(const std::string& title, const std::vector<Series>& curves, double prior_mean) {
  Chart c;
  c.title = title;
  c.x_label = "s";
  c.y_label = "E[X | S = s]";
  c.series = curves;
  c.reference_y = prior_mean;
  c.reference_label = "prior mean";
  return c;
}

int run_verify(const Globals& g, const std::string& suite, std::optional<std::size_t> draws) {
  ExperimentConfig cfg;
  if (!g.config_path.empty()) cfg = parse_config(g.config_path);
  SuiteConfig sc = suite_config(cfg);
  if (g.tol) sc.tol = *g.tol;
  if (g.seed) sc.seed = *g.seed;
  if (draws) sc.mc_draws = *draws;
  const std::string fmt = g.format.empty() ? cfg.format : g.format;
  const std::string out = g.out.empty() ? cfg.out_dir : g.out;

  std::vector<ExperimentReport> reports = suite == "all" ? run_full_suite(sc) : run_suite(suite, sc);
  fs::create_directories(out);
  for (const auto& r : reports) {
    if (want_csv(fmt)) emit_csv(r, (fs::path(out) / (r.name + ".csv")).string());
    if (want_svg(fmt))
      if (auto chart = report_chart(r)) emit_plot(*chart, (fs::path(out) / (r.name + ".svg")).string());
  }
  emit_csv(summary_table(reports), (fs::path(out) / "summary.csv").string());

  std::size_t n_failed = 0;
  bool numeric = false;
  for (const auto& r : reports) {
    std::printf("%s %s", r.passed() ? "PASS" : "FAIL", r.name.c_str());
    if (!r.passed()) {
      ++n_failed;
      numeric = numeric || r.error_kind == "numerical";
      const auto& v = r.violations.front();
      std::printf("  (%zu violations; %s: %s)", r.violations.size(), v.where.c_str(), v.what.c_str());
    }
    std::printf("\n");
  }
  std::printf("%zu of %zu reports passed; output in %s\n", reports.size() - n_failed, reports.size(), out.c_str());
  if (n_failed == 0) return Exit::ok;
  return numeric ? Exit::numerical : Exit::failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior means in location experiments, precision orders and attenuation checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Experiment config file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output file (single-table commands) or directory (verify, plot)");
  app.add_option("--tol", g.tol, "Tolerance override");
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--format", g.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

  std::string a, b, prior, noise, believed, grid, profile, prior_a, prior_b, believed_a, believed_b, objective, eps,
      eps_tilde, suite = "all";
  double signal = 0, state = 0;
  std::size_t mc_draws = 0;
  std::optional<std::size_t> verify_draws;
  std::vector<std::string> densities;

  auto* cp = app.add_subcommand("check-precision", "Classify --a against --b in the precision order");
  cp->add_option("--a", a, "Candidate less precise noise")->required();
  cp->add_option("--b", b, "Reference noise")->required();
  cp->add_option("--profile", profile, "Write the log-ratio slope profile as CSV");

  auto* post = app.add_subcommand("posterior", "Posterior mean at one signal");
  post->add_option("--prior", prior)->required();
  post->add_option("--noise", noise)->required();
  post->add_option("--believed", believed);
  post->add_option("--signal", signal)->required();

  auto* sw = app.add_subcommand("sweep", "Posterior means over a signal grid (CSV: s, posterior_mean, Z, status)");
  sw->add_option("--prior", prior)->required();
  sw->add_option("--noise", noise)->required();
  sw->add_option("--believed", believed);
  sw->add_option("--grid", grid, "linear(lo,hi,n) | log(lo,hi,n) | list(...)");

  auto* av = app.add_subcommand("average", "Average posterior mean at a state");
  av->add_option("--prior", prior)->required();
  av->add_option("--noise", noise, "Objective noise")->required();
  av->add_option("--believed", believed);
  av->add_option("--state", state)->required();
  av->add_option("--draws", mc_draws, "Also estimate by Monte Carlo with this many draws");

  auto* cc = app.add_subcommand("compare-confidence", "Agents sharing a prior, A believing sharper noise than B");
  cc->add_option("--prior", prior)->required();
  cc->add_option("--believed-a", believed_a)->required();
  cc->add_option("--believed-b", believed_b)->required();
  cc->add_option("--objective", objective)->required();
  cc->add_option("--states", grid, "State grid");

  auto* cpr = app.add_subcommand("compare-prior", "Agents with a less precise (A) and more precise (B) prior");
  cpr->add_option("--prior-a", prior_a)->required();
  cpr->add_option("--prior-b", prior_b)->required();
  cpr->add_option("--noise", noise)->required();
  cpr->add_option("--states", grid, "State grid");

  auto* cx = app.add_subcommand("counterexample", "Prior and signal where eps_tilde yields the larger posterior mean");
  cx->add_option("--eps", eps)->required();
  cx->add_option("--eps-tilde", eps_tilde)->required();

  auto* ver = app.add_subcommand("verify", "Run verification suites and write one CSV per report");
  ver->add_option("--suite", suite, "Suite name or all")
      ->check(CLI::IsMember([] {
        auto names = suite_names();
        names.push_back("all");
        return names;
      }()));
  ver->add_option("--draws", verify_draws, "Monte Carlo draws (0 skips the comparison)");

  auto* pl = app.add_subcommand("plot", "SVG charts of densities (and config attenuation sweeps)");
  pl->add_option("--density", densities, "Density spec or config name (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::config;
  }

  try {
    if (ver->parsed()) return run_verify(g, suite, verify_draws);

    const Session ses(g);
    const QuadratureConfig quad = ses.quad();
    auto experiment = [&] {
      std::optional<Density> bel;
      if (!believed.empty()) bel = ses.density(believed);
      return make_experiment(ses.density(prior), ses.density(noise), bel);
    };

    if (cp->parsed()) {
      const Density da = ses.density(a), db = ses.density(b);
      const double tol = g.tol.value_or(default_slope_tol);
      const OrderVerdict v = check_less_precise(da, db, tol);
      std::printf("a: %s\nb: %s\n", da.to_string().c_str(), db.to_string().c_str());
      print_verdict(v);
      if (!profile.empty()) {
        Table t;
        t.columns = {"x", "log_ratio", "slope"};
        for (const SlopeSample& s : log_ratio_profile(da, db, v.grid, tol)) t.add_row({s.x, s.log_ratio, s.slope});
        emit_csv(t, profile);
      }
      return Exit::ok;
    }

    if (post->parsed()) {
      const LocationExperiment exp = experiment();
      const PosteriorPoint p = evaluate_posterior(exp, signal, quad);
      std::printf("posterior_mean: %s\nZ: %s\nlog_Z: %s\nerror_estimate: %s\n", num(p.mean).c_str(), num(p.z).c_str(),
                  num(p.log_z).c_str(), num(p.mean_error).c_str());
      if (exp.outside_assumptions()) std::printf("note: outside assumptions (no finite first moment)\n");
      return Exit::ok;
    }

    if (sw->parsed()) {
      const LocationExperiment exp = experiment();
      const auto signals = ses.grid(grid, true, "linear(-4,4,41)");
      Table t;
      t.columns = {"s", "posterior_mean", "Z", "status"};
      Series curve{"posterior mean", {}, {}};
      bool numeric = false;
      for (const SweepRow& r : posterior_mean_sweep(exp, signals, quad)) {
        t.add_row({r.s, r.posterior_mean, r.z, std::string(status_name(r.status))});
        curve.x.push_back(r.s);
        curve.y.push_back(r.posterior_mean);
        numeric = numeric || r.status == RowStatus::degenerate_signal || r.status == RowStatus::quadrature_failure;
      }
      ses.emit(t, sweep_chart("posterior mean", {curve}, exp.prior.center()));
      return numeric ? Exit::numerical : Exit::ok;
    }

    if (av->parsed()) {
      const LocationExperiment exp = experiment();
      const AverageResult r = evaluate_average(exp, state, quad);
      std::printf("average_posterior_mean: %s\nerror_estimate: %s\n", num(r.value).c_str(), num(r.abs_error).c_str());
      if (r.degenerate_weight > 0) std::printf("degenerate_weight: %s\n", num(r.degenerate_weight).c_str());
      if (mc_draws > 0) {
        const MonteCarloEstimate mc = monte_carlo_average(exp, state, mc_draws, g.seed.value_or(20240601), quad);
        std::printf("monte_carlo_mean: %s\nmonte_carlo_std_error: %s\n", num(mc.mean).c_str(), num(mc.std_error).c_str());
      }
      return Exit::ok;
    }

    if (cc->parsed() || cpr->parsed()) {
      const auto states = ses.grid(grid, false, "linear(-4,4,9)");
      ExperimentReport rep;
      if (cc->parsed()) {
        const Density p = ses.density(prior);
        rep = compare_confidence({"A", ses.density(believed_a), p}, {"B", ses.density(believed_b), p},
                                 ses.density(objective), states, quad);
      } else {
        const Density n = ses.density(noise);
        rep = compare_prior_precision({"A", n, ses.density(prior_a)}, {"B", n, ses.density(prior_b)}, n, states, quad);
      }
      ses.emit(rep.table, report_chart(rep));
      for (const auto& v : rep.violations)
        std::fprintf(stderr, "violation at %s: %s (%s)\n", v.where.c_str(), v.what.c_str(), num(v.magnitude).c_str());
      return rep.passed() ? Exit::ok : Exit::failed;
    }

    if (cx->parsed()) {
      const Counterexample c = find_counterexample(ses.density(eps), ses.density(eps_tilde), quad);
      const ExperimentReport rep = counterexample_report(c, quad);
      std::printf("eps: %s\neps_tilde: %s\n", c.eps.c_str(), c.eps_tilde.c_str());
      std::printf("s_star: %s\ndelta: %s\nprior: %s\n", num(c.s_star).c_str(), num(c.delta).c_str(),
                  c.final_prior->to_string().c_str());
      std::printf("mean_eps: %s\nmean_eps_tilde: %s\nmargin: %s\n", num(c.mean_eps).c_str(),
                  num(c.mean_eps_tilde).c_str(), num(c.margin).c_str());
      std::printf("uniform_limit: %s\necho_gap: %s\necho_converged: %s\n", num(c.uniform_mean_eps).c_str(),
                  num(c.echo_gap).c_str(), c.echo_converged ? "yes" : "no");
      if (!g.out.empty()) emit_csv(rep, g.out);
      return rep.passed() ? Exit::ok : Exit::failed;
    }

    if (pl->parsed()) {
      std::vector<Density> ds;
      for (const auto& d : densities) ds.push_back(ses.density(d));
      const ExperimentConfig* cfg = ses.config();
      if (ds.empty() && cfg)
        for (const auto& [name, spec] : cfg->densities) ds.push_back(make_density(spec));
      const std::string out = g.out.empty() ? (cfg ? cfg->out_dir : std::string("atten-out")) : g.out;
      if (out.size() > 4 && out.substr(out.size() - 4) == ".svg") {
        emit_plot(density_chart(ds), out);
        return Exit::ok;
      }
      fs::create_directories(out);
      emit_plot(density_chart(ds), (fs::path(out) / "densities.svg").string());
      if (cfg) {
        const auto signals = ses.grid("", true, "linear(-4,4,41)");
        for (const auto& at : cfg->attenuation) {
          const Density p = cfg->density(at.prior), e = cfg->density(at.eps), et = cfg->density(at.eps_tilde);
          const LocationExperiment ee = make_experiment(p, e), eet = make_experiment(p, et);
          Series s1{"noise " + e.to_string(), signals, {}}, s2{"noise " + et.to_string(), signals, {}};
          for (double s : signals) {
            s1.y.push_back(posterior_mean(ee, s, quad));
            s2.y.push_back(posterior_mean(eet, s, quad));
          }
          emit_plot(sweep_chart("prior " + p.to_string(), {s1, s2}, p.center()),
                    (fs::path(out) / ("attenuation-" + at.name + ".svg")).string());
        }
      }
      return Exit::ok;
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error:\n%s\n", e.what());
    return Exit::config;
  } catch (const invalid_parameter& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return Exit::config;
  } catch (const inadmissible_density& e) {
    std::fprintf(stderr, "inadmissible density: %s\n", e.what());
    return Exit::config;
  } catch (const precondition_failed& e) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return Exit::failed;
  } catch (const quadrature_failure& e) {
    std::fprintf(stderr, "quadrature failure: %s\n", e.what());
    return Exit::numerical;
  } catch (const degenerate_signal& e) {
    std::fprintf(stderr, "degenerate signal: %s\n", e.what());
    return Exit::numerical;
  } catch (const search_exhausted& e) {
    std::fprintf(stderr, "search exhausted: %s\n", e.what());
    return Exit::numerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return Exit::failed;
  }
  return Exit::ok;
}
