#pragma once

// Experiment configuration files. Sectioned key/value text:
//
//   [densities]      name = family(location,scale[,shape...])
//   [experiments]    name = prior_name noise_name [believed_name]
//   [attenuation]    name = prior_name eps_name eps_tilde_name
//   [grids]          signal | state = linear(lo,hi,n) | log(lo,hi,n) | list(v1,v2,...)
//   [tolerances]     rel_tol, abs_tol, tail_mass, max_subdivisions, tol
//   [monte_carlo]    draws, seed
//   [outputs]        dir, format (csv | svg | both)
//
// '#' and ';' start comments. [densities] and [experiments] are required.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "atten/density.hpp"
#include "atten/error.hpp"
#include "atten/harness.hpp"
#include "atten/quadrature.hpp"
#include "atten/report.hpp"

namespace atten {

struct Diagnostic {
  std::size_t line = 0;  // 0 when the problem is not tied to a line
  std::string field;
  std::string message;
};

class config_error : public error {
 public:
  config_error(std::string what, std::vector<Diagnostic> diags) : error(std::move(what)), diagnostics(std::move(diags)) {}
  std::vector<Diagnostic> diagnostics;
};

class parse_error : public config_error {
 public:
  using config_error::config_error;
};

class unresolved_name : public config_error {
 public:
  using config_error::config_error;
};

struct NamedExperiment {
  std::string name;
  std::string prior;
  std::string noise;
  std::optional<std::string> believed;
};

struct NamedAttenuation {
  std::string name;
  std::string prior;
  std::string eps;
  std::string eps_tilde;
};

struct ExperimentConfig {
  std::map<std::string, DensitySpec> densities;
  std::vector<NamedExperiment> experiments;
  std::vector<NamedAttenuation> attenuation;
  std::optional<std::vector<double>> signal_grid;
  std::optional<std::vector<double>> state_grid;
  QuadratureConfig quad;
  double tol = harness_tol;
  std::size_t mc_draws = 1000000;
  std::uint64_t seed = 20240601;
  std::string out_dir = "atten-out";
  std::string format = "csv";

  Density density(const std::string& name) const { return make_density(densities.at(name)); }
};

namespace detail {

inline std::string diag_text(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += '\n';
    if (d.line) out += "line " + std::to_string(d.line) + ": ";
    if (!d.field.empty()) out += d.field + ": ";
    out += d.message;
  }
  return out;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// linear(lo,hi,n) | log(lo,hi,n) | list(v1,...). Values must be strictly increasing.
inline std::vector<double> parse_grid(std::string_view text) {
  const std::string_view s = trim(text);
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')')
    throw invalid_parameter("grid must look like linear(lo,hi,n), log(lo,hi,n) or list(v1,v2,...)");
  const std::string kind(trim(s.substr(0, open)));
  std::vector<double> nums;
  std::string_view body = s.substr(open + 1, s.size() - open - 2);
  while (true) {
    const auto comma = body.find(',');
    double v = 0.0;
    if (!parse_double(body.substr(0, comma), v)) throw invalid_parameter("grid has a malformed number");
    nums.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  std::vector<double> values;
  if (kind == "linear" || kind == "log") {
    if (nums.size() != 3) throw invalid_parameter(kind + " grid needs lo, hi, n");
    if (!(nums[2] >= 2) || nums[2] != std::floor(nums[2])) throw invalid_parameter("grid size must be an integer >= 2");
    const auto n = static_cast<std::size_t>(nums[2]);
    GridSpec g = kind == "linear" ? GridSpec::linear(nums[0], nums[1], n) : GridSpec::log_spaced(nums[0], nums[1], n);
    g.validate();
    values = g.values();
  } else if (kind == "list") {
    values = nums;
  } else {
    throw invalid_parameter("unknown grid kind '" + kind + "'");
  }
  if (values.empty()) throw invalid_parameter("grid is empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw invalid_parameter("grid values must be strictly increasing");
  return values;
}

}  // namespace detail

/// Parses configuration text, collecting every problem before failing. Throws
/// parse_error when any line is malformed and unresolved_name when the only
/// problems are references to undefined densities.
inline ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig cfg;
  std::vector<Diagnostic> syntax, names;
  std::map<std::string, std::size_t> seen_sections;
  struct Ref {
    std::size_t line;
    std::string field;
    std::string name;
  };
  std::vector<Ref> refs;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        syntax.push_back({lineno, "", "unterminated section header"});
        section.clear();
        continue;
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> known = {"densities", "experiments", "attenuation", "grids",
                                                     "tolerances", "monte_carlo", "outputs"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        syntax.push_back({lineno, section, "unknown section"});
        section = "?";
      } else {
        seen_sections[section] = lineno;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      syntax.push_back({lineno, "", "expected key = value"});
      continue;
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      syntax.push_back({lineno, key, "empty key or value"});
      continue;
    }
    if (section.empty()) {
      syntax.push_back({lineno, key, "entry outside any section"});
      continue;
    }
    if (section == "?") continue;

    try {
      if (section == "densities") {
        if (cfg.densities.count(key)) throw invalid_parameter("density defined twice");
        const DensitySpec spec = parse_density_spec(value);
        make_density(spec);
        cfg.densities.emplace(key, spec);
      } else if (section == "experiments") {
        const auto w = detail::split_words(value);
        if (w.size() != 2 && w.size() != 3) throw invalid_parameter("expected: prior noise [believed]");
        NamedExperiment e{key, w[0], w[1], std::nullopt};
        if (w.size() == 3) e.believed = w[2];
        for (const auto& n : w) refs.push_back({lineno, key, n});
        cfg.experiments.push_back(std::move(e));
      } else if (section == "attenuation") {
        const auto w = detail::split_words(value);
        if (w.size() != 3) throw invalid_parameter("expected: prior eps eps_tilde");
        for (const auto& n : w) refs.push_back({lineno, key, n});
        cfg.attenuation.push_back({key, w[0], w[1], w[2]});
      } else if (section == "grids") {
        if (key == "signal") cfg.signal_grid = detail::parse_grid(value);
        else if (key == "state") cfg.state_grid = detail::parse_grid(value);
        else throw invalid_parameter("unknown grid (expected signal or state)");
      } else if (section == "tolerances" || section == "monte_carlo") {
        double v = 0.0;
        if (!detail::parse_double(value, v)) throw invalid_parameter("not a number");
        if (key == "rel_tol") cfg.quad.rel_tol = v;
        else if (key == "abs_tol") cfg.quad.abs_tol = v;
        else if (key == "tail_mass") cfg.quad.tail_mass = v;
        else if (key == "max_subdivisions") {
          if (!(v >= 1) || v != std::floor(v) || v > 1e6) throw invalid_parameter("must be an integer in [1, 1e6]");
          cfg.quad.max_subdivisions = static_cast<int>(v);
        } else if (key == "tol") {
          if (!(v > 0)) throw invalid_parameter("must be positive");
          cfg.tol = v;
        } else if (key == "draws" && section == "monte_carlo") {
          if (!(v >= 0) || v != std::floor(v)) throw invalid_parameter("must be a nonnegative integer");
          cfg.mc_draws = static_cast<std::size_t>(v);
        } else if (key == "seed" && section == "monte_carlo") {
          if (!(v >= 0) || v != std::floor(v) || v > 9.0e15) throw invalid_parameter("must be a nonnegative integer");
          cfg.seed = static_cast<std::uint64_t>(v);
        } else {
          throw invalid_parameter("unknown key");
        }
      } else if (section == "outputs") {
        if (key == "dir") cfg.out_dir = value;
        else if (key == "format") {
          if (value != "csv" && value != "svg" && value != "both") throw invalid_parameter("format must be csv, svg or both");
          cfg.format = value;
        } else {
          throw invalid_parameter("unknown key");
        }
      }
    } catch (const error& e) {
      syntax.push_back({lineno, key, e.what()});
    }
  }

  for (const char* req : {"densities", "experiments"})
    if (!seen_sections.count(req)) syntax.push_back({0, "", std::string("missing required section [") + req + "]"});
  try {
    cfg.quad.validate();
  } catch (const error& e) {
    syntax.push_back({seen_sections.count("tolerances") ? seen_sections["tolerances"] : 0, "tolerances", e.what()});
  }
  for (const Ref& r : refs)
    if (!cfg.densities.count(r.name)) names.push_back({r.line, r.field, "undefined density '" + r.name + "'"});

  if (!syntax.empty()) {
    syntax.insert(syntax.end(), names.begin(), names.end());
    throw parse_error(detail::diag_text(syntax), syntax);
  }
  if (!names.empty()) throw unresolved_name(detail::diag_text(names), names);
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const error& e) {
    throw parse_error(e.what(), {{0, path, e.what()}});
  }
  return parse_config_text(text);
}

/// Suite settings from a config: tolerances, Monte Carlo settings, and the
/// configured experiments and attenuation runs added to the preset matrix.
inline SuiteConfig suite_config(const ExperimentConfig& cfg) {
  SuiteConfig s;
  s.quad = cfg.quad;
  s.tol = cfg.tol;
  s.mc_draws = cfg.mc_draws;
  s.seed = cfg.seed;
  for (const auto& e : cfg.experiments) {
    std::optional<Density> believed;
    if (e.believed) believed = cfg.density(*e.believed);
    s.experiments.push_back(make_experiment(cfg.density(e.prior), cfg.density(e.noise), believed));
  }
  for (const auto& a : cfg.attenuation)
    s.attenuation.push_back({a.name, cfg.density(a.prior), cfg.density(a.eps), cfg.density(a.eps_tilde)});
  return s;
}

}  // namespace atten
