#pragma once

// One-dimensional densities used as priors and noise terms. Every family is
// symmetric about its location; the standardized shape lives in a Kernel and a
// Density applies the location/scale map on top of it.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "atten/error.hpp"
#include "atten/quadrature.hpp"

namespace atten {

enum class Family {
  normal,
  logistic,
  double_exponential,
  student_t,
  cauchy,
  double_pareto,
  smoothed_uniform,
  cauchy_uniform,  // standard Cauchy plus an independent Uniform[-1, 1]
  custom,
};

struct DensitySpec {
  Family family = Family::normal;
  double location = 0.0;
  double scale = 1.0;
  /// nu for student_t, alpha for double_pareto, (delta, d) for smoothed_uniform.
  std::vector<double> shape;
  /// Display name, only used for Family::custom.
  std::string name;

  bool operator==(const DensitySpec&) const = default;
};

/// Standardized density, symmetric about 0. cdf() must be accurate for z <= 0 and
/// quantile() for p <= 1/2; the upper half is obtained by reflection.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual double log_pdf(double z) const = 0;
  virtual double dlog_pdf(double z) const = 0;
  virtual double cdf(double z) const = 0;
  virtual bool finite_first_moment() const = 0;

  virtual double quantile(double p) const {
    // Bracket then bisect; used by kernels without a closed-form inverse.
    if (p >= 0.5) return 0.0;
    double lo = -1.0;
    while (cdf(lo) > p) {
      lo *= 2.0;
      if (lo < -1e300) return lo;
    }
    double hi = lo / 2.0 > -0.5 ? 0.0 : lo / 2.0;
    for (int i = 0; i < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) > p ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

  virtual std::vector<Feature> features() const { return {{0.0, 1.0}}; }
};

namespace kernels {

inline constexpr double log_sqrt_2pi = 0.91893853320467274178032973640562;

class Normal final : public Kernel {
 public:
  double log_pdf(double z) const override { return -0.5 * z * z - log_sqrt_2pi; }
  double dlog_pdf(double z) const override { return -z; }
  double cdf(double z) const override { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
  double quantile(double p) const override {
    if (p <= 0.0) return -INFINITY;
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
  }
  bool finite_first_moment() const override { return true; }
};

class Logistic final : public Kernel {
 public:
  double log_pdf(double z) const override {
    const double a = std::abs(z);
    return -a - 2.0 * std::log1p(std::exp(-a));
  }
  double dlog_pdf(double z) const override { return -std::tanh(0.5 * z); }
  double cdf(double z) const override {
    if (z <= 0.0) {
      const double e = std::exp(z);
      return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(-z));
  }
  double quantile(double p) const override { return std::log(p) - std::log1p(-p); }
  bool finite_first_moment() const override { return true; }
};

class DoubleExponential final : public Kernel {
 public:
  double log_pdf(double z) const override { return -std::abs(z) - std::numbers::ln2; }
  double dlog_pdf(double z) const override { return z > 0 ? -1.0 : (z < 0 ? 1.0 : 0.0); }
  double cdf(double z) const override { return z <= 0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z); }
  double quantile(double p) const override { return p <= 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p)); }
  bool finite_first_moment() const override { return true; }
};

class StudentT final : public Kernel {
 public:
  explicit StudentT(double nu)
      : nu_(nu),
        dist_(nu),
        log_norm_(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi)) {}
  double log_pdf(double z) const override { return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(z * z / nu_); }
  double dlog_pdf(double z) const override { return -(nu_ + 1.0) * z / (nu_ + z * z); }
  double cdf(double z) const override { return boost::math::cdf(dist_, z); }
  double quantile(double p) const override { return boost::math::quantile(dist_, p); }
  bool finite_first_moment() const override { return nu_ > 1.0; }

 private:
  double nu_;
  boost::math::students_t_distribution<double> dist_;
  double log_norm_;
};

class Cauchy final : public Kernel {
 public:
  double log_pdf(double z) const override { return -std::log(std::numbers::pi) - std::log1p(z * z); }
  double dlog_pdf(double z) const override { return -2.0 * z / (1.0 + z * z); }
  double cdf(double z) const override { return std::atan2(1.0, -z) / std::numbers::pi; }
  double quantile(double p) const override {
    if (p == 0.5) return 0.0;
    return p < 0.5 ? -1.0 / std::tan(std::numbers::pi * p) : 1.0 / std::tan(std::numbers::pi * (1.0 - p));
  }
  bool finite_first_moment() const override { return false; }
};

/// |z|^(-alpha-1) tails spliced at |z| = 1 to the quadratic cap a - b z^2, with
/// value and first derivative matched so the density is positive and C^1.
class DoublePareto final : public Kernel {
 public:
  explicit DoublePareto(double alpha)
      : alpha_(alpha), a_(0.5 * (alpha + 3.0)), b_(0.5 * (alpha + 1.0)),
        norm_((2.0 * alpha + 8.0) / 3.0 + 2.0 / alpha), log_norm_(std::log(norm_)) {}
  double log_pdf(double z) const override {
    const double t = std::abs(z);
    if (t <= 1.0) return std::log(a_ - b_ * t * t) - log_norm_;
    return -(alpha_ + 1.0) * std::log(t) - log_norm_;
  }
  double dlog_pdf(double z) const override {
    if (std::abs(z) <= 1.0) return -2.0 * b_ * z / (a_ - b_ * z * z);
    return -(alpha_ + 1.0) / z;
  }
  double cdf(double z) const override {
    if (z > 0) return 1.0 - cdf(-z);
    const double t = -z;
    if (t >= 1.0) return std::pow(t, -alpha_) / (alpha_ * norm_);
    return 0.5 - (a_ * t - b_ * t * t * t / 3.0) / norm_;
  }
  double quantile(double p) const override {
    if (p > 0.5) return -quantile(1.0 - p);
    const double tail = 1.0 / (alpha_ * norm_);
    if (p <= tail) return -std::pow(p * alpha_ * norm_, -1.0 / alpha_);
    // a t - b t^3 / 3 = (1/2 - p) * norm, increasing on [0, 1]
    const double target = (0.5 - p) * norm_;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      (a_ * mid - b_ * mid * mid * mid / 3.0 < target ? lo : hi) = mid;
    }
    return -0.5 * (lo + hi);
  }
  bool finite_first_moment() const override { return alpha_ > 1.0; }
  std::vector<Feature> features() const override { return {{0.0, 1.0}, {-1.0, 0.25}, {1.0, 0.25}}; }

 private:
  double alpha_, a_, b_, norm_, log_norm_;
};

/// log f = c on [-delta, delta] and c - d (|z| - delta)^2 outside.
class SmoothedUniform final : public Kernel {
 public:
  SmoothedUniform(double delta, double d)
      : delta_(delta), d_(d), sqrt_d_(std::sqrt(d)),
        level_(-std::log(2.0 * delta + std::sqrt(std::numbers::pi / d))),
        tail_(std::exp(level_) * 0.5 * std::sqrt(std::numbers::pi / d)) {}
  double log_pdf(double z) const override {
    const double t = std::abs(z) - delta_;
    return t <= 0 ? level_ : level_ - d_ * t * t;
  }
  double dlog_pdf(double z) const override {
    const double t = std::abs(z) - delta_;
    if (t <= 0) return 0.0;
    return z > 0 ? -2.0 * d_ * t : 2.0 * d_ * t;
  }
  double cdf(double z) const override {
    if (z > 0) return 1.0 - cdf(-z);
    const double t = -z - delta_;
    if (t >= 0) return tail_ * std::erfc(sqrt_d_ * t);
    return 0.5 + std::exp(level_) * z;
  }
  double quantile(double p) const override {
    if (p > 0.5) return -quantile(1.0 - p);
    if (p <= 0.0) return -INFINITY;
    if (p <= tail_) return -(delta_ + boost::math::erfc_inv(p / tail_) / sqrt_d_);
    return -(0.5 - p) / std::exp(level_);
  }
  bool finite_first_moment() const override { return true; }
  std::vector<Feature> features() const override {
    const double w = 1.0 / sqrt_d_;
    return {{0.0, delta_}, {-delta_, w}, {delta_, w}};
  }
  double level() const { return level_; }

 private:
  double delta_, d_, sqrt_d_, level_, tail_;
};

/// Density of C + U with C standard Cauchy and U ~ Uniform[-1, 1], in closed form:
/// f(z) = (atan(z + 1) - atan(z - 1)) / (2 pi) = atan2(2, z^2) / (2 pi).
class CauchyUniform final : public Kernel {
 public:
  double log_pdf(double z) const override {
    return std::log(std::atan2(2.0, z * z)) - std::log(2.0 * std::numbers::pi);
  }
  double dlog_pdf(double z) const override {
    const double up = 1.0 + (z + 1.0) * (z + 1.0);
    const double dn = 1.0 + (z - 1.0) * (z - 1.0);
    return -4.0 * z / (up * dn * std::atan2(2.0, z * z));
  }
  double cdf(double z) const override {
    if (z > 0) return 1.0 - cdf(-z);
    const double x = -z;
    if (x >= 2.0) {
      // upper tail mass at x via the antiderivative of the Cauchy survival function
      const double yp = x + 1.0, ym = x - 1.0;
      const double lin = yp * std::atan(1.0 / yp) - ym * std::atan(1.0 / ym);
      const double lg = 0.5 * std::log1p(4.0 * x / (1.0 + ym * ym));
      return 0.5 * (lin + lg) / std::numbers::pi;
    }
    auto g = [](double y) { return 0.5 * y + (y * std::atan(y) - 0.5 * std::log1p(y * y)) / std::numbers::pi; };
    return 0.5 * (g(z + 1.0) - g(z - 1.0));
  }
  bool finite_first_moment() const override { return false; }
  std::vector<Feature> features() const override { return {{0.0, 1.0}, {-1.0, 0.5}, {1.0, 0.5}}; }
};

}  // namespace kernels

class Density {
 public:
  Density(DensitySpec spec, std::shared_ptr<const Kernel> kernel)
      : spec_(std::move(spec)), kernel_(std::move(kernel)), center_(spec_.location) {
    if (!kernel_) throw invalid_parameter("density needs a kernel");
    if (!(spec_.scale > 0) || !std::isfinite(spec_.scale)) throw invalid_parameter("scale must be positive");
    if (!std::isfinite(spec_.location)) throw invalid_parameter("location must be finite");
    log_scale_ = std::log(spec_.scale);
  }

  const DensitySpec& spec() const { return spec_; }
  const Kernel& kernel() const { return *kernel_; }
  const std::shared_ptr<const Kernel>& kernel_ptr() const { return kernel_; }
  double location() const { return spec_.location; }
  double scale() const { return spec_.scale; }
  /// Declared symmetry center; equals location unless overridden.
  double center() const { return center_; }

  double log_pdf(double x) const { return kernel_->log_pdf(standardize(x)) - log_scale_; }
  double pdf(double x) const { return std::exp(log_pdf(x)); }
  double dlog_pdf(double x) const { return kernel_->dlog_pdf(standardize(x)) / spec_.scale; }
  double cdf(double x) const {
    const double z = standardize(x);
    return z <= 0 ? kernel_->cdf(z) : 1.0 - kernel_->cdf(-z);
  }
  /// P(X > x), accurate in the upper tail.
  double sf(double x) const {
    const double z = standardize(x);
    return z >= 0 ? kernel_->cdf(-z) : 1.0 - kernel_->cdf(z);
  }
  double quantile(double p) const {
    if (!(p > 0 && p < 1)) throw invalid_parameter("quantile needs p in (0, 1)");
    const double z = p <= 0.5 ? kernel_->quantile(p) : -kernel_->quantile(1.0 - p);
    return spec_.location + spec_.scale * z;
  }
  /// x with P(X > x) = q.
  double upper_quantile(double q) const {
    if (!(q > 0 && q < 1)) throw invalid_parameter("upper_quantile needs q in (0, 1)");
    const double z = q <= 0.5 ? -kernel_->quantile(q) : kernel_->quantile(1.0 - q);
    return spec_.location + spec_.scale * z;
  }

  /// Interval outside of which each one-sided tail carries less than tail_mass.
  std::pair<double, double> effective_support(double tail_mass) const {
    return {quantile(tail_mass), upper_quantile(tail_mass)};
  }

  bool has_finite_first_moment() const { return kernel_->finite_first_moment(); }
  bool admissible_as_noise() const { return center_ == 0.0 && has_finite_first_moment(); }

  std::vector<Feature> features() const {
    std::vector<Feature> out = kernel_->features();
    for (Feature& f : out) {
      f.x = spec_.location + spec_.scale * f.x;
      f.width *= spec_.scale;
    }
    return out;
  }

  /// Same density, different declared symmetry center (used to probe the checks).
  Density with_declared_center(double c) const {
    Density d = *this;
    d.center_ = c;
    return d;
  }

  std::string to_string() const;

 private:
  double standardize(double x) const { return (x - spec_.location) / spec_.scale; }

  DensitySpec spec_;
  std::shared_ptr<const Kernel> kernel_;
  double center_;
  double log_scale_ = 0.0;
};

// ---------------------------------------------------------------------------
// Canonical text form: family(location,scale[,shape...]), e.g. studentt(0,1,3).

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::normal: return "normal";
    case Family::logistic: return "logistic";
    case Family::double_exponential: return "doubleexponential";
    case Family::student_t: return "studentt";
    case Family::cauchy: return "cauchy";
    case Family::double_pareto: return "doublepareto";
    case Family::smoothed_uniform: return "smootheduniform";
    case Family::cauchy_uniform: return "cauchyuniform";
    case Family::custom: return "custom";
  }
  return "custom";
}

inline std::size_t shape_arity(Family f) {
  switch (f) {
    case Family::student_t:
    case Family::double_pareto: return 1;
    case Family::smoothed_uniform: return 2;
    default: return 0;
  }
}

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace detail

inline std::string to_string(const DensitySpec& spec) {
  std::string out = spec.family == Family::custom && !spec.name.empty() ? spec.name
                                                                        : std::string(family_name(spec.family));
  out += "(" + detail::format_number(spec.location) + "," + detail::format_number(spec.scale);
  for (double s : spec.shape) out += "," + detail::format_number(s);
  out += ")";
  return out;
}

inline std::string Density::to_string() const { return atten::to_string(spec_); }

inline Density make_density(const DensitySpec& spec) {
  if (!(spec.scale > 0) || !std::isfinite(spec.scale))
    throw invalid_parameter(to_string(spec) + ": scale must be positive");
  if (spec.family == Family::custom) throw invalid_parameter("custom densities are built from a kernel");
  if (spec.shape.size() != shape_arity(spec.family))
    throw invalid_parameter(to_string(spec) + ": expected " + std::to_string(shape_arity(spec.family)) +
                            " shape parameter(s)");
  for (double s : spec.shape)
    if (!(s > 0) || !std::isfinite(s)) throw invalid_parameter(to_string(spec) + ": shape parameters must be positive");

  std::shared_ptr<const Kernel> k;
  switch (spec.family) {
    case Family::normal: k = std::make_shared<kernels::Normal>(); break;
    case Family::logistic: k = std::make_shared<kernels::Logistic>(); break;
    case Family::double_exponential: k = std::make_shared<kernels::DoubleExponential>(); break;
    case Family::student_t:
      if (spec.shape[0] == 1.0)
        k = std::make_shared<kernels::Cauchy>();
      else
        k = std::make_shared<kernels::StudentT>(spec.shape[0]);
      break;
    case Family::cauchy: k = std::make_shared<kernels::Cauchy>(); break;
    case Family::double_pareto: k = std::make_shared<kernels::DoublePareto>(spec.shape[0]); break;
    case Family::smoothed_uniform:
      k = std::make_shared<kernels::SmoothedUniform>(spec.shape[0], spec.shape[1]);
      break;
    case Family::cauchy_uniform: k = std::make_shared<kernels::CauchyUniform>(); break;
    case Family::custom: break;
  }
  return Density(spec, std::move(k));
}

inline Density normal(double loc = 0.0, double scale = 1.0) { return make_density({Family::normal, loc, scale, {}, {}}); }
inline Density logistic(double loc = 0.0, double scale = 1.0) {
  return make_density({Family::logistic, loc, scale, {}, {}});
}
inline Density double_exponential(double loc = 0.0, double scale = 1.0) {
  return make_density({Family::double_exponential, loc, scale, {}, {}});
}
inline Density student_t(double loc, double scale, double nu) {
  return make_density({Family::student_t, loc, scale, {nu}, {}});
}
inline Density cauchy(double loc = 0.0, double scale = 1.0) { return make_density({Family::cauchy, loc, scale, {}, {}}); }
inline Density double_pareto(double loc, double scale, double alpha) {
  return make_density({Family::double_pareto, loc, scale, {alpha}, {}});
}
inline Density smoothed_uniform(double loc, double scale, double delta, double d) {
  return make_density({Family::smoothed_uniform, loc, scale, {delta, d}, {}});
}
inline Density cauchy_uniform(double loc = 0.0, double scale = 1.0) {
  return make_density({Family::cauchy_uniform, loc, scale, {}, {}});
}

/// Density of k·X.
inline Density scale_density(const Density& d, double k) {
  if (!(k > 0) || !std::isfinite(k)) throw invalid_parameter("scale factor must be positive");
  DensitySpec spec = d.spec();
  spec.location *= k;
  spec.scale *= k;
  Density out(spec, d.kernel_ptr());
  return out.with_declared_center(d.center() * k);
}

/// Parses the canonical text form. Accepts "laplace" for doubleexponential.
inline DensitySpec parse_density_spec(std::string_view text) {
  const std::string_view s = detail::trim(text);
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')')
    throw invalid_parameter("density spec '" + std::string(s) + "' must look like family(location,scale[,shape])");
  std::string fam(detail::trim(s.substr(0, open)));
  std::transform(fam.begin(), fam.end(), fam.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  DensitySpec spec;
  if (fam == "normal") spec.family = Family::normal;
  else if (fam == "logistic") spec.family = Family::logistic;
  else if (fam == "doubleexponential" || fam == "laplace") spec.family = Family::double_exponential;
  else if (fam == "studentt") spec.family = Family::student_t;
  else if (fam == "cauchy") spec.family = Family::cauchy;
  else if (fam == "doublepareto") spec.family = Family::double_pareto;
  else if (fam == "smootheduniform") spec.family = Family::smoothed_uniform;
  else if (fam == "cauchyuniform") spec.family = Family::cauchy_uniform;
  else throw invalid_parameter("unknown density family '" + fam + "'");

  std::vector<double> nums;
  std::string_view body = s.substr(open + 1, s.size() - open - 2);
  while (true) {
    const auto comma = body.find(',');
    double v = 0.0;
    if (!detail::parse_double(body.substr(0, comma), v))
      throw invalid_parameter("density spec '" + std::string(s) + "' has a malformed number");
    nums.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (nums.size() != 2 + shape_arity(spec.family))
    throw invalid_parameter("density spec '" + std::string(s) + "' expects " +
                            std::to_string(2 + shape_arity(spec.family)) + " numbers");
  spec.location = nums[0];
  spec.scale = nums[1];
  spec.shape.assign(nums.begin() + 2, nums.end());
  return spec;
}

inline Density parse_density(std::string_view text) { return make_density(parse_density_spec(text)); }

/// Symmetric log-concave density, flat at level c on [-delta, delta] with Gaussian
/// log-tails of rate d; approaches Uniform[-delta, delta] as d grows.
inline Density make_necessity_prior(double delta, double d, const QuadratureConfig& quad) {
  if (!(delta > 0) || !(d > 0) || !std::isfinite(delta) || !std::isfinite(d))
    throw invalid_parameter("necessity prior needs delta > 0 and d > 0");
  Density prior = smoothed_uniform(0.0, 1.0, delta, d);

  const auto [lo, hi] = prior.effective_support(quad.tail_mass);
  const auto fts = prior.features();
  const auto cuts = feature_partition(lo, hi, fts);
  QuadratureConfig q = quad;
  q.max_subdivisions = std::max(q.max_subdivisions, 200);
  IntegrationResult<1> mass;
  try {
    mass = integrate([&](double x) { return prior.pdf(x); }, cuts, q);
  } catch (const quadrature_failure& e) {
    throw quadrature_failure(std::string("necessity prior normalization: ") + e.what());
  }
  const double expected = 1.0 - 2.0 * quad.tail_mass;
  if (std::abs(mass.value[0] - expected) > 10.0 * quad.rel_tol + 4.0 * quad.tail_mass)
    throw quadrature_failure("necessity prior does not integrate to one (mass " +
                             detail::format_number(mass.value[0]) + ")");
  return prior;
}

}  // namespace atten
