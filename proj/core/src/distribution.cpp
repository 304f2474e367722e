#include "monodim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "monodim/errors.hpp"
#include "monodim/quadrature.hpp"
#include "monodim/special_functions.hpp"

namespace monodim {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kPi = 3.14159265358979323846;

std::string format_params(const char* kind, std::initializer_list<double> ps) {
  std::string out(kind);
  out += '(';
  bool first = true;
  for (double p : ps) {
    if (!first) out += ',';
    first = false;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p);
    out += buf;
  }
  out += ')';
  return out;
}

}  // namespace

ActivityDistribution ActivityDistribution::dirac(double point) {
  if (!(point > 0.0)) {
    throw std::invalid_argument("dirac: point mass must be > 0");
  }
  return ActivityDistribution(DiracParams{point});
}

ActivityDistribution ActivityDistribution::uniform(double a, double b) {
  if (!(0.0 < a && a < b)) {
    throw std::invalid_argument("uniform: requires 0 < a < b");
  }
  return ActivityDistribution(UniformParams{a, b});
}

ActivityDistribution ActivityDistribution::log_normal(double mu, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("log_normal: requires sigma > 0");
  }
  if (!std::isfinite(mu)) {
    throw std::invalid_argument("log_normal: mu must be finite");
  }
  return ActivityDistribution(LogNormalParams{mu, sigma});
}

ActivityDistribution ActivityDistribution::gamma(double shape, double scale) {
  if (!(shape > 0.0 && scale > 0.0)) {
    throw std::invalid_argument("gamma: requires shape > 0 and scale > 0");
  }
  return ActivityDistribution(GammaParams{shape, scale});
}

ActivityDistribution ActivityDistribution::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("exponential: requires rate > 0");
  }
  return ActivityDistribution(ExponentialParams{rate});
}

ActivityDistribution ActivityDistribution::discrete(
    std::vector<DiscreteAtom> atoms) {
  if (atoms.empty()) {
    throw std::invalid_argument("discrete: needs at least one atom");
  }
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.value > 0.0)) {
      throw std::invalid_argument("discrete: atom values must be > 0");
    }
    if (!(atom.prob > 0.0)) {
      throw std::invalid_argument("discrete: atom probabilities must be > 0");
    }
    total += atom.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("discrete: probabilities must sum to 1");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const DiscreteAtom& lhs, const DiscreteAtom& rhs) {
              return lhs.value < rhs.value;
            });
  return ActivityDistribution(DiscreteParams{std::move(atoms)});
}

DistKind ActivityDistribution::kind() const {
  return static_cast<DistKind>(params_.index());
}

std::string ActivityDistribution::name() const {
  switch (kind()) {
    case DistKind::dirac:
      return format_params("dirac", {std::get<DiracParams>(params_).point});
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      return format_params("uniform", {p.a, p.b});
    }
    case DistKind::log_normal: {
      const auto& p = std::get<LogNormalParams>(params_);
      return format_params("lognormal", {p.mu, p.sigma});
    }
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      return format_params("gamma", {p.shape, p.scale});
    }
    case DistKind::exponential:
      return format_params("exponential",
                           {std::get<ExponentialParams>(params_).rate});
    case DistKind::discrete: {
      const auto& atoms = std::get<DiscreteParams>(params_).atoms;
      std::string out = "discrete(";
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0) out += ';';
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g:%g", atoms[i].value,
                      atoms[i].prob);
        out += buf;
      }
      out += ')';
      return out;
    }
  }
  return "?";
}

void ActivityDistribution::set_quadrature_tol(double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("quadrature_tol must be > 0");
  }
  quadrature_tol_ = tol;
}

bool ActivityDistribution::is_atomic() const {
  return kind() == DistKind::dirac || kind() == DistKind::discrete;
}

double ActivityDistribution::mean() const {
  switch (kind()) {
    case DistKind::dirac:
      return std::get<DiracParams>(params_).point;
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      return 0.5 * (p.a + p.b);
    }
    case DistKind::log_normal: {
      const auto& p = std::get<LogNormalParams>(params_);
      return std::exp(p.mu + 0.5 * p.sigma * p.sigma);
    }
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      return p.shape * p.scale;
    }
    case DistKind::exponential:
      return 1.0 / std::get<ExponentialParams>(params_).rate;
    case DistKind::discrete: {
      double sum = 0.0;
      for (const auto& atom : std::get<DiscreteParams>(params_).atoms) {
        sum += atom.prob * atom.value;
      }
      return sum;
    }
  }
  return 0.0;
}

bool ActivityDistribution::inv_mean_finite() const {
  switch (kind()) {
    case DistKind::gamma:
      return std::get<GammaParams>(params_).shape > 1.0;
    case DistKind::exponential:
      return false;
    default:
      return true;
  }
}

double ActivityDistribution::inv_mean() const {
  switch (kind()) {
    case DistKind::dirac:
      return 1.0 / std::get<DiracParams>(params_).point;
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      return (std::log(p.b) - std::log(p.a)) / (p.b - p.a);
    }
    case DistKind::log_normal: {
      const auto& p = std::get<LogNormalParams>(params_);
      return std::exp(-p.mu + 0.5 * p.sigma * p.sigma);
    }
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      if (p.shape <= 1.0) {
        throw DivergentMomentError(
            "inv_mean: E[1/x] diverges for gamma with shape <= 1");
      }
      return 1.0 / (p.scale * (p.shape - 1.0));
    }
    case DistKind::exponential:
      throw DivergentMomentError(
          "inv_mean: E[1/x] diverges for the exponential law");
    case DistKind::discrete: {
      double sum = 0.0;
      for (const auto& atom : std::get<DiscreteParams>(params_).atoms) {
        sum += atom.prob / atom.value;
      }
      return sum;
    }
  }
  return 0.0;
}

double ActivityDistribution::log_mean() const {
  switch (kind()) {
    case DistKind::dirac:
      return std::log(std::get<DiracParams>(params_).point);
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      return (p.b * std::log(p.b) - p.a * std::log(p.a)) / (p.b - p.a) - 1.0;
    }
    case DistKind::log_normal:
      return std::get<LogNormalParams>(params_).mu;
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      return digamma(p.shape) + std::log(p.scale);
    }
    case DistKind::exponential:
      return -kEulerGamma - std::log(std::get<ExponentialParams>(params_).rate);
    case DistKind::discrete: {
      double sum = 0.0;
      for (const auto& atom : std::get<DiscreteParams>(params_).atoms) {
        sum += atom.prob * std::log(atom.value);
      }
      return sum;
    }
  }
  return 0.0;
}

double ActivityDistribution::log_sq_mean() const {
  switch (kind()) {
    case DistKind::dirac: {
      const double l = std::log(std::get<DiracParams>(params_).point);
      return l * l;
    }
    case DistKind::uniform: {
      // Antiderivative of (log x)^2 is x((log x)^2 - 2 log x + 2).
      const auto& p = std::get<UniformParams>(params_);
      auto antideriv = [](double x) {
        const double l = std::log(x);
        return x * (l * l - 2.0 * l + 2.0);
      };
      return (antideriv(p.b) - antideriv(p.a)) / (p.b - p.a);
    }
    case DistKind::log_normal: {
      const auto& p = std::get<LogNormalParams>(params_);
      return p.mu * p.mu + p.sigma * p.sigma;
    }
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      const double m = digamma(p.shape) + std::log(p.scale);
      return trigamma(p.shape) + m * m;
    }
    case DistKind::exponential: {
      const double m = log_mean();
      return kPi * kPi / 6.0 + m * m;
    }
    case DistKind::discrete: {
      double sum = 0.0;
      for (const auto& atom : std::get<DiscreteParams>(params_).atoms) {
        const double l = std::log(atom.value);
        sum += atom.prob * l * l;
      }
      return sum;
    }
  }
  return 0.0;
}

double ActivityDistribution::cdf(double t) const {
  switch (kind()) {
    case DistKind::dirac:
      return t >= std::get<DiracParams>(params_).point ? 1.0 : 0.0;
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      if (t <= p.a) return 0.0;
      if (t >= p.b) return 1.0;
      return (t - p.a) / (p.b - p.a);
    }
    case DistKind::log_normal: {
      if (t <= 0.0) return 0.0;
      const auto& p = std::get<LogNormalParams>(params_);
      return normal_cdf((std::log(t) - p.mu) / p.sigma);
    }
    case DistKind::gamma: {
      if (t <= 0.0) return 0.0;
      const auto& p = std::get<GammaParams>(params_);
      return regularized_gamma_p(p.shape, t / p.scale);
    }
    case DistKind::exponential: {
      if (t <= 0.0) return 0.0;
      return -std::expm1(-std::get<ExponentialParams>(params_).rate * t);
    }
    case DistKind::discrete: {
      double sum = 0.0;
      for (const auto& atom : std::get<DiscreteParams>(params_).atoms) {
        if (atom.value <= t) sum += atom.prob;
      }
      return std::min(sum, 1.0);
    }
  }
  return 0.0;
}

double ActivityDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile: requires p in (0, 1)");
  }
  switch (kind()) {
    case DistKind::dirac:
      return std::get<DiracParams>(params_).point;
    case DistKind::uniform: {
      const auto& pr = std::get<UniformParams>(params_);
      return pr.a + p * (pr.b - pr.a);
    }
    case DistKind::exponential:
      return -std::log1p(-p) / std::get<ExponentialParams>(params_).rate;
    case DistKind::discrete: {
      double cum = 0.0;
      const auto& atoms = std::get<DiscreteParams>(params_).atoms;
      for (const auto& atom : atoms) {
        cum += atom.prob;
        if (cum >= p) return atom.value;
      }
      return atoms.back().value;
    }
    case DistKind::log_normal:
    case DistKind::gamma: {
      // Monotone bisection on the CDF.
      double hi = mean();
      while (cdf(hi) < p) hi *= 2.0;
      double lo = 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (cdf(mid) < p ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double ActivityDistribution::pdf(double x) const {
  switch (kind()) {
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      return (x >= p.a && x <= p.b) ? 1.0 / (p.b - p.a) : 0.0;
    }
    case DistKind::log_normal: {
      if (x <= 0.0) return 0.0;
      const auto& p = std::get<LogNormalParams>(params_);
      const double z = (std::log(x) - p.mu) / p.sigma;
      return std::exp(-0.5 * z * z) / (x * p.sigma * std::sqrt(2.0 * kPi));
    }
    case DistKind::gamma: {
      if (x <= 0.0) return 0.0;
      const auto& p = std::get<GammaParams>(params_);
      const double log_pdf = (p.shape - 1.0) * std::log(x) - x / p.scale -
                             std::lgamma(p.shape) -
                             p.shape * std::log(p.scale);
      return std::exp(log_pdf);
    }
    case DistKind::exponential: {
      if (x < 0.0) return 0.0;
      const double rate = std::get<ExponentialParams>(params_).rate;
      return rate * std::exp(-rate * x);
    }
    case DistKind::dirac:
    case DistKind::discrete:
      throw std::logic_error("pdf: atomic law has no density");
  }
  return 0.0;
}

double ActivityDistribution::quadrature_split_point() const {
  switch (kind()) {
    case DistKind::log_normal: {
      const auto& p = std::get<LogNormalParams>(params_);
      return std::exp(p.mu - p.sigma * p.sigma);
    }
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      if (p.shape > 1.0) return (p.shape - 1.0) * p.scale;
      return quantile(0.5);
    }
    case DistKind::exponential:
      return quantile(0.5);
    default:
      return 0.0;
  }
}

double ActivityDistribution::expect(
    const std::function<double(double)>& f) const {
  return expect(f, quadrature_tol_);
}

double ActivityDistribution::expect(const std::function<double(double)>& f,
                                    double rel_tol) const {
  switch (kind()) {
    case DistKind::dirac:
      return f(std::get<DiracParams>(params_).point);
    case DistKind::discrete: {
      double sum = 0.0;
      for (const auto& atom : std::get<DiscreteParams>(params_).atoms) {
        sum += atom.prob * f(atom.value);
      }
      return sum;
    }
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      QuadratureOptions opts;
      opts.rel_tol = rel_tol;
      const auto r = integrate_adaptive(f, p.a, p.b, opts);
      return r.value / (p.b - p.a);
    }
    default: {
      // Density folded into the integrand on (0, inf), split at the peak so
      // each panel sees a one-sided profile.
      auto weighted = [this, &f](double x) { return f(x) * pdf(x); };
      QuadratureOptions opts;
      opts.rel_tol = rel_tol;
      const double split = quadrature_split_point();
      double total = 0.0;
      if (split > 0.0) {
        total += integrate_adaptive(weighted, 0.0, split, opts).value;
      }
      total += integrate_adaptive_to_infinity(weighted, split, opts).value;
      return total;
    }
  }
}

double ActivityDistribution::sample_gamma(double shape, double scale,
                                          RandomStream& stream) const {
  // Marsaglia-Tsang; the shape < 1 case boosts through shape + 1.
  if (shape < 1.0) {
    const double u = stream.next_unit_open();
    const double boosted = sample_gamma(shape + 1.0, scale, stream);
    const double x = boosted * std::pow(u, 1.0 / shape);
    return std::max(x, std::numeric_limits<double>::min());
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = stream.next_normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_unit_open();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v * scale;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

double ActivityDistribution::sample_one(RandomStream& stream) const {
  switch (kind()) {
    case DistKind::dirac:
      return std::get<DiracParams>(params_).point;
    case DistKind::uniform: {
      const auto& p = std::get<UniformParams>(params_);
      return p.a + (p.b - p.a) * stream.next_unit();
    }
    case DistKind::log_normal: {
      const auto& p = std::get<LogNormalParams>(params_);
      return std::exp(p.mu + p.sigma * stream.next_normal());
    }
    case DistKind::gamma: {
      const auto& p = std::get<GammaParams>(params_);
      return sample_gamma(p.shape, p.scale, stream);
    }
    case DistKind::exponential:
      return -std::log(stream.next_unit_open()) /
             std::get<ExponentialParams>(params_).rate;
    case DistKind::discrete: {
      const double u = stream.next_unit();
      double cum = 0.0;
      const auto& atoms = std::get<DiscreteParams>(params_).atoms;
      for (const auto& atom : atoms) {
        cum += atom.prob;
        if (u < cum) return atom.value;
      }
      return atoms.back().value;
    }
  }
  return 0.0;
}

std::vector<double> ActivityDistribution::sample(std::size_t n,
                                                 RandomStream& stream) const {
  if (n == 0) throw std::invalid_argument("sample: requires n >= 1");
  std::vector<double> out(n);
  for (auto& v : out) v = sample_one(stream);
  return out;
}

}  // namespace monodim
