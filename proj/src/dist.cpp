#include "opnorm/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace opnorm {

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

double logsumexp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

// ln erfc(x), stable for large x
double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // asymptotic erfc(x) ~ exp(-x^2)/(x sqrt(pi)) (1 - 1/(2x^2))
  return -x * x - std::log(x * std::sqrt(M_PI)) + std::log1p(-0.5 / (x * x));
}

}  // namespace

// ---------------------------------------------------------------- DistSpec

DistSpec DistSpec::rademacher() {
  DistSpec d;
  d.kind_ = DistKind::kRademacher;
  return d;
}

DistSpec DistSpec::gaussian() {
  DistSpec d;
  d.kind_ = DistKind::kGaussian;
  return d;
}

DistSpec DistSpec::weibull(double r) {
  if (!(r > 0.0)) throw PreconditionError("weibull shape must be positive");
  DistSpec d;
  d.kind_ = DistKind::kWeibull;
  d.shape_ = r;
  return d;
}

DistSpec DistSpec::exp_power(double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("exp_power alpha must be positive");
  DistSpec d;
  d.kind_ = DistKind::kExpPower;
  d.shape_ = alpha;
  return d;
}

DistSpec DistSpec::discrete(const std::vector<DiscreteAtom>& support) {
  if (support.empty()) throw PreconditionError("discrete support is empty");
  double total = 0.0;
  for (const auto& atom : support) {
    if (!(atom.prob >= 0.0) || !std::isfinite(atom.point))
      throw PreconditionError("invalid discrete atom");
    total += atom.prob;
  }
  if (!(total > 0.0)) throw PreconditionError("discrete probs sum to zero");
  // mirror each atom onto +-|point|, merging coincident magnitudes
  std::vector<DiscreteAtom> atoms;
  for (const auto& atom : support) {
    const double p = atom.prob / total;
    if (p == 0.0) continue;
    if (atom.point == 0.0) {
      atoms.push_back({0.0, p});
    } else {
      atoms.push_back({std::fabs(atom.point), p / 2});
      atoms.push_back({-std::fabs(atom.point), p / 2});
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const DiscreteAtom& a, const DiscreteAtom& b) { return a.point < b.point; });
  std::vector<DiscreteAtom> merged;
  for (const auto& atom : atoms) {
    if (!merged.empty() && merged.back().point == atom.point)
      merged.back().prob += atom.prob;
    else
      merged.push_back(atom);
  }
  DistSpec d;
  d.kind_ = DistKind::kDiscrete;
  d.support_ = std::move(merged);
  return d;
}

bool DistSpec::has_finite_support() const {
  switch (kind_) {
    case DistKind::kRademacher:
    case DistKind::kDiscrete:
      return true;
    case DistKind::kAbsRoot:
      return base_->has_finite_support();
    default:
      return false;
  }
}

double DistSpec::support_sup() const {
  switch (kind_) {
    case DistKind::kRademacher:
      return scale_;
    case DistKind::kDiscrete: {
      double m = 0.0;
      for (const auto& atom : support_) m = std::max(m, std::fabs(atom.point));
      return scale_ * m;
    }
    case DistKind::kAbsRoot:
      return scale_ * std::pow(base_->support_sup(), 1.0 / root_);
    default:
      return kInf;
  }
}

std::string DistSpec::describe() const {
  char buf[96];
  std::string s;
  switch (kind_) {
    case DistKind::kRademacher: s = "rademacher"; break;
    case DistKind::kGaussian: s = "gaussian"; break;
    case DistKind::kWeibull:
      std::snprintf(buf, sizeof buf, "weibull(%g)", shape_);
      s = buf;
      break;
    case DistKind::kExpPower:
      std::snprintf(buf, sizeof buf, "exp_power(%g)", shape_);
      s = buf;
      break;
    case DistKind::kDiscrete:
      std::snprintf(buf, sizeof buf, "discrete[%zu]", support_.size());
      s = buf;
      break;
    case DistKind::kAbsRoot:
      std::snprintf(buf, sizeof buf, "absroot(%s,%d)", base_->describe().c_str(), root_);
      s = buf;
      break;
  }
  if (std::fabs(scale_ - 1.0) > 1e-12) {
    std::snprintf(buf, sizeof buf, "*%.6g", scale_);
    s += buf;
  }
  return s;
}

DistSpec DistSpec::scaled(double c) const {
  if (!(c > 0.0)) throw PreconditionError("scale must be positive");
  DistSpec d = *this;
  d.scale_ *= c;
  return d;
}

DistSpec DistSpec::normalized(double target) const {
  if (!(target > 0.0)) throw PreconditionError("normalization target must be positive");
  const double m = mean_abs();
  if (!(m > 0.0) || !std::isfinite(m))
    throw PreconditionError("law has no positive finite E|X|");
  DistSpec d = scaled(target / m);
  d.norm_target_ = target;
  return d;
}

double DistSpec::sample(Rng& rng) const {
  switch (kind_) {
    case DistKind::kRademacher:
      return scale_ * rng.rademacher();
    case DistKind::kGaussian:
      return scale_ * rng.normal();
    case DistKind::kWeibull:
    case DistKind::kExpPower: {
      const double mag = std::pow(-std::log(rng.uniform()), 1.0 / shape_);
      return scale_ * mag * rng.rademacher();
    }
    case DistKind::kDiscrete: {
      const double u = rng.uniform();
      double acc = 0.0;
      for (const auto& atom : support_) {
        acc += atom.prob;
        if (u <= acc) return scale_ * atom.point;
      }
      return scale_ * support_.back().point;
    }
    case DistKind::kAbsRoot: {
      const double b = std::fabs(base_->sample(rng));
      return scale_ * std::pow(b, 1.0 / root_) * rng.rademacher();
    }
  }
  return 0.0;
}

double DistSpec::mean_abs() const { return abs_moment(1.0); }

double DistSpec::log_abs_moment(double q) const {
  if (!(q > 0.0)) throw PreconditionError("moment order must be positive");
  const double logscale = q * std::log(scale_);
  switch (kind_) {
    case DistKind::kRademacher:
      return logscale;
    case DistKind::kGaussian:
      // E|g|^q = 2^{q/2} Gamma((q+1)/2) / sqrt(pi)
      return logscale + 0.5 * q * std::log(2.0) + std::lgamma((q + 1.0) / 2.0) -
             0.5 * std::log(M_PI);
    case DistKind::kWeibull:
    case DistKind::kExpPower:
      return logscale + std::lgamma(q / shape_ + 1.0);
    case DistKind::kDiscrete: {
      std::vector<double> terms;
      terms.reserve(support_.size());
      for (const auto& atom : support_) {
        if (atom.point == 0.0 || atom.prob == 0.0) continue;
        terms.push_back(std::log(atom.prob) + q * std::log(std::fabs(atom.point)));
      }
      if (terms.empty()) return -kInf;  // point mass at zero
      return logscale + logsumexp(terms);
    }
    case DistKind::kAbsRoot:
      return logscale + base_->log_abs_moment(q / root_);
  }
  return -kInf;
}

double DistSpec::abs_moment(double q) const { return std::exp(log_abs_moment(q)); }

double DistSpec::moment_p(double p) const {
  if (!(p >= 1.0)) throw PreconditionError("moment_p requires p >= 1");
  return std::exp(log_abs_moment(p) / p);
}

double DistSpec::estimate_kappa(double p_max) const {
  if (!(p_max >= 2.0)) throw PreconditionError("estimate_kappa requires p_max >= 2");
  const int steps = std::max(2, (int)std::ceil(32.0 * std::log10(p_max)));
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double p = std::exp(std::log(p_max) * i / steps);  // geometric in [1, p_max]
    const double ratio =
        std::exp(log_abs_moment(2 * p) / (2 * p) - log_abs_moment(p) / p);
    best = std::max(best, ratio);
  }
  return best;
}

double DistSpec::tail_survival(double t) const {
  if (t <= 0.0) return 1.0;
  switch (kind_) {
    case DistKind::kRademacher:
      return t <= scale_ ? 1.0 : 0.0;
    case DistKind::kGaussian:
      return std::erfc(t / (scale_ * std::sqrt(2.0)));
    case DistKind::kWeibull:
    case DistKind::kExpPower:
      return std::exp(-std::pow(t / scale_, shape_));
    case DistKind::kDiscrete: {
      double s = 0.0;
      for (const auto& atom : support_)
        if (std::fabs(atom.point) * scale_ >= t) s += atom.prob;
      return s;
    }
    case DistKind::kAbsRoot:
      return base_->tail_survival(std::pow(t / scale_, (double)root_));
  }
  return 0.0;
}

double DistSpec::log_tail_survival(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case DistKind::kRademacher:
      return t <= scale_ ? 0.0 : -kInf;
    case DistKind::kGaussian:
      return log_erfc(t / (scale_ * std::sqrt(2.0)));
    case DistKind::kWeibull:
    case DistKind::kExpPower:
      return -std::pow(t / scale_, shape_);
    case DistKind::kDiscrete: {
      const double s = tail_survival(t);
      return s > 0.0 ? std::log(s) : -kInf;
    }
    case DistKind::kAbsRoot:
      return base_->log_tail_survival(std::pow(t / scale_, (double)root_));
  }
  return -kInf;
}

double DistSpec::tail_exponent() const {
  switch (kind_) {
    case DistKind::kRademacher:
    case DistKind::kDiscrete:
      return kInf;
    case DistKind::kGaussian:
      return 2.0;
    case DistKind::kWeibull:
    case DistKind::kExpPower:
      return shape_;
    case DistKind::kAbsRoot: {
      const double b = base_->tail_exponent();
      return std::isfinite(b) ? b * root_ : kInf;
    }
  }
  return kInf;
}

namespace {

// Dominant-tail scale c in P(|X| >= t) ~ exp(-(t/c)^q); only meaningful
// for unbounded laws.
double critical_scale(const DistSpec& d) {
  switch (d.kind()) {
    case DistKind::kGaussian:
      return d.scale() * std::sqrt(2.0);
    case DistKind::kWeibull:
    case DistKind::kExpPower:
      return d.scale();
    case DistKind::kAbsRoot:
      // S(t) = exp(-(t/c)^{q_b r}) with c = scale * c_base^{1/r}
      return d.scale() * std::pow(critical_scale(*d.base()), 1.0 / d.root());
    default:
      return 0.0;
  }
}

}  // namespace

// E exp((X/K)^2) evaluated by tail quadrature; +inf when divergent.
static double mgf_square(const DistSpec& d, double K) {
  switch (d.kind()) {
    case DistKind::kRademacher:
      return std::exp(d.scale() * d.scale() / (K * K));
    case DistKind::kGaussian: {
      const double a = 2.0 * d.scale() * d.scale() / (K * K);
      return a < 1.0 ? 1.0 / std::sqrt(1.0 - a) : kInf;
    }
    case DistKind::kDiscrete: {
      double s = 0.0;
      for (const auto& atom : d.support()) {
        const double x = d.scale() * atom.point / K;
        s += atom.prob * std::exp(x * x);
      }
      return s;
    }
    default:
      break;
  }
  const double q = d.tail_exponent();
  if (q < 2.0) return kInf;
  if (q == 2.0 && K * K <= critical_scale(d) * critical_scale(d)) return kInf;
  auto integrand = [&](double t) {
    const double expo = (t / K) * (t / K) + d.log_tail_survival(t);
    if (expo > 700.0) return 1e300;
    return (2.0 * t / (K * K)) * std::exp(expo);
  };
  try {
    const double integral = Quad::integrate(integrand, 0.0, kInf, 12, 1e-9);
    return 1.0 + integral;
  } catch (const std::exception&) {
    return kInf;
  }
}

double DistSpec::subgaussian_norm() const {
  // closed forms first
  switch (kind_) {
    case DistKind::kRademacher:
      return scale_ / std::sqrt(std::log(2.0));
    case DistKind::kGaussian:
      return scale_ * std::sqrt(8.0 / 3.0);
    default:
      break;
  }
  const double q = tail_exponent();
  if (q < 2.0)
    throw NotSubgaussianError("tail exponent below 2: " + describe());
  // bracket a root of E exp((X/K)^2) = 2; the map is decreasing in K
  double lo = (q == 2.0) ? critical_scale(*this) * (1.0 + 1e-9) : 1e-12;
  double hi = std::max(1.0, 2.0 * mean_abs());
  while (mgf_square(*this, hi) > 2.0) {
    hi *= 2.0;
    if (hi > 1e12) throw NotSubgaussianError("no finite psi2 bound found");
  }
  if (mgf_square(*this, lo) < 2.0) lo = hi / 4.0;
  while (mgf_square(*this, lo) < 2.0) lo /= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mgf_square(*this, mid) > 2.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double DistSpec::subexp_integral(double eta, double r) const {
  if (!(eta > 0.0) || !(r > 0.0))
    throw PreconditionError("subexp_integral requires eta, r > 0");
  switch (kind_) {
    case DistKind::kRademacher:
      return std::exp(eta * std::pow(scale_, 1.0 / r));
    case DistKind::kDiscrete: {
      double s = 0.0;
      for (const auto& atom : support_)
        s += atom.prob * std::exp(eta * std::pow(scale_ * std::fabs(atom.point), 1.0 / r));
      return s;
    }
    default:
      break;
  }
  const double growth = 1.0 / r;
  const double q = tail_exponent();
  if (growth > q) throw DivergenceError("exp(eta|X|^{1/r}) diverges: " + describe());
  if (growth == q) {
    const double crit = std::pow(critical_scale(*this), -q);
    if (eta >= crit) throw DivergenceError("eta at or past critical rate");
  }
  auto integrand = [&](double t) {
    const double expo = eta * std::pow(t, growth) + log_tail_survival(t) +
                        std::log(eta * growth) + (growth - 1.0) * std::log(t);
    if (expo > 700.0) return 1e300;
    return std::exp(expo);
  };
  const double a = Quad::integrate(integrand, 0.0, 1.0, 12, 1e-9);
  const double b = Quad::integrate(integrand, 1.0, kInf, 12, 1e-9);
  return 1.0 + a + b;
}

// ---------------------------------------------------------------- TailProfile

TailProfile::TailProfile(const DistSpec& dist)
    : dist_(std::make_shared<DistSpec>(dist)), support_sup_(dist.support_sup()) {}

double TailProfile::n(double t) const {
  if (t <= 0.0) return 0.0;
  if (t > support_sup_) return kInf;
  const double v = -dist_->log_tail_survival(t);
  return std::max(v, 0.0);
}

double TailProfile::hat_n(double t) const {
  const double a = std::fabs(t);
  return a <= 1.0 ? a * a : n(a);
}

double TailProfile::hat_n_inv(double y) const {
  if (y <= 0.0) return 0.0;
  if (y <= 1.0) return std::sqrt(y);
  const double cap = support_sup_;
  auto feasible = [&](double t) { return n(t) <= y; };
  double lo = 1.0;
  double hi = std::min(cap, 2.0);
  if (!std::isfinite(cap)) {
    while (feasible(hi)) hi *= 2.0;
  } else {
    if (feasible(cap)) return cap;
    hi = cap;
  }
  if (!feasible(hi) && hi <= lo) return 1.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

// ------------------------------------------------------- product decomposition

double ProductDecomposition::sample_product(Rng& rng) const {
  double prod = 1.0;
  for (int k = 0; k < r; ++k) prod *= factor.sample(rng);
  return prod;
}

ProductDecomposition product_decompose(const DistSpec& dist, int r) {
  if (r < 1) throw PreconditionError("product_decompose requires r >= 1");
  const double target = dist.mean_abs();
  if (std::fabs(target - 1.0) > 1e-9)
    throw PreconditionError("product_decompose requires E|X| = 1");
  const double kappa = dist.estimate_kappa(64.0);
  if (kappa > std::pow(2.0, (double)r) * 1.05)
    throw PreconditionError("moment-ratio growth too fast for the requested r");
  if (r == 1) return {dist, 1};

  DistSpec factor = DistSpec::rademacher();
  switch (dist.kind()) {
    case DistKind::kRademacher:
      factor = DistSpec::rademacher().scaled(std::pow(dist.scale(), 1.0 / r));
      break;
    case DistKind::kWeibull:
      factor = DistSpec::weibull(dist.shape() * r).scaled(std::pow(dist.scale(), 1.0 / r));
      break;
    case DistKind::kExpPower:
      factor =
          DistSpec::exp_power(dist.shape() * r).scaled(std::pow(dist.scale(), 1.0 / r));
      break;
    case DistKind::kDiscrete: {
      std::vector<DiscreteAtom> atoms;
      for (const auto& atom : dist.support())
        atoms.push_back({std::pow(std::fabs(atom.point) * dist.scale(), 1.0 / r),
                         atom.prob});
      factor = DistSpec::discrete(atoms);
      break;
    }
    default: {
      // no closed-form factor family; wrap the base law
      DistSpec f;
      f.kind_ = DistKind::kAbsRoot;
      f.base_ = std::make_shared<DistSpec>(dist);
      f.root_ = r;
      factor = f;
      break;
    }
  }
  return {factor, r};
}

// ------------------------------------------------------------- check_n_growth

double check_n_growth(const DistSpec& dist,
                      const std::vector<std::pair<double, double>>& grid,
                      std::optional<double> kappa_override) {
  if (std::fabs(dist.mean_abs() - 1.0) > 1e-9)
    throw PreconditionError("check_n_growth requires E|X| = 1");
  for (const auto& [x, t] : grid)
    if (x < 1.0 || t < 1.0)
      throw PreconditionError("check_n_growth grid requires x, t >= 1");
  const double kappa =
      kappa_override ? *kappa_override : dist.estimate_kappa(64.0);
  const TailProfile tail = dist.tail_profile();
  const double exponent =
      kappa > 1.0 + 1e-9 ? 1.0 / std::log2(kappa) : kInf;
  const int n_grid = 400;
  for (int i = 0; i <= n_grid; ++i) {
    const double c = std::pow(1e4, (double)i / n_grid);  // log grid on [1, 1e4]
    bool ok = true;
    for (const auto& [x, t] : grid) {
      const double nx = tail.n(x);
      double rhs;
      if (nx == 0.0) {
        rhs = 0.0;
      } else if (!std::isfinite(exponent)) {
        rhs = t > 1.0 ? kInf : nx;
      } else {
        rhs = std::pow(t, exponent) * nx;
      }
      if (!(tail.n(c * t * x) >= rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
  return kInf;
}

}  // namespace opnorm
