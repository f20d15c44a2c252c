#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opnorm/errors.hpp"
#include "opnorm/rng.hpp"

namespace opnorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DistKind {
  kRademacher,
  kGaussian,
  kWeibull,    // P(|X| >= t) = exp(-t^r)
  kExpPower,   // P(|X| >= t) = exp(-t^alpha), alias family kept distinct
  kDiscrete,
  kAbsRoot,    // eps * |base|^{1/root}, the factor law of product decompositions
};

struct DiscreteAtom {
  double point;
  double prob;
};

class DistSpec;
struct ProductDecomposition;

// Tail exponent N(t) = -ln P(|X| >= t) and its bracketed variant
// hatN(t) = t^2 on [0,1], N(t) beyond. +inf past the support supremum.
class TailProfile {
 public:
  explicit TailProfile(const DistSpec& dist);

  double n(double t) const;
  double hat_n(double t) const;
  // sup{t >= 0 : hat_n(t) <= y}
  double hat_n_inv(double y) const;
  double support_sup() const { return support_sup_; }

 private:
  std::shared_ptr<const DistSpec> dist_;
  double support_sup_;
};

// A symmetric entry law: kind + shape parameter + positive scale.
// Immutable after construction; cheap to copy.
class DistSpec {
 public:
  static DistSpec rademacher();
  static DistSpec gaussian();
  static DistSpec weibull(double r);
  static DistSpec exp_power(double alpha);
  // Atoms are mirrored to +-|point| with half the mass each, so the
  // resulting law is symmetric by construction.
  static DistSpec discrete(const std::vector<DiscreteAtom>& support);

  DistKind kind() const { return kind_; }
  double shape() const { return shape_; }
  double scale() const { return scale_; }
  const std::vector<DiscreteAtom>& support() const { return support_; }
  const DistSpec* base() const { return base_.get(); }  // abs_root only
  int root() const { return root_; }
  bool has_finite_support() const;
  double support_sup() const;  // sup of |X|, +inf for unbounded laws
  std::optional<double> normalization_target() const { return norm_target_; }
  std::string describe() const;

  DistSpec scaled(double c) const;
  DistSpec normalized(double target) const;

  double sample(Rng& rng) const;

  double mean_abs() const;               // E|X|, analytic
  double log_abs_moment(double q) const; // ln E|X|^q, q > 0
  double abs_moment(double q) const;
  double moment_p(double p) const;       // ||X||_p
  double estimate_kappa(double p_max) const;

  double tail_survival(double t) const;      // P(|X| >= t)
  double log_tail_survival(double t) const;  // ln P(|X| >= t)
  TailProfile tail_profile() const { return TailProfile(*this); }

  double subgaussian_norm() const;  // K with E exp((X/K)^2) <= 2
  double subexp_integral(double eta, double r) const;  // E exp(eta |X|^{1/r})

  // Exponent q of the dominant tail branch exp(-(t/c)^q); +inf when the
  // support is bounded.
  double tail_exponent() const;

 private:
  DistSpec() = default;
  friend struct ProductDecomposition;
  friend ProductDecomposition product_decompose(const DistSpec&, int);

  DistKind kind_ = DistKind::kRademacher;
  double shape_ = 0.0;
  double scale_ = 1.0;
  std::vector<DiscreteAtom> support_;        // discrete only, signed, sorted
  std::shared_ptr<const DistSpec> base_;     // abs_root only
  int root_ = 1;                             // abs_root only
  std::optional<double> norm_target_;
};

// Factor law of Lemma-style product decompositions: the factor samples
// eps * |X|^{1/r}; the product of r independent factors matches X in law
// up to the fitted constant checked by the property suites.
struct ProductDecomposition {
  DistSpec factor;
  int r;
  double sample_product(Rng& rng) const;
};

// Requires dist in SRV(2^{r/2}) with E|X| = 1 (kappa estimate within 5%).
ProductDecomposition product_decompose(const DistSpec& dist, int r);

// Smallest C on a log grid in [1, 1e4] with N(C t x) >= t^{1/log2 kappa} N(x)
// for all grid pairs; +inf when no such C exists. kappa defaults to the
// dist's own estimate on [1, 64].
double check_n_growth(const DistSpec& dist,
                      const std::vector<std::pair<double, double>>& grid,
                      std::optional<double> kappa_override = std::nullopt);

}  // namespace opnorm
