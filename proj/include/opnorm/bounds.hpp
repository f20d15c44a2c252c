#pragma once

#include <string>
#include <vector>

#include "opnorm/matgraph.hpp"
#include "opnorm/norms.hpp"
#include "opnorm/orlicz.hpp"

namespace opnorm {

// max row l2 + max column l2
double m_of(const CoeffMatrix& a);

// max_i ||row_i||_2 + max_i rowmax'_i sqrt(Log i) after sorting row
// maxima descending (rows and columns permuted together); non-symmetric
// inputs are block-symmetrized first.
double gaussian_formula(const CoeffMatrix& a);

// Log^{1/4}(n) * (max row l2 + max col l2)
double seginer_bound(const CoeffMatrix& a);

// max row l2 + Log^{1/r}(n) * max |a_ij|, for tail exponent r in (0, 2]
double weibull_bound(const CoeffMatrix& a, double r);

struct DConfig {
  AscentConfig ascent;
  double exhaustive_budget = 1e4;  // cap on C(n,k) for exact inner minima
};

struct DResult {
  double value = 0.0;
  // one (k, inner value) pair per dyadic removal-set size
  std::vector<std::pair<int, double>> profile;
};

// max over dyadic k of the min over removed index sets |I| <= k of the
// Log(k)-moment supremum off I. Exact inner min when C(n,k) is small,
// otherwise witness-guided greedy removal (an upper approximation).
DResult d_of(const CoeffMatrix& a, const EnsembleSpec& ens, const DConfig& cfg,
             std::uint64_t seed);

struct MainBounds {
  double lower = 0.0;  // M + D
  double upper = 0.0;  // Log^exponent(Log n) * (M + R)
  double m = 0.0;
  double d = 0.0;
  double r = 0.0;
};

// Two-sided sandwich for E||A o X||_op; `exponent` is the iterated-log
// power (configuration, default 3/2). When use_analytic_r is set, R
// comes from the mask-budget sandwich instead of the ascent estimate.
MainBounds main_bounds(const CoeffMatrix& a, const EnsembleSpec& ens,
                       double exponent, const DConfig& cfg, std::uint64_t seed,
                       bool use_analytic_r = false);

// Log^exponent(d_A) * (max row l2 + R); requires a symmetric matrix.
double dA_bound(const CoeffMatrix& a, const EnsembleSpec& ens, double exponent,
                const AscentConfig& ascent, std::uint64_t seed);

struct ReportConfig {
  long n_samples = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
  double exponent = 1.5;
  DConfig d;
  bool use_analytic_r = false;
};

struct BoundReport {
  int n = 0;
  std::string ensemble;
  std::string dist;
  double m = 0.0;
  double gaussian_formula = 0.0;
  double seginer = 0.0;
  double weibull = 0.0;
  double weibull_r = 2.0;   // tail exponent the weibull field was evaluated at
  double r_lower = 0.0;     // ascent estimate (lower certificate)
  double r_upper = 0.0;     // analytic sandwich upper
  double d = 0.0;
  double main_lower = 0.0;
  double main_upper = 0.0;
  double da_upper = 0.0;
  EstimateResult empirical;
  double loglog_exponent_used = 1.5;
};

BoundReport bound_report(const CoeffMatrix& a, const EnsembleSpec& ens,
                         const ReportConfig& cfg);

}  // namespace opnorm
