#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "opnorm/dist.hpp"
#include "opnorm/matgraph.hpp"
#include "opnorm/norms.hpp"

namespace opnorm {

// Per-entry bracketed tail exponents plus the budget level p; the
// feasible set is {t >= 0 : sum_ij hatN_ij(t_ij) <= p} with per-entry
// support caps.
struct OrliczBudget {
  double p = 1.0;
  int n = 0;
  std::vector<TailProfile> profiles;  // row-major n*n

  const TailProfile& at(int i, int j) const {
    return profiles[(std::size_t)i * n + j];
  }

  static OrliczBudget from_ensemble(const EnsembleSpec& ens, double p);
};

struct OrliczSolution {
  Eigen::MatrixXd t_star;    // signed witness: a_ij * t_ij = |a_ij| * |t_ij|
  double lambda = 0.0;
  double budget_used = 0.0;
  double objective = 0.0;    // sum a_ij t*_ij, the feasible (lower) value
  double dual_value = 0.0;   // Lagrangian upper bound
  bool feasible = false;
};

// Maximize sum |a_ij| t_ij over the budget set by Lagrangian separation:
// per-entry 1D maximization on both branches of hatN plus the t=1
// breakpoint, bisection on lambda, and a greedy mixture tie-break that
// spends any slack left by the jump discontinuities.
OrliczSolution max_linear(const CoeffMatrix& a, const OrliczBudget& budget);

struct SubsetResult {
  double value = 0.0;
  std::vector<std::pair<int, int>> mask;  // entry positions, |mask| <= p
};

// sup over entry masks of size p of the spectral norm of the masked
// matrix. Exhaustive when C(#nonzeros, p) <= 1e5, otherwise greedy by
// |a_ij| with 2-swap local search (certified lower bound).
SubsetResult subset_opnorm_sup(const CoeffMatrix& a, int p);

struct MaskedResult {
  double lower = 0.0;
  double upper = 0.0;
  Eigen::MatrixXd witness;  // masked, budget-scaled matrix achieving lower
};

// Two-sided analytic sandwich for the masked-norm supremum
// sup_{|I|=p} sup_{t in budget} ||(a_ij t_ij)_I||_op: the lower value is
// the best feasible witness found (unit mask or greedy tail allocation),
// the upper multiplies the two-part combination by sqrt(Log p).
MaskedResult masked_opnorm_sup(const CoeffMatrix& a, const OrliczBudget& budget,
                               int p);

// The sandwich at p = round(Log n) built from the ensemble's own entry
// laws; the upper factor becomes sqrt(Log Log n).
MaskedResult r_analytic(const CoeffMatrix& a, const EnsembleSpec& ens);

}  // namespace opnorm
