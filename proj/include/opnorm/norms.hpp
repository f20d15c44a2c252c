#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "opnorm/dist.hpp"
#include "opnorm/matgraph.hpp"

namespace opnorm {

// Coefficient matrix plus entry laws (uniform or per-entry grid).
struct EnsembleSpec {
  CoeffMatrix a;
  DistSpec dist;
  std::vector<DistSpec> per_entry;  // row-major n*n when non-empty

  EnsembleSpec(CoeffMatrix a_, DistSpec dist_)
      : a(std::move(a_)), dist(std::move(dist_)) {}

  const DistSpec& dist_at(int i, int j) const {
    return per_entry.empty() ? dist : per_entry[(std::size_t)i * a.n() + j];
  }
};

struct EstimateResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> p;
  double elapsed = 0.0;  // seconds
};

// Largest singular value: exact dense decomposition for n <= 64, power
// iteration on M^T M beyond, with a ||Mv|| >= (1 - tol) * estimate
// certificate and dense fallback on stall for n <= 512.
double spectral_norm(const Eigen::MatrixXd& m, double tol = 1e-10);
inline double spectral_norm(const CoeffMatrix& m, double tol = 1e-10) {
  return spectral_norm(m.mat(), tol);
}

// One draw of the Hadamard product (a_ij X_ij).
Eigen::MatrixXd sample_hadamard(const EnsembleSpec& ens, Rng& rng);

// Per-sample deterministic substream (seed, k); sample k always consumes
// its own stream, so results are bit-identical for any thread count.
Eigen::MatrixXd sample_hadamard_at(const EnsembleSpec& ens, std::uint64_t seed,
                                   long k);

EstimateResult estimate_op_mean(const EnsembleSpec& ens, long n_samples,
                                std::uint64_t seed, int threads = 1);

// Monte Carlo p-th moment of the norm itself (reported alongside bounds).
EstimateResult estimate_op_moment(const EnsembleSpec& ens, double p,
                                  long n_samples, std::uint64_t seed,
                                  int threads = 1);

// (E |sum a_ij v_i w_j X_ij|^p)^{1/p} over n_samples draws.
double bilinear_moment(const EnsembleSpec& ens, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& w, double p, long n_samples,
                       std::uint64_t seed);

struct AscentConfig {
  int n_starts = 8;
  int max_iters = 60;
  int batch = 256;       // common-random-numbers sample count
  double tol = 1e-5;
  double step0 = 0.5;
};

struct SupResult {
  double value = 0.0;  // independent-batch evaluation (lower-bound certificate)
  Eigen::VectorXd v, w;
  double crn_value = 0.0;  // frozen-batch objective at the optimum
};

// Multi-start projected gradient ascent of the empirical p-th moment of
// the bilinear form over B2 x B2, on a frozen CRN batch; the returned
// value is re-evaluated on an independent batch.
SupResult sup_bilinear_moment(const EnsembleSpec& ens, double p,
                              const AscentConfig& cfg, std::uint64_t seed);

// Exact expectation over all support patterns of a finite-support grid.
// Throws BudgetExceededError when the pattern count exceeds 2^20.
double exact_mean_discrete(const EnsembleSpec& ens);

// max_ij |a_ij| ||X_ij||_p (the E-max bound uses p = Log n and factor e^2).
double max_entry_moment(const EnsembleSpec& ens, double p);

// Fixed-shape pairwise summation keyed by index; bit-reproducible for
// any chunking of the input.
double pairwise_sum(const std::vector<double>& values);

}  // namespace opnorm
