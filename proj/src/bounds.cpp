#include "opnorm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opnorm {

double m_of(const CoeffMatrix& a) { return a.max_row_l2() + a.max_col_l2(); }

double gaussian_formula(const CoeffMatrix& a) {
  if (!a.symmetric()) return gaussian_formula(symmetrize(a));
  const int n = a.n();
  std::vector<double> rowmax(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rowmax[i] = std::max(rowmax[i], std::fabs(a(i, j)));
  // a simultaneous row/column permutation leaves row l2 norms and the
  // multiset of row maxima unchanged, so sorting the maxima suffices
  std::sort(rowmax.begin(), rowmax.end(), std::greater<>());
  double term = 0.0;
  for (int i = 0; i < n; ++i)
    term = std::max(term, rowmax[i] * std::sqrt(log_clamped((double)(i + 1))));
  return a.max_row_l2() + term;
}

double seginer_bound(const CoeffMatrix& a) {
  return std::pow(log_clamped((double)a.n()), 0.25) * m_of(a);
}

double weibull_bound(const CoeffMatrix& a, double r) {
  if (!(r > 0.0) || r > 2.0)
    throw PreconditionError("weibull_bound needs tail exponent in (0, 2]");
  return a.max_row_l2() +
         std::pow(log_clamped((double)a.n()), 1.0 / r) * a.max_abs();
}

namespace {

double log_comb(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

EnsembleSpec remove_indices(const EnsembleSpec& ens,
                            const std::vector<int>& removed) {
  Eigen::MatrixXd m = ens.a.mat();
  for (int i : removed) {
    m.row(i).setZero();
    m.col(i).setZero();
  }
  EnsembleSpec out(CoeffMatrix(std::move(m)), ens.dist);
  out.per_entry = ens.per_entry;
  return out;
}

}  // namespace

DResult d_of(const CoeffMatrix& a, const EnsembleSpec& ens, const DConfig& cfg,
             std::uint64_t seed) {
  const int n = a.n();
  DResult res;
  if (a.max_abs() == 0.0) return res;

  std::vector<int> dyadic;
  for (int k = 1; k < n; k *= 2) dyadic.push_back(k);

  // one greedy removal ordering shared by all k: score indices by their
  // weight in the full-matrix ascent witness against the mean-abs matrix
  Eigen::MatrixXd abar(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      abar(i, j) = std::fabs(a(i, j)) * ens.dist_at(i, j).mean_abs();
  const SupResult full =
      sup_bilinear_moment(ens, log_clamped((double)n), cfg.ascent, seed);
  Eigen::VectorXd v = full.v.cwiseAbs(), w = full.w.cwiseAbs();
  std::vector<int> order;
  {
    Eigen::MatrixXd ab = abar;
    std::vector<bool> gone(n, false);
    for (int step = 0; step < n - 1; ++step) {
      const Eigen::VectorXd rv = ab * w, cv = ab.transpose() * v;
      int pick = -1;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        if (gone[i]) continue;
        const double score = v(i) * rv(i) + w(i) * cv(i);
        if (score > best) {
          best = score;
          pick = i;
        }
      }
      order.push_back(pick);
      gone[pick] = true;
      ab.row(pick).setZero();
      ab.col(pick).setZero();
      v(pick) = 0.0;
      w(pick) = 0.0;
      if (v.norm() > 0.0) v.normalize();
      if (w.norm() > 0.0) w.normalize();
    }
  }

  for (int k : dyadic) {
    const double p = log_clamped((double)k);
    double inner;
    if (log_comb(n, k) <= std::log(cfg.exhaustive_budget)) {
      // exact min over all removal sets of size exactly k (removing
      // more entries can only decrease the supremum)
      inner = kInf;
      std::vector<int> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        const double val =
            sup_bilinear_moment(remove_indices(ens, idx), p, cfg.ascent, seed)
                .value;
        inner = std::min(inner, val);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    } else {
      const std::vector<int> removed(order.begin(), order.begin() + k);
      inner =
          sup_bilinear_moment(remove_indices(ens, removed), p, cfg.ascent, seed)
              .value;
    }
    res.profile.push_back({k, inner});
    res.value = std::max(res.value, inner);
  }
  res.profile.push_back({n, 0.0});  // removing everything leaves nothing
  return res;
}

MainBounds main_bounds(const CoeffMatrix& a, const EnsembleSpec& ens,
                       double exponent, const DConfig& cfg, std::uint64_t seed,
                       bool use_analytic_r) {
  MainBounds out;
  out.m = m_of(a);
  out.d = d_of(a, ens, cfg, seed).value;
  if (use_analytic_r)
    out.r = r_analytic(a, ens).lower;
  else
    out.r = sup_bilinear_moment(ens, log_clamped((double)a.n()), cfg.ascent,
                                seed)
                .value;
  out.lower = out.m + out.d;
  out.upper = std::pow(log_clamped(log_clamped((double)a.n())), exponent) *
              (out.m + out.r);
  return out;
}

double dA_bound(const CoeffMatrix& a, const EnsembleSpec& ens, double exponent,
                const AscentConfig& ascent, std::uint64_t seed) {
  if (!a.symmetric())
    throw PreconditionError("degree-based bound needs a symmetric matrix");
  const int d_a = build_graph(a).max_degree();
  const double r =
      sup_bilinear_moment(ens, log_clamped((double)a.n()), ascent, seed).value;
  return std::pow(log_clamped((double)d_a), exponent) * (a.max_row_l2() + r);
}

BoundReport bound_report(const CoeffMatrix& a, const EnsembleSpec& ens,
                         const ReportConfig& cfg) {
  BoundReport rep;
  rep.n = a.n();
  rep.dist = ens.dist.describe();
  rep.m = m_of(a);
  rep.gaussian_formula = opnorm::gaussian_formula(a);
  rep.seginer = seginer_bound(a);
  rep.weibull_r = (ens.dist.kind() == DistKind::kWeibull &&
                   ens.dist.shape() <= 2.0)
                      ? ens.dist.shape()
                      : 2.0;
  rep.weibull = weibull_bound(a, rep.weibull_r);
  rep.loglog_exponent_used = cfg.exponent;

  const MainBounds mb =
      main_bounds(a, ens, cfg.exponent, cfg.d, cfg.seed, cfg.use_analytic_r);
  rep.d = mb.d;
  rep.r_lower = mb.r;
  rep.main_lower = mb.lower;
  rep.main_upper = mb.upper;
  rep.r_upper = r_analytic(a, ens).upper;

  if (a.symmetric())
    rep.da_upper = dA_bound(a, ens, cfg.exponent, cfg.d.ascent, cfg.seed);
  else
    rep.da_upper = dA_bound(symmetrize(a), EnsembleSpec(symmetrize(a), ens.dist),
                            cfg.exponent, cfg.d.ascent, cfg.seed);

  rep.empirical =
      estimate_op_mean(ens, cfg.n_samples, cfg.seed, cfg.threads);
  return rep;
}

}  // namespace opnorm
