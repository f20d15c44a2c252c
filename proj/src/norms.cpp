#include "opnorm/norms.hpp"

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <thread>

namespace opnorm {

namespace {

void parallel_for(long n, int threads, const std::function<void(long, long)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long lo = t * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

double pairwise_sum_range(const std::vector<double>& v, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_range(v, lo, mid) + pairwise_sum_range(v, mid, hi);
}

double dense_largest_sv(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return pairwise_sum_range(values, 0, values.size());
}

double spectral_norm(const Eigen::MatrixXd& m, double tol) {
  const int n = (int)m.rows();
  if (n <= 64) return dense_largest_sv(m);

  // power iteration on M^T M
  Rng rng(0x5eedf00dULL, (std::uint64_t)n);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  v.normalize();
  double prev = 0.0;
  int stable = 0;
  double sigma2 = 0.0;
  const int max_iters = 10'000;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd mv = m * v;
    Eigen::VectorXd bv = m.transpose() * mv;
    sigma2 = v.dot(bv);
    const double norm = bv.norm();
    if (norm == 0.0) return 0.0;  // zero matrix (or v in the kernel of M)
    v = bv / norm;
    if (std::fabs(sigma2 - prev) <= tol * std::max(sigma2, 1e-300))
      ++stable;
    else
      stable = 0;
    prev = sigma2;
    if (stable >= 3) break;
  }
  const double estimate = std::sqrt(std::max(sigma2, 0.0));
  const double certified = (m * v).norm();
  if (certified >= (1.0 - tol) * estimate || n > 512)
    return std::max(certified, estimate);
  return dense_largest_sv(m);  // stalled; n is still small enough
}

Eigen::MatrixXd sample_hadamard(const EnsembleSpec& ens, Rng& rng) {
  const int n = ens.a.n();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = ens.a(i, j) * ens.dist_at(i, j).sample(rng);
  return out;
}

Eigen::MatrixXd sample_hadamard_at(const EnsembleSpec& ens, std::uint64_t seed,
                                   long k) {
  Rng rng(seed, (std::uint64_t)k);
  return sample_hadamard(ens, rng);
}

namespace {

EstimateResult estimate_norm_functional(const EnsembleSpec& ens,
                                        std::optional<double> p, long n_samples,
                                        std::uint64_t seed, int threads) {
  if (n_samples < 2) throw PreconditionError("need n_samples >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> norms((std::size_t)n_samples);
  parallel_for(n_samples, threads, [&](long lo, long hi) {
    for (long k = lo; k < hi; ++k)
      norms[(std::size_t)k] = spectral_norm(sample_hadamard_at(ens, seed, k));
  });

  EstimateResult res;
  res.n_samples = n_samples;
  res.seed = seed;
  res.p = p;
  if (!p) {
    const double mean = pairwise_sum(norms) / (double)n_samples;
    std::vector<double> sq(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const double d = norms[i] - mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (double)(n_samples - 1);
    res.mean = mean;
    res.stderr_ = std::sqrt(var / (double)n_samples);
  } else {
    // (E ||.||^p)^{1/p}, stderr by the delta method
    std::vector<double> pow_p(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i)
      pow_p[i] = std::pow(norms[i], *p);
    const double mp = pairwise_sum(pow_p) / (double)n_samples;
    std::vector<double> sq(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const double d = pow_p[i] - mp;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (double)(n_samples - 1);
    res.mean = std::pow(mp, 1.0 / *p);
    res.stderr_ = mp > 0.0
                      ? std::sqrt(var / (double)n_samples) *
                            std::pow(mp, 1.0 / *p - 1.0) / *p
                      : 0.0;
  }
  res.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace

EstimateResult estimate_op_mean(const EnsembleSpec& ens, long n_samples,
                                std::uint64_t seed, int threads) {
  return estimate_norm_functional(ens, std::nullopt, n_samples, seed, threads);
}

EstimateResult estimate_op_moment(const EnsembleSpec& ens, double p,
                                  long n_samples, std::uint64_t seed,
                                  int threads) {
  if (!(p >= 1.0)) throw PreconditionError("moment order must be >= 1");
  return estimate_norm_functional(ens, p, n_samples, seed, threads);
}

double bilinear_moment(const EnsembleSpec& ens, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& w, double p, long n_samples,
                       std::uint64_t seed) {
  if (!(p >= 1.0)) throw PreconditionError("moment order must be >= 1");
  if (v.norm() > 1.0 + 1e-12 || w.norm() > 1.0 + 1e-12)
    throw PreconditionError("v, w must lie in the unit ball");
  std::vector<double> abs_vals((std::size_t)n_samples);
  for (long k = 0; k < n_samples; ++k)
    abs_vals[(std::size_t)k] =
        std::fabs(v.dot(sample_hadamard_at(ens, seed, k) * w));
  double smax = 0.0;
  for (double s : abs_vals) smax = std::max(smax, s);
  if (smax == 0.0) return 0.0;
  if (p * std::log(smax) > 600.0)
    throw Error("bilinear_moment overflow guard tripped");
  std::vector<double> scaled(abs_vals.size());
  for (std::size_t i = 0; i < abs_vals.size(); ++i)
    scaled[i] = std::pow(abs_vals[i] / smax, p);
  const double mean = pairwise_sum(scaled) / (double)n_samples;
  return smax * std::pow(mean, 1.0 / p);
}

namespace {

struct CrnObjective {
  const std::vector<Eigen::MatrixXd>& mats;
  double p;

  // returns (value, grad_v, grad_w); gradient direction of the p-th
  // moment, computed with overflow-safe rescaling
  double eval(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
              Eigen::VectorXd* gv = nullptr, Eigen::VectorXd* gw = nullptr) const {
    const int n = (int)v.size();
    const std::size_t batch = mats.size();
    std::vector<double> s(batch);
    double smax = 0.0;
    for (std::size_t k = 0; k < batch; ++k) {
      s[k] = v.dot(mats[k] * w);
      smax = std::max(smax, std::fabs(s[k]));
    }
    if (smax == 0.0) {
      if (gv) gv->setZero(n);
      if (gw) gw->setZero(n);
      return 0.0;
    }
    std::vector<double> terms(batch);
    for (std::size_t k = 0; k < batch; ++k)
      terms[k] = std::pow(std::fabs(s[k]) / smax, p);
    const double mean = pairwise_sum(terms) / (double)batch;
    if (gv && gw) {
      gv->setZero(n);
      gw->setZero(n);
      for (std::size_t k = 0; k < batch; ++k) {
        if (s[k] == 0.0) continue;  // subgradient at 0 taken as 0
        const double wgt =
            std::pow(std::fabs(s[k]) / smax, p - 1.0) * (s[k] > 0 ? 1.0 : -1.0);
        *gv += wgt * (mats[k] * w);
        *gw += wgt * (mats[k].transpose() * v);
      }
    }
    return smax * std::pow(mean, 1.0 / p);
  }
};

}  // namespace

SupResult sup_bilinear_moment(const EnsembleSpec& ens, double p,
                              const AscentConfig& cfg, std::uint64_t seed) {
  if (!(p >= 1.0)) throw PreconditionError("moment order must be >= 1");
  const int n = ens.a.n();

  std::vector<Eigen::MatrixXd> crn((std::size_t)cfg.batch);
  for (int k = 0; k < cfg.batch; ++k) crn[(std::size_t)k] = sample_hadamard_at(ens, seed, k);
  CrnObjective obj{crn, p};

  // warm start from the mean-abs matrix's top singular pair
  Eigen::MatrixXd abar(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      abar(i, j) = std::fabs(ens.a(i, j)) * ens.dist_at(i, j).mean_abs();

  SupResult best;
  best.v = Eigen::VectorXd::Unit(n, 0);
  best.w = Eigen::VectorXd::Unit(n, 0);
  double best_obj = -1.0;

  for (int start = 0; start < std::max(1, cfg.n_starts); ++start) {
    Eigen::VectorXd v(n), w(n);
    if (start == 0 && abar.cwiseAbs().maxCoeff() > 0.0) {
      // a few power steps give the dominant pair of the mean-abs matrix
      Rng r0(seed ^ 0x77aa11ULL, 0);
      for (int i = 0; i < n; ++i) w(i) = r0.normal();
      w.normalize();
      for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd u = abar.transpose() * (abar * w);
        if (u.norm() == 0.0) break;
        w = u.normalized();
      }
      v = abar * w;
      if (v.norm() == 0.0) v = Eigen::VectorXd::Unit(n, 0);
      v.normalize();
    } else {
      Rng r(seed ^ 0x3141592653ULL, (std::uint64_t)start);
      for (int i = 0; i < n; ++i) v(i) = r.normal();
      for (int i = 0; i < n; ++i) w(i) = r.normal();
      v.normalize();
      w.normalize();
    }

    double step = cfg.step0;
    double cur = obj.eval(v, w);
    int flat = 0;
    for (int it = 0; it < cfg.max_iters && flat < 3; ++it) {
      Eigen::VectorXd gv, gw;
      obj.eval(v, w, &gv, &gw);
      const double gnorm = std::sqrt(gv.squaredNorm() + gw.squaredNorm());
      if (gnorm == 0.0) break;
      gv /= gnorm;
      gw /= gnorm;
      bool accepted = false;
      for (int bt = 0; bt < 20; ++bt) {
        Eigen::VectorXd vn = (v + step * gv).normalized();
        Eigen::VectorXd wn = (w + step * gw).normalized();
        const double cand = obj.eval(vn, wn);
        if (cand > cur) {
          flat = (cand - cur <= cfg.tol * std::max(cur, 1e-300)) ? flat + 1 : 0;
          v = vn;
          w = wn;
          cur = cand;
          step *= 1.3;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (cur > best_obj) {
      best_obj = cur;
      best.v = v;
      best.w = w;
    }
  }

  best.crn_value = best_obj < 0.0 ? 0.0 : best_obj;
  // independent batch for the reported value
  std::vector<double> abs_vals((std::size_t)cfg.batch);
  for (int k = 0; k < cfg.batch; ++k)
    abs_vals[(std::size_t)k] = std::fabs(
        best.v.dot(sample_hadamard_at(ens, seed, (long)cfg.batch + k) * best.w));
  double smax = 0.0;
  for (double s : abs_vals) smax = std::max(smax, s);
  if (smax == 0.0) {
    best.value = 0.0;
    return best;
  }
  std::vector<double> terms(abs_vals.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = std::pow(abs_vals[i] / smax, p);
  best.value =
      smax * std::pow(pairwise_sum(terms) / (double)cfg.batch, 1.0 / p);
  return best;
}

double exact_mean_discrete(const EnsembleSpec& ens) {
  const int n = ens.a.n();
  struct Cell {
    int i, j;
    std::vector<DiscreteAtom> atoms;  // scaled values with probs
  };
  std::vector<Cell> cells;
  double log_patterns = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (ens.a(i, j) == 0.0) continue;
      const DistSpec& d = ens.dist_at(i, j);
      Cell cell{i, j, {}};
      switch (d.kind()) {
        case DistKind::kRademacher:
          cell.atoms = {{-d.scale(), 0.5}, {d.scale(), 0.5}};
          break;
        case DistKind::kDiscrete:
          for (const auto& atom : d.support())
            cell.atoms.push_back({atom.point * d.scale(), atom.prob});
          break;
        default:
          throw PreconditionError("exact_mean_discrete needs finite-support laws");
      }
      log_patterns += std::log((double)cell.atoms.size());
      cells.push_back(std::move(cell));
    }
  if (log_patterns > 20.0 * std::log(2.0) + 1e-9)
    throw BudgetExceededError("discrete pattern space exceeds 2^20");

  Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;
  std::vector<std::size_t> idx(cells.size(), 0);
  while (true) {
    double prob = 1.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& atom = cells[c].atoms[idx[c]];
      pattern(cells[c].i, cells[c].j) = ens.a(cells[c].i, cells[c].j) * atom.point;
      prob *= atom.prob;
    }
    total += prob * spectral_norm(pattern);
    // odometer step
    std::size_t c = 0;
    for (; c < cells.size(); ++c) {
      if (++idx[c] < cells[c].atoms.size()) break;
      idx[c] = 0;
    }
    if (c == cells.size()) break;
    if (cells.empty()) break;
  }
  return total;
}

double max_entry_moment(const EnsembleSpec& ens, double p) {
  if (!(p >= 1.0)) throw PreconditionError("moment order must be >= 1");
  double best = 0.0;
  const int n = ens.a.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (ens.a(i, j) != 0.0)
        best = std::max(best,
                        std::fabs(ens.a(i, j)) * ens.dist_at(i, j).moment_p(p));
  return best;
}

}  // namespace opnorm
