#include "opnorm/orlicz.hpp"

#include <algorithm>
#include <cmath>

namespace opnorm {

OrliczBudget OrliczBudget::from_ensemble(const EnsembleSpec& ens, double p) {
  if (!(p >= 1.0)) throw PreconditionError("budget level must be >= 1");
  OrliczBudget b;
  b.p = p;
  b.n = ens.a.n();
  b.profiles.reserve((std::size_t)b.n * b.n);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j)
      b.profiles.push_back(ens.dist_at(i, j).tail_profile());
  return b;
}

namespace {

struct EntryBest {
  double t = 0.0;
  double cost = 0.0;   // hatN(t)
  double value = 0.0;  // c*t - lambda*hatN(t)
};

// maximize c*t - lambda*hatN(t) over [0, t_cap]; both branches of the
// bracketed exponent plus the breakpoint are probed, the tail branch by
// a log grid with golden refinement (it need not be unimodal in general);
// branch: 0 = both, 1 = quadratic only ([0,1]), 2 = tail only ([1,cap])
EntryBest entry_best_response(double c, const TailProfile& prof, double lambda,
                              double t_cap, int branch = 0) {
  EntryBest best;  // t = 0 baseline
  if (branch == 2) best = {1.0, 1.0, c - lambda};  // forced onto the tail
  auto consider = [&](double t) {
    if (!(t >= 0.0) || t > t_cap) return;
    const double cost = prof.hat_n(t);
    if (!std::isfinite(cost)) return;
    const double val = c * t - lambda * cost;
    if (val > best.value) best = {t, cost, val};
  };

  if (branch != 2) {
    const double quad_hi = std::min(1.0, t_cap);
    if (lambda > 0.0) consider(std::clamp(c / (2.0 * lambda), 0.0, quad_hi));
    consider(quad_hi);
  }

  if (branch != 1 && t_cap > 1.0) {
    consider(t_cap);
    if (lambda > 0.0) {
      const int grid = 160;
      double t_loc = t_cap;
      double v_loc = -kInf;
      for (int g = 0; g <= grid; ++g) {
        const double t = std::exp(std::log(1.0) + (std::log(t_cap) / grid) * g);
        const double cost = prof.hat_n(t);
        if (!std::isfinite(cost)) continue;
        const double val = c * t - lambda * cost;
        if (val > v_loc) {
          v_loc = val;
          t_loc = t;
        }
      }
      // golden refinement around the grid winner
      double lo = std::max(1.0, t_loc / std::exp(std::log(t_cap) / grid));
      double hi = std::min(t_cap, t_loc * std::exp(std::log(t_cap) / grid));
      const double phi = 0.6180339887498949;
      for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double m1 = hi - phi * (hi - lo);
        const double m2 = lo + phi * (hi - lo);
        const double f1 = c * m1 - lambda * prof.hat_n(m1);
        const double f2 = c * m2 - lambda * prof.hat_n(m2);
        if (f1 < f2)
          lo = m1;
        else
          hi = m2;
      }
      consider(0.5 * (lo + hi));
      consider(t_loc);
    }
  }
  return best;
}

struct Entry {
  int i, j;
  double c;        // |a_ij|
  double t_cap;    // min(support cap, hatN^{-1}(p)); finite for valid laws
};

std::vector<Entry> collect_entries(const CoeffMatrix& a,
                                   const OrliczBudget& budget) {
  std::vector<Entry> out;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) {
      const double c = std::fabs(a(i, j));
      if (c == 0.0) continue;
      const auto& prof = budget.at(i, j);
      const double cap =
          std::min(prof.support_sup(), prof.hat_n_inv(budget.p));
      if (!std::isfinite(cap))
        throw Error("entry tail exponent is bounded above; invalid profile");
      out.push_back({i, j, c, cap});
    }
  return out;
}

}  // namespace

OrliczSolution max_linear(const CoeffMatrix& a, const OrliczBudget& budget) {
  if (a.n() != budget.n) throw PreconditionError("budget/matrix size mismatch");
  const int n = a.n();
  OrliczSolution sol;
  sol.t_star = Eigen::MatrixXd::Zero(n, n);
  const auto entries = collect_entries(a, budget);
  if (entries.empty()) {
    sol.feasible = true;
    return sol;
  }

  // per-entry branch restriction: 0 = free, 1 = quadratic, 2 = tail
  const std::vector<int> kFree(entries.size(), 0);

  auto solve_at = [&](double lambda, const std::vector<int>& branch) {
    std::vector<EntryBest> best(entries.size());
    double used = 0.0;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      best[e] = entry_best_response(entries[e].c,
                                    budget.at(entries[e].i, entries[e].j),
                                    lambda, entries[e].t_cap, branch[e]);
      used += best[e].cost;
    }
    return std::make_pair(best, used);
  };

  // budget usage is nonincreasing in lambda; bracket then bisect; returns
  // (lo, hi) with hi on the feasible side (hi == 0 when lambda = 0 works)
  auto bisect = [&](const std::vector<int>& branch) {
    double lo = 0.0, hi = 1.0;
    if (solve_at(0.0, branch).second <= budget.p) return std::make_pair(0.0, 0.0);
    while (solve_at(hi, branch).second > budget.p) {
      hi *= 2.0;
      if (hi > 1e14) throw Error("multiplier bracket failed");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double used = solve_at(mid, branch).second;
      if (std::fabs(used - budget.p) <= 1e-10 * budget.p) {
        hi = mid;
        break;
      }
      (used > budget.p ? lo : hi) = mid;
      if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    return std::make_pair(lo, hi);
  };

  // primal assembly at a feasible multiplier: take the best responses,
  // then spend the remaining budget by pushing entries toward their caps,
  // highest gain per unit budget first, with a partial final push
  struct Assembly {
    std::vector<EntryBest> chosen;
    double used = 0.0;
    double objective = -kInf;
    bool valid = false;
  };
  auto assemble = [&](double lambda, const std::vector<int>& branch) {
    Assembly as;
    auto [best, used] = solve_at(lambda, branch);
    if (used > budget.p * (1.0 + 1e-9)) return as;
    as.chosen = std::move(best);
    as.used = used;
    as.valid = true;
    std::vector<std::size_t> order;
    std::vector<double> cap_cost(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
      cap_cost[e] = budget.at(entries[e].i, entries[e].j).hat_n(entries[e].t_cap);
      if (entries[e].t_cap > as.chosen[e].t + 1e-15) order.push_back(e);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const double gx = entries[x].c * (entries[x].t_cap - as.chosen[x].t);
      const double dx = std::max(cap_cost[x] - as.chosen[x].cost, 1e-300);
      const double gy = entries[y].c * (entries[y].t_cap - as.chosen[y].t);
      const double dy = std::max(cap_cost[y] - as.chosen[y].cost, 1e-300);
      return gx / dx > gy / dy;
    });
    for (std::size_t e : order) {
      const double slack = budget.p - as.used;
      if (slack <= 0.0) break;
      const double dcost = cap_cost[e] - as.chosen[e].cost;
      if (dcost <= slack) {
        as.used += dcost;
        as.chosen[e] = {entries[e].t_cap, cap_cost[e], 0.0};
      } else {
        const auto& prof = budget.at(entries[e].i, entries[e].j);
        double t_part = prof.hat_n_inv(as.chosen[e].cost + slack);
        t_part = std::min(t_part, entries[e].t_cap);
        if (t_part > as.chosen[e].t) {
          const double cost = prof.hat_n(t_part);
          as.used += cost - as.chosen[e].cost;
          as.chosen[e] = {t_part, cost, 0.0};
        }
      }
    }
    as.objective = 0.0;
    for (std::size_t e = 0; e < entries.size(); ++e)
      as.objective += entries[e].c * as.chosen[e].t;
    return as;
  };

  // dual value g(lambda) = lambda*p + sum_e max_t (c t - lambda hatN(t)),
  // an upper bound for every lambda >= 0 and convex in lambda
  auto dual_g = [&](double lambda, const std::vector<int>& branch) {
    double g = lambda * budget.p;
    for (const auto& b : solve_at(lambda, branch).first) g += b.value;
    return g;
  };
  auto dual_min = [&](double center, const std::vector<int>& branch) {
    double glo = center / 8.0, ghi = center * 8.0;
    const double phi = 0.6180339887498949;
    double m1 = ghi - phi * (ghi - glo), m2 = glo + phi * (ghi - glo);
    double f1 = dual_g(m1, branch), f2 = dual_g(m2, branch);
    for (int it = 0; it < 60 && ghi - glo > 1e-11 * ghi; ++it) {
      if (f1 < f2) {
        ghi = m2;
        m2 = m1;
        f2 = f1;
        m1 = ghi - phi * (ghi - glo);
        f1 = dual_g(m1, branch);
      } else {
        glo = m1;
        m1 = m2;
        f1 = f2;
        m2 = glo + phi * (ghi - glo);
        f2 = dual_g(m2, branch);
      }
    }
    return std::min(f1, f2);
  };

  const auto [lo, hi] = bisect(kFree);

  // the branch jump makes the response map discontinuous, so the best
  // primal mixture may sit above the bisected multiplier; scan upward,
  // coarse first, then refine around the coarse winner
  Assembly best_as = assemble(hi, kFree);
  double best_lambda = hi;
  auto try_lambda = [&](double lambda, const std::vector<int>& branch) {
    const Assembly as = assemble(lambda, branch);
    if (as.valid && as.objective > best_as.objective) {
      best_as = as;
      best_lambda = lambda;
    }
  };
  if (hi > 0.0) {
    for (int k = 1; k <= 12; ++k) try_lambda(hi * std::pow(1.3, k), kFree);
    const double center = best_lambda;
    for (int k = -26; k <= 26; ++k) {
      const double lambda = center * std::pow(1.02, k);
      if (lambda > hi) try_lambda(lambda, kFree);
    }
  }
  if (!best_as.valid) throw Error("no feasible primal assembly");

  double dual_value = std::min(dual_g(hi, kFree), dual_g(std::max(lo, hi), kFree));
  if (hi > 0.0) dual_value = std::min(dual_value, dual_min(hi, kFree));

  // the concave kink at t = 1 can leave both a loose primal and a genuine
  // Lagrangian gap; refine by restricting the most ambiguous entries onto
  // a fixed branch. Each restricted piece is searched for a better primal
  // point, and the max of the restricted duals over a covering family of
  // assignments is a valid, tighter upper bound on the optimum.
  if (hi > 0.0 && dual_value > best_as.objective * 1.01) {
    // identical entry laws? then an exchange argument puts larger
    // coefficients on the tail branch first, so only monotone assignments
    // (top-q of the split set on the tail) need to be enumerated
    bool uniform = true;
    {
      const auto& ref = budget.at(entries[0].i, entries[0].j);
      for (std::size_t e = 1; e < entries.size() && uniform; ++e) {
        const auto& prof = budget.at(entries[e].i, entries[e].j);
        if (prof.support_sup() != ref.support_sup()) uniform = false;
        for (double t : {0.3, 0.9, 1.4, 2.3, 3.7, 6.1})
          if (prof.hat_n(t) != ref.hat_n(t)) uniform = false;
      }
    }
    std::vector<std::size_t> split;
    for (std::size_t e = 0; e < entries.size(); ++e)
      if (entries[e].t_cap > 1.0) split.push_back(e);
    std::sort(split.begin(), split.end(), [&](std::size_t x, std::size_t y) {
      return entries[x].c > entries[y].c;
    });
    split.resize(std::min<std::size_t>(split.size(), uniform ? 24 : 4));
    if (!split.empty()) {
      std::vector<int> branch(entries.size(), 0);
      double cert = -kInf;
      auto probe_piece = [&]() {
        // forced-tail entries cost at least hatN(1) = 1 each
        double min_cost = 0.0;
        for (std::size_t e = 0; e < entries.size(); ++e)
          if (branch[e] == 2) min_cost += 1.0;
        if (min_cost > budget.p) return;  // empty piece
        const auto [plo, phi_] = bisect(branch);
        try_lambda(phi_, branch);
        if (phi_ > 0.0)
          for (int k = 1; k <= 10; ++k) try_lambda(phi_ * std::pow(1.1, k), branch);
        const double center = phi_ > 0.0 ? phi_ : std::max(hi, 1e-6);
        cert = std::max(cert, dual_min(center, branch));
      };
      if (uniform) {
        for (std::size_t q = 0; q <= split.size(); ++q) {
          for (std::size_t b = 0; b < split.size(); ++b)
            branch[split[b]] = b < q ? 2 : 1;
          probe_piece();
        }
      } else {
        for (unsigned mask = 0; mask < (1u << split.size()); ++mask) {
          for (std::size_t b = 0; b < split.size(); ++b)
            branch[split[b]] = (mask >> b) & 1u ? 2 : 1;
          probe_piece();
        }
      }
      if (std::isfinite(cert)) dual_value = std::min(dual_value, cert);
    }
  }

  double objective = 0.0, budget_used = 0.0;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const double sign = a(entries[e].i, entries[e].j) >= 0.0 ? 1.0 : -1.0;
    sol.t_star(entries[e].i, entries[e].j) = sign * best_as.chosen[e].t;
    objective += entries[e].c * best_as.chosen[e].t;
    budget_used += best_as.chosen[e].cost;
  }
  sol.lambda = best_lambda;
  sol.objective = objective;
  sol.budget_used = budget_used;
  sol.feasible = budget_used <= budget.p * (1.0 + 1e-9);
  sol.dual_value = std::max(dual_value, sol.objective);
  return sol;
}

namespace {

double log_comb(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double masked_norm(const CoeffMatrix& a,
                   const std::vector<std::pair<int, int>>& mask) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.n(), a.n());
  for (auto [i, j] : mask) m(i, j) = a(i, j);
  return spectral_norm(m);
}

}  // namespace

SubsetResult subset_opnorm_sup(const CoeffMatrix& a, int p) {
  const int n = a.n();
  if (p < 1 || p > n * n) throw PreconditionError("mask size out of range");
  std::vector<std::pair<int, int>> nz;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) nz.push_back({i, j});
  SubsetResult res;
  if (nz.empty()) return res;
  const int k = std::min<int>(p, (int)nz.size());

  if (log_comb((int)nz.size(), k) <= std::log(1e5)) {
    // exhaustive over k-combinations of the nonzero entries
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<std::pair<int, int>> mask(k);
      for (int i = 0; i < k; ++i) mask[i] = nz[idx[i]];
      const double val = masked_norm(a, mask);
      if (val > res.value) {
        res.value = val;
        res.mask = mask;
      }
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == (int)nz.size() - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return res;
  }

  // greedy by |a_ij| plus first-improvement 2-swap local search
  std::sort(nz.begin(), nz.end(), [&](auto x, auto y) {
    return std::fabs(a(x.first, x.second)) > std::fabs(a(y.first, y.second));
  });
  std::vector<std::pair<int, int>> mask(nz.begin(), nz.begin() + k);
  double cur = masked_norm(a, mask);
  const int out_limit = std::min<int>((int)nz.size(), k + 200);
  bool improved = true;
  int rounds = 0;
  while (improved && rounds++ < 50) {
    improved = false;
    for (int in_pos = 0; in_pos < k && !improved; ++in_pos)
      for (int out_pos = k; out_pos < out_limit && !improved; ++out_pos) {
        auto trial = mask;
        trial[in_pos] = nz[out_pos];
        const double val = masked_norm(a, trial);
        if (val > cur * (1.0 + 1e-12)) {
          std::swap(nz[out_pos], nz[in_pos]);  // keep pool consistent
          mask = trial;
          cur = val;
          improved = true;
        }
      }
  }
  res.value = cur;
  res.mask = mask;
  return res;
}

MaskedResult masked_opnorm_sup(const CoeffMatrix& a, const OrliczBudget& budget,
                               int p) {
  if (p < 1) throw PreconditionError("mask size must be >= 1");
  const int n = a.n();
  MaskedResult res;
  res.witness = Eigen::MatrixXd::Zero(n, n);

  // unit-level mask: t == 1 costs hatN(1) = 1 per entry, so a size-p
  // mask is exactly feasible
  const SubsetResult unit = subset_opnorm_sup(a, std::min(p, n * n));
  double best = unit.value;
  for (auto [i, j] : unit.mask) res.witness(i, j) = a(i, j);

  // greedy tail allocation: q <= p entries, equal budget shares, each
  // entry pushed to hatN^{-1}(p/q)
  double best_tail = 0.0;
  for (int q = 1; q <= std::min(p, n * n); ++q) {
    const SubsetResult sub = subset_opnorm_sup(a, q);
    if (sub.mask.empty()) continue;
    const double share = budget.p / (double)sub.mask.size();
    Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : sub.mask) {
      double t = budget.at(i, j).hat_n_inv(share);
      t = std::min(t, budget.at(i, j).support_sup());
      scaled(i, j) = a(i, j) * t;
    }
    const double val = spectral_norm(scaled);
    best_tail = std::max(best_tail, val);
    if (val > best) {
      best = val;
      res.witness = scaled;
    }
  }

  res.lower = best;
  res.upper = std::sqrt(log_clamped((double)p)) * (best_tail + unit.value);
  res.upper = std::max(res.upper, res.lower);
  return res;
}

MaskedResult r_analytic(const CoeffMatrix& a, const EnsembleSpec& ens) {
  const int p = (int)std::lround(log_clamped((double)a.n()));
  return masked_opnorm_sup(a, OrliczBudget::from_ensemble(ens, (double)p),
                           std::max(1, p));
}

}  // namespace opnorm
