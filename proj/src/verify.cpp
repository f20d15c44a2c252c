#include "opnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace opnorm {

namespace {

struct Atom {
  double v, p;
};
using Law = std::vector<Atom>;  // signed finite support

Law rademacher_law() { return {{-1.0, 0.5}, {1.0, 0.5}}; }

Law two_level_law(double a, double b) {
  return {{-b, 0.25}, {-a, 0.25}, {a, 0.25}, {b, 0.25}};
}

// iterate over the product of finite supports, calling f(values, prob)
void enumerate_laws(const std::vector<Law>& laws,
                    const std::function<void(const std::vector<double>&, double)>& f) {
  const std::size_t n = laws.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> vals(n);
  while (true) {
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      vals[i] = laws[i][idx[i]].v;
      prob *= laws[i][idx[i]].p;
    }
    f(vals, prob);
    std::size_t c = 0;
    for (; c < n; ++c) {
      if (++idx[c] < laws[c].size()) break;
      idx[c] = 0;
    }
    if (c == n) break;
  }
}

double exact_moment(const std::vector<Law>& laws,
                    const std::vector<double>& coeffs, double p) {
  double acc = 0.0;
  enumerate_laws(laws, [&](const std::vector<double>& vals, double prob) {
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) s += coeffs[i] * vals[i];
    acc += prob * std::pow(std::fabs(s), p);
  });
  return std::pow(acc, 1.0 / p);
}

double exact_sup_mean(const std::vector<Law>& laws,
                      const std::vector<Eigen::VectorXd>& T) {
  double acc = 0.0;
  enumerate_laws(laws, [&](const std::vector<double>& vals, double prob) {
    double best = -kInf;
    for (const auto& t : T) {
      double s = 0.0;
      for (std::size_t i = 0; i < vals.size(); ++i) s += t((int)i) * vals[i];
      best = std::max(best, s);
    }
    acc += prob * best;
  });
  return acc;
}

// Monte Carlo E sup_{t in T} <t, X> with X filled by the sampler
std::pair<double, double> mc_sup_mean(
    const std::vector<Eigen::VectorXd>& T, int n,
    const std::function<void(Rng&, std::vector<double>&)>& sampler,
    long samples, std::uint64_t seed) {
  std::vector<double> vals((std::size_t)samples);
  std::vector<double> x((std::size_t)n);
  for (long k = 0; k < samples; ++k) {
    Rng rng(seed, (std::uint64_t)k);
    sampler(rng, x);
    double best = -kInf;
    for (const auto& t : T) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += t(i) * x[(std::size_t)i];
      best = std::max(best, s);
    }
    vals[(std::size_t)k] = best;
  }
  const double mean = pairwise_sum(vals) / (double)samples;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= (double)(samples - 1);
  return {mean, std::sqrt(var / (double)samples)};
}

std::vector<Eigen::VectorXd> random_points(Rng& rng, int count, int n) {
  std::vector<Eigen::VectorXd> T;
  for (int t = 0; t < count; ++t) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    T.push_back(v);
  }
  return T;
}

CoeffMatrix random_graph_matrix(Rng& rng, int& m_out) {
  const int m = 2 + (int)(rng.next_u64() % 11);  // 2..12 vertices
  const double prob = 0.1 + 0.8 * rng.uniform();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (rng.uniform() < prob) a(i, j) = a(j, i) = 1.0;
  m_out = m;
  return CoeffMatrix(std::move(a));
}

SuiteResult suite_subset_count(std::uint64_t seed) {
  SuiteResult res{"subset-count", {}};
  Rng rng(seed, 0);
  double worst = 0.0;
  bool ok = true;
  for (int g = 0; g < 200; ++g) {
    int m = 0;
    const CoeffMatrix a = random_graph_matrix(rng, m);
    const GraphView graph = build_graph(a);
    const int d = std::max(1, graph.max_degree());
    for (int k = 1; k <= m; ++k) {
      const double bound = (double)m * std::pow(4.0 * d, k - 1);
      if (bound > 1e7) continue;
      const auto subsets = enumerate_connected_subsets(graph, k);
      const double ratio = (double)subsets.size() / bound;
      worst = std::max(worst, ratio);
      if ((double)subsets.size() > bound) ok = false;
    }
  }
  res.checks.push_back({"connected-subset count within m(4d)^{k-1}", ok, worst,
                        "max count/bound ratio over 200 random graphs"});
  return res;
}

SuiteResult suite_power_graph(std::uint64_t seed) {
  SuiteResult res{"power-graph", {}};
  Rng rng(seed, 0);
  bool ok = true;
  double worst = 0.0;
  for (int g = 0; g < 50; ++g) {
    int m = 0;
    const CoeffMatrix a = random_graph_matrix(rng, m);
    const GraphView graph = build_graph(a);
    const int d = graph.max_degree();
    for (int r = 1; r <= 4; ++r) {
      const int deg_r = power_graph(graph, r).max_degree();
      const double cap = d == 0 ? 0.0 : std::pow((double)d, r);
      if ((double)deg_r > cap) ok = false;
      if (cap > 0.0) worst = std::max(worst, deg_r / cap);
    }
  }
  res.checks.push_back({"power-graph degree within d^r", ok, worst,
                        "max degree/d^r over 50 graphs, r <= 4"});
  return res;
}

SuiteResult suite_symmetrize(std::uint64_t seed) {
  SuiteResult res{"symmetrize", {}};
  Rng rng(seed, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = rng.normal();
    const CoeffMatrix a(m);
    const double diff =
        std::fabs(spectral_norm(symmetrize(a)) - spectral_norm(a));
    worst = std::max(worst, diff);
  }
  res.checks.push_back({"block symmetrization preserves the norm",
                        worst <= 1e-10, worst, "max |difference| over 100"});
  return res;
}

SuiteResult suite_oracle(std::uint64_t seed) {
  SuiteResult res{"oracle", {}};
  std::vector<std::pair<std::string, Eigen::MatrixXd>> catalog;
  catalog.push_back({"ones2", Eigen::MatrixXd::Ones(2, 2)});
  catalog.push_back({"identity2", Eigen::MatrixXd::Identity(2, 2)});
  {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 0, 0;
    catalog.push_back({"row2", m});
  }
  catalog.push_back({"identity3", Eigen::MatrixXd::Identity(3, 3)});
  Rng rng(seed, 0);
  {
    Eigen::MatrixXd m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = rng.rademacher();
    catalog.push_back({"signs2", m});
  }
  {
    Eigen::MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rng.rademacher();
    catalog.push_back({"signs3", m});
  }
  for (const auto& [name, m] : catalog) {
    EnsembleSpec ens(CoeffMatrix(m), DistSpec::rademacher());
    const double exact = exact_mean_discrete(ens);
    const EstimateResult est = estimate_op_mean(ens, 100000, seed + 7);
    const double diff = std::fabs(est.mean - exact);
    const double tol = 3.0 * est.stderr_ + 1e-9;
    res.checks.push_back({"estimator matches exact mean: " + name,
                          diff <= tol, diff,
                          "exact " + std::to_string(exact)});
  }
  return res;
}

SuiteResult suite_contraction(std::uint64_t seed) {
  SuiteResult res{"contraction", {}};
  Rng rng(seed, 0);
  bool sup_ok = true, mom_ok = true;
  double sup_margin = 0.0, mom_margin = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    const auto T = random_points(rng, 8, n);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      y[(std::size_t)i] = rng.normal();
      x[(std::size_t)i] = y[(std::size_t)i] * rng.uniform();
    }
    std::vector<Law> laws(n, rademacher_law());
    std::vector<Law> lx, ly;
    for (int i = 0; i < n; ++i) {
      lx.push_back({{-x[i], 0.5}, {x[i], 0.5}});
      ly.push_back({{-y[i], 0.5}, {y[i], 0.5}});
    }
    const double sx = exact_sup_mean(lx, T), sy = exact_sup_mean(ly, T);
    sup_margin = std::max(sup_margin, sx - sy);
    if (sx > sy + 1e-12) sup_ok = false;
    std::vector<double> ones(n, 1.0);
    for (double p : {1.0, 2.0, 3.5}) {
      const double mx = exact_moment(lx, ones, p), my = exact_moment(ly, ones, p);
      mom_margin = std::max(mom_margin, mx - my);
      if (mx > my + 1e-12) mom_ok = false;
    }
  }
  res.checks.push_back({"sup comparison under |x| <= |y|", sup_ok, sup_margin,
                        "max violation over 20 exact trials"});
  res.checks.push_back({"moment comparison under |x| <= |y|", mom_ok,
                        mom_margin, "max violation over 20 exact trials"});
  return res;
}

SuiteResult suite_coeff_compare(std::uint64_t seed) {
  SuiteResult res{"coeff-compare", {}};
  Rng rng(seed, 0);
  bool ok = true;
  double margin = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    std::vector<Law> laws;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      laws.push_back(rng.uniform() < 0.5
                         ? rademacher_law()
                         : two_level_law(0.5 + rng.uniform(), 1.5 + rng.uniform()));
      b[(std::size_t)i] = rng.normal();
      a[(std::size_t)i] = b[(std::size_t)i] * rng.uniform();
    }
    for (double p : {1.0, 2.0, 4.0}) {
      const double ma = exact_moment(laws, a, p), mb = exact_moment(laws, b, p);
      margin = std::max(margin, ma - mb);
      if (ma > mb + 1e-12) ok = false;
    }
  }
  res.checks.push_back({"smaller coefficients give smaller moments", ok, margin,
                        "max violation, exhaustive discrete, n=6"});
  return res;
}

SuiteResult suite_jensen_product(std::uint64_t seed) {
  SuiteResult res{"jensen-product", {}};
  Rng rng(seed, 0);
  bool ok = true;
  double margin = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    std::vector<Law> lx, ly, lprod, lmean;
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) {
      a[(std::size_t)i] = rng.normal();
      lx.push_back(rademacher_law());
      ly.push_back(two_level_law(0.2 + rng.uniform(), 1.0 + rng.uniform()));
    }
    // the product X_i Y_i and the deflated X_i E|Y_i| are both finite laws
    for (int i = 0; i < n; ++i) {
      Law prod;
      double mean_abs_y = 0.0;
      for (const auto& ax : lx[(std::size_t)i])
        for (const auto& ay : ly[(std::size_t)i])
          prod.push_back({ax.v * ay.v, ax.p * ay.p});
      for (const auto& ay : ly[(std::size_t)i]) mean_abs_y += ay.p * std::fabs(ay.v);
      lprod.push_back(prod);
      Law deflated;
      for (const auto& ax : lx[(std::size_t)i])
        deflated.push_back({ax.v * mean_abs_y, ax.p});
      lmean.push_back(deflated);
    }
    for (double p : {1.0, 2.0, 4.0}) {
      const double mp = exact_moment(lprod, a, p), mm = exact_moment(lmean, a, p);
      margin = std::max(margin, mm - mp);
      if (mm > mp + 1e-12) ok = false;
    }
  }
  res.checks.push_back({"product moments dominate mean-deflated moments", ok,
                        margin, "max violation, exhaustive discrete, n=4"});
  return res;
}

SuiteResult suite_tail_sup_compare(std::uint64_t seed) {
  SuiteResult res{"tail-sup-compare", {}};
  Rng rng(seed, 0);
  // X = Gaussian truncated at M (zero beyond), Y = Gaussian: the X tails
  // are dominated for every t >= M, so the sup comparison holds with
  // constant 1 + M / E|Y|
  const double m_level = 1.0;
  const double c = 1.0 + m_level / std::sqrt(2.0 / M_PI);
  bool ok = true;
  double worst = -kInf;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4;
    const auto T = random_points(rng, 8, n);
    const auto [mx, sx] = mc_sup_mean(
        T, n,
        [m_level](Rng& r, std::vector<double>& out) {
          for (auto& v : out) {
            const double g = r.normal();
            v = std::fabs(g) <= m_level ? g : 0.0;
          }
        },
        20000, seed + 100 + (std::uint64_t)trial);
    const auto [my, sy] = mc_sup_mean(
        T, n,
        [](Rng& r, std::vector<double>& out) {
          for (auto& v : out) v = r.normal();
        },
        20000, seed + 500 + (std::uint64_t)trial);
    const double slack = 3.0 * (sx + c * sy);
    worst = std::max(worst, mx - c * my);
    if (mx > c * my + slack) ok = false;
  }
  res.checks.push_back({"truncated-vs-full sup comparison with explicit constant",
                        ok, worst, "max lhs - C*rhs margin over 10 trials"});
  return res;
}

SuiteResult suite_srv_sup_compare(std::uint64_t seed) {
  SuiteResult res{"srv-sup-compare", {}};
  Rng rng(seed, 0);
  const DistSpec x = DistSpec::weibull(0.5).normalized(1.0);
  const double kappa = x.estimate_kappa(64.0);
  const DistSpec y = DistSpec::weibull(1.0 / std::log2(kappa));
  double fitted = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4;
    const auto T = random_points(rng, 8, n);
    const auto [mx, sx] = mc_sup_mean(
        T, n,
        [&x](Rng& r, std::vector<double>& out) {
          for (auto& v : out) v = x.sample(r);
        },
        20000, seed + 1000 + (std::uint64_t)trial);
    const auto [my, sy] = mc_sup_mean(
        T, n,
        [&y](Rng& r, std::vector<double>& out) {
          for (auto& v : out) v = y.sample(r);
        },
        20000, seed + 5000 + (std::uint64_t)trial);
    if (my > 0.0) fitted = std::max(fitted, mx / my);
  }
  res.checks.push_back(
      {"SRV sup dominated by heavy-tail comparator with bounded constant",
       fitted <= 1e3 && fitted > 0.0, fitted, "max ratio over 50 random T"});
  return res;
}

SuiteResult suite_subexp_moment(std::uint64_t) {
  SuiteResult res{"subexp-moment", {}};
  for (double rw : {0.5, 1.0, 2.0}) {
    const DistSpec x = DistSpec::weibull(rw);
    const double r = 1.0 / rw;  // moment growth ||X||_p <= C1 p^r
    double c1 = 0.0;
    for (double p = 1.0; p <= 64.0; p *= 1.0746)  // ~32 points per decade
      c1 = std::max(c1, x.moment_p(p) / std::pow(p, r));
    const double eta = std::min(1.0, r / (2.0 * std::pow(c1, 1.0 / r) * M_E));
    const double value = x.subexp_integral(eta, r);
    const double cap = c1 * M_E + 5.0 / M_E;
    std::ostringstream detail;
    detail << "tail exponent " << rw << ": C1=" << c1 << " eta=" << eta
           << " value=" << value << " cap=" << cap;
    res.checks.push_back({"sub-exponential moment within recipe cap",
                          value <= cap, value / cap, detail.str()});
  }
  return res;
}

SuiteResult suite_tail_lower(std::uint64_t) {
  SuiteResult res{"tail-lower", {}};
  std::vector<std::pair<std::string, DistSpec>> laws = {
      {"rademacher", DistSpec::rademacher()},
      {"gaussian", DistSpec::gaussian()},
      {"exponential-tail", DistSpec::weibull(1.0).normalized(1.0)},
  };
  for (const auto& [name, x] : laws) {
    const double kappa = x.estimate_kappa(64.0);
    if (kappa <= 1.0 + 1e-9) {
      // all moments equal: the support is bounded and every tail check
      // beyond it holds vacuously
      res.checks.push_back({"tail lower bound: " + name,
                            std::isfinite(x.support_sup()), 0.0,
                            "degenerate moment growth, bounded support"});
      continue;
    }
    const double r = std::log2(kappa);
    const double eta =
        std::min(1.0, r / (2.0 * std::pow(kappa, 1.0 / r) * M_E));
    const double c = std::pow((2.0 / eta) * std::log(kappa * M_E + 5.0 / M_E), r);
    const TailProfile prof = x.tail_profile();
    bool ok = true;
    double worst = kInf;
    for (int s = 0; s <= 5; ++s) {
      const double t = c * std::pow(2.0, s);
      const double need = 0.5 * eta * std::pow(t, 1.0 / r);
      const double have = prof.n(t);
      if (std::isfinite(have)) worst = std::min(worst, have / need);
      if (have < need) ok = false;
    }
    res.checks.push_back({"tail lower bound: " + name, ok,
                          std::isfinite(worst) ? worst : 0.0,
                          "min N(t)/target on t in C*{1..32}"});
  }
  return res;
}

SuiteResult suite_product_tails(std::uint64_t seed) {
  SuiteResult res{"product-tails", {}};
  const DistSpec x = DistSpec::weibull(0.5).normalized(1.0);
  const ProductDecomposition pd = product_decompose(x, 2);
  const long samples = 1000000;
  std::vector<double> sx((std::size_t)samples), sp((std::size_t)samples);
  for (long k = 0; k < samples; ++k) {
    Rng rx(seed, (std::uint64_t)k);
    Rng rp(seed ^ 0xabcdefULL, (std::uint64_t)k);
    sx[(std::size_t)k] = std::fabs(x.sample(rx));
    sp[(std::size_t)k] = std::fabs(pd.sample_product(rp));
  }
  std::sort(sx.begin(), sx.end());
  std::sort(sp.begin(), sp.end());
  auto survival = [samples](const std::vector<double>& sorted, double t) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    return (double)(sorted.end() - it) / (double)samples;
  };
  const double t999 = sx[(std::size_t)(0.999 * (samples - 1))];
  std::vector<double> grid;
  for (int g = 0; g <= 40; ++g)
    grid.push_back(std::exp(std::log(1.0) +
                            g * std::log(std::max(t999, 1.01)) / 40.0));
  double fitted = kInf;
  for (double c = 1.0; c <= 1e3; c *= 1.05) {
    bool ok = true;
    for (double t : grid) {
      // two-sided: C|product| tail-dominates X and C|X| dominates product
      if (survival(sp, t / c) + 1e-5 < survival(sx, t)) ok = false;
      if (survival(sx, t / c) + 1e-5 < survival(sp, t)) ok = false;
    }
    if (ok) {
      fitted = c;
      break;
    }
  }
  res.checks.push_back({"two-sided product/base tail domination",
                        std::isfinite(fitted), fitted,
                        "fitted rescaling constant at 1e6 samples"});
  return res;
}

SuiteResult suite_product_sup(std::uint64_t seed) {
  SuiteResult res{"product-sup", {}};
  Rng rng(seed, 0);
  const DistSpec x = DistSpec::weibull(0.5).normalized(1.0);
  const ProductDecomposition pd = product_decompose(x, 2);
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 16;  // 4x4 matrices flattened
    const auto T = random_points(rng, 8, n);
    const auto [mx, sx_] = mc_sup_mean(
        T, n,
        [&x](Rng& r, std::vector<double>& out) {
          for (auto& v : out) v = x.sample(r);
        },
        100000, seed + 11 + (std::uint64_t)trial);
    const auto [mp, sp_] = mc_sup_mean(
        T, n,
        [&pd](Rng& r, std::vector<double>& out) {
          for (auto& v : out) v = pd.sample_product(r);
        },
        100000, seed + 9011 + (std::uint64_t)trial);
    if (mx <= 0.0 || mp <= 0.0) {
      ok = false;
      continue;
    }
    const double ratio = std::max(mx / mp, mp / mx);
    worst = std::max(worst, ratio);
    if (ratio > 8.0) ok = false;
  }
  res.checks.push_back({"product sup matches base sup within factor 8", ok,
                        worst, "max two-sided ratio over 50 random T"});
  return res;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"subset-count",   "power-graph",     "symmetrize",
          "oracle",         "contraction",     "coeff-compare",
          "jensen-product", "tail-sup-compare", "srv-sup-compare",
          "subexp-moment",  "tail-lower",      "product-tails",
          "product-sup"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "subset-count") return suite_subset_count(seed);
  if (name == "power-graph") return suite_power_graph(seed);
  if (name == "symmetrize") return suite_symmetrize(seed);
  if (name == "oracle") return suite_oracle(seed);
  if (name == "contraction") return suite_contraction(seed);
  if (name == "coeff-compare") return suite_coeff_compare(seed);
  if (name == "jensen-product") return suite_jensen_product(seed);
  if (name == "tail-sup-compare") return suite_tail_sup_compare(seed);
  if (name == "srv-sup-compare") return suite_srv_sup_compare(seed);
  if (name == "subexp-moment") return suite_subexp_moment(seed);
  if (name == "tail-lower") return suite_tail_lower(seed);
  if (name == "product-tails") return suite_product_tails(seed);
  if (name == "product-sup") return suite_product_sup(seed);
  throw PreconditionError("unknown suite: " + name);
}

}  // namespace opnorm
