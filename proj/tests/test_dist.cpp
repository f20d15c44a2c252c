#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "opnorm/dist.hpp"

using namespace opnorm;

namespace {

// Independent oracle: E|X|^p by quadrature of the tail representation
// E|X|^p = int_0^inf p t^{p-1} P(|X| >= t) dt.
double moment_by_quadrature(const DistSpec& d, double p) {
  auto f = [&](double t) {
    return p * std::pow(t, p - 1.0) * d.tail_survival(t);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  return std::pow(Quad::integrate(f, 0.0, kInf, 12, 1e-10), 1.0 / p);
}

}  // namespace

TEST_CASE("sampling basics") {
  Rng rng(42);
  auto rad = DistSpec::rademacher();
  for (int i = 0; i < 100; ++i) {
    const double x = rad.sample(rng);
    CHECK((x == 1.0 || x == -1.0));
  }

  // empirical E|g| over 10^6 draws vs sqrt(2/pi)
  auto g = DistSpec::gaussian();
  const int n = 1'000'000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::fabs(g.sample(rng));
  const double mean = acc / n;
  const double expect = std::sqrt(2.0 / M_PI);
  const double sigma = std::sqrt(1.0 - 2.0 / M_PI) / std::sqrt((double)n);
  CHECK(std::fabs(mean - expect) < 3.0 * sigma);

  // determinism given stream state
  Rng a(7, 3), b(7, 3);
  auto w = DistSpec::weibull(0.5);
  for (int i = 0; i < 16; ++i) CHECK(w.sample(a) == w.sample(b));
}

TEST_CASE("weibull sampling matches inverse survival") {
  // P(|X| >= t) = e^{-t^r}: empirical survival at a few t values
  auto w = DistSpec::weibull(1.0);
  Rng rng(11);
  const int n = 400'000;
  int c1 = 0, c2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::fabs(w.sample(rng));
    if (x >= 1.0) ++c1;
    if (x >= 2.0) ++c2;
  }
  CHECK(std::fabs((double)c1 / n - std::exp(-1.0)) < 0.005);
  CHECK(std::fabs((double)c2 / n - std::exp(-2.0)) < 0.005);
}

TEST_CASE("moment_p closed forms") {
  CHECK(DistSpec::rademacher().moment_p(7.0) == doctest::Approx(1.0));
  CHECK(DistSpec::weibull(1.0).moment_p(2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(DistSpec::gaussian().moment_p(2.0) == doctest::Approx(1.0));
  // gaussian 4th moment: ||g||_4 = 3^{1/4}
  CHECK(DistSpec::gaussian().moment_p(4.0) ==
        doctest::Approx(std::pow(3.0, 0.25)));
}

TEST_CASE("moment_p agrees with quadrature oracle") {
  for (double p : {1.0, 2.0, 3.5, 8.0}) {
    CHECK(DistSpec::gaussian().moment_p(p) ==
          doctest::Approx(moment_by_quadrature(DistSpec::gaussian(), p))
              .epsilon(1e-7));
    CHECK(DistSpec::weibull(0.5).moment_p(p) ==
          doctest::Approx(moment_by_quadrature(DistSpec::weibull(0.5), p))
              .epsilon(1e-7));
    auto scaled = DistSpec::exp_power(3.0).scaled(0.7);
    CHECK(scaled.moment_p(p) ==
          doctest::Approx(moment_by_quadrature(scaled, p)).epsilon(1e-7));
  }
}

TEST_CASE("estimate_kappa") {
  CHECK(DistSpec::rademacher().estimate_kappa(64.0) == doctest::Approx(1.0));
  const double kg = DistSpec::gaussian().estimate_kappa(64.0);
  CHECK(kg >= 1.25);
  CHECK(kg <= 1.415);
  const double kw = DistSpec::weibull(0.5).estimate_kappa(64.0);
  CHECK(kw >= 3.5);
  CHECK(kw <= 4.0);
}

TEST_CASE("estimate_kappa is stable in p_max") {
  for (auto d : {DistSpec::gaussian(), DistSpec::weibull(0.5),
                 DistSpec::weibull(1.0), DistSpec::exp_power(3.0)}) {
    const double k64 = d.estimate_kappa(64.0);
    const double k128 = d.estimate_kappa(128.0);
    CHECK(k128 >= k64 - 1e-12);
    // heavy laws approach their doubling limit slowly; allow 2% drift
    CHECK((k128 - k64) / k64 < 0.02);
  }
}

TEST_CASE("tail_profile") {
  auto rad = DistSpec::rademacher().tail_profile();
  CHECK(rad.hat_n(0.5) == doctest::Approx(0.25));
  CHECK(rad.hat_n(1.0) == doctest::Approx(1.0));
  CHECK(rad.hat_n(1.5) == kInf);

  auto w = DistSpec::weibull(0.7).tail_profile();
  CHECK(w.n(2.0) == doctest::Approx(std::pow(2.0, 0.7)));
  CHECK(w.hat_n(2.0) == doctest::Approx(std::pow(2.0, 0.7)));
  CHECK(w.hat_n(-0.5) == doctest::Approx(0.25));

  auto g = DistSpec::gaussian().tail_profile();
  CHECK(g.hat_n(2.0) ==
        doctest::Approx(-std::log(std::erfc(2.0 / std::sqrt(2.0)))));
  CHECK(g.hat_n(2.0) == doctest::Approx(3.09).epsilon(1e-2));
}

TEST_CASE("hat_n_inv") {
  auto w = DistSpec::weibull(1.0).tail_profile();
  CHECK(w.hat_n_inv(0.25) == doctest::Approx(0.5));
  CHECK(w.hat_n_inv(4.0) == doctest::Approx(4.0));  // tail branch N(t)=t
  auto rad = DistSpec::rademacher().tail_profile();
  CHECK(rad.hat_n_inv(5.0) == doctest::Approx(1.0));  // capped at the support
  // gaussian: y below N(1+) collapses to the box edge
  auto g = DistSpec::gaussian().scaled(0.3).tail_profile();
  CHECK(g.hat_n_inv(1.5) == doctest::Approx(1.0));
  // inverse is a right inverse on the tail branch
  auto g1 = DistSpec::gaussian().tail_profile();
  const double t = g1.hat_n_inv(4.0);
  CHECK(g1.hat_n(t) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("normalize") {
  auto g = DistSpec::gaussian().normalized(1.0);
  CHECK(g.scale() == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
  CHECK(g.mean_abs() == doctest::Approx(1.0).epsilon(1e-12));

  auto rad = DistSpec::rademacher().normalized(1.0);
  CHECK(rad.scale() == doctest::Approx(1.0));

  auto w = DistSpec::weibull(1.0).normalized(1.0 / M_E);
  CHECK(w.scale() == doctest::Approx(1.0 / M_E));

  // idempotent up to 1e-10 in scale
  for (auto d : {DistSpec::gaussian(), DistSpec::weibull(0.5),
                 DistSpec::discrete({{2.0, 0.5}, {-1.0, 0.5}})}) {
    auto once = d.normalized(1.0);
    auto twice = once.normalized(1.0);
    CHECK(std::fabs(once.scale() - twice.scale()) <= 1e-10 * once.scale());
  }
}

TEST_CASE("discrete law is mirrored and exact") {
  auto d = DistSpec::discrete({{1.0, 0.5}, {-1.0, 0.25}, {2.0, 0.25}});
  double total = 0.0;
  for (const auto& atom : d.support()) {
    total += atom.prob;
    bool mirrored = false;
    for (const auto& other : d.support())
      if (other.point == -atom.point &&
          std::fabs(other.prob - atom.prob) < 1e-15)
        mirrored = true;
    CHECK(mirrored);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.mean_abs() == doctest::Approx(0.75 * 1.0 + 0.25 * 2.0));
}

TEST_CASE("subgaussian_norm") {
  CHECK(DistSpec::rademacher().subgaussian_norm() ==
        doctest::Approx(1.0 / std::sqrt(std::log(2.0))).epsilon(1e-6));
  CHECK(DistSpec::gaussian().subgaussian_norm() ==
        doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-6));
  // weibull(2): E e^{(X/K)^2} = K^2/(K^2-1), root at K = sqrt(2)
  CHECK(DistSpec::weibull(2.0).subgaussian_norm() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  // homogeneity K(cX) = c K(X)
  const double base = DistSpec::weibull(2.0).subgaussian_norm();
  const double scaled = DistSpec::weibull(2.0).scaled(0.7).subgaussian_norm();
  CHECK(scaled == doctest::Approx(0.7 * base).epsilon(1e-5));
  CHECK_THROWS_AS(DistSpec::weibull(1.0).subgaussian_norm(),
                  NotSubgaussianError);
}

TEST_CASE("subexp_integral") {
  CHECK(DistSpec::rademacher().subexp_integral(0.3, 1.0) ==
        doctest::Approx(std::exp(0.3)));
  // weibull(1), r=1, eta=1/2: E e^{|X|/2} = 2
  CHECK(DistSpec::weibull(1.0).subexp_integral(0.5, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(DistSpec::weibull(1.0).subexp_integral(1.5, 1.0),
                  DivergenceError);
  CHECK_THROWS_AS(DistSpec::weibull(0.5).subexp_integral(0.5, 1.0),
                  DivergenceError);
}

TEST_CASE("product_decompose") {
  // r = 1: factor law identical
  auto g = DistSpec::gaussian().normalized(1.0);
  auto pd1 = product_decompose(g, 1);
  CHECK(pd1.factor.kind() == DistKind::kGaussian);
  CHECK(pd1.factor.scale() == doctest::Approx(g.scale()));

  // rademacher: factor stays rademacher, product of r factors is rademacher
  auto rad = DistSpec::rademacher();
  auto pdr = product_decompose(rad, 3);
  CHECK(pdr.factor.kind() == DistKind::kRademacher);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const double x = pdr.sample_product(rng);
    CHECK((x == 1.0 || x == -1.0));
  }

  // weibull(1/2) normalized, r = 2: factor is weibull(1) with scale^{1/2}
  auto w = DistSpec::weibull(0.5).normalized(1.0);
  auto pd2 = product_decompose(w, 2);
  CHECK(pd2.factor.kind() == DistKind::kWeibull);
  CHECK(pd2.factor.shape() == doctest::Approx(1.0));
  CHECK(pd2.factor.scale() == doctest::Approx(std::sqrt(w.scale())));

  CHECK_THROWS_AS(product_decompose(DistSpec::gaussian(), 1),
                  PreconditionError);  // not normalized
}

TEST_CASE("check_n_growth") {
  std::vector<std::pair<double, double>> grid;
  for (double x : {1.0, 2.0, 4.0, 8.0})
    for (double t : {1.0, 2.0, 4.0, 8.0}) grid.push_back({x, t});

  // weibull(1) with kappa = 2 exactly: N(tx) = tx >= t N(x), so C = 1
  auto w = DistSpec::weibull(1.0);  // E|X| = 1 already
  CHECK(check_n_growth(w, grid, 2.0) == doctest::Approx(1.0));

  // trivial pair x = t = 1 alone: C = 1 for any law
  auto g = DistSpec::gaussian().normalized(1.0);
  CHECK(check_n_growth(g, {{1.0, 1.0}}) == doctest::Approx(1.0));

  // gaussian on the dyadic grid: finite C <= 10
  const double c = check_n_growth(g, grid);
  CHECK(std::isfinite(c));
  CHECK(c <= 10.0);
}
