#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numeric>

#include "opnorm/norms.hpp"

using namespace opnorm;

TEST_CASE("spectral norm on small matrices") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  CHECK(spectral_norm(d) == doctest::Approx(4.0));
  CHECK(spectral_norm(Eigen::MatrixXd::Ones(5, 5)) == doctest::Approx(5.0));
  Eigen::MatrixXd h(2, 2);
  h << 1, 1, 1, -1;
  CHECK(spectral_norm(h) == doctest::Approx(std::sqrt(2.0)));
  CHECK(spectral_norm(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
}

TEST_CASE("power iteration matches dense decomposition") {
  Rng rng(21, 0);
  Eigen::MatrixXd m(100, 100);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) m(i, j) = rng.normal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  CHECK(spectral_norm(m) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
  // near-degenerate top singular values still converge
  Eigen::MatrixXd almost = Eigen::MatrixXd::Zero(80, 80);
  almost(0, 0) = 1.0;
  almost(1, 1) = 1.0 - 1e-13;
  CHECK(spectral_norm(almost) == doctest::Approx(1.0));
}

TEST_CASE("pairwise summation") {
  std::vector<double> vals;
  Rng rng(4, 0);
  for (int i = 0; i < 1000; ++i) vals.push_back(rng.normal());
  const double direct = std::accumulate(vals.begin(), vals.end(), 0.0);
  CHECK(pairwise_sum(vals) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("hadamard sampling") {
  EnsembleSpec zero(CoeffMatrix::zero(3), DistSpec::gaussian());
  Rng rng(1, 0);
  CHECK(sample_hadamard(zero, rng).cwiseAbs().maxCoeff() == 0.0);

  EnsembleSpec rad(CoeffMatrix::ones(4), DistSpec::rademacher());
  Rng rng2(2, 0);
  const Eigen::MatrixXd s = sample_hadamard(rad, rng2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(s(i, j)) == 1.0);

  EnsembleSpec g(CoeffMatrix::ones(3), DistSpec::gaussian());
  CHECK((sample_hadamard_at(g, 7, 3) - sample_hadamard_at(g, 7, 3))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((sample_hadamard_at(g, 7, 3) - sample_hadamard_at(g, 7, 4))
            .cwiseAbs()
            .maxCoeff() > 0.0);
}

TEST_CASE("mean estimator") {
  EnsembleSpec id(CoeffMatrix::identity(4), DistSpec::rademacher());
  const EstimateResult r = estimate_op_mean(id, 200, 1);
  CHECK(r.mean == doctest::Approx(1.0));
  CHECK(r.stderr_ == doctest::Approx(0.0));

  // thread count must not change the numbers at all
  EnsembleSpec g(CoeffMatrix::ones(6), DistSpec::gaussian());
  const EstimateResult one = estimate_op_mean(g, 500, 42, 1);
  const EstimateResult four = estimate_op_mean(g, 500, 42, 4);
  CHECK(one.mean == four.mean);
  CHECK(one.stderr_ == four.stderr_);

  // 2x2 all-ones sign matrix: exact mean known from full enumeration
  EnsembleSpec ones2(CoeffMatrix::ones(2), DistSpec::rademacher());
  const double exact = exact_mean_discrete(ones2);
  CHECK(exact == doctest::Approx(1.0 + std::sqrt(2.0) / 2.0).epsilon(1e-12));
  const EstimateResult mc = estimate_op_mean(ones2, 20000, 3);
  CHECK(std::fabs(mc.mean - exact) <= 3.0 * mc.stderr_);
}

TEST_CASE("moment estimator") {
  Eigen::MatrixXd c(1, 1);
  c << 2.5;
  EnsembleSpec scalar(CoeffMatrix{c}, DistSpec::rademacher());
  for (double p : {1.0, 2.0, 7.0})
    CHECK(estimate_op_moment(scalar, p, 100, 1).mean == doctest::Approx(2.5));

  Eigen::MatrixXd u(1, 1);
  u << 1.0;
  EnsembleSpec gs(CoeffMatrix{u}, DistSpec::gaussian());
  const EstimateResult m2 = estimate_op_moment(gs, 2.0, 50000, 5);
  CHECK(m2.mean == doctest::Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(estimate_op_moment(gs, 0.5, 100, 1), PreconditionError);
}

TEST_CASE("bilinear moment") {
  Eigen::MatrixXd c(1, 1);
  c << 1.7;
  EnsembleSpec scalar(CoeffMatrix{c}, DistSpec::rademacher());
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(1, 0);
  for (double p : {1.0, 3.0, 8.0})
    CHECK(bilinear_moment(scalar, e1, e1, p, 50, 1) == doctest::Approx(1.7));

  // 2x2 all-ones with the flat direction: first absolute moment 3/4
  EnsembleSpec ones2(CoeffMatrix::ones(2), DistSpec::rademacher());
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(2, 1.0 / std::sqrt(2.0));
  CHECK(bilinear_moment(ones2, flat, flat, 1.0, 100000, 2) ==
        doctest::Approx(0.75).epsilon(0.02));

  Eigen::VectorXd big = Eigen::VectorXd::Constant(2, 1.0);
  CHECK_THROWS_AS(bilinear_moment(ones2, big, big, 1.0, 10, 1),
                  PreconditionError);
}

TEST_CASE("bilinear supremum ascent") {
  AscentConfig cfg;
  EnsembleSpec id(CoeffMatrix::identity(5), DistSpec::rademacher());
  const SupResult diag = sup_bilinear_moment(id, 2.0, cfg, 1);
  CHECK(diag.value == doctest::Approx(1.0).epsilon(0.05));

  // a single active entry reduces to that entry's moment
  Eigen::MatrixXd single = Eigen::MatrixXd::Zero(3, 3);
  single(0, 0) = 2.0;
  EnsembleSpec se(CoeffMatrix{single}, DistSpec::gaussian());
  const double p = 3.0;
  const SupResult s = sup_bilinear_moment(se, p, cfg, 2);
  CHECK(s.value ==
        doctest::Approx(2.0 * DistSpec::gaussian().moment_p(p)).epsilon(0.15));

  // sup dominates the value at any fixed direction
  EnsembleSpec g(CoeffMatrix::ones(4), DistSpec::gaussian());
  const SupResult sup = sup_bilinear_moment(g, 2.0, cfg, 3);
  Eigen::VectorXd v = Eigen::VectorXd::Unit(4, 1), w = Eigen::VectorXd::Unit(4, 2);
  const double fixed = bilinear_moment(g, v, w, 2.0, 2048, 99);
  CHECK(sup.value >= fixed * 0.85);
}

TEST_CASE("exact discrete mean") {
  EnsembleSpec id3(CoeffMatrix::identity(3), DistSpec::rademacher());
  CHECK(exact_mean_discrete(id3) == doctest::Approx(1.0));

  Eigen::MatrixXd d(2, 2);
  d << 1, 0, 0, 2;
  EnsembleSpec diag(CoeffMatrix{d}, DistSpec::rademacher());
  CHECK(exact_mean_discrete(diag) == doctest::Approx(2.0));

  // three-point law: mass at 0 plus mirrored atoms
  EnsembleSpec tri(CoeffMatrix::identity(2),
                   DistSpec::discrete({{0.0, 0.5}, {2.0, 0.5}}));
  // per entry: 0 w.p. 1/2, +-2 w.p. 1/4 each; diagonal norm = max |entry|
  // E max(|X1|,|X2|) = 2 * (1 - 1/4) = 1.5
  CHECK(exact_mean_discrete(tri) == doctest::Approx(1.5));

  EnsembleSpec big(CoeffMatrix::ones(5), DistSpec::rademacher());
  CHECK_THROWS_AS(exact_mean_discrete(big), BudgetExceededError);

  EnsembleSpec gauss(CoeffMatrix::ones(2), DistSpec::gaussian());
  CHECK_THROWS_AS(exact_mean_discrete(gauss), PreconditionError);
}

TEST_CASE("entry moment bound") {
  EnsembleSpec r(CoeffMatrix::ones(3), DistSpec::rademacher());
  CHECK(max_entry_moment(r, 5.0) == doctest::Approx(1.0));
  EnsembleSpec g(CoeffMatrix::identity(4), DistSpec::gaussian());
  CHECK(max_entry_moment(g, 4.0) ==
        doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-9));
  EnsembleSpec z(CoeffMatrix::zero(3), DistSpec::gaussian());
  CHECK(max_entry_moment(z, 2.0) == 0.0);
}
