#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opnorm/bounds.hpp"

using namespace opnorm;

TEST_CASE("row-column norm sum") {
  CHECK(m_of(CoeffMatrix::identity(7)) == doctest::Approx(2.0));
  CHECK(m_of(CoeffMatrix::ones(9)) == doctest::Approx(6.0));
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 0, 0;
  CHECK(m_of(CoeffMatrix{m}) == doctest::Approx(std::sqrt(5.0) + 2.0));
}

TEST_CASE("sorted-row-maxima formula") {
  CHECK(gaussian_formula(CoeffMatrix::identity(16)) ==
        doctest::Approx(1.0 + std::sqrt(std::log(16.0))));
  CHECK(gaussian_formula(CoeffMatrix::zero(8)) == 0.0);
  // diag(2,1,...,1): the leading max contributes 2*sqrt(Log 1) = 2,
  // the trailing ones at most sqrt(Log n) < 2
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(16, 16);
  d(0, 0) = 2.0;
  CHECK(gaussian_formula(CoeffMatrix{d}) == doctest::Approx(4.0));
  // non-symmetric input routes through block symmetrization
  Eigen::MatrixXd ns(2, 2);
  ns << 0, 3, 0, 0;
  CHECK(gaussian_formula(CoeffMatrix{ns}) ==
        doctest::Approx(gaussian_formula(symmetrize(CoeffMatrix{ns}))));
}

TEST_CASE("quarter-log bound") {
  CHECK(seginer_bound(CoeffMatrix::identity(16)) ==
        doctest::Approx(2.0 * std::pow(std::log(16.0), 0.25)));
  CHECK(seginer_bound(CoeffMatrix::identity(2)) == doctest::Approx(2.0));
  CHECK(seginer_bound(CoeffMatrix::ones(4)) ==
        doctest::Approx(4.0 * std::pow(std::log(4.0), 0.25)));
}

TEST_CASE("heavy-tail closed-form bound") {
  CHECK(weibull_bound(CoeffMatrix::identity(16), 1.0) ==
        doctest::Approx(1.0 + std::log(16.0)));
  CHECK(weibull_bound(CoeffMatrix::identity(16), 2.0) ==
        doctest::Approx(1.0 + std::sqrt(std::log(16.0))));
  CHECK(weibull_bound(CoeffMatrix::zero(5), 1.0) == 0.0);
  CHECK_THROWS_AS(weibull_bound(CoeffMatrix::ones(4), 3.0), PreconditionError);
}

TEST_CASE("removal-profile quantity") {
  DConfig cfg;
  cfg.ascent.n_starts = 4;
  cfg.ascent.max_iters = 40;
  cfg.ascent.batch = 128;

  CHECK(d_of(CoeffMatrix::zero(8), EnsembleSpec(CoeffMatrix::zero(8), DistSpec::rademacher()),
             cfg, 1)
            .value == 0.0);

  // diagonal sign entries: the off-I supremum is always 1
  const CoeffMatrix id8 = CoeffMatrix::identity(8);
  const DResult rad = d_of(id8, EnsembleSpec(id8, DistSpec::rademacher()), cfg, 1);
  CHECK(rad.value == doctest::Approx(1.0).epsilon(0.05));

  // diagonal gaussian: single-entry moments at small p
  const CoeffMatrix id16 = CoeffMatrix::identity(16);
  const DResult g = d_of(id16, EnsembleSpec(id16, DistSpec::gaussian()), cfg, 1);
  CHECK(g.value >= 0.9);
  CHECK(g.value <= 2.5);
  CHECK(g.profile.back().first == 16);
  CHECK(g.profile.back().second == 0.0);
}

TEST_CASE("two-sided assembly") {
  DConfig cfg;
  cfg.ascent.n_starts = 4;
  cfg.ascent.max_iters = 40;
  cfg.ascent.batch = 128;

  const MainBounds zero = main_bounds(
      CoeffMatrix::zero(4), EnsembleSpec(CoeffMatrix::zero(4), DistSpec::rademacher()),
      1.5, cfg, 1);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);

  const CoeffMatrix id16 = CoeffMatrix::identity(16);
  const MainBounds mb =
      main_bounds(id16, EnsembleSpec(id16, DistSpec::rademacher()), 1.5, cfg, 1);
  CHECK(mb.m == doctest::Approx(2.0));
  CHECK(mb.d <= 1.05);
  CHECK(mb.lower == doctest::Approx(mb.m + mb.d));
  const double factor = std::pow(log_clamped(log_clamped(16.0)), 1.5);
  CHECK(mb.upper == doctest::Approx(factor * (mb.m + mb.r)));
  CHECK(mb.upper >= mb.m);
}

TEST_CASE("degree-factor bound") {
  AscentConfig ascent;
  ascent.n_starts = 4;
  ascent.max_iters = 40;
  ascent.batch = 128;

  // diagonal: degree 0, the Log factor collapses to 1
  const CoeffMatrix id8 = CoeffMatrix::identity(8);
  const double v = dA_bound(id8, EnsembleSpec(id8, DistSpec::rademacher()), 1.5,
                            ascent, 1);
  CHECK(v == doctest::Approx(1.0 + 1.0).epsilon(0.05));  // max row + sup

  // band with degree 2: Log(2 v e) = 1 as well
  const CoeffMatrix band = CoeffMatrix::band(8, 1);
  const double vb = dA_bound(band, EnsembleSpec(band, DistSpec::rademacher()),
                             1.5, ascent, 1);
  CHECK(vb >= band.max_row_l2());

  Eigen::MatrixXd ns(2, 2);
  ns << 0, 1, 0, 0;
  CHECK_THROWS_AS(dA_bound(CoeffMatrix{ns},
                           EnsembleSpec(CoeffMatrix{ns}, DistSpec::rademacher()),
                           1.5, ascent, 1),
                  PreconditionError);
}

TEST_CASE("full report") {
  ReportConfig cfg;
  cfg.n_samples = 200;
  cfg.d.ascent.n_starts = 3;
  cfg.d.ascent.max_iters = 30;
  cfg.d.ascent.batch = 96;

  const BoundReport zero = bound_report(
      CoeffMatrix::zero(4), EnsembleSpec(CoeffMatrix::zero(4), DistSpec::rademacher()),
      cfg);
  CHECK(zero.m == 0.0);
  CHECK(zero.main_upper == 0.0);
  CHECK(zero.empirical.mean == 0.0);

  const CoeffMatrix id16 = CoeffMatrix::identity(16);
  const BoundReport rep =
      bound_report(id16, EnsembleSpec(id16, DistSpec::rademacher()), cfg);
  CHECK(rep.m == doctest::Approx(2.0));
  CHECK(rep.seginer == doctest::Approx(2.0 * std::pow(std::log(16.0), 0.25)));
  CHECK(rep.empirical.mean == doctest::Approx(1.0));
  CHECK(rep.empirical.stderr_ == doctest::Approx(0.0));
  CHECK(rep.r_lower <= rep.r_upper * (1.0 + 1e-9));
}
