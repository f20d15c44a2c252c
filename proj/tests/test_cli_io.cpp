#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "opnorm/io.hpp"

using namespace opnorm;

TEST_CASE("entry-law JSON round trip") {
  const Json j = Json::parse(R"({"kind":"weibull","r":0.5,"scale":2.0})");
  const DistSpec d = dist_from_json(j);
  CHECK(d.kind() == DistKind::kWeibull);
  CHECK(d.shape() == 0.5);
  CHECK(d.scale() == 2.0);
  const Json back = dist_to_json(d);
  CHECK(back.at("kind") == "weibull");
  CHECK(back.at("r") == 0.5);
  CHECK(back.at("scale") == 2.0);

  const DistSpec norm = dist_from_json(
      Json::parse(R"({"kind":"gaussian","normalize_to":1.0})"));
  CHECK(norm.mean_abs() == doctest::Approx(1.0).epsilon(1e-10));

  const DistSpec disc = dist_from_json(
      Json::parse(R"({"kind":"discrete","support":[[1.0,0.5],[-1.0,0.5]]})"));
  CHECK(disc.kind() == DistKind::kDiscrete);
  CHECK(disc.mean_abs() == doctest::Approx(1.0));

  CHECK_THROWS_AS(dist_from_json(Json::parse(R"({"kind":"cauchy"})")),
                  PreconditionError);
}

TEST_CASE("matrix generators") {
  CHECK(matrix_from_generator(Json::parse(R"({"gen":"identity","n":4})"))
            .mat()
            .trace() == 4.0);
  CHECK(matrix_from_generator(Json::parse(R"({"gen":"ones","n":3})")).max_abs() ==
        1.0);
  const CoeffMatrix band =
      matrix_from_generator(Json::parse(R"({"gen":"band","n":6,"bandwidth":1})"));
  CHECK(band(0, 1) == 1.0);
  CHECK(band(0, 2) == 0.0);
  const CoeffMatrix circ =
      matrix_from_generator(Json::parse(R"({"gen":"circulant","n":6})"));
  CHECK(circ.symmetric());
  CHECK(circ(0, 5) == 1.0);  // wrap-around neighbor
  CHECK(circ(0, 0) == 0.0);
  for (int i = 0; i < 6; ++i) {
    double row = 0.0;
    for (int j = 0; j < 6; ++j) row += circ(i, j);
    CHECK(row == 2.0);
  }
  const Json sb = Json::parse(R"({"gen":"sparse_bernoulli","n":16,"seed":3})");
  const CoeffMatrix s1 = matrix_from_generator(sb);
  const CoeffMatrix s2 = matrix_from_generator(sb);
  CHECK(s1.symmetric());
  CHECK((s1.mat() - s2.mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(matrix_from_generator(Json::parse(R"({"gen":"hilbert","n":4})")),
                  PreconditionError);
}

TEST_CASE("matrix CSV round trip") {
  Eigen::MatrixXd m(2, 2);
  m << 1.25, -3.5, 0.0, 2.0e-7;
  const std::string path = "/tmp/opnorm_test_matrix.csv";
  matrix_to_csv(CoeffMatrix{m}, path);
  const CoeffMatrix back = matrix_from_csv(path);
  CHECK((back.mat() - m).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(matrix_from_csv("/tmp/does_not_exist_opnorm.csv"), Error);
}

TEST_CASE("estimate serialization") {
  EstimateResult r;
  r.mean = 1.5;
  r.stderr_ = 0.01;
  r.n_samples = 100;
  r.seed = 7;
  r.p = 2.0;
  r.elapsed = 0.25;
  const Json j = estimate_to_json(r);
  CHECK(j.at("mean") == 1.5);
  CHECK(j.at("stderr") == 0.01);
  CHECK(j.at("n_samples") == 100);
  CHECK(j.at("seed") == 7);
  CHECK(j.at("p") == 2.0);
  CHECK(j.contains("elapsed"));
}

TEST_CASE("sweep schema") {
  const std::string header = kSweepHeader;
  CHECK(header ==
        "n,ensemble,dist,mean,stderr,n_samples,seed,m,gaussian_formula,"
        "seginer,weibull,r_lower,r_upper,d,main_lower,main_upper,da_upper,"
        "ratio");
  BoundReport rep;
  rep.n = 8;
  rep.dist = "rademacher";
  rep.main_upper = 2.0;
  rep.empirical.mean = 1.0;
  const std::string row = sweep_row("identity", rep);
  const auto count_commas = [](const std::string& s) {
    return std::count(s.begin(), s.end(), ',');
  };
  CHECK(count_commas(row) == count_commas(header));
  CHECK(row.substr(0, 11) == "8,identity,");
}

TEST_CASE("budget-solution serialization") {
  OrliczSolution s;
  s.t_star = Eigen::MatrixXd::Zero(2, 2);
  s.t_star(0, 1) = -0.5;
  s.objective = 0.5;
  s.lambda = 1.0;
  s.budget_used = 0.25;
  s.feasible = true;
  const Json j = orlicz_solution_to_json(s);
  CHECK(j.at("objective") == 0.5);
  CHECK(j.at("witness").size() == 1);
  CHECK(j.at("witness")[0][0] == 0);
  CHECK(j.at("witness")[0][1] == 1);
  CHECK(j.at("witness")[0][2] == -0.5);

  // report JSON round-trips bit-exactly through its own text form
  BoundReport rep;
  rep.n = 3;
  rep.m = 2.0;
  rep.empirical.mean = 1.0 / 3.0;
  const std::string text = bound_report_to_json(rep).dump(2);
  CHECK(Json::parse(text).dump(2) == text);
}
