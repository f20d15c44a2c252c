#include "opnorm/io.hpp"

#include <fstream>
#include <sstream>

namespace opnorm {

DistSpec dist_from_json(const Json& j) {
  if (!j.contains("kind")) throw PreconditionError("dist spec needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  DistSpec d = [&] {
    if (kind == "rademacher") return DistSpec::rademacher();
    if (kind == "gaussian") return DistSpec::gaussian();
    if (kind == "weibull") return DistSpec::weibull(j.at("r").get<double>());
    if (kind == "exp_power")
      return DistSpec::exp_power(j.at("alpha").get<double>());
    if (kind == "discrete") {
      std::vector<DiscreteAtom> support;
      for (const auto& pair : j.at("support"))
        support.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
      return DistSpec::discrete(support);
    }
    throw PreconditionError("unknown dist kind: " + kind);
  }();
  if (j.contains("scale")) d = d.scaled(j.at("scale").get<double>());
  if (j.contains("normalize_to"))
    d = d.normalized(j.at("normalize_to").get<double>());
  return d;
}

Json dist_to_json(const DistSpec& d) {
  Json j;
  switch (d.kind()) {
    case DistKind::kRademacher:
      j["kind"] = "rademacher";
      break;
    case DistKind::kGaussian:
      j["kind"] = "gaussian";
      break;
    case DistKind::kWeibull:
      j["kind"] = "weibull";
      j["r"] = d.shape();
      break;
    case DistKind::kExpPower:
      j["kind"] = "exp_power";
      j["alpha"] = d.shape();
      break;
    case DistKind::kDiscrete: {
      j["kind"] = "discrete";
      Json support = Json::array();
      for (const auto& atom : d.support())
        support.push_back({atom.point, atom.prob});
      j["support"] = support;
      break;
    }
    case DistKind::kAbsRoot:
      j["kind"] = "abs_root";
      j["base"] = dist_to_json(*d.base());
      j["root"] = d.root();
      break;
  }
  j["scale"] = d.scale();
  if (d.normalization_target()) j["normalize_to"] = *d.normalization_target();
  return j;
}

CoeffMatrix matrix_from_generator(const Json& j) {
  const std::string gen = j.at("gen").get<std::string>();
  const int n = j.at("n").get<int>();
  if (n < 1) throw PreconditionError("generator needs n >= 1");
  if (gen == "identity") return CoeffMatrix::identity(n);
  if (gen == "ones") return CoeffMatrix::ones(n);
  if (gen == "band")
    return CoeffMatrix::band(n, j.value("bandwidth", 1));
  if (gen == "circulant") {
    const int b = j.value("bandwidth", 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int off = 1; off <= b; ++off) {
        m(i, (i + off) % n) = 1.0;
        m(i, ((i - off) % n + n) % n) = 1.0;
      }
    return CoeffMatrix(std::move(m));
  }
  if (gen == "sparse_bernoulli") {
    const double prob = j.value("prob", 3.0 / n);
    const std::uint64_t seed = j.value("seed", (std::uint64_t)1);
    Rng rng(seed, 0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        if (rng.uniform() < prob) m(i, k) = m(k, i) = 1.0;
    return CoeffMatrix(std::move(m));
  }
  throw PreconditionError("unknown generator: " + gen);
}

CoeffMatrix matrix_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  const int n = (int)rows.size();
  if (n == 0) throw Error("empty matrix file: " + path);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    if ((int)rows[i].size() != n)
      throw Error("matrix file is not square: " + path);
    for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return CoeffMatrix(std::move(m));
}

void matrix_to_csv(const CoeffMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file: " + path);
  out.precision(17);
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) out << (j ? "," : "") << a(i, j);
    out << "\n";
  }
}

Json estimate_to_json(const EstimateResult& r) {
  Json j;
  j["mean"] = r.mean;
  j["stderr"] = r.stderr_;
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  if (r.p) j["p"] = *r.p;
  j["elapsed"] = r.elapsed;
  return j;
}

Json bound_report_to_json(const BoundReport& r) {
  Json j;
  j["n"] = r.n;
  j["ensemble"] = r.ensemble;
  j["dist"] = r.dist;
  j["m"] = r.m;
  j["gaussian_formula"] = r.gaussian_formula;
  j["seginer"] = r.seginer;
  j["weibull"] = r.weibull;
  j["weibull_r"] = r.weibull_r;
  j["r_lower"] = r.r_lower;
  j["r_upper"] = r.r_upper;
  j["d"] = r.d;
  j["main_lower"] = r.main_lower;
  j["main_upper"] = r.main_upper;
  j["da_upper"] = r.da_upper;
  j["loglog_exponent"] = r.loglog_exponent_used;
  j["empirical"] = estimate_to_json(r.empirical);
  return j;
}

Json orlicz_solution_to_json(const OrliczSolution& s) {
  Json j;
  j["objective"] = s.objective;
  j["dual_value"] = s.dual_value;
  j["lambda"] = s.lambda;
  j["budget_used"] = s.budget_used;
  j["feasible"] = s.feasible;
  Json witness = Json::array();
  for (int i = 0; i < s.t_star.rows(); ++i)
    for (int jj = 0; jj < s.t_star.cols(); ++jj)
      if (s.t_star(i, jj) != 0.0)
        witness.push_back({i, jj, s.t_star(i, jj)});
  j["witness"] = witness;
  return j;
}

const char* const kSweepHeader =
    "n,ensemble,dist,mean,stderr,n_samples,seed,m,gaussian_formula,seginer,"
    "weibull,r_lower,r_upper,d,main_lower,main_upper,da_upper,ratio";

std::string sweep_row(const std::string& ensemble, const BoundReport& r) {
  std::ostringstream out;
  out.precision(17);
  const double ratio =
      r.main_upper > 0.0 ? r.empirical.mean / r.main_upper : 0.0;
  out << r.n << ',' << ensemble << ',' << r.dist << ',' << r.empirical.mean
      << ',' << r.empirical.stderr_ << ',' << r.empirical.n_samples << ','
      << r.empirical.seed << ',' << r.m << ',' << r.gaussian_formula << ','
      << r.seginer << ',' << r.weibull << ',' << r.r_lower << ',' << r.r_upper
      << ',' << r.d << ',' << r.main_lower << ',' << r.main_upper << ','
      << r.da_upper << ',' << ratio;
  return out.str();
}

}  // namespace opnorm
