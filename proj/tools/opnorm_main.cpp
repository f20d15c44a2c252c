#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "opnorm/io.hpp"
#include "opnorm/verify.hpp"

namespace {

using opnorm::Json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct CommonOpts {
  std::string matrix_file;
  std::string gen;
  int n = 8;
  std::string dist_json = R"({"kind":"rademacher"})";
  long samples = 2000;
  std::uint64_t seed = 1;
  double p = 0.0;
  double exponent = 1.5;
  int threads = 1;
  std::string out;
  std::string format = "json";
  double bandwidth = 1;
  double prob = 0.0;
};

void add_matrix_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--matrix", o.matrix_file, "dense CSV matrix file");
  cmd->add_option("--gen", o.gen,
                  "generator: identity|ones|band|sparse_bernoulli|circulant");
  cmd->add_option("--n", o.n, "matrix size for generators");
  cmd->add_option("--bandwidth", o.bandwidth, "band/circulant width");
  cmd->add_option("--prob", o.prob, "sparse_bernoulli edge probability");
}

opnorm::CoeffMatrix resolve_matrix(const CommonOpts& o) {
  if (!o.matrix_file.empty()) return opnorm::matrix_from_csv(o.matrix_file);
  if (o.gen.empty())
    throw opnorm::PreconditionError("need --matrix or --gen");
  Json j;
  j["gen"] = o.gen;
  j["n"] = o.n;
  j["bandwidth"] = (int)o.bandwidth;
  if (o.prob > 0.0) j["prob"] = o.prob;
  j["seed"] = o.seed;
  return opnorm::matrix_from_generator(j);
}

Json resolved_config(const CommonOpts& o) {
  Json cfg;
  cfg["matrix"] = o.matrix_file.empty() ? o.gen : o.matrix_file;
  cfg["n"] = o.n;
  cfg["dist"] = Json::parse(o.dist_json);
  cfg["samples"] = o.samples;
  cfg["seed"] = o.seed;
  cfg["exponent"] = o.exponent;
  cfg["threads"] = o.threads;
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw opnorm::Error("cannot open output file: " + out_path);
    f << text << "\n";
  }
}

int cmd_estimate(const CommonOpts& o) {
  const opnorm::CoeffMatrix a = resolve_matrix(o);
  opnorm::EnsembleSpec ens(a, opnorm::dist_from_json(Json::parse(o.dist_json)));
  const opnorm::EstimateResult r =
      o.p >= 1.0 ? opnorm::estimate_op_moment(ens, o.p, o.samples, o.seed,
                                              o.threads)
                 : opnorm::estimate_op_mean(ens, o.samples, o.seed, o.threads);
  Json j = opnorm::estimate_to_json(r);
  j["config"] = resolved_config(o);
  emit(j.dump(2), o.out);
  return kExitOk;
}

int cmd_bounds(const CommonOpts& o) {
  const opnorm::CoeffMatrix a = resolve_matrix(o);
  opnorm::EnsembleSpec ens(a, opnorm::dist_from_json(Json::parse(o.dist_json)));
  opnorm::ReportConfig cfg;
  cfg.n_samples = o.samples;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.exponent = o.exponent;
  opnorm::BoundReport rep = opnorm::bound_report(a, ens, cfg);
  rep.ensemble = o.matrix_file.empty() ? o.gen : o.matrix_file;
  if (o.format == "csv") {
    emit(std::string(opnorm::kSweepHeader) + "\n" +
             opnorm::sweep_row(rep.ensemble, rep),
         o.out);
  } else {
    Json j = opnorm::bound_report_to_json(rep);
    j["config"] = resolved_config(o);
    emit(j.dump(2), o.out);
  }
  return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::vector<int>& n_list) {
  std::ostringstream rows;
  rows << opnorm::kSweepHeader << "\n";
  for (int n : n_list) {
    CommonOpts local = o;
    local.n = n;
    const opnorm::CoeffMatrix a = resolve_matrix(local);
    opnorm::EnsembleSpec ens(a,
                             opnorm::dist_from_json(Json::parse(o.dist_json)));
    opnorm::ReportConfig cfg;
    cfg.n_samples = o.samples;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.exponent = o.exponent;
    opnorm::BoundReport rep = opnorm::bound_report(a, ens, cfg);
    rep.ensemble = o.gen;
    rows << opnorm::sweep_row(rep.ensemble, rep) << "\n";
  }
  std::string text = rows.str();
  text.pop_back();  // emit() appends the final newline
  emit(text, o.out);
  return kExitOk;
}

int cmd_verify(const CommonOpts& o, const std::string& suite) {
  const auto names = opnorm::suite_names();
  std::vector<std::string> selected;
  if (suite == "all")
    selected = names;
  else if (std::find(names.begin(), names.end(), suite) != names.end())
    selected = {suite};
  else {
    std::cerr << "unknown suite: " << suite << "\navailable:";
    for (const auto& s : names) std::cerr << " " << s;
    std::cerr << " all\n";
    return kExitUsage;
  }
  Json report = Json::array();
  bool all_passed = true;
  for (const auto& name : selected) {
    const opnorm::SuiteResult res = opnorm::run_suite(name, o.seed);
    Json jr;
    jr["suite"] = res.suite;
    jr["passed"] = res.passed();
    Json checks = Json::array();
    for (const auto& c : res.checks) {
      Json jc;
      jc["name"] = c.name;
      jc["passed"] = c.passed;
      jc["measured"] = c.measured;
      jc["detail"] = c.detail;
      checks.push_back(jc);
    }
    jr["checks"] = checks;
    report.push_back(jr);
    all_passed = all_passed && res.passed();
  }
  emit(report.dump(2), o.out);
  return all_passed ? kExitOk : kExitPropertyFailure;
}

int cmd_oracle(const CommonOpts& o) {
  const opnorm::CoeffMatrix a = resolve_matrix(o);
  opnorm::EnsembleSpec ens(a, opnorm::dist_from_json(Json::parse(o.dist_json)));
  Json j;
  j["exact_mean"] = opnorm::exact_mean_discrete(ens);
  j["config"] = resolved_config(o);
  emit(j.dump(2), o.out);
  return kExitOk;
}

int cmd_graph(const CommonOpts& o) {
  const opnorm::CoeffMatrix a = resolve_matrix(o);
  const opnorm::CoeffMatrix sym = a.symmetric() ? a : opnorm::symmetrize(a);
  const opnorm::GraphView g = opnorm::build_graph(sym);
  Json j;
  j["n"] = g.n;
  j["d_A"] = g.max_degree();
  std::map<int, int> hist;
  for (int v = 0; v < g.n; ++v) ++hist[g.degree(v)];
  Json h = Json::object();
  for (const auto& [deg, count] : hist) h[std::to_string(deg)] = count;
  j["degree_histogram"] = h;
  Json counts = Json::object();
  for (int k = 1; k <= std::min(4, g.n); ++k) {
    try {
      counts[std::to_string(k)] =
          opnorm::enumerate_connected_subsets(g, k).size();
    } catch (const opnorm::BudgetExceededError&) {
      counts[std::to_string(k)] = "over-budget";
    }
  }
  j["connected_subsets"] = counts;
  j["config"] = resolved_config(o);
  emit(j.dump(2), o.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bound quantities for random matrices with independent entries"};
  app.require_subcommand(1);

  CommonOpts o;
  std::vector<int> n_list;
  std::string suite = "all";

  auto* est = app.add_subcommand("estimate", "Monte Carlo norm estimate");
  add_matrix_flags(est, o);
  est->add_option("--dist", o.dist_json, "entry law JSON");
  est->add_option("--samples", o.samples, "sample count");
  est->add_option("--seed", o.seed, "root seed");
  est->add_option("--p", o.p, "estimate the p-th norm moment instead");
  est->add_option("--threads", o.threads, "worker threads");
  est->add_option("--out", o.out, "output path (default stdout)");

  auto* bnd = app.add_subcommand("bounds", "closed-form and estimated bounds");
  add_matrix_flags(bnd, o);
  bnd->add_option("--dist", o.dist_json, "entry law JSON");
  bnd->add_option("--samples", o.samples, "sample count");
  bnd->add_option("--seed", o.seed, "root seed");
  bnd->add_option("--exponent", o.exponent, "iterated-log exponent");
  bnd->add_option("--threads", o.threads, "worker threads");
  bnd->add_option("--out", o.out, "output path");
  bnd->add_option("--format", o.format, "json|csv");

  auto* swp = app.add_subcommand("sweep", "bound report rows over sizes");
  swp->add_option("--gen", o.gen, "generator name")->required();
  swp->add_option("--n", n_list, "sizes (repeatable)")->required();
  swp->add_option("--dist", o.dist_json, "entry law JSON");
  swp->add_option("--samples", o.samples, "sample count");
  swp->add_option("--seed", o.seed, "root seed");
  swp->add_option("--exponent", o.exponent, "iterated-log exponent");
  swp->add_option("--threads", o.threads, "worker threads");
  swp->add_option("--bandwidth", o.bandwidth, "band/circulant width");
  swp->add_option("--prob", o.prob, "sparse_bernoulli edge probability");
  swp->add_option("--out", o.out, "output path");

  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("--suite", suite, "suite name or 'all'");
  ver->add_option("--seed", o.seed, "root seed");
  ver->add_option("--out", o.out, "output path");

  auto* ora = app.add_subcommand("oracle", "exact mean for finite-support laws");
  add_matrix_flags(ora, o);
  ora->add_option("--dist", o.dist_json, "entry law JSON");
  ora->add_option("--out", o.out, "output path");

  auto* grp = app.add_subcommand("graph", "coefficient graph structure");
  add_matrix_flags(grp, o);
  grp->add_option("--out", o.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (est->parsed()) return cmd_estimate(o);
    if (bnd->parsed()) return cmd_bounds(o);
    if (swp->parsed()) return cmd_sweep(o, n_list);
    if (ver->parsed()) return cmd_verify(o, suite);
    if (ora->parsed()) return cmd_oracle(o);
    if (grp->parsed()) return cmd_graph(o);
  } catch (const opnorm::BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const opnorm::PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPropertyFailure;
  }
  return kExitUsage;
}
