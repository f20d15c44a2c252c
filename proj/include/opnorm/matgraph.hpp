#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "opnorm/errors.hpp"

namespace opnorm {

// Dense n x n coefficient matrix. The symmetric flag is verified against
// the entries, never assumed.
class CoeffMatrix {
 public:
  explicit CoeffMatrix(Eigen::MatrixXd entries);

  static CoeffMatrix zero(int n);
  static CoeffMatrix identity(int n);
  static CoeffMatrix ones(int n);
  static CoeffMatrix band(int n, int bandwidth);

  int n() const { return (int)mat_.rows(); }
  double operator()(int i, int j) const { return mat_(i, j); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  bool symmetric() const { return symmetric_; }

  double max_abs() const { return mat_.cwiseAbs().maxCoeff(); }
  double max_row_l2() const { return mat_.rowwise().norm().maxCoeff(); }
  double max_col_l2() const { return mat_.colwise().norm().maxCoeff(); }

 private:
  Eigen::MatrixXd mat_;
  bool symmetric_;
};

inline constexpr int kUnreachable = -1;  // +inf hop-distance sentinel

// Graph on [n] with (i,j) an edge iff i != j and |a_ij| > zero_threshold.
struct GraphView {
  int n = 0;
  double zero_threshold = 0.0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists

  int degree(int v) const { return (int)adj[v].size(); }
  int max_degree() const;
  bool has_edge(int i, int j) const;
};

GraphView build_graph(const CoeffMatrix& a, double zero_threshold = 0.0);

// All-pairs hop distances by BFS; kUnreachable between components.
std::vector<std::vector<int>> distances(const GraphView& g);

// G_r: edges between vertices at hop distance <= r.
GraphView power_graph(const GraphView& g, int r);

// order 1: I' = neighbors of I. order 2: I'' = vertices sharing a
// neighbor with I (the neighbors of I').
std::vector<int> neighborhood(const GraphView& g, const std::vector<int>& iset,
                              int order);

// Exact list of connected vertex sets of size k, each listed once
// (sorted ascending). Throws BudgetExceededError when the Lemma-style
// bound m(4d)^{k-1} exceeds the budget.
std::vector<std::vector<int>> enumerate_connected_subsets(
    const GraphView& g, int k, double budget = 1e7);

// [[0, A], [A^T, 0]], 2n x 2n.
CoeffMatrix symmetrize(const CoeffMatrix& a);

struct TruncationSplit {
  CoeffMatrix low;       // entries with |a_ij| <= M / Log^r(n)
  CoeffMatrix hat;       // the rest
  double threshold;
  int d_hat;             // max degree of the graph of `hat`
};

// Split A = low + hat at threshold M / Log^r(n). When M is the row/column
// norm sum of a symmetric A, d_hat <= Log^{2r}(n) is asserted.
TruncationSplit truncation_split(const CoeffMatrix& a, double m, double r);

// Log(x) = ln(x v e)
inline double log_clamped(double x) { return std::log(std::max(x, M_E)); }

}  // namespace opnorm
