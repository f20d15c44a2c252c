#include "opnorm/matgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace opnorm {

CoeffMatrix::CoeffMatrix(Eigen::MatrixXd entries) : mat_(std::move(entries)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
    throw PreconditionError("coefficient matrix must be square, n >= 1");
  if (!mat_.allFinite())
    throw PreconditionError("coefficient matrix has non-finite entries");
  const double scale = mat_.cwiseAbs().maxCoeff();
  symmetric_ = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

CoeffMatrix CoeffMatrix::zero(int n) {
  return CoeffMatrix(Eigen::MatrixXd::Zero(n, n));
}

CoeffMatrix CoeffMatrix::identity(int n) {
  return CoeffMatrix(Eigen::MatrixXd::Identity(n, n));
}

CoeffMatrix CoeffMatrix::ones(int n) {
  return CoeffMatrix(Eigen::MatrixXd::Ones(n, n));
}

CoeffMatrix CoeffMatrix::band(int n, int bandwidth) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bandwidth); j <= std::min(n - 1, i + bandwidth); ++j)
      m(i, j) = 1.0;
  return CoeffMatrix(m);
}

int GraphView::max_degree() const {
  int d = 0;
  for (const auto& nb : adj) d = std::max(d, (int)nb.size());
  return d;
}

bool GraphView::has_edge(int i, int j) const {
  return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

GraphView build_graph(const CoeffMatrix& a, double zero_threshold) {
  if (zero_threshold < 0.0) throw PreconditionError("zero_threshold must be >= 0");
  if (!a.symmetric())
    throw PreconditionError("build_graph requires a symmetric matrix");
  GraphView g;
  g.n = a.n();
  g.zero_threshold = zero_threshold;
  g.adj.resize(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (i != j && std::fabs(a(i, j)) > zero_threshold) g.adj[i].push_back(j);
  return g;
}

std::vector<std::vector<int>> distances(const GraphView& g) {
  std::vector<std::vector<int>> dist(g.n, std::vector<int>(g.n, kUnreachable));
  for (int s = 0; s < g.n; ++s) {
    dist[s][s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : g.adj[v])
        if (dist[s][w] == kUnreachable) {
          dist[s][w] = dist[s][v] + 1;
          queue.push_back(w);
        }
    }
  }
  return dist;
}

GraphView power_graph(const GraphView& g, int r) {
  if (r < 1) throw PreconditionError("power_graph requires r >= 1");
  const auto dist = distances(g);
  GraphView out;
  out.n = g.n;
  out.zero_threshold = g.zero_threshold;
  out.adj.resize(out.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (i != j && dist[i][j] != kUnreachable && dist[i][j] <= r)
        out.adj[i].push_back(j);
  return out;
}

std::vector<int> neighborhood(const GraphView& g, const std::vector<int>& iset,
                              int order) {
  if (order != 1 && order != 2)
    throw PreconditionError("neighborhood order must be 1 or 2");
  std::set<int> prime;
  for (int i : iset)
    for (int j : g.adj[i]) prime.insert(j);
  if (order == 1) return {prime.begin(), prime.end()};
  // I'': vertices adjacent to some neighbor of I
  std::set<int> second;
  for (int j : prime)
    for (int i : g.adj[j]) second.insert(i);
  return {second.begin(), second.end()};
}

std::vector<std::vector<int>> enumerate_connected_subsets(const GraphView& g,
                                                          int k, double budget) {
  if (k < 1 || k > g.n)
    throw PreconditionError("subset size out of range");
  const double bound =
      (double)g.n * std::pow(4.0 * std::max(1, g.max_degree()), k - 1);
  if (bound > budget)
    throw BudgetExceededError("connected-subset enumeration over budget");

  // rooted growth: each set is generated once from its minimum vertex,
  // extending only by neighbors larger than the root
  std::vector<std::vector<int>> out;
  std::set<std::vector<int>> seen;
  std::vector<std::pair<std::vector<int>, std::set<int>>> frontier;
  for (int root = 0; root < g.n; ++root) {
    frontier.clear();
    std::set<int> ext;
    for (int j : g.adj[root])
      if (j > root) ext.insert(j);
    frontier.push_back({{root}, ext});
    while (!frontier.empty()) {
      auto [subset, extension] = frontier.back();
      frontier.pop_back();
      if ((int)subset.size() == k) {
        std::vector<int> sorted = subset;
        std::sort(sorted.begin(), sorted.end());
        if (seen.insert(sorted).second) out.push_back(sorted);
        continue;
      }
      for (int cand : extension) {
        auto next = subset;
        next.push_back(cand);
        auto next_ext = extension;
        next_ext.erase(cand);
        for (int j : g.adj[cand])
          if (j > root &&
              std::find(next.begin(), next.end(), j) == next.end())
            next_ext.insert(j);
        frontier.push_back({std::move(next), std::move(next_ext)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CoeffMatrix symmetrize(const CoeffMatrix& a) {
  const int n = a.n();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  s.block(0, n, n, n) = a.mat();
  s.block(n, 0, n, n) = a.mat().transpose();
  return CoeffMatrix(s);
}

TruncationSplit truncation_split(const CoeffMatrix& a, double m, double r) {
  if (!(r > 0.0)) throw PreconditionError("truncation_split requires r > 0");
  const int n = a.n();
  const double threshold = m / std::pow(log_clamped((double)n), r);
  Eigen::MatrixXd low = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd hat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      (std::fabs(a(i, j)) <= threshold ? low : hat)(i, j) = a(i, j);
  TruncationSplit split{CoeffMatrix(std::move(low)), CoeffMatrix(std::move(hat)),
                        threshold, 0};
  if (split.hat.symmetric()) {
    split.d_hat = build_graph(split.hat).max_degree();
    // with M = M(A) the big-entry rows are short; a violation means a bug
    const double m_of_a = a.max_row_l2() + a.max_col_l2();
    if (a.symmetric() && m >= m_of_a * (1.0 - 1e-12)) {
      const double cap = std::pow(log_clamped((double)n), 2.0 * r);
      if ((double)split.d_hat > cap)
        throw Error("truncation_split degree bound violated");
    }
  } else {
    // degree of the block-symmetrized support
    split.d_hat = build_graph(symmetrize(split.hat)).max_degree();
  }
  return split;
}

}  // namespace opnorm
