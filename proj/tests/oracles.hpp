#pragma once

// Brute-force reference implementations the fast paths are checked against.
// Everything here works on a dense adjacency matrix and stays independent of
// the library's neighbor-list code.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "crmgraph/projection.hpp"

namespace test {

inline Eigen::MatrixXd dense_adjacency(const crmgraph::GraphProjection& projection) {
  auto n = static_cast<Eigen::Index>(projection.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : projection.edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

/// Dense PageRank power iteration with uniform dangling redistribution,
/// run to a much tighter tolerance than the implementation under test.
inline std::vector<double> pagerank_oracle(const Eigen::MatrixXd& adjacency, double damping,
                                           double tolerance = 1e-13) {
  const auto n = adjacency.rows();
  Eigen::VectorXd degree = adjacency.rowwise().sum();
  Eigen::VectorXd rank = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int iteration = 0; iteration < 200000; ++iteration) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    double dangling = 0.0;
    for (Eigen::Index v = 0; v < n; ++v)
      if (degree(v) == 0.0) dangling += rank(v);
    for (Eigen::Index u = 0; u < n; ++u) {
      double incoming = 0.0;
      for (Eigen::Index v = 0; v < n; ++v)
        if (degree(v) > 0.0) incoming += adjacency(v, u) * rank(v) / degree(v);
      next(u) = (1.0 - damping) / static_cast<double>(n) +
                damping * (incoming + dangling / static_cast<double>(n));
    }
    double residual = (next - rank).cwiseAbs().sum();
    rank = next;
    if (residual < tolerance) break;
  }
  return {rank.data(), rank.data() + rank.size()};
}

/// All-pairs shortest paths; std::numeric_limits<int>::max()/2 marks
/// unreachable pairs.
inline std::vector<std::vector<int>> floyd_warshall(const Eigen::MatrixXd& adjacency) {
  const auto n = static_cast<std::size_t>(adjacency.rows());
  const int inf = std::numeric_limits<int>::max() / 2;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0)
        dist[i][j] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
  return dist;
}

inline std::vector<double> closeness_oracle(const Eigen::MatrixXd& adjacency) {
  auto dist = floyd_warshall(adjacency);
  const auto n = dist.size();
  std::vector<double> scores(n, 0.0);
  if (n == 1) return scores;
  for (std::size_t v = 0; v < n; ++v) {
    long long total = 0;
    for (std::size_t u = 0; u < n; ++u) total += dist[v][u];
    scores[v] = static_cast<double>(n - 1) / static_cast<double>(total);
  }
  return scores;
}

/// O(n^3) triangle enumeration.
inline std::vector<double> clustering_oracle(const Eigen::MatrixXd& adjacency) {
  const auto n = adjacency.rows();
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index v = 0; v < n; ++v) {
    int degree = 0;
    for (Eigen::Index u = 0; u < n; ++u) degree += adjacency(v, u) != 0.0;
    if (degree < 2) continue;
    int triangles = 0;
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a + 1; b < n; ++b)
        if (adjacency(v, a) != 0.0 && adjacency(v, b) != 0.0 && adjacency(a, b) != 0.0)
          ++triangles;
    scores[static_cast<std::size_t>(v)] =
        2.0 * triangles / (static_cast<double>(degree) * (degree - 1));
  }
  return scores;
}

/// Principal eigenvector from a full dense symmetric eigendecomposition,
/// sign-fixed to the non-negative orientation.
inline std::vector<double> eigenvector_oracle(const Eigen::MatrixXd& adjacency) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency);
  Eigen::VectorXd principal = solver.eigenvectors().col(adjacency.rows() - 1);
  if (principal.sum() < 0.0) principal = -principal;
  return {principal.data(), principal.data() + principal.size()};
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

/// AUC by explicit positive x negative pair counting, ties worth 1/2.
inline double auc_pair_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t p = 0; p < scores.size(); ++p) {
    if (labels[p] == 0) continue;
    for (std::size_t q = 0; q < scores.size(); ++q) {
      if (labels[q] != 0) continue;
      ++pairs;
      if (scores[p] > scores[q]) wins += 1.0;
      else if (scores[p] == scores[q]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

/// Best single Gini split over all (feature, branch-majority) stumps.
struct StumpOracle {
  int feature = -1;
  int left_label = 0;   // prediction when the feature is 0
  int right_label = 0;  // prediction when the feature is 1

  static StumpOracle fit(const Eigen::MatrixXd& X, const std::vector<int>& y) {
    auto gini = [](double won, double total) {
      if (total == 0.0) return 0.0;
      double p = won / total;
      return 2.0 * p * (1.0 - p);
    };
    StumpOracle best;
    double best_impurity = std::numeric_limits<double>::infinity();
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
      double left = 0, left_won = 0, right = 0, right_won = 0;
      for (Eigen::Index r = 0; r < X.rows(); ++r) {
        if (X(r, f) != 0.0) {
          ++right;
          right_won += y[static_cast<std::size_t>(r)];
        } else {
          ++left;
          left_won += y[static_cast<std::size_t>(r)];
        }
      }
      if (left == 0 || right == 0) continue;
      double impurity =
          (left * gini(left_won, left) + right * gini(right_won, right)) / (left + right);
      if (impurity < best_impurity) {
        best_impurity = impurity;
        best.feature = static_cast<int>(f);
        best.left_label = 2 * left_won > left ? 1 : 0;
        best.right_label = 2 * right_won > right ? 1 : 0;
      }
    }
    return best;
  }

  int predict(const Eigen::MatrixXd& X, Eigen::Index row) const {
    return X(row, feature) != 0.0 ? right_label : left_label;
  }
};

}  // namespace test
