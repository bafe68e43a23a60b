#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <queue>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/projection.hpp"

namespace crmgraph {

/// Unweighted BFS distances from `source`; -1 marks unreachable nodes.
inline std::vector<int> bfs_distances(const GraphProjection& projection, int source) {
  std::vector<int> dist(projection.size(), -1);
  std::queue<int> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int u : projection.neighbors(v))
      if (dist[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        frontier.push(u);
      }
  }
  return dist;
}

/// Power-iteration PageRank over the undirected projection (each edge acts as
/// two directed arcs). Converges when the successive L1 difference drops
/// below `tolerance`; rank mass of isolated nodes is spread uniformly.
inline std::vector<double> pagerank(const GraphProjection& projection, double damping = 0.85,
                                    double tolerance = 1e-9, int max_iter = 1000) {
  if (damping <= 0.0 || damping >= 1.0) fail(Errc::bad_config, "damping must be in (0,1)");
  const std::size_t n = projection.size();
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int iteration = 1; iteration <= max_iter; ++iteration) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (projection.degree(static_cast<int>(v)) == 0) dangling += rank[v];
    double base = (1.0 - damping) / static_cast<double>(n) +
                  damping * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t v = 0; v < n; ++v) {
      if (projection.degree(static_cast<int>(v)) == 0) continue;
      double share = damping * rank[v] / static_cast<double>(projection.degree(static_cast<int>(v)));
      for (int u : projection.neighbors(static_cast<int>(v))) next[static_cast<std::size_t>(u)] += share;
    }
    double residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) residual += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (residual < tolerance) return rank;
  }
  double residual = 0.0;
  for (std::size_t v = 0; v < n; ++v) residual += std::abs(rank[v] - next[v]);
  fail(Errc::not_converged, "pagerank: " + std::to_string(max_iter) +
                                " iterations, residual " + std::to_string(residual));
}

/// Connected-graph closeness: (N-1) / sum of BFS distances.
inline std::vector<double> closeness(const GraphProjection& projection) {
  const std::size_t n = projection.size();
  std::vector<double> scores(n, 0.0);
  if (n == 1) return scores;
  for (std::size_t v = 0; v < n; ++v) {
    auto dist = bfs_distances(projection, static_cast<int>(v));
    long long total = 0;
    for (int d : dist) total += d;
    scores[v] = static_cast<double>(n - 1) / static_cast<double>(total);
  }
  return scores;
}

/// Local clustering coefficient; nodes of degree < 2 score 0.
inline std::vector<double> clustering_coefficient(const GraphProjection& projection) {
  const std::size_t n = projection.size();
  std::vector<double> scores(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nbrs = projection.neighbors(static_cast<int>(v));
    if (nbrs.size() < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        const auto& list = projection.neighbors(nbrs[i]);
        if (std::binary_search(list.begin(), list.end(), nbrs[j])) ++links;
      }
    scores[v] = 2.0 * static_cast<double>(links) /
                (static_cast<double>(nbrs.size()) * static_cast<double>(nbrs.size() - 1));
  }
  return scores;
}

/// Principal eigenvector of the adjacency matrix, entrywise non-negative and
/// L2-normalized. Iterates on A + I so bipartite graphs cannot oscillate;
/// the shift leaves the principal eigenvector unchanged.
inline std::vector<double> eigenvector_centrality(const GraphProjection& projection,
                                                  double tolerance = 1e-8, int max_iter = 1000) {
  const std::size_t n = projection.size();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  double diff = 0.0;
  for (int iteration = 1; iteration <= max_iter; ++iteration) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = v[i];  // self-term from the +I shift
      for (int u : projection.neighbors(static_cast<int>(i))) sum += v[static_cast<std::size_t>(u)];
      next[i] = sum;
    }
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : next) x /= norm;
    diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += (next[i] - v[i]) * (next[i] - v[i]);
    diff = std::sqrt(diff);
    v.swap(next);
    if (diff < tolerance) return v;
  }
  fail(Errc::not_converged, "eigenvector centrality: " + std::to_string(max_iter) +
                                " iterations, residual " + std::to_string(diff));
}

/// N x 2 matrix of BFS distances to the training pair: column 0 is the
/// distance to the Lost training node, column 1 to the Won one.
inline Eigen::MatrixXd shortest_path_features(const GraphProjection& projection) {
  projection.validate_train_pair(Errc::no_labeled_pair);
  Eigen::MatrixXd features(static_cast<Eigen::Index>(projection.size()), 2);
  auto to_lost = bfs_distances(projection, projection.train_lost);
  auto to_won = bfs_distances(projection, projection.train_won);
  for (std::size_t v = 0; v < projection.size(); ++v) {
    features(static_cast<Eigen::Index>(v), 0) = to_lost[v];
    features(static_cast<Eigen::Index>(v), 1) = to_won[v];
  }
  return features;
}

/// One-hot node identity block (the N x N identity matrix).
inline Eigen::MatrixXd identity_features(const GraphProjection& projection) {
  auto n = static_cast<Eigen::Index>(projection.size());
  return Eigen::MatrixXd::Identity(n, n);
}

enum class Feature { pagerank, identity, closeness, cluster, eigenvector, shortest_path };

inline std::string_view to_string(Feature feature) {
  switch (feature) {
    case Feature::pagerank: return "PageRank";
    case Feature::identity: return "Identity";
    case Feature::closeness: return "Closeness";
    case Feature::cluster: return "Cluster";
    case Feature::eigenvector: return "Eigenvector";
    case Feature::shortest_path: return "ShortestPath";
  }
  return "?";
}

/// Ordered feature selection plus the scaling switch.
struct FeatureSpec {
  std::vector<Feature> features;
  bool scale = true;

  void validate() const {
    if (features.empty()) fail(Errc::bad_config, "feature spec is empty");
    for (std::size_t i = 0; i < features.size(); ++i)
      for (std::size_t j = i + 1; j < features.size(); ++j)
        if (features[i] == features[j])
          fail(Errc::bad_config,
               "duplicate feature '" + std::string(to_string(features[i])) + "'");
  }

  /// The cumulative ladder: 1F = PageRank, 2F adds Identity, then Closeness,
  /// Cluster, Eigenvector and ShortestPath.
  static FeatureSpec ladder(int count) {
    static constexpr std::array<Feature, 6> order = {Feature::pagerank,    Feature::identity,
                                                     Feature::closeness,   Feature::cluster,
                                                     Feature::eigenvector, Feature::shortest_path};
    if (count < 1 || count > 6) fail(Errc::bad_config, "ladder size must be 1..6");
    FeatureSpec spec;
    spec.features.assign(order.begin(), order.begin() + count);
    return spec;
  }

  static Feature parse_one(const std::string& name) {
    for (Feature f : {Feature::pagerank, Feature::identity, Feature::closeness, Feature::cluster,
                      Feature::eigenvector, Feature::shortest_path})
      if (detail::lower(std::string(to_string(f))) == detail::lower(name)) return f;
    fail(Errc::bad_config, "unknown feature '" + name + "'");
  }

  /// Accepts "3F" ladder shorthand or a comma list of feature names.
  static FeatureSpec parse(const std::string& text) {
    if (text.size() == 2 && (text[1] == 'F' || text[1] == 'f') && text[0] >= '1' && text[0] <= '6')
      return ladder(text[0] - '0');
    FeatureSpec spec;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto comma = text.find(',', start);
      auto part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) spec.features.push_back(parse_one(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    spec.validate();
    return spec;
  }
};

/// Column-named node-feature matrix; rows follow projection node order.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;
  bool scaled = false;
};

/// Concatenates the selected features in spec order and min-max scales each
/// column when requested. Identity columns are exempt from scaling, and a
/// constant column scales to all zeros.
inline FeatureMatrix assemble_features(const GraphProjection& projection, const FeatureSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(projection.size());

  FeatureMatrix out;
  std::vector<bool> scalable;
  std::vector<Eigen::MatrixXd> blocks;
  for (Feature feature : spec.features) {
    Eigen::MatrixXd block;
    switch (feature) {
      case Feature::pagerank: {
        auto scores = pagerank(projection);
        block = Eigen::Map<Eigen::VectorXd>(scores.data(), n);
        out.column_names.push_back("pagerank");
        break;
      }
      case Feature::identity: {
        block = identity_features(projection);
        for (Eigen::Index c = 0; c < n; ++c)
          out.column_names.push_back("identity_" + std::to_string(c));
        break;
      }
      case Feature::closeness: {
        auto scores = closeness(projection);
        block = Eigen::Map<Eigen::VectorXd>(scores.data(), n);
        out.column_names.push_back("closeness");
        break;
      }
      case Feature::cluster: {
        auto scores = clustering_coefficient(projection);
        block = Eigen::Map<Eigen::VectorXd>(scores.data(), n);
        out.column_names.push_back("cluster");
        break;
      }
      case Feature::eigenvector: {
        auto scores = eigenvector_centrality(projection);
        block = Eigen::Map<Eigen::VectorXd>(scores.data(), n);
        out.column_names.push_back("eigenvector");
        break;
      }
      case Feature::shortest_path: {
        block = shortest_path_features(projection);
        out.column_names.push_back("sp_to_lost");
        out.column_names.push_back("sp_to_won");
        break;
      }
    }
    for (Eigen::Index c = 0; c < block.cols(); ++c)
      scalable.push_back(feature != Feature::identity);
    blocks.push_back(std::move(block));
  }

  Eigen::Index total_cols = 0;
  for (const auto& block : blocks) total_cols += block.cols();
  out.values.resize(n, total_cols);
  Eigen::Index at = 0;
  for (const auto& block : blocks) {
    out.values.middleCols(at, block.cols()) = block;
    at += block.cols();
  }

  if (spec.scale) {
    for (Eigen::Index c = 0; c < total_cols; ++c) {
      if (!scalable[static_cast<std::size_t>(c)]) continue;
      double lo = out.values.col(c).minCoeff();
      double hi = out.values.col(c).maxCoeff();
      if (hi > lo)
        out.values.col(c) = (out.values.col(c).array() - lo) / (hi - lo);
      else
        out.values.col(c).setZero();
    }
    out.scaled = true;
  }
  return out;
}

/// CSV export: node id first, then one column per feature, rows in node order.
inline void write_feature_csv(const FeatureMatrix& features, const GraphProjection& projection,
                              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  out << "node";
  for (const auto& name : features.column_names) out << ',' << name;
  out << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < features.values.rows(); ++r) {
    out << projection.node_ids[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < features.values.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", features.values(r, c));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out.flush()) fail(Errc::io_error, "write failed for " + path.string());
}

}  // namespace crmgraph
