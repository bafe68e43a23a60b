#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/rng.hpp"

namespace crmgraph {

struct ForestConfig {
  int tree_count = 100;
  std::uint32_t seed = 7;
  int min_split = 2;
  int features_per_split = 0;  // 0 means floor(sqrt(F))

  void validate() const {
    if (tree_count < 1) fail(Errc::bad_config, "tree count must be >= 1");
    if (min_split < 2) fail(Errc::bad_config, "min split must be >= 2");
  }
};

/// Node of a binary-feature decision tree: feature 0 goes left, 1 goes right.
/// Leaves carry the class instead of a feature.
struct TreeNode {
  int feature = -1;
  int left = -1;
  int right = -1;
  int label = -1;

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  int predict(const Eigen::MatrixXd& X, Eigen::Index row) const {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const auto& node = nodes[static_cast<std::size_t>(at)];
      at = X(row, node.feature) != 0.0 ? node.right : node.left;
    }
    return nodes[static_cast<std::size_t>(at)].label;
  }

  bool operator==(const DecisionTree&) const = default;
};

/// Bagged Gini-split trees over a binary one-hot design matrix.
struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  Eigen::Index feature_count = 0;
  int features_per_split = 0;
};

/// Bootstrap draw used for tree t: n indices sampled with replacement from
/// the per-tree seed. Exposed so out-of-bag checks can reproduce it.
inline std::vector<std::size_t> bootstrap_indices(std::uint64_t tree_seed, std::size_t n) {
  Rng rng(tree_seed);
  std::vector<std::size_t> indices(n);
  for (auto& index : indices) index = static_cast<std::size_t>(rng.below(n));
  return indices;
}

inline std::uint64_t derive_tree_seed(std::uint32_t master_seed, int tree_index) {
  // splitmix64 of (seed, index) keeps per-tree streams decorrelated.
  std::uint64_t z = (static_cast<std::uint64_t>(master_seed) << 20) + static_cast<std::uint64_t>(tree_index) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const std::vector<int>& y;
  int features_per_split;
  int min_split;
  Rng& rng;
  DecisionTree tree;

  static double gini(std::size_t won, std::size_t total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(won) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
  }

  int leaf(const std::vector<std::size_t>& rows) {
    std::size_t won = 0;
    for (auto r : rows) won += static_cast<std::size_t>(y[r]);
    // majority class; a tie resolves to Lost
    int label = 2 * won > rows.size() ? 1 : 0;
    tree.nodes.push_back({-1, -1, -1, label});
    return static_cast<int>(tree.nodes.size() - 1);
  }

  // Best Gini split among `candidates`; returns (feature, gain).
  std::pair<int, double> best_split(const std::vector<std::size_t>& rows,
                                    const std::vector<int>& candidates) const {
    std::size_t won_total = 0;
    for (auto r : rows) won_total += static_cast<std::size_t>(y[r]);
    double impurity = gini(won_total, rows.size());
    int best_feature = -1;
    double best_gain = 0.0;
    for (int f : candidates) {
      std::size_t right = 0, right_won = 0;
      for (auto r : rows) {
        if (X(static_cast<Eigen::Index>(r), f) != 0.0) {
          ++right;
          right_won += static_cast<std::size_t>(y[r]);
        }
      }
      std::size_t left = rows.size() - right;
      if (left == 0 || right == 0) continue;
      double weighted = (static_cast<double>(left) * gini(won_total - right_won, left) +
                         static_cast<double>(right) * gini(right_won, right)) /
                        static_cast<double>(rows.size());
      double gain = impurity - weighted;
      if (gain > best_gain + 1e-15) {
        best_gain = gain;
        best_feature = f;
      }
    }
    return {best_feature, best_gain};
  }

  int grow(std::vector<std::size_t> rows) {
    std::size_t won = 0;
    for (auto r : rows) won += static_cast<std::size_t>(y[r]);
    if (won == 0 || won == rows.size() || rows.size() < static_cast<std::size_t>(min_split))
      return leaf(rows);

    const int feature_count = static_cast<int>(X.cols());
    std::vector<int> candidates(static_cast<std::size_t>(feature_count));
    for (int f = 0; f < feature_count; ++f) candidates[static_cast<std::size_t>(f)] = f;
    // partial Fisher-Yates: the first features_per_split entries are the draw
    for (int i = 0; i < features_per_split && i < feature_count; ++i) {
      auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(feature_count - i)));
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
    }
    std::vector<int> drawn(candidates.begin(),
                           candidates.begin() + std::min(features_per_split, feature_count));
    auto [feature, gain] = best_split(rows, drawn);
    if (feature < 0) {
      // no usable split in the subsample; widen to all features so growth
      // stalls only when the node is genuinely unsplittable
      std::sort(candidates.begin(), candidates.end());
      std::tie(feature, gain) = best_split(rows, candidates);
      if (feature < 0) return leaf(rows);
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows)
      (X(static_cast<Eigen::Index>(r), feature) != 0.0 ? right_rows : left_rows).push_back(r);

    int node = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({feature, -1, -1, -1});
    int left = grow(std::move(left_rows));
    int right = grow(std::move(right_rows));
    tree.nodes[static_cast<std::size_t>(node)].left = left;
    tree.nodes[static_cast<std::size_t>(node)].right = right;
    return node;
  }
};

}  // namespace detail

inline ForestModel train_random_forest(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                       const ForestConfig& config = {}) {
  config.validate();
  if (static_cast<std::size_t>(X.rows()) != y.size())
    fail(Errc::dimension_mismatch, "label count does not match design matrix rows");
  std::size_t won = 0;
  for (int label : y) won += static_cast<std::size_t>(label);
  if (won == 0 || won == y.size())
    fail(Errc::degenerate_labels, "training labels are single-class");

  ForestModel model;
  model.feature_count = X.cols();
  model.features_per_split =
      config.features_per_split > 0
          ? config.features_per_split
          : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(X.cols())))));

  for (int t = 0; t < config.tree_count; ++t) {
    std::uint64_t tree_seed = derive_tree_seed(config.seed, t);
    model.tree_seeds.push_back(tree_seed);
    auto rows = bootstrap_indices(tree_seed, y.size());
    Rng grow_rng(tree_seed ^ 0x517cc1b727220a95ULL);  // distinct stream from the bootstrap
    detail::TreeBuilder builder{X, y, model.features_per_split, config.min_split, grow_rng, {}};
    builder.grow(std::move(rows));
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

struct ForestPrediction {
  std::vector<double> scores;  // fraction of trees voting Won
  std::vector<int> classes;    // majority vote, tie resolves to Lost
};

inline ForestPrediction predict_forest(const ForestModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.feature_count)
    fail(Errc::dimension_mismatch, "expected " + std::to_string(model.feature_count) +
                                       " features, got " + std::to_string(X.cols()));
  ForestPrediction prediction;
  prediction.scores.resize(static_cast<std::size_t>(X.rows()), 0.0);
  prediction.classes.resize(static_cast<std::size_t>(X.rows()), 0);
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    std::size_t votes = 0;
    for (const auto& tree : model.trees) votes += static_cast<std::size_t>(tree.predict(X, r));
    double score = static_cast<double>(votes) / static_cast<double>(model.trees.size());
    prediction.scores[static_cast<std::size_t>(r)] = score;
    prediction.classes[static_cast<std::size_t>(r)] = score > 0.5 ? 1 : 0;
  }
  return prediction;
}

}  // namespace crmgraph
