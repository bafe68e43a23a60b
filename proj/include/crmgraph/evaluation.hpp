#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/record.hpp"
#include "crmgraph/rng.hpp"

namespace crmgraph {

/// Binary confusion counts with Won as the positive class.
struct ConfusionMatrix {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;

  long long total() const { return tp + fp + tn + fn; }

  void add(bool predicted_won, bool actual_won) {
    if (predicted_won)
      (actual_won ? tp : fp)++;
    else
      (actual_won ? fn : tn)++;
  }
};

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
};

/// Derived rates; every 0/0 resolves to 0 so degenerate predictors stay
/// well-defined.
inline MetricSet metrics(const ConfusionMatrix& cm) {
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  MetricSet m;
  m.accuracy = ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
  m.precision = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
  m.sensitivity = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
  m.specificity = ratio(static_cast<double>(cm.tn), static_cast<double>(cm.tn + cm.fp));
  m.f1 = ratio(2.0 * m.precision * m.sensitivity, m.precision + m.sensitivity);
  return m;
}

/// ROC curve points (FPR, TPR) from a descending threshold sweep, plus the
/// area. The area is the tie-adjusted Mann-Whitney rank statistic; the
/// trapezoidal area of the swept points equals it up to rounding.
struct RocCurve {
  std::vector<std::pair<double, double>> points;
  double auc = 0.0;

  double trapezoid_area() const {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
      area += (points[i].first - points[i - 1].first) *
              (points[i].second + points[i - 1].second) * 0.5;
    return area;
  }
};

inline RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    fail(Errc::dimension_mismatch, "scores and labels differ in length");
  std::size_t positives = 0;
  for (int label : labels) positives += static_cast<std::size_t>(label != 0);
  std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    fail(Errc::single_class, "ROC needs both classes present");

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  double rank_sum = 0.0;  // sum of average ranks of the positives (ascending ranks)
  const auto n = scores.size();
  std::size_t at = 0;
  while (at < n) {
    std::size_t group_end = at;
    while (group_end < n && scores[order[group_end]] == scores[order[at]]) ++group_end;
    // ranks are ascending, the sweep is descending: positions at..group_end-1
    // of the descending order carry ranks n-at down to n-group_end+1
    double avg_rank = (static_cast<double>(n - at) + static_cast<double>(n - group_end + 1)) / 2.0;
    for (std::size_t i = at; i < group_end; ++i) {
      if (labels[order[i]] != 0) {
        ++tp;
        rank_sum += avg_rank;
      } else {
        ++fp;
      }
    }
    curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(negatives),
                              static_cast<double>(tp) / static_cast<double>(positives));
    at = group_end;
  }
  double p = static_cast<double>(positives);
  curve.auc = (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
  return curve;
}

/// Stratified train/test split: per-class sizes follow the largest-remainder
/// apportionment of round(ratio * N), membership is a seeded shuffle, and
/// both returned index lists come back sorted.
inline std::pair<std::vector<int>, std::vector<int>> split_train_test(
    const std::vector<int>& labels, double ratio = 0.8, std::uint32_t seed = 42) {
  if (ratio <= 0.0 || ratio >= 1.0) fail(Errc::bad_config, "split ratio must be in (0,1)");
  std::vector<std::vector<int>> per_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i)
    per_class[labels[i] != 0 ? 1 : 0].push_back(static_cast<int>(i));
  for (const auto& members : per_class)
    if (members.size() < 2)
      fail(Errc::too_few_samples, "each class needs at least 2 samples");

  const auto total_train =
      static_cast<std::size_t>(std::llround(ratio * static_cast<double>(labels.size())));
  std::array<std::size_t, 2> take{};
  std::array<double, 2> fraction{};
  std::size_t assigned = 0;
  for (int c = 0; c < 2; ++c) {
    double exact = ratio * static_cast<double>(per_class[static_cast<std::size_t>(c)].size());
    take[static_cast<std::size_t>(c)] = static_cast<std::size_t>(std::floor(exact));
    fraction[static_cast<std::size_t>(c)] = exact - std::floor(exact);
    assigned += take[static_cast<std::size_t>(c)];
  }
  while (assigned < total_train) {
    int c = fraction[1] > fraction[0] ? 1 : 0;
    ++take[static_cast<std::size_t>(c)];
    fraction[static_cast<std::size_t>(c)] = -1.0;
    ++assigned;
  }
  for (int c = 0; c < 2; ++c) {
    auto& t = take[static_cast<std::size_t>(c)];
    t = std::min(std::max<std::size_t>(t, 1), per_class[static_cast<std::size_t>(c)].size() - 1);
  }

  Rng rng(seed);
  std::vector<int> train, test;
  for (int c = 0; c < 2; ++c) {
    auto members = per_class[static_cast<std::size_t>(c)];
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < take[static_cast<std::size_t>(c)] ? train : test).push_back(members[i]);
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

}  // namespace crmgraph
