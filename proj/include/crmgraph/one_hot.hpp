#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/record.hpp"

namespace crmgraph {

/// Binary design matrix for the tabular baselines, one column per
/// (source column, category) pair. Source columns keep schema order and
/// categories are sorted, so the layout is deterministic.
struct OneHotEncoding {
  struct Column {
    std::string source;
    std::string category;
  };

  Eigen::MatrixXd matrix;  // N x F, entries in {0,1}
  std::vector<Column> columns;
  std::vector<std::pair<std::string, std::vector<std::string>>> dictionaries;

  /// Inverse of the encoding for one row: (source column -> category).
  std::map<std::string, std::string> decode_row(Eigen::Index row) const {
    std::map<std::string, std::string> values;
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
      if (matrix(row, c) != 0.0)
        values[columns[static_cast<std::size_t>(c)].source] =
            columns[static_cast<std::size_t>(c)].category;
    return values;
  }
};

/// Expands every non-excluded attribute column into per-category indicator
/// columns; labels come back separately as Won=1 / Lost=0.
inline std::pair<OneHotEncoding, std::vector<int>> one_hot_encode(
    const std::vector<SalesRecord>& records,
    const std::set<std::string>& excluded = {std::string(kIdColumn), std::string(kStatusColumn)}) {
  if (records.empty()) fail(Errc::empty_records, "no sales records");

  OneHotEncoding encoding;
  for (std::string_view column : kAttributeColumns) {
    if (excluded.count(std::string(column))) continue;
    std::set<std::string> categories;
    for (const auto& record : records) categories.insert(record.attribute(column));
    encoding.dictionaries.emplace_back(std::string(column),
                                       std::vector<std::string>(categories.begin(), categories.end()));
    for (const auto& category : encoding.dictionaries.back().second)
      encoding.columns.push_back({std::string(column), category});
  }

  encoding.matrix =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(records.size()),
                            static_cast<Eigen::Index>(encoding.columns.size()));
  Eigen::Index base = 0;
  for (const auto& [column, categories] : encoding.dictionaries) {
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& value = records[r].attribute(column);
      auto it = std::lower_bound(categories.begin(), categories.end(), value);
      encoding.matrix(static_cast<Eigen::Index>(r), base + (it - categories.begin())) = 1.0;
    }
    base += static_cast<Eigen::Index>(categories.size());
  }

  std::vector<int> labels;
  labels.reserve(records.size());
  for (const auto& record : records)
    labels.push_back(record.status == SaleStatus::won ? 1 : 0);
  return {std::move(encoding), std::move(labels)};
}

}  // namespace crmgraph
