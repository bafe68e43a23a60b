#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "crmgraph/projection.hpp"
#include "crmgraph/property_graph.hpp"
#include "crmgraph/record.hpp"

namespace crmgraph {

inline std::map<std::string, std::size_t> count_by_label(const PropertyGraph& graph) {
  std::map<std::string, std::size_t> counts;
  for (const auto& node : graph.nodes()) ++counts[node.label];
  return counts;
}

/// Category-by-outcome frequency table for one attribute column (or Status
/// itself). Categories are ordered by total count descending, then name.
struct CrosstabResult {
  struct Row {
    std::string category;
    std::size_t won = 0;
    std::size_t lost = 0;
  };

  std::string attribute;
  std::vector<Row> rows;
};

inline CrosstabResult crosstab(const std::vector<SalesRecord>& records,
                               const std::string& attribute) {
  if (attribute_index(attribute) < 0 && attribute != kStatusColumn)
    fail(Errc::unknown_attribute, attribute);
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // category -> (won, lost)
  for (const auto& record : records) {
    const std::string value = attribute == kStatusColumn
                                  ? std::string(to_string(record.status))
                                  : record.attribute(attribute);
    auto& slot = counts[value];
    (record.status == SaleStatus::won ? slot.first : slot.second)++;
  }
  CrosstabResult result;
  result.attribute = attribute;
  for (const auto& [category, slot] : counts)
    result.rows.push_back({category, slot.first, slot.second});
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const CrosstabResult::Row& a, const CrosstabResult::Row& b) {
                     auto ta = a.won + a.lost, tb = b.won + b.lost;
                     if (ta != tb) return ta > tb;
                     return a.category < b.category;
                   });
  return result;
}

inline void write_crosstab_csv(const CrosstabResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  out << "attribute,category,won,lost\n";
  for (const auto& row : result.rows)
    out << csv::escape(result.attribute) << ',' << csv::escape(row.category) << ',' << row.won
        << ',' << row.lost << '\n';
  if (!out.flush()) fail(Errc::io_error, "write failed for " + path.string());
}

struct DegreeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

inline DegreeStats degree_stats(const GraphProjection& projection) {
  auto stats = inventory(projection);
  return {stats.min_degree, stats.max_degree, stats.mean_degree};
}

}  // namespace crmgraph
