#pragma once

// Shared fixtures for the test suites.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "crmgraph/projection.hpp"
#include "crmgraph/record.hpp"
#include "crmgraph/rng.hpp"

namespace test {

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "crmgraph_tests" / name;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

/// Projection over n synthetic nodes. Labels default to alternating
/// Won/Lost; the training pair defaults to the first node of each class.
inline crmgraph::GraphProjection make_projection(
    std::size_t n, std::vector<std::pair<int, int>> edges,
    std::vector<crmgraph::SaleStatus> labels = {}, int train_won = -1, int train_lost = -1) {
  crmgraph::GraphProjection projection;
  for (std::size_t v = 0; v < n; ++v) projection.node_ids.push_back("n" + std::to_string(v));
  if (labels.empty())
    for (std::size_t v = 0; v < n; ++v)
      labels.push_back(v % 2 == 0 ? crmgraph::SaleStatus::won : crmgraph::SaleStatus::lost);
  projection.labels = std::move(labels);
  projection.edges = std::move(edges);
  projection.finalize();
  if (train_won < 0)
    for (std::size_t v = 0; v < n; ++v)
      if (projection.labels[v] == crmgraph::SaleStatus::won) {
        train_won = static_cast<int>(v);
        break;
      }
  if (train_lost < 0)
    for (std::size_t v = 0; v < n; ++v)
      if (projection.labels[v] == crmgraph::SaleStatus::lost) {
        train_lost = static_cast<int>(v);
        break;
      }
  projection.train_won = train_won;
  projection.train_lost = train_lost;
  return projection;
}

/// Two 5-cliques joined by the bridge 4-5; clique one is Won (train node 0),
/// clique two is Lost (train node 5).
inline crmgraph::GraphProjection two_clique_fixture() {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      edges.emplace_back(a, b);
      edges.emplace_back(a + 5, b + 5);
    }
  edges.emplace_back(4, 5);
  std::vector<crmgraph::SaleStatus> labels;
  for (int v = 0; v < 10; ++v)
    labels.push_back(v < 5 ? crmgraph::SaleStatus::won : crmgraph::SaleStatus::lost);
  return make_projection(10, std::move(edges), std::move(labels), 0, 5);
}

/// Seeded connected random graph: a random spanning tree plus extra edges.
inline crmgraph::GraphProjection random_connected(std::size_t n, std::size_t extra_edges,
                                                  std::uint64_t seed) {
  crmgraph::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t v = 1; v < n; ++v)
    edges.emplace_back(static_cast<int>(rng.below(v)), static_cast<int>(v));
  for (std::size_t e = 0; e < extra_edges; ++e) {
    auto a = static_cast<int>(rng.below(n));
    auto b = static_cast<int>(rng.below(n));
    if (a != b) edges.emplace_back(a, b);
  }
  return make_projection(n, std::move(edges));
}

/// Record with every attribute set to "x" unless overridden.
inline crmgraph::SalesRecord make_record(
    const std::string& id, crmgraph::SaleStatus status,
    const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  crmgraph::SalesRecord record;
  record.id = id;
  record.status = status;
  record.attributes.fill("x");
  for (const auto& [column, value] : overrides) {
    int idx = crmgraph::attribute_index(column);
    record.attributes[static_cast<std::size_t>(idx)] = value;
  }
  return record;
}

/// CSV text with the full header; each row spells only id, Status and the
/// overridden attributes, everything else is "x".
inline std::string records_to_csv(const std::vector<crmgraph::SalesRecord>& records,
                                  bool with_id = true) {
  std::string text;
  if (with_id) text += std::string(crmgraph::kIdColumn) + ",";
  for (auto column : crmgraph::kAttributeColumns) text += std::string(column) + ",";
  text += std::string(crmgraph::kStatusColumn) + "\n";
  for (const auto& record : records) {
    if (with_id) text += record.id + ",";
    for (const auto& value : record.attributes) text += value + ",";
    text += std::string(crmgraph::to_string(record.status)) + "\n";
  }
  return text;
}

}  // namespace test
