#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/property_graph.hpp"
#include "crmgraph/record.hpp"

namespace crmgraph {

/// Undirected sales-node graph the GCN runs on. Node order is fixed (it is
/// the feature-matrix row order), each edge is stored once with the smaller
/// index first, the graph is connected, and exactly one Won and one Lost
/// node are flagged for training.
struct GraphProjection {
  std::vector<std::string> node_ids;
  std::vector<SaleStatus> labels;
  std::vector<std::pair<int, int>> edges;
  int train_won = -1;
  int train_lost = -1;

  std::vector<std::vector<int>> adjacency;  // built by finalize()

  std::size_t size() const { return node_ids.size(); }
  std::size_t degree(int v) const { return adjacency[static_cast<std::size_t>(v)].size(); }
  const std::vector<int>& neighbors(int v) const { return adjacency[static_cast<std::size_t>(v)]; }
  bool is_train(int v) const { return v == train_won || v == train_lost; }

  /// Normalizes, deduplicates and sorts the edge list, then rebuilds the
  /// neighbor lists. Rejects self-loops.
  void finalize() {
    for (auto& [a, b] : edges) {
      if (a == b) fail(Errc::malformed_file, "self-loop on node " + node_ids[static_cast<std::size_t>(a)]);
      if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    adjacency.assign(size(), {});
    for (auto [a, b] : edges) {
      adjacency[static_cast<std::size_t>(a)].push_back(b);
      adjacency[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& list : adjacency) std::sort(list.begin(), list.end());
  }

  bool is_connected() const {
    if (size() == 0) return false;
    std::vector<char> seen(size(), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t visited = 1;
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      for (int u : neighbors(v))
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          ++visited;
          frontier.push(u);
        }
    }
    return visited == size();
  }

  void validate_train_pair(Errc errc) const {
    if (train_won < 0 || train_lost < 0)
      fail(errc, "need one Won and one Lost training node");
    if (labels[static_cast<std::size_t>(train_won)] != SaleStatus::won ||
        labels[static_cast<std::size_t>(train_lost)] != SaleStatus::lost)
      fail(errc, "training pair labels do not match their flags");
  }
};

/// Projection construction knobs. Two records are linked when they agree on
/// at least `match_threshold` of the five connectivity attributes
/// (Up_sale, Client, Competitors, Product, Seller).
struct ProjectionRule {
  int match_threshold = 4;
  std::string train_won_id;   // optional explicit training nodes
  std::string train_lost_id;
};

inline constexpr std::array<std::string_view, 5> kConnectivityAttributes = {
    "Up_sale", "Client", "Competitors", "Product", "Seller"};

namespace detail {

inline std::vector<int> component_of(const std::vector<std::vector<int>>& adjacency) {
  std::vector<int> component(adjacency.size(), -1);
  int current = 0;
  for (std::size_t start = 0; start < adjacency.size(); ++start) {
    if (component[start] >= 0) continue;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    component[start] = current;
    while (!frontier.empty()) {
      auto v = frontier.front();
      frontier.pop();
      for (int u : adjacency[v])
        if (component[static_cast<std::size_t>(u)] < 0) {
          component[static_cast<std::size_t>(u)] = current;
          frontier.push(static_cast<std::size_t>(u));
        }
    }
    ++current;
  }
  return component;
}

}  // namespace detail

/// Builds the sales projection: one node per record, k-of-5 attribute-match
/// edges, everything outside the largest connected component dropped, and a
/// Won/Lost training pair chosen (lowest surviving index per class unless the
/// rule pins explicit ids).
inline GraphProjection build_gcn_graph(const std::vector<SalesRecord>& records,
                                       const ProjectionRule& rule = {}) {
  if (records.empty()) fail(Errc::empty_records, "no sales records");
  if (rule.match_threshold < 1 || rule.match_threshold > 5)
    fail(Errc::bad_config, "match threshold must be in [1,5]");

  const std::size_t n = records.size();
  std::array<std::size_t, 5> column{};
  for (std::size_t a = 0; a < column.size(); ++a)
    column[a] = static_cast<std::size_t>(attribute_index(kConnectivityAttributes[a]));

  std::vector<std::vector<int>> adjacency(n);
  std::size_t edge_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      int matches = 0;
      for (std::size_t a = 0; a < column.size(); ++a)
        if (records[i].attributes[column[a]] == records[j].attributes[column[a]]) ++matches;
      if (matches >= rule.match_threshold) {
        adjacency[i].push_back(static_cast<int>(j));
        adjacency[j].push_back(static_cast<int>(i));
        ++edge_count;
      }
    }
  }
  if (edge_count == 0)
    fail(Errc::no_edges, "threshold " + std::to_string(rule.match_threshold) +
                             " produced no edges over " + std::to_string(n) + " records");

  // Keep the largest component; ties go to the one seen first, which is the
  // one containing the smallest record index.
  auto component = detail::component_of(adjacency);
  std::vector<std::size_t> component_size;
  for (int c : component) {
    if (static_cast<std::size_t>(c) >= component_size.size())
      component_size.resize(static_cast<std::size_t>(c) + 1, 0);
    ++component_size[static_cast<std::size_t>(c)];
  }
  int keep = static_cast<int>(
      std::max_element(component_size.begin(), component_size.end()) - component_size.begin());

  GraphProjection projection;
  std::vector<int> new_index(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (component[i] != keep) continue;
    new_index[i] = static_cast<int>(projection.node_ids.size());
    projection.node_ids.push_back(records[i].id);
    projection.labels.push_back(records[i].status);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (component[i] != keep) continue;
    for (int j : adjacency[i])
      if (static_cast<std::size_t>(j) > i)
        projection.edges.emplace_back(new_index[i], new_index[static_cast<std::size_t>(j)]);
  }
  projection.finalize();

  auto pick = [&](SaleStatus wanted, const std::string& requested) -> int {
    for (std::size_t v = 0; v < projection.size(); ++v) {
      if (projection.labels[v] != wanted) continue;
      if (requested.empty() || projection.node_ids[v] == requested) return static_cast<int>(v);
    }
    if (!requested.empty())
      fail(Errc::no_labeled_pair, "requested training node '" + requested +
                                      "' is not a " + std::string(to_string(wanted)) +
                                      " node of the largest component");
    fail(Errc::no_labeled_pair,
         "largest component has no " + std::string(to_string(wanted)) + " node");
  };
  projection.train_won = pick(SaleStatus::won, rule.train_won_id);
  projection.train_lost = pick(SaleStatus::lost, rule.train_lost_id);
  return projection;
}

// ---------------------------------------------------------------------------
// Projection files: CRM.edgelist ("SRC DST" per line) and CRM.attributes
// (CSV "node,status,role"). Re-importing an export reproduces the projection
// byte-for-byte.

inline constexpr std::string_view kEdgelistFile = "CRM.edgelist";
inline constexpr std::string_view kAttributesFile = "CRM.attributes";

struct ProjectionFiles {
  std::filesystem::path edgelist;
  std::filesystem::path attributes;
};

inline ProjectionFiles export_projection(const GraphProjection& projection,
                                         const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  ProjectionFiles files{directory / kEdgelistFile, directory / kAttributesFile};

  std::ofstream edges(files.edgelist, std::ios::binary);
  if (!edges) fail(Errc::io_error, "cannot write " + files.edgelist.string());
  for (auto [a, b] : projection.edges)
    edges << projection.node_ids[static_cast<std::size_t>(a)] << ' '
          << projection.node_ids[static_cast<std::size_t>(b)] << '\n';
  if (!edges.flush()) fail(Errc::io_error, "write failed for " + files.edgelist.string());

  std::ofstream attrs(files.attributes, std::ios::binary);
  if (!attrs) fail(Errc::io_error, "cannot write " + files.attributes.string());
  attrs << "node,status,role\n";
  for (std::size_t v = 0; v < projection.size(); ++v)
    attrs << projection.node_ids[v] << ',' << to_string(projection.labels[v]) << ','
          << (projection.is_train(static_cast<int>(v)) ? "train" : "test") << '\n';
  if (!attrs.flush()) fail(Errc::io_error, "write failed for " + files.attributes.string());
  return files;
}

inline GraphProjection import_edgelist(const std::filesystem::path& edgelist_path,
                                       const std::filesystem::path& attributes_path) {
  GraphProjection projection;
  std::map<std::string, int> index;

  auto attributes = csv::read_file(attributes_path);
  if (attributes.header != std::vector<std::string>{"node", "status", "role"})
    fail(Errc::malformed_file, attributes_path.string() + ": expected header node,status,role");
  for (std::size_t r = 0; r < attributes.rows.size(); ++r) {
    const auto& row = attributes.rows[r];
    int v = static_cast<int>(projection.node_ids.size());
    if (!index.emplace(row[0], v).second)
      fail(Errc::malformed_file, "duplicate node '" + row[0] + "' in attributes");
    projection.node_ids.push_back(row[0]);
    projection.labels.push_back(detail::parse_status(row[1], r + 2));
    if (row[2] == "train") {
      int& slot = projection.labels.back() == SaleStatus::won ? projection.train_won
                                                              : projection.train_lost;
      if (slot >= 0)
        fail(Errc::missing_train_flag,
             "more than one " + std::string(to_string(projection.labels.back())) +
                 " node flagged train");
      slot = v;
    } else if (row[2] != "test") {
      fail(Errc::malformed_file, "unknown role '" + row[2] + "'");
    }
  }

  std::ifstream in(edgelist_path);
  if (!in) fail(Errc::io_error, "cannot open " + edgelist_path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size() ||
        line.find(' ', space + 1) != std::string::npos)
      fail(Errc::malformed_file,
           edgelist_path.string() + " line " + std::to_string(line_no) + ": expected 'SRC DST'");
    auto src = line.substr(0, space);
    auto dst = line.substr(space + 1);
    for (const auto& id : {src, dst})
      if (!index.count(id))
        fail(Errc::unknown_node_in_edge,
             "edge references '" + id + "' which is absent from the attributes file");
    projection.edges.emplace_back(index.at(src), index.at(dst));
  }

  projection.finalize();
  projection.validate_train_pair(Errc::missing_train_flag);
  if (!projection.is_connected())
    fail(Errc::disconnected_graph, edgelist_path.string() + " is not a single component");
  return projection;
}

inline InventoryStats inventory(const GraphProjection& projection) {
  InventoryStats stats;
  stats.node_count = projection.size();
  stats.label_count = 1;
  stats.relationship_count = projection.edges.size();
  stats.relationship_type_count = 1;
  stats.label_counts = {{std::string(LabelMapping::kSaleLabel), projection.size()}};
  stats.has_degrees = true;
  if (projection.size() > 0) {
    stats.min_degree = projection.degree(0);
    stats.max_degree = projection.degree(0);
    std::size_t total = 0;
    for (std::size_t v = 0; v < projection.size(); ++v) {
      auto d = projection.degree(static_cast<int>(v));
      stats.min_degree = std::min(stats.min_degree, d);
      stats.max_degree = std::max(stats.max_degree, d);
      total += d;
    }
    stats.mean_degree = static_cast<double>(total) / static_cast<double>(projection.size());
  }
  return stats;
}

}  // namespace crmgraph
