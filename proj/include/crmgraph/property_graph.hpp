#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "crmgraph/config.hpp"
#include "crmgraph/error.hpp"
#include "crmgraph/record.hpp"

namespace crmgraph {

struct PropertyNode {
  int id = -1;
  std::string label;
  std::string key;  // external key, unique within the label
  std::map<std::string, std::string> attributes;
};

struct PropertyEdge {
  int source = -1;
  int target = -1;
  std::string type;
  std::map<std::string, std::string> properties;
};

/// In-memory labeled property graph. Node ids are dense integers in
/// insertion order; (label, key) pairs merge onto one node, and repeated
/// (source, target, type) triples merge onto one edge.
class PropertyGraph {
 public:
  int merge_node(const std::string& label, const std::string& key) {
    auto [it, inserted] = node_index_.try_emplace({label, key}, static_cast<int>(nodes_.size()));
    if (inserted) {
      PropertyNode node;
      node.id = it->second;
      node.label = label;
      node.key = key;
      nodes_.push_back(std::move(node));
    }
    return it->second;
  }

  /// First write wins; merged nodes keep the attributes they were created with.
  void set_attribute(int node, const std::string& name, const std::string& value) {
    nodes_.at(static_cast<std::size_t>(node)).attributes.try_emplace(name, value);
  }

  std::size_t merge_edge(int source, int target, const std::string& type) {
    auto [it, inserted] =
        edge_index_.try_emplace({source, target, type}, edges_.size());
    if (inserted) {
      PropertyEdge edge;
      edge.source = source;
      edge.target = target;
      edge.type = type;
      edges_.push_back(std::move(edge));
      degrees_.resize(nodes_.size(), 0);
      ++degrees_[static_cast<std::size_t>(source)];
      ++degrees_[static_cast<std::size_t>(target)];
    }
    return it->second;
  }

  void set_edge_property(std::size_t edge, const std::string& name, const std::string& value) {
    edges_.at(edge).properties.try_emplace(name, value);
  }

  const std::vector<PropertyNode>& nodes() const { return nodes_; }
  const std::vector<PropertyEdge>& edges() const { return edges_; }

  const PropertyNode* find_node(const std::string& label, const std::string& key) const {
    auto it = node_index_.find({label, key});
    return it == node_index_.end() ? nullptr : &nodes_[static_cast<std::size_t>(it->second)];
  }

  std::size_t degree(int node) const {
    return node < static_cast<int>(degrees_.size()) ? degrees_[static_cast<std::size_t>(node)] : 0;
  }

 private:
  std::vector<PropertyNode> nodes_;
  std::vector<PropertyEdge> edges_;
  std::map<std::pair<std::string, std::string>, int> node_index_;
  std::map<std::tuple<int, int, std::string>, std::size_t> edge_index_;
  std::vector<std::size_t> degrees_;
};

/// Column-to-graph mapping for the exploratory property graph. Every sales
/// record becomes one Sale node; mapped columns become entity nodes (with a
/// relationship from the sale), attributes of a node, or properties of one
/// of those relationships.
struct LabelMapping {
  struct LabelRule {
    std::string column;
    std::string label;         // node label, defaults to the column name
    std::string relationship;  // sale -> entity relationship type
  };

  std::vector<LabelRule> labels;
  std::vector<std::pair<std::string, std::string>> node_attributes;  // column -> owner label
  std::vector<std::pair<std::string, std::string>> edge_properties;  // column -> relationship

  static constexpr std::string_view kSaleLabel = "Sale";

  /// Seven labels (Sale plus six entities), six typed relationships, the
  /// client-profile columns on Client and everything else on the Sale node.
  static LabelMapping defaults() {
    LabelMapping m;
    m.labels = {{"Product", "Product", "involves"},
                {"Seller", "Seller", "handled_by"},
                {"Source", "Source", "sourced_from"},
                {"Client", "Client", "selling_to"},
                {"Authority", "Authority", "authorized_by"},
                {"Status", "SalesStatus", "has_status"}};
    m.edge_properties = {{"Competitors", "selling_to"}, {"Strat_deal", "selling_to"}};
    m.node_attributes = {{"Comp_size", "Client"}, {"Budgt_alloc", "Client"}, {"Growth", "Client"}};
    for (std::string_view column :
         {"Purch_dept", "Partnership", "Forml_tend", "RFI", "RFP", "Posit_statm", "Scope",
          "Cross_sale", "Up_sale", "Deal_type", "Needs_def", "Att_t_client"})
      m.node_attributes.emplace_back(std::string(column), std::string(kSaleLabel));
    return m;
  }

  /// Config form: `column = node_label[:<Label>[:<relationship>]]`,
  /// `column = node_attribute_of:<label>`, `column = edge_property_of:<rel>`.
  static LabelMapping parse(const KeyValueConfig& config) {
    LabelMapping m;
    for (const auto& [column, value] : config.entries()) {
      std::vector<std::string> parts;
      std::size_t start = 0;
      while (start <= value.size()) {
        auto colon = value.find(':', start);
        if (colon == std::string::npos) {
          parts.push_back(value.substr(start));
          break;
        }
        parts.push_back(value.substr(start, colon - start));
        start = colon + 1;
      }
      const std::string& kind = parts[0];
      if (kind == "node_label") {
        LabelRule rule;
        rule.column = column;
        rule.label = parts.size() > 1 && !parts[1].empty() ? parts[1] : column;
        rule.relationship = parts.size() > 2 && !parts[2].empty() ? parts[2]
                                                                  : "has_" + detail::lower(rule.label);
        m.labels.push_back(std::move(rule));
      } else if (kind == "node_attribute_of" && parts.size() == 2 && !parts[1].empty()) {
        m.node_attributes.emplace_back(column, parts[1]);
      } else if (kind == "edge_property_of" && parts.size() == 2 && !parts[1].empty()) {
        m.edge_properties.emplace_back(column, parts[1]);
      } else {
        fail(Errc::invalid_mapping, column + " = " + value);
      }
    }
    return m;
  }

  void validate() const {
    auto known_column = [](const std::string& column) {
      return attribute_index(column) >= 0 || column == kStatusColumn;
    };
    std::set<std::string> label_names{std::string(kSaleLabel)};
    std::set<std::string> relationship_names;
    for (const auto& rule : labels) {
      if (!known_column(rule.column))
        fail(Errc::invalid_mapping, "unknown column '" + rule.column + "'");
      if (!label_names.insert(rule.label).second)
        fail(Errc::invalid_mapping, "label '" + rule.label + "' mapped twice");
      relationship_names.insert(rule.relationship);
    }
    for (const auto& [column, owner] : node_attributes) {
      if (!known_column(column))
        fail(Errc::invalid_mapping, "unknown column '" + column + "'");
      if (!label_names.count(owner))
        fail(Errc::invalid_mapping, "attribute owner label '" + owner + "' is not mapped");
    }
    for (const auto& [column, relationship] : edge_properties) {
      if (!known_column(column))
        fail(Errc::invalid_mapping, "unknown column '" + column + "'");
      if (!relationship_names.count(relationship))
        fail(Errc::invalid_mapping, "relationship '" + relationship + "' is not mapped");
    }
  }
};

namespace detail {

inline const std::string& column_value(const SalesRecord& record, const std::string& column) {
  static const std::string won = "Won", lost = "Lost";
  if (column == kStatusColumn) return record.status == SaleStatus::won ? won : lost;
  return record.attribute(column);
}

}  // namespace detail

inline PropertyGraph build_eda_graph(const std::vector<SalesRecord>& records,
                                     const LabelMapping& mapping = LabelMapping::defaults()) {
  if (records.empty()) fail(Errc::empty_records, "no sales records");
  mapping.validate();

  PropertyGraph graph;
  const std::string sale_label{LabelMapping::kSaleLabel};
  for (const auto& record : records) {
    int sale = graph.merge_node(sale_label, record.id);

    std::map<std::string, int> entity_of_label;        // this record's entity nodes
    std::map<std::string, std::size_t> edge_of_type;   // this record's relationships
    entity_of_label[sale_label] = sale;
    for (const auto& rule : mapping.labels) {
      int entity = graph.merge_node(rule.label, detail::column_value(record, rule.column));
      entity_of_label[rule.label] = entity;
      edge_of_type[rule.relationship] = graph.merge_edge(sale, entity, rule.relationship);
    }
    for (const auto& [column, owner] : mapping.node_attributes)
      graph.set_attribute(entity_of_label.at(owner), column, detail::column_value(record, column));
    for (const auto& [column, relationship] : mapping.edge_properties)
      graph.set_edge_property(edge_of_type.at(relationship), column,
                              detail::column_value(record, column));
  }
  return graph;
}

/// Inventory counters shared by both graph flavors; degree stats are only
/// populated for sales-node projections.
struct InventoryStats {
  std::size_t node_count = 0;
  std::size_t label_count = 0;
  std::size_t relationship_count = 0;
  std::size_t relationship_type_count = 0;
  std::vector<std::pair<std::string, std::size_t>> label_counts;  // label name asc

  bool has_degrees = false;
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  double mean_degree = 0.0;

  /// Mean degree rendered to 3 decimals, the precision used in reports.
  std::string mean_degree_str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", mean_degree);
    return buf;
  }
};

inline InventoryStats inventory(const PropertyGraph& graph) {
  InventoryStats stats;
  stats.node_count = graph.nodes().size();
  stats.relationship_count = graph.edges().size();
  std::map<std::string, std::size_t> per_label;
  for (const auto& node : graph.nodes()) ++per_label[node.label];
  std::set<std::string> types;
  for (const auto& edge : graph.edges()) types.insert(edge.type);
  stats.label_count = per_label.size();
  stats.relationship_type_count = types.size();
  stats.label_counts.assign(per_label.begin(), per_label.end());
  return stats;
}

}  // namespace crmgraph
