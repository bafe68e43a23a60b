#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "crmgraph/eda.hpp"
#include "crmgraph/property_graph.hpp"
#include "helpers.hpp"

using namespace crmgraph;

TEST_CASE("single record produces one node per mapped label and all relationships") {
  auto graph = build_eda_graph({test::make_record("id-1", SaleStatus::won)});
  auto stats = inventory(graph);
  CHECK(stats.label_count == 7);           // Sale plus six entity labels
  CHECK(stats.node_count == 7);
  CHECK(stats.relationship_count == 6);    // one relationship per mapped label
  CHECK(stats.relationship_type_count == 6);
  for (const auto& [label, count] : stats.label_counts) CHECK(count == 1);
}

TEST_CASE("records sharing a product merge onto one product node") {
  auto graph = build_eda_graph({
      test::make_record("id-1", SaleStatus::won, {{"Product", "Product A"}}),
      test::make_record("id-2", SaleStatus::won, {{"Product", "Product A"}}),
  });
  const auto* product = graph.find_node("Product", "Product A");
  REQUIRE(product != nullptr);
  CHECK(graph.degree(product->id) == 2);
  auto counts = count_by_label(graph);
  CHECK(counts.at("Product") == 1);
  CHECK(counts.at("Sale") == 2);
}

TEST_CASE("per-label counts follow the distinct values of mapped columns") {
  std::vector<SalesRecord> records;
  for (int i = 0; i < 12; ++i)
    records.push_back(test::make_record(
        "id-" + std::to_string(i), i % 2 ? SaleStatus::won : SaleStatus::lost,
        {{"Product", "P" + std::to_string(i % 3)},
         {"Seller", "S" + std::to_string(i % 4)},
         {"Source", "Src" + std::to_string(i % 2)},
         {"Client", "C" + std::to_string(i % 6)}}));
  auto counts = count_by_label(build_eda_graph(records));
  CHECK(counts.at("Sale") == 12);
  CHECK(counts.at("Product") == 3);
  CHECK(counts.at("Seller") == 4);
  CHECK(counts.at("Source") == 2);
  CHECK(counts.at("Client") == 6);
  CHECK(counts.at("SalesStatus") == 2);
  CHECK(counts.at("Authority") == 1);
}

TEST_CASE("merge is idempotent: ingesting the same records twice changes nothing") {
  std::vector<SalesRecord> records;
  for (int i = 0; i < 8; ++i)
    records.push_back(test::make_record("id-" + std::to_string(i),
                                        i % 2 ? SaleStatus::won : SaleStatus::lost,
                                        {{"Product", "P" + std::to_string(i % 3)}}));
  auto once = inventory(build_eda_graph(records));
  auto doubled = records;
  doubled.insert(doubled.end(), records.begin(), records.end());
  auto twice = inventory(build_eda_graph(doubled));
  CHECK(once.node_count == twice.node_count);
  CHECK(once.relationship_count == twice.relationship_count);
  CHECK(once.label_counts == twice.label_counts);
}

TEST_CASE("selling_to relationships carry competitor and strategic-deal properties") {
  auto graph = build_eda_graph({test::make_record(
      "id-1", SaleStatus::won, {{"Competitors", "No"}, {"Strat_deal", "Yes"}})});
  bool found = false;
  for (const auto& edge : graph.edges()) {
    if (edge.type != "selling_to") continue;
    found = true;
    CHECK(edge.properties.at("Competitors") == "No");
    CHECK(edge.properties.at("Strat_deal") == "Yes");
  }
  CHECK(found);
}

TEST_CASE("empty record set and bad mappings are rejected") {
  CHECK_THROWS_MATCHES(build_eda_graph({}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::empty_records; }));

  KeyValueConfig bad;
  bad.set("NotAColumn", "node_label");
  CHECK_THROWS_MATCHES(
      build_eda_graph({test::make_record("id-1", SaleStatus::won)}, LabelMapping::parse(bad)),
      Error, Catch::Matchers::Predicate<Error>(
                 [](const Error& e) { return e.code() == Errc::invalid_mapping; }));

  KeyValueConfig orphan;  // attribute owner label never mapped
  orphan.set("Growth", "node_attribute_of:Ghost");
  CHECK_THROWS_MATCHES(
      build_eda_graph({test::make_record("id-1", SaleStatus::won)}, LabelMapping::parse(orphan)),
      Error, Catch::Matchers::Predicate<Error>(
                 [](const Error& e) { return e.code() == Errc::invalid_mapping; }));
}

TEST_CASE("custom mapping text drives labels, attributes and edge properties") {
  std::istringstream text(
      "# minimal two-label scheme\n"
      "Product = node_label:Product:involves\n"
      "Client = node_label\n"
      "Competitors = edge_property_of:involves\n"
      "Growth = node_attribute_of:Client\n");
  auto mapping = LabelMapping::parse(KeyValueConfig::parse(text));
  auto graph = build_eda_graph(
      {test::make_record("id-1", SaleStatus::won,
                         {{"Client", "Current"}, {"Growth", "Fast"}, {"Competitors", "Yes"}})},
      mapping);
  auto counts = count_by_label(graph);
  CHECK(counts.size() == 3);  // Sale, Product, Client
  const auto* client = graph.find_node("Client", "Current");
  REQUIRE(client != nullptr);
  CHECK(client->attributes.at("Growth") == "Fast");
  bool property_seen = false;
  for (const auto& edge : graph.edges())
    if (edge.type == "involves") property_seen = edge.properties.at("Competitors") == "Yes";
  CHECK(property_seen);
}

TEST_CASE("crosstab groups categories by status with deterministic order") {
  std::vector<SalesRecord> records = {
      test::make_record("a", SaleStatus::won, {{"Client", "v1"}}),
      test::make_record("b", SaleStatus::lost, {{"Client", "v1"}}),
      test::make_record("c", SaleStatus::won, {{"Client", "v2"}}),
      test::make_record("d", SaleStatus::lost, {{"Client", "v2"}}),
  };
  auto result = crosstab(records, "Client");
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].category == "v1");
  CHECK(result.rows[0].won == 1);
  CHECK(result.rows[0].lost == 1);
  CHECK(result.rows[1].category == "v2");

  auto status = crosstab(records, "Status");
  std::size_t total = 0;
  for (const auto& row : status.rows) total += row.won + row.lost;
  CHECK(total == records.size());

  CHECK_THROWS_MATCHES(crosstab(records, "Nope"), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::unknown_attribute; }));
}

TEST_CASE("crosstab totals cover every record for every attribute") {
  std::vector<SalesRecord> records;
  for (int i = 0; i < 17; ++i)
    records.push_back(test::make_record(
        "id-" + std::to_string(i), i % 3 ? SaleStatus::won : SaleStatus::lost,
        {{"Scope", "s" + std::to_string(i % 5)}, {"Growth", "g" + std::to_string(i % 2)}}));
  for (auto column : kAttributeColumns) {
    auto result = crosstab(records, std::string(column));
    std::size_t total = 0;
    for (const auto& row : result.rows) total += row.won + row.lost;
    CHECK(total == records.size());
  }
}

TEST_CASE("crosstab CSV export is well-formed") {
  auto dir = test::temp_dir("crosstab");
  std::vector<SalesRecord> records = {test::make_record("a", SaleStatus::won)};
  write_crosstab_csv(crosstab(records, "Client"), dir / "ct.csv");
  auto table = csv::read_file(dir / "ct.csv");
  REQUIRE(table.header == std::vector<std::string>{"attribute", "category", "won", "lost"});
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "Client");
  CHECK(table.rows[0][2] == "1");
}
