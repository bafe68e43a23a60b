#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "crmgraph/record.hpp"
#include "helpers.hpp"

using namespace crmgraph;

namespace {

csv::Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  return csv::parse(in);
}

std::string full_header(bool with_id = true) {
  std::string header;
  if (with_id) header += std::string(kIdColumn) + ",";
  for (auto column : kAttributeColumns) header += std::string(column) + ",";
  header += std::string(kStatusColumn);
  return header;
}

std::string row(const std::string& id, const std::string& status) {
  std::string text = id.empty() ? "" : id + ",";
  for (std::size_t i = 0; i < kAttributeColumns.size(); ++i) text += "v,";
  return text + status;
}

}  // namespace

TEST_CASE("header-only CSV yields an empty record list") {
  auto records = ingest_csv(parse_csv(full_header() + "\n"));
  CHECK(records.empty());
}

TEST_CASE("rows become records with normalized status") {
  std::string text = full_header() + "\n" + row("a", "Won") + "\n" + row("b", "Loss") + "\n" +
                     row("c", "lost") + "\n" + row("d", "WON") + "\n";
  auto records = ingest_csv(parse_csv(text));
  REQUIRE(records.size() == 4);
  CHECK(records[0].status == SaleStatus::won);
  CHECK(records[1].status == SaleStatus::lost);
  CHECK(records[2].status == SaleStatus::lost);
  CHECK(records[3].status == SaleStatus::won);
  auto counts = count_status(records);
  CHECK(counts.won == 2);
  CHECK(counts.lost == 2);
}

TEST_CASE("missing id column synthesizes sequential enquiry ids") {
  std::string text = full_header(false) + "\n" + row("", "Won") + "\n" + row("", "Loss") + "\n";
  auto records = ingest_csv(parse_csv(text));
  REQUIRE(records.size() == 2);
  CHECK(records[0].id == "id-1001");
  CHECK(records[1].id == "id-1002");
}

TEST_CASE("empty cell is rejected with its row and column") {
  std::string bad_row;  // blank Seller cell in data row 2
  bad_row += "b,";
  for (auto column : kAttributeColumns) bad_row += (column == "Seller" ? "" : "v") + std::string(",");
  bad_row += "Won";
  std::string text = full_header() + "\n" + row("a", "Won") + "\n" + bad_row + "\n";
  try {
    ingest_csv(parse_csv(text));
    FAIL("expected EmptyCell");
  } catch (const Error& error) {
    CHECK(error.code() == Errc::empty_cell);
    CHECK(std::string(error.what()).find("row 2") != std::string::npos);
    CHECK(std::string(error.what()).find("Seller") != std::string::npos);
  }
}

TEST_CASE("missing attribute column is named") {
  std::string header = std::string(kIdColumn);
  for (auto column : kAttributeColumns)
    if (column != "Growth") header += "," + std::string(column);
  header += "," + std::string(kStatusColumn);
  try {
    ingest_csv(parse_csv(header + "\n"));
    FAIL("expected MissingColumn");
  } catch (const Error& error) {
    CHECK(error.code() == Errc::missing_column);
    CHECK(std::string(error.what()).find("Growth") != std::string::npos);
  }
}

TEST_CASE("duplicate enquiry ids are rejected") {
  std::string text = full_header() + "\n" + row("a", "Won") + "\n" + row("a", "Loss") + "\n";
  CHECK_THROWS_MATCHES(ingest_csv(parse_csv(text)), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::duplicate_id; }));
}

TEST_CASE("ragged and malformed rows are rejected") {
  CHECK_THROWS_MATCHES(parse_csv(full_header() + "\na,b\n"), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::malformed_csv; }));
  CHECK_THROWS_MATCHES(ingest_csv(parse_csv("Nope,What\nx,y\n")), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::malformed_csv; }));
  CHECK_THROWS_MATCHES(ingest_csv(parse_csv(full_header() + "\n" + row("a", "Maybe") + "\n")),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::malformed_csv;
                       }));
}

TEST_CASE("quoted fields round-trip through the parser") {
  auto table = parse_csv("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n");
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "x,y");
  CHECK(table.rows[0][1] == "he said \"hi\"");
  CHECK(csv::escape("x,y") == "\"x,y\"");
  CHECK(csv::escape("plain") == "plain");
}

TEST_CASE("ingest round-trips through helper CSV rendering") {
  std::vector<SalesRecord> records = {
      test::make_record("id-1", SaleStatus::won, {{"Product", "Product A"}}),
      test::make_record("id-2", SaleStatus::lost, {{"Seller", "Seller 3"}})};
  auto parsed = ingest_csv(parse_csv(test::records_to_csv(records)));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].id == "id-1");
  CHECK(parsed[0].attribute("Product") == "Product A");
  CHECK(parsed[1].attribute("Seller") == "Seller 3");
  CHECK(parsed[1].status == SaleStatus::lost);
}
