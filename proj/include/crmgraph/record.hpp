#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crmgraph/csv.hpp"
#include "crmgraph/error.hpp"

namespace crmgraph {

enum class SaleStatus : int { lost = 0, won = 1 };

inline std::string_view to_string(SaleStatus status) {
  return status == SaleStatus::won ? "Won" : "Lost";
}

/// The 22 categorical attribute columns of the B2B sales sheet, in schema
/// order. The class column "Status" and the key column "sales_enquiry_id"
/// are handled separately.
inline constexpr std::array<std::string_view, 22> kAttributeColumns = {
    "Product",    "Seller",      "Authority",  "Comp_size",  "Competitors", "Purch_dept",
    "Partnership", "Budgt_alloc", "Forml_tend", "RFI",        "RFP",         "Growth",
    "Posit_statm", "Source",      "Client",     "Scope",      "Strat_deal",  "Cross_sale",
    "Up_sale",     "Deal_type",   "Needs_def",  "Att_t_client"};

inline constexpr std::string_view kStatusColumn = "Status";
inline constexpr std::string_view kIdColumn = "sales_enquiry_id";

inline int attribute_index(std::string_view column) {
  for (std::size_t i = 0; i < kAttributeColumns.size(); ++i)
    if (kAttributeColumns[i] == column) return static_cast<int>(i);
  return -1;
}

/// One row of the sales sheet: unique enquiry id, the 22 categorical
/// attributes in kAttributeColumns order, and the binary outcome.
struct SalesRecord {
  std::string id;
  std::array<std::string, 22> attributes;
  SaleStatus status = SaleStatus::lost;

  const std::string& attribute(std::string_view column) const {
    int idx = attribute_index(column);
    if (idx < 0) fail(Errc::unknown_attribute, std::string(column));
    return attributes[static_cast<std::size_t>(idx)];
  }
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// "Won"/"Lost" in any case; the source sheet spells the negative class "Loss".
inline SaleStatus parse_status(const std::string& raw, std::size_t row) {
  auto low = lower(raw);
  if (low == "won") return SaleStatus::won;
  if (low == "lost" || low == "loss") return SaleStatus::lost;
  fail(Errc::malformed_csv,
       "row " + std::to_string(row) + ": unrecognized status value '" + raw + "'");
}

}  // namespace detail

/// Reads the sales CSV. The header must carry every attribute column plus
/// Status; sales_enquiry_id is optional and synthesized as id-1001, id-1002,
/// ... when absent. Cells must be non-empty and ids unique.
inline std::vector<SalesRecord> ingest_csv(const csv::Table& table) {
  std::vector<int> column_of(table.header.size(), -1);  // header slot -> attribute index
  int status_col = -1;
  int id_col = -1;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const auto& name = table.header[i];
    if (name == kStatusColumn) {
      status_col = static_cast<int>(i);
    } else if (name == kIdColumn) {
      id_col = static_cast<int>(i);
    } else {
      column_of[i] = attribute_index(name);
      if (column_of[i] < 0)
        fail(Errc::malformed_csv, "unknown column '" + name + "'");
    }
  }
  if (status_col < 0) fail(Errc::missing_column, std::string(kStatusColumn));
  std::array<bool, 22> seen{};
  for (int idx : column_of)
    if (idx >= 0) {
      if (seen[static_cast<std::size_t>(idx)])
        fail(Errc::malformed_csv,
             "duplicate column '" + std::string(kAttributeColumns[static_cast<std::size_t>(idx)]) + "'");
      seen[static_cast<std::size_t>(idx)] = true;
    }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) fail(Errc::missing_column, std::string(kAttributeColumns[i]));

  std::vector<SalesRecord> records;
  records.reserve(table.rows.size());
  std::unordered_set<std::string> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    SalesRecord record;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].empty())
        fail(Errc::empty_cell,
             "row " + std::to_string(r + 1) + ", column '" + table.header[c] + "'");
      if (column_of[c] >= 0) record.attributes[static_cast<std::size_t>(column_of[c])] = row[c];
    }
    record.id = id_col >= 0 ? row[static_cast<std::size_t>(id_col)]
                            : "id-" + std::to_string(1001 + r);
    record.status = detail::parse_status(row[static_cast<std::size_t>(status_col)], r + 1);
    if (!ids.insert(record.id).second)
      fail(Errc::duplicate_id, record.id);
    records.push_back(std::move(record));
  }
  return records;
}

inline std::vector<SalesRecord> ingest_csv(const std::filesystem::path& path) {
  return ingest_csv(csv::read_file(path));
}

struct StatusCounts {
  std::size_t won = 0;
  std::size_t lost = 0;
};

inline StatusCounts count_status(const std::vector<SalesRecord>& records) {
  StatusCounts counts;
  for (const auto& record : records)
    (record.status == SaleStatus::won ? counts.won : counts.lost)++;
  return counts;
}

}  // namespace crmgraph
