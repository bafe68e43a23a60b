#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crmgraph {

/// Stable error codes; the CLI maps these 1:1 onto process exit codes.
enum class Errc {
  missing_column = 10,
  duplicate_id = 11,
  empty_cell = 12,
  malformed_csv = 13,
  invalid_mapping = 14,
  empty_records = 15,
  no_edges = 16,
  no_labeled_pair = 17,
  unknown_node_in_edge = 18,
  missing_train_flag = 19,
  disconnected_graph = 20,
  not_converged = 21,
  dimension_mismatch = 22,
  non_finite_loss = 23,
  degenerate_labels = 24,
  too_few_samples = 25,
  single_class = 26,
  unknown_attribute = 27,
  io_error = 28,
  malformed_file = 29,
  bad_config = 30,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::empty_cell: return "EmptyCell";
    case Errc::malformed_csv: return "MalformedCsv";
    case Errc::invalid_mapping: return "InvalidMapping";
    case Errc::empty_records: return "EmptyRecords";
    case Errc::no_edges: return "NoEdges";
    case Errc::no_labeled_pair: return "NoLabeledPair";
    case Errc::unknown_node_in_edge: return "UnknownNodeInEdge";
    case Errc::missing_train_flag: return "MissingTrainFlag";
    case Errc::disconnected_graph: return "DisconnectedGraph";
    case Errc::not_converged: return "NotConverged";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::degenerate_labels: return "DegenerateLabels";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::single_class: return "SingleClass";
    case Errc::unknown_attribute: return "UnknownAttribute";
    case Errc::io_error: return "IoError";
    case Errc::malformed_file: return "MalformedFile";
    case Errc::bad_config: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace crmgraph
