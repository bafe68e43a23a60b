#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crmgraph/evaluation.hpp"
#include "crmgraph/gcn.hpp"
#include "crmgraph/metrics.hpp"
#include "crmgraph/mlp.hpp"
#include "crmgraph/one_hot.hpp"
#include "crmgraph/projection.hpp"
#include "crmgraph/random_forest.hpp"

namespace crmgraph {

/// One evaluated model: counts, rates, metric suite, ROC and the settings
/// that produced it. A failed suite cell carries the error text instead.
struct EvaluationReport {
  std::string model;
  std::string features;  // comma list, empty for tabular baselines
  std::string regime;    // "transductive" or "holdout"
  ConfusionMatrix cm;
  MetricSet metric_set;
  RocCurve roc;
  std::uint32_t seed = 0;
  double threshold = 0.5;
  std::size_t projection_nodes = 0;
  std::size_t projection_edges = 0;
  std::string error;  // non-empty marks a failed cell

  bool ok() const { return error.empty(); }
};

/// Transductive scoring: every node except the two training nodes counts.
inline EvaluationReport evaluate_gcn(const GraphProjection& projection,
                                     const Prediction& prediction) {
  if (static_cast<std::size_t>(prediction.probabilities.size()) != projection.size())
    fail(Errc::dimension_mismatch, "predictions do not cover every node");
  EvaluationReport report;
  report.regime = "transductive";
  report.projection_nodes = projection.size();
  report.projection_edges = projection.edges.size();
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t v = 0; v < projection.size(); ++v) {
    if (projection.is_train(static_cast<int>(v))) continue;
    bool predicted_won = prediction.classes[v] == SaleStatus::won;
    bool actual_won = projection.labels[v] == SaleStatus::won;
    report.cm.add(predicted_won, actual_won);
    scores.push_back(prediction.probabilities(static_cast<Eigen::Index>(v)));
    labels.push_back(actual_won ? 1 : 0);
  }
  report.metric_set = metrics(report.cm);
  report.roc = roc_auc(scores, labels);
  return report;
}

struct SuiteConfig {
  std::uint32_t seed = 42;
  int match_threshold = 4;
  bool scale = true;
  double split_ratio = 0.8;
  TrainConfig train;
  ForestConfig forest;
  MlpConfig mlp;
};

namespace detail {

inline std::string feature_list(const FeatureSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.features.size(); ++i) {
    if (i) out += ',';
    out += std::string(to_string(spec.features[i]));
  }
  return out;
}

inline EvaluationReport run_gcn_cell(const std::string& name, const GraphProjection& projection,
                                     FeatureSpec spec, const SuiteConfig& config) {
  spec.scale = config.scale;
  EvaluationReport report;
  report.model = name;
  report.features = feature_list(spec);
  report.seed = config.seed;
  try {
    FeatureMatrix features = assemble_features(projection, spec);
    TrainConfig train_config = config.train;
    train_config.seed = config.seed;
    auto [model, outcome] = train_gcn(projection, features.values, train_config);
    NormalizedAdjacency adj = normalize_adjacency(projection, train_config.variant);
    Prediction prediction = gcn_predict(model, adj, features.values);
    EvaluationReport scored = evaluate_gcn(projection, prediction);
    report.regime = scored.regime;
    report.cm = scored.cm;
    report.metric_set = scored.metric_set;
    report.roc = std::move(scored.roc);
    report.projection_nodes = scored.projection_nodes;
    report.projection_edges = scored.projection_edges;
  } catch (const Error& error) {
    report.error = error.what();
  }
  return report;
}

template <typename Scores, typename Classes>
inline void score_holdout(EvaluationReport& report, const std::vector<int>& test,
                          const Scores& scores, const Classes& classes,
                          const std::vector<int>& y) {
  std::vector<double> roc_scores;
  std::vector<int> roc_labels;
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto idx = static_cast<std::size_t>(test[i]);
    report.cm.add(classes[i] != 0, y[idx] != 0);
    roc_scores.push_back(scores[i]);
    roc_labels.push_back(y[idx]);
  }
  report.metric_set = metrics(report.cm);
  report.roc = roc_auc(roc_scores, roc_labels);
}

}  // namespace detail

/// The full comparison sweep: each single graph feature, the cumulative
/// 1F..6F ladder, then the tabular random-forest and feed-forward baselines
/// on a stratified holdout. A failing cell becomes an error report instead
/// of aborting the suite.
inline std::vector<EvaluationReport> run_experiment_suite(const GraphProjection& projection,
                                                          const std::vector<SalesRecord>& records,
                                                          const SuiteConfig& config = {}) {
  std::vector<EvaluationReport> reports;

  for (Feature feature : {Feature::pagerank, Feature::identity, Feature::closeness,
                          Feature::cluster, Feature::eigenvector, Feature::shortest_path}) {
    FeatureSpec spec;
    spec.features = {feature};
    reports.push_back(detail::run_gcn_cell("GCN-" + std::string(to_string(feature)), projection,
                                           spec, config));
  }
  for (int count = 1; count <= 6; ++count)
    reports.push_back(detail::run_gcn_cell("GCN-" + std::to_string(count) + "F", projection,
                                           FeatureSpec::ladder(count), config));

  EvaluationReport forest_report;
  forest_report.model = "RandomForest";
  forest_report.regime = "holdout";
  forest_report.seed = config.seed;
  EvaluationReport mlp_report;
  mlp_report.model = "ANN";
  mlp_report.regime = "holdout";
  mlp_report.seed = config.seed;
  try {
    auto [encoding, y] = one_hot_encode(records);
    auto [train, test] = split_train_test(y, config.split_ratio, config.seed);
    Eigen::MatrixXd train_matrix(static_cast<Eigen::Index>(train.size()), encoding.matrix.cols());
    std::vector<int> train_labels;
    for (std::size_t i = 0; i < train.size(); ++i) {
      train_matrix.row(static_cast<Eigen::Index>(i)) = encoding.matrix.row(train[i]);
      train_labels.push_back(y[static_cast<std::size_t>(train[i])]);
    }
    Eigen::MatrixXd test_matrix(static_cast<Eigen::Index>(test.size()), encoding.matrix.cols());
    for (std::size_t i = 0; i < test.size(); ++i)
      test_matrix.row(static_cast<Eigen::Index>(i)) = encoding.matrix.row(test[i]);

    try {
      ForestConfig forest_config = config.forest;
      forest_config.seed = config.seed;
      ForestModel forest = train_random_forest(train_matrix, train_labels, forest_config);
      ForestPrediction prediction = predict_forest(forest, test_matrix);
      detail::score_holdout(forest_report, test, prediction.scores, prediction.classes, y);
    } catch (const Error& error) {
      forest_report.error = error.what();
    }
    try {
      MlpConfig mlp_config = config.mlp;
      mlp_config.seed = config.seed;
      auto [mlp, losses] = train_mlp(train_matrix, train_labels, mlp_config);
      MlpPrediction prediction = predict_mlp(mlp, test_matrix);
      detail::score_holdout(mlp_report, test, prediction.scores, prediction.classes, y);
    } catch (const Error& error) {
      mlp_report.error = error.what();
    }
  } catch (const Error& error) {
    forest_report.error = error.what();
    mlp_report.error = error.what();
  }
  reports.push_back(std::move(forest_report));
  reports.push_back(std::move(mlp_report));
  return reports;
}

// ---------------------------------------------------------------------------
// Report rendering: one JSON document per run (JSON Lines) plus an SVG ROC
// overlay. Both files are byte-stable for identical inputs.

namespace detail {

inline nlohmann::ordered_json report_json(const EvaluationReport& report) {
  nlohmann::ordered_json doc;
  doc["model"] = report.model;
  doc["features"] = report.features;
  doc["regime"] = report.regime;
  doc["seed"] = report.seed;
  doc["threshold"] = report.threshold;
  if (!report.ok()) {
    doc["error"] = report.error;
    return doc;
  }
  doc["counts"] = {{"tp", report.cm.tp}, {"fp", report.cm.fp},
                   {"tn", report.cm.tn}, {"fn", report.cm.fn}};
  auto rate = [&](long long num, long long den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  doc["rates"] = {{"tpr", rate(report.cm.tp, report.cm.tp + report.cm.fn)},
                  {"fpr", rate(report.cm.fp, report.cm.fp + report.cm.tn)},
                  {"tnr", rate(report.cm.tn, report.cm.tn + report.cm.fp)},
                  {"fnr", rate(report.cm.fn, report.cm.fn + report.cm.tp)}};
  doc["metrics"] = {{"accuracy", report.metric_set.accuracy},
                    {"precision", report.metric_set.precision},
                    {"sensitivity", report.metric_set.sensitivity},
                    {"specificity", report.metric_set.specificity},
                    {"f1", report.metric_set.f1},
                    {"auc", report.roc.auc}};
  if (report.regime == "transductive") {
    doc["projection"] = {{"nodes", report.projection_nodes},
                         {"edges", report.projection_edges}};
  }
  return doc;
}

inline constexpr std::array<std::string_view, 14> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a", "#637939", "#8c6d31"};

inline void write_roc_svg(const std::vector<EvaluationReport>& reports,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  const double width = 800, height = 600;
  const double x0 = 70, y0 = 30, x1 = 540, y1 = 550;  // plot box
  auto px = [&](double fpr) { return x0 + fpr * (x1 - x0); };
  auto py = [&](double tpr) { return y1 - tpr * (y1 - y0); };
  char buf[64];
  auto fmt = [&](double value) {
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 << "\" height=\""
      << y1 - y0 << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double f = tick / 4.0;
    out << "<text x=\"" << px(f) - 10 << "\" y=\"" << y1 + 18
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << fmt(f) << "</text>\n";
    out << "<text x=\"" << x0 - 38 << "\" y=\"" << py(f) + 4
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << fmt(f) << "</text>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 - 60 << "\" y=\"" << y1 + 40
      << "\" font-size=\"14\" font-family=\"sans-serif\">false positive rate</text>\n";
  out << "<text x=\"18\" y=\"" << (y0 + y1) / 2 + 50
      << "\" font-size=\"14\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
      << (y0 + y1) / 2 + 50 << ")\">true positive rate</text>\n";
  out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(1) << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";

  std::size_t color = 0;
  double legend_y = y0 + 10;
  for (const auto& report : reports) {
    if (!report.ok()) continue;
    auto stroke = kPalette[color % kPalette.size()];
    ++color;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < report.roc.points.size(); ++i) {
      if (i) out << ' ';
      std::snprintf(buf, sizeof buf, "%.3f,%.3f", px(report.roc.points[i].first),
                    py(report.roc.points[i].second));
      out << buf;
    }
    out << "\"/>\n";
    out << "<line x1=\"" << x1 + 20 << "\" y1=\"" << legend_y << "\" x2=\"" << x1 + 44
        << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << x1 + 50 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << report.model << " (AUC "
        << fmt(report.roc.auc) << ")</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  if (!out.flush()) fail(Errc::io_error, "write failed for " + path.string());
}

}  // namespace detail

struct ReportFiles {
  std::filesystem::path data;
  std::filesystem::path plot;
};

inline ReportFiles render_report(const std::vector<EvaluationReport>& reports,
                                 const std::filesystem::path& directory) {
  if (reports.empty()) fail(Errc::empty_records, "no reports to render");
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  ReportFiles files{directory / "reports.jsonl", directory / "roc.svg"};

  std::ofstream out(files.data, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + files.data.string());
  for (const auto& report : reports) out << detail::report_json(report).dump() << '\n';
  if (!out.flush()) fail(Errc::io_error, "write failed for " + files.data.string());

  detail::write_roc_svg(reports, files.plot);
  return files;
}

}  // namespace crmgraph
