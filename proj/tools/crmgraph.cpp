// crmgraph command-line front end: deterministic, scriptable pipeline from
// the sales CSV to projection files, feature matrices, trained models and
// evaluation reports.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crmgraph/crmgraph.hpp"

namespace fs = std::filesystem;
using namespace crmgraph;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

/// Output manifest: every artifact of the run plus the digests of the files
/// it was derived from. Rewritten whole on each run, byte-stable.
struct Manifest {
  std::map<std::string, std::string> inputs;   // file name -> digest
  std::map<std::string, std::string> outputs;

  void add_input(const fs::path& path) { inputs[path.filename().string()] = file_digest(path); }
  void add_output(const fs::path& path) { outputs[path.filename().string()] = file_digest(path); }

  void write(const fs::path& directory) const {
    if (outputs.empty()) return;
    std::error_code ec;
    fs::create_directories(directory, ec);
    fs::path path = directory / "manifest.txt";

    // merge with whatever earlier commands recorded in this directory
    auto merged_inputs = inputs;
    auto merged_outputs = outputs;
    if (std::ifstream existing(path); existing) {
      std::string kind, name, digest;
      while (existing >> kind >> name >> digest)
        (kind == "input" ? merged_inputs : merged_outputs).try_emplace(name, digest);
    }
    for (const auto& [name, digest] : inputs) merged_inputs[name] = digest;
    for (const auto& [name, digest] : outputs) merged_outputs[name] = digest;

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot write " + path.string());
    for (const auto& [name, digest] : merged_inputs) out << "input " << name << ' ' << digest << '\n';
    for (const auto& [name, digest] : merged_outputs)
      out << "output " << name << ' ' << digest << '\n';
  }
};

struct Options {
  std::string input;
  std::string out = "out";
  std::string mapping;
  std::string edgelist;
  std::string attributes;
  std::uint32_t seed = 42;
  int k = 4;
  std::string features = "6F";
  double lr = 0.05;
  int epochs = 500;
  std::string hidden = "4,2";
  std::string variant = "sym";
  bool no_scale = false;
  bool frozen_layers = false;
  double ratio = 0.8;
  std::string train_won;
  std::string train_lost;

  TrainConfig train_config() const {
    TrainConfig config;
    config.hidden.clear();
    std::size_t start = 0;
    while (start <= hidden.size()) {
      auto comma = hidden.find(',', start);
      auto part = hidden.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) config.hidden.push_back(std::stoi(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    config.learning_rate = lr;
    config.epochs = epochs;
    config.seed = seed;
    config.variant = parse_variant(variant);
    config.frozen_layers = frozen_layers;
    config.validate();
    return config;
  }

  ProjectionRule projection_rule() const { return {k, train_won, train_lost}; }

  LabelMapping label_mapping() const {
    return mapping.empty() ? LabelMapping::defaults()
                           : LabelMapping::parse(KeyValueConfig::read_file(mapping));
  }
};

std::vector<SalesRecord> load_records(const Options& opt, Manifest& manifest) {
  if (opt.input.empty()) fail(Errc::bad_config, "--input CSV path is required");
  manifest.add_input(opt.input);
  return ingest_csv(opt.input);
}

/// Projection source order: explicit --edgelist/--attributes, otherwise the
/// exported pair under --out, otherwise a fresh build from the CSV.
GraphProjection load_projection(const Options& opt, Manifest& manifest) {
  fs::path edgelist = opt.edgelist;
  fs::path attributes = opt.attributes;
  if (edgelist.empty() && attributes.empty()) {
    fs::path candidate_e = fs::path(opt.out) / kEdgelistFile;
    fs::path candidate_a = fs::path(opt.out) / kAttributesFile;
    if (fs::exists(candidate_e) && fs::exists(candidate_a)) {
      edgelist = candidate_e;
      attributes = candidate_a;
    }
  }
  if (!edgelist.empty() || !attributes.empty()) {
    if (edgelist.empty() || attributes.empty())
      fail(Errc::bad_config, "--edgelist and --attributes must be given together");
    manifest.add_input(edgelist);
    manifest.add_input(attributes);
    return import_edgelist(edgelist, attributes);
  }
  return build_gcn_graph(load_records(opt, manifest), opt.projection_rule());
}

void print_projection_stats(const GraphProjection& projection) {
  auto stats = inventory(projection);
  std::printf("nodes=%zu edges=%zu mean_degree=%s min_degree=%zu max_degree=%zu\n",
              stats.node_count, stats.relationship_count, stats.mean_degree_str().c_str(),
              stats.min_degree, stats.max_degree);
}

int cmd_ingest(const Options& opt) {
  Manifest manifest;
  auto records = load_records(opt, manifest);
  auto counts = count_status(records);
  std::printf("%zu records, Won=%zu Lost=%zu\n", records.size(), counts.won, counts.lost);
  return 0;
}

int cmd_build(const Options& opt, bool eda, bool gcn) {
  if (eda == gcn) fail(Errc::bad_config, "build needs exactly one of --eda / --gcn");
  Manifest manifest;
  auto records = load_records(opt, manifest);
  if (eda) {
    PropertyGraph graph = build_eda_graph(records, opt.label_mapping());
    auto stats = inventory(graph);
    std::printf("nodes=%zu labels=%zu relationships=%zu relationship_types=%zu\n",
                stats.node_count, stats.label_count, stats.relationship_count,
                stats.relationship_type_count);
    for (const auto& [label, count] : stats.label_counts)
      std::printf("label %s %zu\n", label.c_str(), count);
    return 0;
  }
  GraphProjection projection = build_gcn_graph(records, opt.projection_rule());
  auto files = export_projection(projection, opt.out);
  manifest.add_output(files.edgelist);
  manifest.add_output(files.attributes);
  manifest.write(opt.out);
  print_projection_stats(projection);
  std::printf("train_won=%s train_lost=%s\n",
              projection.node_ids[static_cast<std::size_t>(projection.train_won)].c_str(),
              projection.node_ids[static_cast<std::size_t>(projection.train_lost)].c_str());
  return 0;
}

int cmd_stats(const Options& opt, bool eda) {
  Manifest manifest;
  if (eda) {
    auto records = load_records(opt, manifest);
    auto stats = inventory(build_eda_graph(records, opt.label_mapping()));
    std::printf("nodes=%zu labels=%zu relationships=%zu relationship_types=%zu\n",
                stats.node_count, stats.label_count, stats.relationship_count,
                stats.relationship_type_count);
    for (const auto& [label, count] : stats.label_counts)
      std::printf("label %s %zu\n", label.c_str(), count);
    return 0;
  }
  print_projection_stats(load_projection(opt, manifest));
  return 0;
}

int cmd_eda(const Options& opt, const std::string& attribute) {
  Manifest manifest;
  auto records = load_records(opt, manifest);
  auto result = crosstab(records, attribute);
  fs::create_directories(opt.out);
  fs::path path = fs::path(opt.out) / ("crosstab_" + attribute + ".csv");
  write_crosstab_csv(result, path);
  manifest.add_output(path);
  manifest.write(opt.out);
  for (const auto& row : result.rows)
    std::printf("%s,%s,%zu,%zu\n", attribute.c_str(), row.category.c_str(), row.won, row.lost);
  return 0;
}

int cmd_features(const Options& opt) {
  Manifest manifest;
  GraphProjection projection = load_projection(opt, manifest);
  FeatureSpec spec = FeatureSpec::parse(opt.features);
  spec.scale = !opt.no_scale;
  FeatureMatrix features = assemble_features(projection, spec);
  fs::create_directories(opt.out);
  fs::path path = fs::path(opt.out) / "features.csv";
  write_feature_csv(features, projection, path);
  manifest.add_output(path);
  manifest.write(opt.out);
  std::printf("features=%zu columns=%zu rows=%zu -> %s\n", spec.features.size(),
              static_cast<std::size_t>(features.values.cols()),
              static_cast<std::size_t>(features.values.rows()), path.string().c_str());
  return 0;
}

int cmd_train(const Options& opt) {
  Manifest manifest;
  GraphProjection projection = load_projection(opt, manifest);
  FeatureSpec spec = FeatureSpec::parse(opt.features);
  spec.scale = !opt.no_scale;
  FeatureMatrix features = assemble_features(projection, spec);
  auto [model, outcome] = train_gcn(projection, features.values, opt.train_config());
  fs::create_directories(opt.out);
  fs::path model_path = fs::path(opt.out) / "model.txt";
  save_model(model, model_path);
  manifest.add_output(model_path);
  manifest.write(opt.out);
  std::printf("epochs=%d initial_loss=%.6f final_loss=%.6f model=%s\n", opt.epochs,
              outcome.losses.front(), outcome.losses.back(), model_path.string().c_str());
  return 0;
}

EvaluationReport evaluate_once(const Options& opt, const GraphProjection& projection) {
  FeatureSpec spec = FeatureSpec::parse(opt.features);
  spec.scale = !opt.no_scale;
  FeatureMatrix features = assemble_features(projection, spec);
  TrainConfig config = opt.train_config();
  auto [model, outcome] = train_gcn(projection, features.values, config);
  NormalizedAdjacency adj = normalize_adjacency(projection, config.variant);
  EvaluationReport report = evaluate_gcn(projection, gcn_predict(model, adj, features.values));
  report.model = "GCN";
  report.seed = opt.seed;
  std::string names;
  for (std::size_t i = 0; i < spec.features.size(); ++i)
    names += std::string(i ? "," : "") + std::string(to_string(spec.features[i]));
  report.features = names;
  return report;
}

int cmd_evaluate(const Options& opt) {
  Manifest manifest;
  GraphProjection projection = load_projection(opt, manifest);
  auto report = evaluate_once(opt, projection);
  auto files = render_report({report}, opt.out);
  manifest.add_output(files.data);
  manifest.add_output(files.plot);
  manifest.write(opt.out);
  std::printf("model=%s accuracy=%.3f precision=%.3f sensitivity=%.3f specificity=%.3f f1=%.3f auc=%.3f\n",
              report.model.c_str(), report.metric_set.accuracy, report.metric_set.precision,
              report.metric_set.sensitivity, report.metric_set.specificity, report.metric_set.f1,
              report.roc.auc);
  return 0;
}

int cmd_suite(const Options& opt) {
  Manifest manifest;
  auto records = load_records(opt, manifest);
  GraphProjection projection = build_gcn_graph(records, opt.projection_rule());
  SuiteConfig config;
  config.seed = opt.seed;
  config.match_threshold = opt.k;
  config.scale = !opt.no_scale;
  config.split_ratio = opt.ratio;
  config.train = opt.train_config();
  auto reports = run_experiment_suite(projection, records, config);
  auto files = render_report(reports, opt.out);
  manifest.add_output(files.data);
  manifest.add_output(files.plot);
  manifest.write(opt.out);
  for (const auto& report : reports) {
    if (report.ok())
      std::printf("%-18s accuracy=%.3f auc=%.3f\n", report.model.c_str(),
                  report.metric_set.accuracy, report.roc.auc);
    else
      std::printf("%-18s error=%s\n", report.model.c_str(), report.error.c_str());
  }
  return 0;
}

int cmd_export(const Options& opt) {
  Manifest manifest;
  auto records = load_records(opt, manifest);
  GraphProjection projection = build_gcn_graph(records, opt.projection_rule());
  auto files = export_projection(projection, opt.out);
  manifest.add_output(files.edgelist);
  manifest.add_output(files.attributes);
  FeatureSpec spec = FeatureSpec::parse(opt.features);
  spec.scale = !opt.no_scale;
  fs::path feature_path = fs::path(opt.out) / "features.csv";
  write_feature_csv(assemble_features(projection, spec), projection, feature_path);
  manifest.add_output(feature_path);
  manifest.write(opt.out);
  std::printf("wrote %s %s %s\n", files.edgelist.string().c_str(),
              files.attributes.string().c_str(), feature_path.string().c_str());
  return 0;
}

constexpr const char* kExitCodeTable =
    "exit codes: 0 ok, 1 internal, 2 usage, 10 MissingColumn, 11 DuplicateId, 12 EmptyCell,\n"
    "13 MalformedCsv, 14 InvalidMapping, 15 EmptyRecords, 16 NoEdges, 17 NoLabeledPair,\n"
    "18 UnknownNodeInEdge, 19 MissingTrainFlag, 20 DisconnectedGraph, 21 NotConverged,\n"
    "22 DimensionMismatch, 23 NonFiniteLoss, 24 DegenerateLabels, 25 TooFewSamples,\n"
    "26 SingleClass, 27 UnknownAttribute, 28 IoError, 29 MalformedFile, 30 BadConfig";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crmgraph: B2B sales graph analytics and GCN sales-outcome prediction"};
  app.footer(kExitCodeTable);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_config("--config")->description("key = value config file (flags win)");

  Options opt;
  app.add_option("--input", opt.input, "sales CSV path");
  app.add_option("--out", opt.out, "output directory")->capture_default_str();
  app.add_option("--seed", opt.seed, "master random seed")->capture_default_str();
  app.add_option("--k", opt.k, "projection match threshold (1-5)")->capture_default_str();
  app.add_option("--features", opt.features, "feature spec: comma list or 1F..6F")
      ->capture_default_str();
  app.add_option("--lr", opt.lr, "GCN learning rate")->capture_default_str();
  app.add_option("--epochs", opt.epochs, "GCN training epochs")->capture_default_str();
  app.add_option("--hidden", opt.hidden, "GCN hidden layer sizes")->capture_default_str();
  app.add_option("--variant", opt.variant, "adjacency normalization: inv or sym")
      ->capture_default_str();
  app.add_flag("--no-scale", opt.no_scale, "disable min-max feature scaling");
  app.add_flag("--frozen-layers", opt.frozen_layers, "train only the logistic head");
  app.add_option("--mapping", opt.mapping, "label mapping config for the EDA graph");
  app.add_option("--edgelist", opt.edgelist, "projection edgelist file");
  app.add_option("--attributes", opt.attributes, "projection attributes file");
  app.add_option("--ratio", opt.ratio, "baseline train split ratio")->capture_default_str();
  app.add_option("--train-won", opt.train_won, "node id to flag as the Won training node");
  app.add_option("--train-lost", opt.train_lost, "node id to flag as the Lost training node");

  std::string positional_input;
  std::string eda_attribute;
  bool build_eda = false, build_gcn = false, stats_eda = false;

  auto* ingest = app.add_subcommand("ingest", "validate the sales CSV and print a summary");
  ingest->add_option("csv", positional_input, "sales CSV path");
  auto* build = app.add_subcommand("build", "build the EDA graph or the GCN projection");
  build->add_flag("--eda", build_eda, "build the exploratory property graph");
  build->add_flag("--gcn", build_gcn, "build the sales projection and export its files");
  auto* stats = app.add_subcommand("stats", "inventory statistics");
  stats->add_flag("--eda", stats_eda, "property-graph inventory instead of the projection");
  auto* eda = app.add_subcommand("eda", "status crosstab for one attribute");
  eda->add_option("attribute", eda_attribute, "attribute column name")->required();
  app.add_subcommand("features", "assemble the node feature matrix and export it as CSV");
  app.add_subcommand("train", "train the GCN and save the model");
  app.add_subcommand("evaluate", "train and score one GCN configuration");
  app.add_subcommand("suite", "run the full model comparison sweep");
  app.add_subcommand("export", "write projection files and the feature matrix");
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);
  if (!positional_input.empty()) opt.input = positional_input;

  try {
    if (app.got_subcommand("ingest")) return cmd_ingest(opt);
    if (app.got_subcommand("build")) return cmd_build(opt, build_eda, build_gcn);
    if (app.got_subcommand("stats")) return cmd_stats(opt, stats_eda);
    if (app.got_subcommand("eda")) return cmd_eda(opt, eda_attribute);
    if (app.got_subcommand("features")) return cmd_features(opt);
    if (app.got_subcommand("train")) return cmd_train(opt);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(opt);
    if (app.got_subcommand("suite")) return cmd_suite(opt);
    if (app.got_subcommand("export")) return cmd_export(opt);
  } catch (const Error& error) {
    std::cerr << error.what() << "\n";
    return error.exit_code();
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 2;
}
