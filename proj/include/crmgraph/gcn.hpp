#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/metrics.hpp"
#include "crmgraph/projection.hpp"
#include "crmgraph/rng.hpp"

namespace crmgraph {

enum class AdjacencyVariant { inverse_degree, symmetric };

inline std::string_view to_string(AdjacencyVariant variant) {
  return variant == AdjacencyVariant::inverse_degree ? "inv" : "sym";
}

inline AdjacencyVariant parse_variant(const std::string& text) {
  if (text == "inv" || text == "inverse_degree") return AdjacencyVariant::inverse_degree;
  if (text == "sym" || text == "symmetric") return AdjacencyVariant::symmetric;
  fail(Errc::bad_config, "unknown adjacency variant '" + text + "'");
}

/// Self-looped, degree-normalized adjacency: with A-hat = A + I and D its
/// degree matrix, the inverse-degree variant is D^-1 A-hat (rows sum to 1)
/// and the symmetric variant is D^-1/2 A-hat D^-1/2.
struct NormalizedAdjacency {
  Eigen::MatrixXd matrix;
  AdjacencyVariant variant = AdjacencyVariant::symmetric;
};

inline NormalizedAdjacency normalize_adjacency(const GraphProjection& projection,
                                               AdjacencyVariant variant) {
  const auto n = static_cast<Eigen::Index>(projection.size());
  Eigen::MatrixXd hat = Eigen::MatrixXd::Identity(n, n);
  for (auto [a, b] : projection.edges) {
    hat(a, b) = 1.0;
    hat(b, a) = 1.0;
  }
  Eigen::VectorXd degree = hat.rowwise().sum();
  NormalizedAdjacency out{Eigen::MatrixXd(n, n), variant};
  if (variant == AdjacencyVariant::inverse_degree) {
    out.matrix = degree.cwiseInverse().asDiagonal() * hat;
  } else {
    Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    out.matrix = inv_sqrt.asDiagonal() * hat * inv_sqrt.asDiagonal();
  }
  return out;
}

/// Training knobs. The listed defaults are deliberately small: the
/// supervised signal is a single node pair.
struct TrainConfig {
  std::vector<int> hidden = {4, 2};
  double learning_rate = 0.05;
  int epochs = 500;
  std::uint32_t seed = 42;
  AdjacencyVariant variant = AdjacencyVariant::symmetric;
  bool frozen_layers = false;  // keep layer weights at init, train only the head

  void validate() const {
    if (learning_rate <= 0.0) fail(Errc::bad_config, "learning rate must be positive");
    if (epochs < 1) fail(Errc::bad_config, "epochs must be >= 1");
    if (hidden.empty()) fail(Errc::bad_config, "need at least one hidden layer");
    for (int dim : hidden)
      if (dim < 1) fail(Errc::bad_config, "hidden dims must be >= 1");
  }
};

/// Spectral GCN: per-layer weight matrices applied through the normalized
/// adjacency with ReLU, topped by a logistic head.
struct GcnModel {
  std::vector<Eigen::MatrixXd> layer_weights;  // W_i is (dim_{i-1} x dim_i)
  Eigen::VectorXd head_weights;
  double head_bias = 0.0;
  std::uint32_t seed = 0;
  AdjacencyVariant variant = AdjacencyVariant::symmetric;

  Eigen::Index input_dim() const { return layer_weights.front().rows(); }
  Eigen::Index output_dim() const { return layer_weights.back().cols(); }
};

namespace detail {

inline Eigen::MatrixXd xavier_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd weights(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) weights(r, c) = rng.uniform(-limit, limit);
  return weights;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double clamp_probability(double p) {
  return std::min(1.0 - 1e-12, std::max(1e-12, p));
}

// attempt 0 draws from the seed itself; retries use a splitmix-derived stream
inline std::uint64_t init_stream(std::uint32_t seed, int attempt) {
  if (attempt == 0) return seed;
  std::uint64_t z = (static_cast<std::uint64_t>(seed) << 16) +
                    static_cast<std::uint64_t>(attempt) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

inline GcnModel init_gcn(Eigen::Index input_dim, const TrainConfig& config, int attempt = 0) {
  config.validate();
  GcnModel model;
  model.seed = config.seed;
  model.variant = config.variant;
  Rng rng(detail::init_stream(config.seed, attempt));
  Eigen::Index prev = input_dim;
  for (int dim : config.hidden) {
    model.layer_weights.push_back(detail::xavier_uniform(prev, dim, rng));
    prev = dim;
  }
  Eigen::MatrixXd head = detail::xavier_uniform(prev, 1, rng);
  model.head_weights = head.col(0);
  model.head_bias = 0.0;
  return model;
}

/// Everything the forward pass produces: H^0..H^L, logits and probabilities.
struct GcnForward {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] = X
  Eigen::VectorXd logits;
  Eigen::VectorXd probabilities;
};

inline GcnForward gcn_forward(const GcnModel& model, const NormalizedAdjacency& adj,
                              const Eigen::MatrixXd& features) {
  if (features.cols() != model.input_dim())
    fail(Errc::dimension_mismatch, "feature matrix has " + std::to_string(features.cols()) +
                                       " columns, model expects " +
                                       std::to_string(model.input_dim()));
  if (adj.matrix.rows() != features.rows())
    fail(Errc::dimension_mismatch, "adjacency order " + std::to_string(adj.matrix.rows()) +
                                       " does not match " + std::to_string(features.rows()) +
                                       " feature rows");
  GcnForward pass;
  pass.activations.push_back(features);
  for (const auto& weights : model.layer_weights) {
    const Eigen::MatrixXd& prev = pass.activations.back();
    Eigen::MatrixXd z = adj.matrix * prev * weights;
    pass.activations.push_back(z.cwiseMax(0.0));
  }
  pass.logits = pass.activations.back() * model.head_weights +
                Eigen::VectorXd::Constant(features.rows(), model.head_bias);
  pass.probabilities = pass.logits.unaryExpr([](double x) { return detail::sigmoid(x); });
  return pass;
}

/// Mean binary cross-entropy over the two training nodes only.
inline double training_loss(const Eigen::VectorXd& probabilities,
                            const GraphProjection& projection) {
  projection.validate_train_pair(Errc::no_labeled_pair);
  double p_won = detail::clamp_probability(probabilities(projection.train_won));
  double p_lost = detail::clamp_probability(probabilities(projection.train_lost));
  return -0.5 * (std::log(p_won) + std::log(1.0 - p_lost));
}

struct TrainingOutcome {
  std::vector<double> losses;   // initial loss plus one entry per epoch
  Eigen::MatrixXd embeddings;   // final H^L
  Eigen::VectorXd probabilities;
};

/// The initialization training actually starts from. ReLU layers with a
/// two-node loss can be born stuck: when the final hidden row of both
/// training nodes is all zero, every gradient (including the head bias,
/// whose two contributions cancel at p = 0.5) is exactly zero and descent
/// can never move. Such starts are rejected and redrawn from a derived
/// stream, deterministically per seed.
inline GcnModel initial_model(const GraphProjection& projection, const Eigen::MatrixXd& features,
                              const TrainConfig& config) {
  constexpr int kMaxAttempts = 16;
  NormalizedAdjacency adj = normalize_adjacency(projection, config.variant);
  GcnModel model;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    model = init_gcn(features.cols(), config, attempt);
    GcnForward pass = gcn_forward(model, adj, features);
    const Eigen::MatrixXd& final_hidden = pass.activations.back();
    if (final_hidden.row(projection.train_won).maxCoeff() > 0.0 ||
        final_hidden.row(projection.train_lost).maxCoeff() > 0.0)
      return model;
  }
  return model;  // nothing can activate (e.g. all-zero features); train flat
}

/// Full-batch gradient descent on the two-node cross-entropy, with exact
/// layer-wise backpropagation through the spectral propagation. Layer
/// weights and head are trained jointly unless config.frozen_layers keeps
/// the layers at their random initialization.
inline std::pair<GcnModel, TrainingOutcome> train_gcn(const GraphProjection& projection,
                                                      const Eigen::MatrixXd& features,
                                                      const TrainConfig& config) {
  config.validate();
  projection.validate_train_pair(Errc::no_labeled_pair);
  if (static_cast<std::size_t>(features.rows()) != projection.size())
    fail(Errc::dimension_mismatch, "feature rows do not match projection order");

  GcnModel model = initial_model(projection, features, config);
  NormalizedAdjacency adj = normalize_adjacency(projection, config.variant);
  const auto n = features.rows();
  const std::size_t layer_count = model.layer_weights.size();

  // adj * X never changes; computing it once removes the N^2 x F product
  // from the per-epoch cost.
  const Eigen::MatrixXd mixed_input = adj.matrix * features;

  TrainingOutcome outcome;
  std::vector<Eigen::MatrixXd> mixed(layer_count);  // adj * H^{i-1}
  std::vector<Eigen::MatrixXd> pre(layer_count);    // Z_i before ReLU
  std::vector<Eigen::MatrixXd> act(layer_count);    // H_i

  auto forward = [&]() {
    for (std::size_t i = 0; i < layer_count; ++i) {
      mixed[i] = i == 0 ? mixed_input : adj.matrix * act[i - 1];
      pre[i] = mixed[i] * model.layer_weights[i];
      act[i] = pre[i].cwiseMax(0.0);
    }
    Eigen::VectorXd logits =
        act.back() * model.head_weights + Eigen::VectorXd::Constant(n, model.head_bias);
    return Eigen::VectorXd(logits.unaryExpr([](double x) { return detail::sigmoid(x); }));
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Eigen::VectorXd prob = forward();
    double loss = training_loss(prob, projection);
    if (!std::isfinite(loss))
      fail(Errc::non_finite_loss, "loss diverged at epoch " + std::to_string(epoch));
    outcome.losses.push_back(loss);

    // d(loss)/d(logit): only the two training nodes contribute.
    Eigen::VectorXd grad_logits = Eigen::VectorXd::Zero(n);
    grad_logits(projection.train_won) = -0.5 * (1.0 - prob(projection.train_won));
    grad_logits(projection.train_lost) = 0.5 * prob(projection.train_lost);

    Eigen::VectorXd grad_head = act.back().transpose() * grad_logits;
    double grad_bias = grad_logits.sum();
    Eigen::MatrixXd grad_act = grad_logits * model.head_weights.transpose();

    std::vector<Eigen::MatrixXd> grad_weights(layer_count);
    for (std::size_t i = layer_count; i-- > 0;) {
      Eigen::MatrixXd grad_pre =
          grad_act.cwiseProduct((pre[i].array() > 0.0).cast<double>().matrix());
      grad_weights[i] = mixed[i].transpose() * grad_pre;
      if (i > 0)
        grad_act = adj.matrix.transpose() * (grad_pre * model.layer_weights[i].transpose());
    }

    if (!config.frozen_layers)
      for (std::size_t i = 0; i < layer_count; ++i)
        model.layer_weights[i] -= config.learning_rate * grad_weights[i];
    model.head_weights -= config.learning_rate * grad_head;
    model.head_bias -= config.learning_rate * grad_bias;
  }

  Eigen::VectorXd prob = forward();
  double final_loss = training_loss(prob, projection);
  if (!std::isfinite(final_loss))
    fail(Errc::non_finite_loss, "loss diverged at epoch " + std::to_string(config.epochs));
  outcome.losses.push_back(final_loss);
  outcome.embeddings = act.back();
  outcome.probabilities = prob;
  return {std::move(model), std::move(outcome)};
}

struct Prediction {
  Eigen::VectorXd probabilities;
  std::vector<SaleStatus> classes;
};

/// Won strictly above 0.5; an exact 0.5 resolves to Lost.
inline Prediction gcn_predict(const GcnModel& model, const NormalizedAdjacency& adj,
                              const Eigen::MatrixXd& features) {
  Prediction prediction;
  prediction.probabilities = gcn_forward(model, adj, features).probabilities;
  prediction.classes.reserve(static_cast<std::size_t>(prediction.probabilities.size()));
  for (Eigen::Index v = 0; v < prediction.probabilities.size(); ++v)
    prediction.classes.push_back(prediction.probabilities(v) > 0.5 ? SaleStatus::won
                                                                   : SaleStatus::lost);
  return prediction;
}

// ---------------------------------------------------------------------------
// Plain-text model files. Values are written with 17 significant digits so a
// save/load round trip reproduces every weight bit-for-bit.

inline void save_model(const GcnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  char buf[64];
  auto put = [&](double value) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << buf;
  };
  out << "crmgraph-gcn 1\n";
  out << "variant " << to_string(model.variant) << "\n";
  out << "seed " << model.seed << "\n";
  out << "dims " << model.input_dim();
  for (const auto& weights : model.layer_weights) out << ' ' << weights.cols();
  out << "\n";
  for (const auto& weights : model.layer_weights) {
    for (Eigen::Index r = 0; r < weights.rows(); ++r)
      for (Eigen::Index c = 0; c < weights.cols(); ++c) {
        put(weights(r, c));
        out << (c + 1 == weights.cols() ? '\n' : ' ');
      }
  }
  out << "head\n";
  for (Eigen::Index i = 0; i < model.head_weights.size(); ++i) {
    put(model.head_weights(i));
    out << (i + 1 == model.head_weights.size() ? '\n' : ' ');
  }
  out << "bias ";
  put(model.head_bias);
  out << "\n";
  if (!out.flush()) fail(Errc::io_error, "write failed for " + path.string());
}

inline GcnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  auto expect = [&](const std::string& want) {
    std::string got;
    if (!(in >> got) || got != want)
      fail(Errc::malformed_file, path.string() + ": expected '" + want + "'");
  };
  GcnModel model;
  expect("crmgraph-gcn");
  int version = 0;
  in >> version;
  if (version != 1) fail(Errc::malformed_file, "unsupported model version");
  expect("variant");
  std::string variant;
  in >> variant;
  model.variant = parse_variant(variant);
  expect("seed");
  in >> model.seed;
  expect("dims");
  std::vector<Eigen::Index> dims;
  {
    std::string rest;
    std::getline(in, rest);
    std::istringstream dims_in(rest);
    Eigen::Index d;
    while (dims_in >> d) dims.push_back(d);
  }
  if (dims.size() < 2) fail(Errc::malformed_file, "dims line needs input and output sizes");
  for (std::size_t i = 1; i < dims.size(); ++i) {
    Eigen::MatrixXd weights(dims[i - 1], dims[i]);
    for (Eigen::Index r = 0; r < weights.rows(); ++r)
      for (Eigen::Index c = 0; c < weights.cols(); ++c)
        if (!(in >> weights(r, c))) fail(Errc::malformed_file, "truncated weight block");
    model.layer_weights.push_back(std::move(weights));
  }
  expect("head");
  model.head_weights.resize(dims.back());
  for (Eigen::Index i = 0; i < model.head_weights.size(); ++i)
    if (!(in >> model.head_weights(i))) fail(Errc::malformed_file, "truncated head weights");
  expect("bias");
  if (!(in >> model.head_bias)) fail(Errc::malformed_file, "missing bias");
  return model;
}

}  // namespace crmgraph
