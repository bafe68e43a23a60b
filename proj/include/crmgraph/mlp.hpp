#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "crmgraph/error.hpp"
#include "crmgraph/gcn.hpp"
#include "crmgraph/rng.hpp"

namespace crmgraph {

struct MlpConfig {
  std::vector<int> hidden = {64, 32};
  double learning_rate = 0.01;
  int epochs = 200;
  std::uint32_t seed = 13;

  void validate() const {
    if (learning_rate <= 0.0) fail(Errc::bad_config, "learning rate must be positive");
    if (epochs < 1) fail(Errc::bad_config, "epochs must be >= 1");
    if (hidden.empty()) fail(Errc::bad_config, "need at least one hidden layer");
    for (int dim : hidden)
      if (dim < 1) fail(Errc::bad_config, "hidden dims must be >= 1");
  }
};

/// Plain feed-forward network: dense ReLU layers with biases and a sigmoid
/// output unit, trained full-batch on mean binary cross-entropy.
struct MlpModel {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd head_weights;
  double head_bias = 0.0;

  Eigen::Index input_dim() const { return weights.front().rows(); }
};

inline MlpModel init_mlp(Eigen::Index input_dim, const MlpConfig& config) {
  config.validate();
  MlpModel model;
  Rng rng(config.seed);
  Eigen::Index prev = input_dim;
  for (int dim : config.hidden) {
    model.weights.push_back(detail::xavier_uniform(prev, dim, rng));
    model.biases.push_back(Eigen::VectorXd::Zero(dim));
    prev = dim;
  }
  model.head_weights = detail::xavier_uniform(prev, 1, rng).col(0);
  model.head_bias = 0.0;
  return model;
}

inline Eigen::VectorXd mlp_probabilities(const MlpModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.input_dim())
    fail(Errc::dimension_mismatch, "expected " + std::to_string(model.input_dim()) +
                                       " features, got " + std::to_string(X.cols()));
  Eigen::MatrixXd h = X;
  for (std::size_t i = 0; i < model.weights.size(); ++i)
    h = ((h * model.weights[i]).rowwise() + model.biases[i].transpose()).cwiseMax(0.0);
  Eigen::VectorXd logits =
      h * model.head_weights + Eigen::VectorXd::Constant(X.rows(), model.head_bias);
  return logits.unaryExpr([](double x) { return detail::sigmoid(x); });
}

/// Mean BCE across all samples, probabilities clamped away from 0 and 1.
inline double mlp_loss(const Eigen::VectorXd& probabilities, const std::vector<int>& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    double p = detail::clamp_probability(probabilities(i));
    total += y[static_cast<std::size_t>(i)] ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(probabilities.size());
}

inline std::pair<MlpModel, std::vector<double>> train_mlp(const Eigen::MatrixXd& X,
                                                          const std::vector<int>& y,
                                                          const MlpConfig& config = {}) {
  config.validate();
  if (static_cast<std::size_t>(X.rows()) != y.size())
    fail(Errc::dimension_mismatch, "label count does not match design matrix rows");

  MlpModel model = init_mlp(X.cols(), config);
  const auto n = X.rows();
  const std::size_t layer_count = model.weights.size();
  Eigen::VectorXd targets(n);
  for (Eigen::Index i = 0; i < n; ++i) targets(i) = y[static_cast<std::size_t>(i)];

  std::vector<double> losses;
  std::vector<Eigen::MatrixXd> pre(layer_count), act(layer_count);
  auto forward = [&]() {
    for (std::size_t i = 0; i < layer_count; ++i) {
      const Eigen::MatrixXd& prev = i == 0 ? X : act[i - 1];
      pre[i] = (prev * model.weights[i]).rowwise() + model.biases[i].transpose();
      act[i] = pre[i].cwiseMax(0.0);
    }
    Eigen::VectorXd logits =
        act.back() * model.head_weights + Eigen::VectorXd::Constant(n, model.head_bias);
    return Eigen::VectorXd(logits.unaryExpr([](double x) { return detail::sigmoid(x); }));
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Eigen::VectorXd prob = forward();
    double loss = mlp_loss(prob, y);
    if (!std::isfinite(loss))
      fail(Errc::non_finite_loss, "loss diverged at epoch " + std::to_string(epoch));
    losses.push_back(loss);

    // mean-BCE through sigmoid: d(loss)/d(logit) = (p - t) / n
    Eigen::VectorXd grad_logits = (prob - targets) / static_cast<double>(n);
    Eigen::VectorXd grad_head = act.back().transpose() * grad_logits;
    double grad_head_bias = grad_logits.sum();
    Eigen::MatrixXd grad_act = grad_logits * model.head_weights.transpose();

    for (std::size_t i = layer_count; i-- > 0;) {
      Eigen::MatrixXd grad_pre =
          grad_act.cwiseProduct((pre[i].array() > 0.0).cast<double>().matrix());
      const Eigen::MatrixXd& prev = i == 0 ? X : act[i - 1];
      Eigen::MatrixXd grad_weights = prev.transpose() * grad_pre;
      Eigen::VectorXd grad_bias = grad_pre.colwise().sum();
      if (i > 0) grad_act = grad_pre * model.weights[i].transpose();
      model.weights[i] -= config.learning_rate * grad_weights;
      model.biases[i] -= config.learning_rate * grad_bias;
    }
    model.head_weights -= config.learning_rate * grad_head;
    model.head_bias -= config.learning_rate * grad_head_bias;
  }

  Eigen::VectorXd prob = forward();
  double final_loss = mlp_loss(prob, y);
  if (!std::isfinite(final_loss))
    fail(Errc::non_finite_loss, "loss diverged at epoch " + std::to_string(config.epochs));
  losses.push_back(final_loss);
  return {std::move(model), std::move(losses)};
}

struct MlpPrediction {
  std::vector<double> scores;
  std::vector<int> classes;  // threshold 0.5, tie resolves to Lost
};

inline MlpPrediction predict_mlp(const MlpModel& model, const Eigen::MatrixXd& X) {
  Eigen::VectorXd prob = mlp_probabilities(model, X);
  MlpPrediction prediction;
  prediction.scores.assign(prob.data(), prob.data() + prob.size());
  prediction.classes.reserve(static_cast<std::size_t>(prob.size()));
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    prediction.classes.push_back(prob(i) > 0.5 ? 1 : 0);
  return prediction;
}

}  // namespace crmgraph
