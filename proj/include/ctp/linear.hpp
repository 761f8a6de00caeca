#ifndef CTP_LINEAR_HPP
#define CTP_LINEAR_HPP

#include "ctp/common.hpp"
#include "ctp/featurizer.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace ctp {

enum class LinearKind { Logistic, Svm };

struct GdConfig {
  double learning_rate = 0.1;
  double l2_lambda = 1e-3;
  int epochs = 200;
  Seed seed = 0;

  static GdConfig logistic_defaults() { return {}; }
  static GdConfig svm_defaults() { return {1.0, 1e-3, 200, 0}; }
};

struct TrainingMeta {
  int iterations = 0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;  // objective after every epoch
  bool operator==(const TrainingMeta&) const = default;
};

struct LinearModel {
  VectorXd weights;
  double bias = 0.0;
  LinearKind kind = LinearKind::Logistic;
  TrainingMeta training_meta;

  /// Score at or above which a row is predicted Positive.
  double decision_threshold() const { return kind == LinearKind::Logistic ? 0.5 : 0.0; }

  bool operator==(const LinearModel& o) const {
    return weights.size() == o.weights.size() && weights == o.weights && bias == o.bias && kind == o.kind &&
           training_meta == o.training_meta;
  }
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LossAndGradient {
  double loss = 0.0;
  VectorXd grad_weights;
  double grad_bias = 0.0;
};

/// Mean negative log-likelihood + (lambda/2)||w||^2, bias unregularized.
/// Labels are 0/1.
LossAndGradient logistic_loss_gradient(const MatrixXd& x, const VectorXd& y, const VectorXd& w, double b, double lambda);

/// (lambda/2)||w||^2 + mean hinge loss. Labels are -1/+1.
double svm_objective(const MatrixXd& x, const VectorXd& y, const VectorXd& w, double b, double lambda);

/// Full-batch gradient descent; the rate halves whenever a step would not
/// lower the loss, with a floor of 1e-6.
LinearModel logistic_fit(const MatrixXd& x, std::span<const Label> labels, const GdConfig& config = GdConfig::logistic_defaults());
LinearModel logistic_fit(const FeatureMatrix& matrix, std::span<const Label> labels,
                         const GdConfig& config = GdConfig::logistic_defaults());

/// Primal subgradient descent with step learning_rate / (lambda * t).
LinearModel svm_fit(const MatrixXd& x, std::span<const Label> labels, const GdConfig& config = GdConfig::svm_defaults());
LinearModel svm_fit(const FeatureMatrix& matrix, std::span<const Label> labels,
                    const GdConfig& config = GdConfig::svm_defaults());

double linear_score(const LinearModel& model, const VectorXd& row);
double linear_score(const LinearModel& model, const SparseRow& row);

}  // namespace ctp

#endif  // CTP_LINEAR_HPP
