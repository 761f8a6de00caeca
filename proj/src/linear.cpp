#include "ctp/linear.hpp"

#include <cmath>

namespace ctp {

namespace {

constexpr double kRateFloor = 1e-6;

void check_shape(const MatrixXd& x, std::span<const Label> labels, const GdConfig& config) {
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(labels.size()) + " labels for " + std::to_string(x.rows()) + " rows");
  if (x.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "no training rows");
  if (config.epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!(config.learning_rate > 0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
  if (!(config.l2_lambda >= 0)) throw Error(ErrorCode::InvalidArgument, "l2_lambda must be >= 0");
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logistic_loss(const MatrixXd& x, const VectorXd& y, const VectorXd& w, double b, double lambda) {
  const VectorXd z = (x * w).array() + b;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += softplus(z(i)) - y(i) * z(i);
  return sum / static_cast<double>(x.rows()) + 0.5 * lambda * w.squaredNorm();
}

}  // namespace

LossAndGradient logistic_loss_gradient(const MatrixXd& x, const VectorXd& y, const VectorXd& w, double b, double lambda) {
  const auto n = static_cast<double>(x.rows());
  const VectorXd z = (x * w).array() + b;
  VectorXd residual(z.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += softplus(z(i)) - y(i) * z(i);
    residual(i) = sigmoid(z(i)) - y(i);
  }
  LossAndGradient out;
  out.loss = sum / n + 0.5 * lambda * w.squaredNorm();
  out.grad_weights = x.transpose() * residual / n + lambda * w;
  out.grad_bias = residual.sum() / n;
  return out;
}

double svm_objective(const MatrixXd& x, const VectorXd& y, const VectorXd& w, double b, double lambda) {
  const VectorXd margins = y.array() * ((x * w).array() + b);
  return 0.5 * lambda * w.squaredNorm() + (1.0 - margins.array()).max(0.0).sum() / static_cast<double>(x.rows());
}

LinearModel logistic_fit(const MatrixXd& x, std::span<const Label> labels, const GdConfig& config) {
  check_shape(x, labels, config);
  VectorXd y(x.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = to_int(labels[static_cast<std::size_t>(i)]);

  LinearModel model;
  model.kind = LinearKind::Logistic;
  model.weights = VectorXd::Zero(x.cols());
  double rate = config.learning_rate;
  auto current = logistic_loss_gradient(x, y, model.weights, model.bias, config.l2_lambda);
  if (!std::isfinite(current.loss)) throw Error(ErrorCode::NonFiniteLoss, "initial logistic loss is not finite");

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    bool accepted = false;
    while (rate >= kRateFloor) {
      VectorXd w = model.weights - rate * current.grad_weights;
      const double b = model.bias - rate * current.grad_bias;
      const double loss = logistic_loss(x, y, w, b, config.l2_lambda);
      if (std::isfinite(loss) && loss < current.loss) {
        model.weights = std::move(w);
        model.bias = b;
        current = logistic_loss_gradient(x, y, model.weights, model.bias, config.l2_lambda);
        accepted = true;
        break;
      }
      rate *= 0.5;
    }
    model.training_meta.loss_trace.push_back(current.loss);
    ++model.training_meta.iterations;
    // No step below the floor lowers the loss: stationary to working precision.
    if (!accepted) break;
  }
  if (!std::isfinite(current.loss) || !model.weights.allFinite())
    throw Error(ErrorCode::NonFiniteLoss, "logistic training diverged");
  model.training_meta.final_loss = current.loss;
  return model;
}

LinearModel svm_fit(const MatrixXd& x, std::span<const Label> labels, const GdConfig& config) {
  check_shape(x, labels, config);
  if (config.l2_lambda == 0.0) throw Error(ErrorCode::LambdaZero, "step schedule 1/(lambda t) needs lambda > 0");
  const auto n = static_cast<double>(x.rows());
  VectorXd y(x.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = labels[static_cast<std::size_t>(i)] == Label::Positive ? 1.0 : -1.0;

  LinearModel model;
  model.kind = LinearKind::Svm;
  model.weights = VectorXd::Zero(x.cols());
  const double lambda = config.l2_lambda;
  const double radius = 1.0 / std::sqrt(lambda);
  VectorXd avg_w = VectorXd::Zero(x.cols());
  double avg_b = 0.0;

  for (int t = 1; t <= config.epochs; ++t) {
    const double eta = config.learning_rate / (lambda * t);
    const VectorXd margins = y.array() * ((x * model.weights).array() + model.bias);
    VectorXd coeff = VectorXd::Zero(x.rows());
    for (Eigen::Index i = 0; i < margins.size(); ++i)
      if (margins(i) < 1.0) coeff(i) = y(i);
    const VectorXd grad_w = lambda * model.weights - x.transpose() * coeff / n;
    const double grad_b = -coeff.sum() / n;
    model.weights -= eta * grad_w;
    model.bias -= eta * grad_b;
    // Projection onto the ball that contains the optimum.
    const double norm = model.weights.norm();
    if (norm > radius) model.weights *= radius / norm;
    // Running average of the iterates; the raw subgradient iterate oscillates.
    avg_w += (model.weights - avg_w) / t;
    avg_b += (model.bias - avg_b) / t;
    model.training_meta.loss_trace.push_back(svm_objective(x, y, avg_w, avg_b, lambda));
    ++model.training_meta.iterations;
  }
  model.weights = avg_w;
  model.bias = avg_b;
  if (!model.weights.allFinite() || !std::isfinite(model.bias))
    throw Error(ErrorCode::NonFiniteLoss, "svm training diverged");
  model.training_meta.final_loss = model.training_meta.loss_trace.back();
  return model;
}

LinearModel logistic_fit(const FeatureMatrix& matrix, std::span<const Label> labels, const GdConfig& config) {
  return logistic_fit(to_dense(matrix), labels, config);
}

LinearModel svm_fit(const FeatureMatrix& matrix, std::span<const Label> labels, const GdConfig& config) {
  return svm_fit(to_dense(matrix), labels, config);
}

double linear_score(const LinearModel& model, const VectorXd& row) {
  if (row.size() != model.weights.size())
    throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(row.size()) + " columns, model expects " +
                                                  std::to_string(model.weights.size()));
  const double z = model.weights.dot(row) + model.bias;
  return model.kind == LinearKind::Logistic ? sigmoid(z) : z;
}

double linear_score(const LinearModel& model, const SparseRow& row) {
  return linear_score(model, to_dense(row, static_cast<std::size_t>(model.weights.size())));
}

}  // namespace ctp
