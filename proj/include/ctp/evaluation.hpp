#ifndef CTP_EVALUATION_HPP
#define CTP_EVALUATION_HPP

#include "ctp/common.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctp {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Predicted Positive iff score >= threshold.
ConfusionMatrix confusion(std::span<const Label> labels, std::span<const double> scores, double threshold = 0.5);
ConfusionMatrix confusion(std::span<const Label> labels, std::span<const Label> predicted);

/// (TP + TN) / (TP + FN + FP + TN)
double accuracy(const ConfusionMatrix& cm);

/// Accuracy of always predicting the majority class.
double baseline_accuracy(std::span<const Label> labels);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// One point per distinct score (tied scores move together), bracketed by
/// (0,0) and (1,1). AUC is the trapezoidal area.
RocCurve roc_curve(std::span<const Label> labels, std::span<const double> scores);

double trapezoid_area(std::span<const RocPoint> points);

/// "fpr,tpr" header, one row per point, 9 decimal places.
std::string roc_csv(const RocCurve& curve);
void emit_roc_csv(const RocCurve& curve, const std::filesystem::path& path);

/// Metrics for one set of scored rows. Metrics are empty when there are no
/// rows; ROC and AUC are also empty when only one class is present.
struct EvaluationReport {
  int cluster = -1;  // -1 for the pooled report
  std::size_t n_samples = 0;
  ConfusionMatrix confusion;
  std::optional<double> accuracy;
  std::optional<double> baseline_accuracy;
  std::optional<RocCurve> roc;
  std::optional<double> auc;
  std::vector<EvaluationReport> per_cluster;
};

/// `scores` feed the ROC; `predicted` feed the confusion matrix.
EvaluationReport evaluate(std::span<const Label> labels, std::span<const double> scores,
                          std::span<const Label> predicted);
EvaluationReport evaluate(std::span<const Label> labels, std::span<const double> scores, double threshold = 0.5);

}  // namespace ctp

#endif  // CTP_EVALUATION_HPP
