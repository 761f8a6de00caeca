#include "ctp/evaluation.hpp"

#include "ctp/io.hpp"

#include <algorithm>
#include <numeric>

namespace ctp {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::LengthMismatch, std::to_string(a) + " labels vs " + std::to_string(b) + " predictions");
  if (a == 0) throw Error(ErrorCode::EmptyInput, "nothing to evaluate");
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> labels, std::span<const Label> predicted) {
  check_lengths(labels.size(), predicted.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == Label::Positive;
    const bool guess = predicted[i] == Label::Positive;
    if (actual && guess) ++cm.tp;
    else if (!actual && guess) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const Label> labels, std::span<const double> scores, double threshold) {
  check_lengths(labels.size(), scores.size());
  std::vector<Label> predicted(scores.size());
  std::transform(scores.begin(), scores.end(), predicted.begin(), [&](double s) { return from_bool(s >= threshold); });
  return confusion(labels, predicted);
}

double accuracy(const ConfusionMatrix& cm) {
  const std::size_t total = cm.tp + cm.fn + cm.fp + cm.tn;
  if (total == 0) throw Error(ErrorCode::EmptyMatrix, "accuracy of an empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
}

double baseline_accuracy(std::span<const Label> labels) {
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "baseline of no labels");
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Positive));
  return static_cast<double>(std::max(pos, labels.size() - pos)) / static_cast<double>(labels.size());
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
  return area;
}

RocCurve roc_curve(std::span<const Label> labels, std::span<const double> scores) {
  check_lengths(labels.size(), scores.size());
  const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Positive));
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::OneClassOnly, "ROC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] == Label::Positive ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos)});
  }
  // The final block already lands on (1,1); the explicit endpoint keeps the
  // shape contract regardless.
  if (curve.points.back() != RocPoint{1.0, 1.0}) curve.points.push_back({1.0, 1.0});
  curve.auc = trapezoid_area(curve.points);
  return curve;
}

std::string roc_csv(const RocCurve& curve) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : curve.points) out += format_fixed(p.fpr, 9) + "," + format_fixed(p.tpr, 9) + "\n";
  return out;
}

void emit_roc_csv(const RocCurve& curve, const std::filesystem::path& path) { write_file_atomic(path, roc_csv(curve)); }

EvaluationReport evaluate(std::span<const Label> labels, std::span<const double> scores,
                          std::span<const Label> predicted) {
  if (labels.size() != scores.size() || labels.size() != predicted.size())
    throw Error(ErrorCode::LengthMismatch, "labels, scores and predictions differ in length");
  EvaluationReport report;
  report.n_samples = labels.size();
  if (labels.empty()) return report;
  report.confusion = confusion(labels, predicted);
  report.accuracy = accuracy(report.confusion);
  report.baseline_accuracy = baseline_accuracy(labels);
  const auto n_pos = std::count(labels.begin(), labels.end(), Label::Positive);
  if (n_pos > 0 && static_cast<std::size_t>(n_pos) < labels.size()) {
    report.roc = roc_curve(labels, scores);
    report.auc = report.roc->auc;
  }
  return report;
}

EvaluationReport evaluate(std::span<const Label> labels, std::span<const double> scores, double threshold) {
  std::vector<Label> predicted(scores.size());
  std::transform(scores.begin(), scores.end(), predicted.begin(), [&](double s) { return from_bool(s >= threshold); });
  return evaluate(labels, scores, predicted);
}

}  // namespace ctp
