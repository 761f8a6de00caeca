#ifndef CTP_HYBRID_HPP
#define CTP_HYBRID_HPP

#include "ctp/common.hpp"
#include "ctp/evaluation.hpp"
#include "ctp/featurizer.hpp"
#include "ctp/kmeans.hpp"
#include "ctp/linear.hpp"
#include "ctp/tree.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ctp {

enum class ClassifierKind { Cart, Forest, Logistic, Svm };

std::string_view classifier_kind_name(ClassifierKind kind);

struct ForestParams {
  ForestConfig forest;
  TreeConfig tree;
};

using ClassifierParams = std::variant<TreeConfig, ForestParams, GdConfig>;

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Forest;
  ClassifierParams params = ForestParams{};

  static ClassifierSpec cart(TreeConfig config = {}) { return {ClassifierKind::Cart, config}; }
  static ClassifierSpec forest(ForestParams params = {}) { return {ClassifierKind::Forest, params}; }
  static ClassifierSpec logistic(GdConfig config = GdConfig::logistic_defaults()) { return {ClassifierKind::Logistic, config}; }
  static ClassifierSpec svm(GdConfig config = GdConfig::svm_defaults()) { return {ClassifierKind::Svm, config}; }

  /// Throws InvalidArgument when the parameter type does not match the kind.
  void validate() const;
};

/// Stand-in for a cluster whose training rows all carry one label.
struct ConstantClassifier {
  Label label = Label::Negative;
  bool operator==(const ConstantClassifier&) const = default;
};

using FittedClassifier = std::variant<ConstantClassifier, Tree, ForestModel, LinearModel>;

/// Fits `spec` with every seed inside it replaced by `seed`. Single-label
/// training data yields a ConstantClassifier.
FittedClassifier fit_classifier(const ClassifierSpec& spec, const FeatureMatrix& matrix, std::span<const Label> labels,
                                Seed seed);

double classifier_score(const FittedClassifier& classifier, const VectorXd& row);
double classifier_threshold(const FittedClassifier& classifier);

struct HybridOptions {
  int max_iterations = 100;
  bool normalize_rows = false;
};

struct ClusterThenPredictModel {
  KMeansModel kmeans;
  std::vector<FittedClassifier> per_cluster;
  Vocabulary vocab;
  ClassifierSpec spec;
  Seed master_seed = 0;
  std::vector<std::size_t> train_cluster_sizes;
  std::vector<std::string> warnings;
};

/// Seed of the clustering stream.
Seed kmeans_seed(Seed master_seed);
/// Seed of the classifier for cluster j.
Seed cluster_seed(Seed master_seed, int cluster);

ClusterThenPredictModel hybrid_fit(const FeatureMatrix& train_matrix, std::span<const Label> train_labels, int k,
                                   const ClassifierSpec& spec, Seed master_seed, const Vocabulary& vocab = {},
                                   const HybridOptions& options = {});

/// Clusters training and test rows together before fitting the per-cluster
/// classifiers on the training rows only. Test labels are never read.
ClusterThenPredictModel hybrid_fit_cluster_all(const FeatureMatrix& train_matrix, std::span<const Label> train_labels,
                                               const FeatureMatrix& test_matrix, int k, const ClassifierSpec& spec,
                                               Seed master_seed, const Vocabulary& vocab = {},
                                               const HybridOptions& options = {});

struct RoutedScore {
  int cluster = 0;
  double score = 0.0;
  Label predicted = Label::Negative;
};

std::vector<RoutedScore> hybrid_predict(const ClusterThenPredictModel& model, const FeatureMatrix& test_matrix);

EvaluationReport hybrid_evaluate(const ClusterThenPredictModel& model, const FeatureMatrix& test_matrix,
                                 std::span<const Label> test_labels);

enum class Interpretability { High, Low };

struct ComparisonRow {
  std::string technique;
  double accuracy = 0.0;
  std::optional<double> auc;
  Interpretability interpretability = Interpretability::High;
};

struct CompareOptions {
  ForestParams forest;
  TreeConfig cart;
  GdConfig logistic = GdConfig::logistic_defaults();
  GdConfig svm = GdConfig::svm_defaults();
  HybridOptions hybrid;
};

/// Hybrid (forest per cluster), SVM, CART, Random forest, Logistic Regression,
/// in that order. Standalone models use seed derive_seed(seed, 0).
std::vector<ComparisonRow> compare_all(const FeatureMatrix& train_matrix, std::span<const Label> train_labels,
                                       const FeatureMatrix& test_matrix, std::span<const Label> test_labels, int k,
                                       Seed seed, const CompareOptions& options = {});

/// Scores and predictions of a single fitted classifier over a matrix.
EvaluationReport evaluate_classifier(const FittedClassifier& classifier, const FeatureMatrix& matrix,
                                     std::span<const Label> labels);

}  // namespace ctp

#endif  // CTP_HYBRID_HPP
