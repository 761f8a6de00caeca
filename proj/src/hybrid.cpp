#include "ctp/hybrid.hpp"

#include "ctp/random.hpp"

#include <algorithm>

namespace ctp {

std::string_view classifier_kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Cart: return "cart";
    case ClassifierKind::Forest: return "forest";
    case ClassifierKind::Logistic: return "logistic";
    case ClassifierKind::Svm: return "svm";
  }
  return "unknown";
}

void ClassifierSpec::validate() const {
  bool ok = false;
  switch (kind) {
    case ClassifierKind::Cart: ok = std::holds_alternative<TreeConfig>(params); break;
    case ClassifierKind::Forest: ok = std::holds_alternative<ForestParams>(params); break;
    case ClassifierKind::Logistic:
    case ClassifierKind::Svm: ok = std::holds_alternative<GdConfig>(params); break;
  }
  if (!ok) throw Error(ErrorCode::InvalidArgument, "parameters do not match classifier kind " +
                                                       std::string(classifier_kind_name(kind)));
}

FittedClassifier fit_classifier(const ClassifierSpec& spec, const FeatureMatrix& matrix, std::span<const Label> labels,
                                Seed seed) {
  spec.validate();
  if (matrix.n_rows() != labels.size())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(labels.size()) + " labels for " +
                                              std::to_string(matrix.n_rows()) + " rows");
  if (labels.empty()) throw Error(ErrorCode::EmptyMatrix, "no training rows");
  if (std::all_of(labels.begin(), labels.end(), [&](Label l) { return l == labels.front(); }))
    return ConstantClassifier{labels.front()};

  switch (spec.kind) {
    case ClassifierKind::Cart: return cart_fit(matrix, labels, std::get<TreeConfig>(spec.params), seed);
    case ClassifierKind::Forest: {
      auto params = std::get<ForestParams>(spec.params);
      params.forest.seed = seed;
      return forest_fit(matrix, labels, params.forest, params.tree);
    }
    case ClassifierKind::Logistic: {
      auto config = std::get<GdConfig>(spec.params);
      config.seed = seed;
      return logistic_fit(matrix, labels, config);
    }
    case ClassifierKind::Svm: {
      auto config = std::get<GdConfig>(spec.params);
      config.seed = seed;
      return svm_fit(matrix, labels, config);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown classifier kind");
}

double classifier_score(const FittedClassifier& classifier, const VectorXd& row) {
  struct Visitor {
    const VectorXd& row;
    double operator()(const ConstantClassifier& c) const { return c.label == Label::Positive ? 1.0 : 0.0; }
    double operator()(const Tree& t) const { return predict_score(t, row); }
    double operator()(const ForestModel& f) const { return predict_score(f, row); }
    double operator()(const LinearModel& m) const { return linear_score(m, row); }
  };
  return std::visit(Visitor{row}, classifier);
}

double classifier_threshold(const FittedClassifier& classifier) {
  if (const auto* linear = std::get_if<LinearModel>(&classifier)) return linear->decision_threshold();
  return 0.5;
}

Seed kmeans_seed(Seed master_seed) { return derive_seed(master_seed, std::string_view("kmeans")); }

Seed cluster_seed(Seed master_seed, int cluster) { return derive_seed(master_seed, static_cast<std::uint64_t>(cluster)); }

namespace {

void fit_per_cluster(ClusterThenPredictModel& model, const FeatureMatrix& train_matrix,
                     std::span<const Label> train_labels, std::span<const int> train_assignments) {
  const int k = model.kmeans.k();
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < train_assignments.size(); ++i)
    members[static_cast<std::size_t>(train_assignments[i])].push_back(i);

  model.per_cluster.clear();
  model.train_cluster_sizes.clear();
  for (int j = 0; j < k; ++j) {
    const auto& rows = members[static_cast<std::size_t>(j)];
    model.train_cluster_sizes.push_back(rows.size());
    if (rows.empty()) {
      // Only reachable when clustering also saw test rows.
      model.warnings.push_back("cluster " + std::to_string(j) + " has no training rows; predicting Negative");
      model.per_cluster.emplace_back(ConstantClassifier{Label::Negative});
      continue;
    }
    const auto sub = select_rows(train_matrix, rows);
    std::vector<Label> sub_labels;
    sub_labels.reserve(rows.size());
    for (auto i : rows) sub_labels.push_back(train_labels[i]);
    auto fitted = fit_classifier(model.spec, sub, sub_labels, cluster_seed(model.master_seed, j));
    if (std::holds_alternative<ConstantClassifier>(fitted))
      model.warnings.push_back("cluster " + std::to_string(j) + " has a single label; using a constant classifier");
    model.per_cluster.push_back(std::move(fitted));
  }
}

void check_inputs(const FeatureMatrix& train_matrix, std::span<const Label> train_labels, int k,
                  const ClassifierSpec& spec) {
  spec.validate();
  if (train_matrix.n_rows() != train_labels.size())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(train_labels.size()) + " labels for " +
                                              std::to_string(train_matrix.n_rows()) + " rows");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
}

}  // namespace

ClusterThenPredictModel hybrid_fit(const FeatureMatrix& train_matrix, std::span<const Label> train_labels, int k,
                                   const ClassifierSpec& spec, Seed master_seed, const Vocabulary& vocab,
                                   const HybridOptions& options) {
  check_inputs(train_matrix, train_labels, k, spec);
  ClusterThenPredictModel model;
  model.spec = spec;
  model.master_seed = master_seed;
  model.vocab = vocab;
  model.kmeans = kmeans_fit(train_matrix, KMeansConfig{k, kmeans_seed(master_seed), options.max_iterations,
                                                       options.normalize_rows});
  fit_per_cluster(model, train_matrix, train_labels, model.kmeans.assignments);
  return model;
}

ClusterThenPredictModel hybrid_fit_cluster_all(const FeatureMatrix& train_matrix, std::span<const Label> train_labels,
                                               const FeatureMatrix& test_matrix, int k, const ClassifierSpec& spec,
                                               Seed master_seed, const Vocabulary& vocab,
                                               const HybridOptions& options) {
  check_inputs(train_matrix, train_labels, k, spec);
  if (test_matrix.n_cols != train_matrix.n_cols)
    throw Error(ErrorCode::DimensionMismatch, "train and test matrices differ in columns");
  FeatureMatrix all = train_matrix;
  all.rows.insert(all.rows.end(), test_matrix.rows.begin(), test_matrix.rows.end());
  all.row_ids.insert(all.row_ids.end(), test_matrix.row_ids.begin(), test_matrix.row_ids.end());

  ClusterThenPredictModel model;
  model.spec = spec;
  model.master_seed = master_seed;
  model.vocab = vocab;
  model.kmeans = kmeans_fit(all, KMeansConfig{k, kmeans_seed(master_seed), options.max_iterations, options.normalize_rows});
  const std::span<const int> train_assignments(model.kmeans.assignments.data(), train_matrix.n_rows());
  fit_per_cluster(model, train_matrix, train_labels, train_assignments);
  return model;
}

std::vector<RoutedScore> hybrid_predict(const ClusterThenPredictModel& model, const FeatureMatrix& test_matrix) {
  if (static_cast<Eigen::Index>(test_matrix.n_cols) != model.kmeans.centroids.cols())
    throw Error(ErrorCode::DimensionMismatch, "test matrix has " + std::to_string(test_matrix.n_cols) +
                                                  " columns, model expects " +
                                                  std::to_string(model.kmeans.centroids.cols()));
  std::vector<RoutedScore> out;
  out.reserve(test_matrix.n_rows());
  for (const auto& row : test_matrix.rows) {
    const VectorXd x = to_dense(row, test_matrix.n_cols);
    const int c = assign_nearest(model.kmeans, x);
    const auto& clf = model.per_cluster[static_cast<std::size_t>(c)];
    const double s = classifier_score(clf, x);
    out.push_back({c, s, from_bool(s >= classifier_threshold(clf))});
  }
  return out;
}

EvaluationReport hybrid_evaluate(const ClusterThenPredictModel& model, const FeatureMatrix& test_matrix,
                                 std::span<const Label> test_labels) {
  if (test_matrix.n_rows() != test_labels.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(test_labels.size()) + " labels for " +
                                               std::to_string(test_matrix.n_rows()) + " rows");
  const auto routed = hybrid_predict(model, test_matrix);
  const int k = model.kmeans.k();

  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < routed.size(); ++i) members[static_cast<std::size_t>(routed[i].cluster)].push_back(i);

  std::vector<double> pooled_scores(routed.size());
  std::vector<Label> predicted(routed.size());
  for (std::size_t i = 0; i < routed.size(); ++i) {
    pooled_scores[i] = routed[i].score;
    predicted[i] = routed[i].predicted;
  }

  std::vector<EvaluationReport> per_cluster;
  for (int j = 0; j < k; ++j) {
    const auto& rows = members[static_cast<std::size_t>(j)];
    std::vector<Label> l, p;
    std::vector<double> s;
    for (auto i : rows) {
      l.push_back(test_labels[i]);
      s.push_back(routed[i].score);
      p.push_back(routed[i].predicted);
    }
    auto report = evaluate(l, s, p);
    report.cluster = j;
    per_cluster.push_back(std::move(report));

    // SVM margins are not comparable across clusters; pool them after
    // per-cluster min-max rescaling.
    const auto* linear = std::get_if<LinearModel>(&model.per_cluster[static_cast<std::size_t>(j)]);
    if (linear != nullptr && linear->kind == LinearKind::Svm && !rows.empty()) {
      const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
      const double low = *lo, span = *hi - *lo;
      for (auto i : rows) pooled_scores[i] = span > 0 ? (routed[i].score - low) / span : 0.5;
    }
  }

  auto pooled = evaluate(test_labels, pooled_scores, predicted);
  pooled.per_cluster = std::move(per_cluster);
  return pooled;
}

EvaluationReport evaluate_classifier(const FittedClassifier& classifier, const FeatureMatrix& matrix,
                                     std::span<const Label> labels) {
  if (matrix.n_rows() != labels.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(labels.size()) + " labels for " +
                                               std::to_string(matrix.n_rows()) + " rows");
  const double threshold = classifier_threshold(classifier);
  std::vector<double> scores;
  std::vector<Label> predicted;
  scores.reserve(matrix.n_rows());
  for (const auto& row : matrix.rows) {
    scores.push_back(classifier_score(classifier, to_dense(row, matrix.n_cols)));
    predicted.push_back(from_bool(scores.back() >= threshold));
  }
  return evaluate(labels, scores, predicted);
}

std::vector<ComparisonRow> compare_all(const FeatureMatrix& train_matrix, std::span<const Label> train_labels,
                                       const FeatureMatrix& test_matrix, std::span<const Label> test_labels, int k,
                                       Seed seed, const CompareOptions& options) {
  if (test_matrix.n_rows() == 0) throw Error(ErrorCode::EmptyInput, "empty test set");
  std::vector<ComparisonRow> rows;
  auto add = [&](std::string name, const EvaluationReport& report, Interpretability interp) {
    rows.push_back({std::move(name), report.accuracy.value_or(0.0), report.auc, interp});
  };

  const auto hybrid = hybrid_fit(train_matrix, train_labels, k, ClassifierSpec::forest(options.forest), seed, {},
                                 options.hybrid);
  add("Proposed hybrid approach", hybrid_evaluate(hybrid, test_matrix, test_labels), Interpretability::High);

  const Seed standalone = derive_seed(seed, std::uint64_t{0});
  auto standalone_report = [&](const ClassifierSpec& spec) {
    return evaluate_classifier(fit_classifier(spec, train_matrix, train_labels, standalone), test_matrix, test_labels);
  };
  add("SVM", standalone_report(ClassifierSpec::svm(options.svm)), Interpretability::Low);
  add("CART", standalone_report(ClassifierSpec::cart(options.cart)), Interpretability::High);
  add("Random forest", standalone_report(ClassifierSpec::forest(options.forest)), Interpretability::High);
  add("Logistic Regression", standalone_report(ClassifierSpec::logistic(options.logistic)), Interpretability::Low);
  return rows;
}

}  // namespace ctp
