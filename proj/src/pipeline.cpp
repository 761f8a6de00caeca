#include "ctp/pipeline.hpp"

namespace ctp {

PreparedData prepare_data(std::span<const LabeledDocument> docs, const SplitSpec& split,
                          const FeatureOptions& features) {
  PreparedData data;
  data.split = split_train_test(docs, split);
  data.vocab = build_vocabulary(data.split.train, features.tokenizer, features.min_doc_fraction);
  data.train = vectorize(data.split.train, data.vocab, features.tokenizer, features.binary);
  data.test = vectorize(data.split.test, data.vocab, features.tokenizer, features.binary);
  data.train_labels = labels_of(data.split.train);
  data.test_labels = labels_of(data.split.test);
  return data;
}

RunResult run_hybrid(std::span<const LabeledDocument> docs, const PipelineConfig& config) {
  RunResult result;
  result.data = prepare_data(docs, config.split, config.features);
  const auto& d = result.data;
  result.model = config.cluster_before_split
                     ? hybrid_fit_cluster_all(d.train, d.train_labels, d.test, config.k, config.spec, config.seed,
                                              d.vocab, config.hybrid)
                     : hybrid_fit(d.train, d.train_labels, config.k, config.spec, config.seed, d.vocab, config.hybrid);
  result.report = hybrid_evaluate(result.model, d.test, d.test_labels);
  return result;
}

Json run_report_json(const RunResult& result, const PipelineConfig& config) {
  Json j = to_json(result.report);
  // "auc" above is pooled over all test rows; this one is the unweighted
  // mean over clusters whose test rows hold both labels.
  double auc_sum = 0.0;
  int auc_count = 0;
  for (const auto& sub : result.report.per_cluster)
    if (sub.auc) {
      auc_sum += *sub.auc;
      ++auc_count;
    }
  j["mean_cluster_auc"] = auc_count > 0 ? Json(auc_sum / auc_count) : Json(nullptr);
  j["k"] = config.k;
  j["cluster_sizes"] = result.model.train_cluster_sizes;
  std::vector<std::size_t> test_sizes;
  for (const auto& sub : result.report.per_cluster) test_sizes.push_back(sub.n_samples);
  j["test_cluster_sizes"] = test_sizes;
  j["classifier"] = std::string(classifier_kind_name(config.spec.kind));
  j["seed"] = config.seed;
  j["train_fraction"] = config.split.train_fraction;
  j["n_train"] = result.data.train.n_rows();
  j["n_test"] = result.data.test.n_rows();
  j["vocabulary_size"] = result.data.vocab.size();
  j["cluster_before_split"] = config.cluster_before_split;
  j["kmeans_objective"] = result.model.kmeans.objective;
  j["kmeans_iterations"] = result.model.kmeans.iterations_run;
  j["warnings"] = result.model.warnings;
  return j;
}

}  // namespace ctp
