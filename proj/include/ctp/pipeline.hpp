#ifndef CTP_PIPELINE_HPP
#define CTP_PIPELINE_HPP

#include "ctp/corpus.hpp"
#include "ctp/featurizer.hpp"
#include "ctp/hybrid.hpp"
#include "ctp/serialize.hpp"

#include <span>
#include <vector>

namespace ctp {

struct FeatureOptions {
  TokenizerConfig tokenizer;
  double min_doc_fraction = 0.005;
  bool binary = false;
};

/// Split, vocabulary from the training side, and both feature matrices.
struct PreparedData {
  TrainTestSplit split;
  Vocabulary vocab;
  FeatureMatrix train;
  FeatureMatrix test;
  std::vector<Label> train_labels;
  std::vector<Label> test_labels;
};

PreparedData prepare_data(std::span<const LabeledDocument> docs, const SplitSpec& split,
                          const FeatureOptions& features = {});

struct PipelineConfig {
  SplitSpec split;
  FeatureOptions features;
  int k = 2;
  ClassifierSpec spec = ClassifierSpec::forest();
  Seed seed = 0;
  bool cluster_before_split = false;
  HybridOptions hybrid;
};

struct RunResult {
  PreparedData data;
  ClusterThenPredictModel model;
  EvaluationReport report;
};

/// load -> split -> featurize -> hybrid_fit -> hybrid_evaluate
RunResult run_hybrid(std::span<const LabeledDocument> docs, const PipelineConfig& config);

/// Evaluation JSON extended with k, cluster sizes and run settings.
Json run_report_json(const RunResult& result, const PipelineConfig& config);

}  // namespace ctp

#endif  // CTP_PIPELINE_HPP
