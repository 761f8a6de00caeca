#ifndef CTP_SERIALIZE_HPP
#define CTP_SERIALIZE_HPP

#include "ctp/evaluation.hpp"
#include "ctp/hybrid.hpp"
#include "ctp/kmeans.hpp"
#include "ctp/linear.hpp"
#include "ctp/tree.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace ctp {

using Json = nlohmann::ordered_json;

/// {k, centroids, objective, iterations_run}
Json to_json(const KMeansModel& model);

/// Preorder node array.
Json to_json(const Tree& tree);
Tree tree_from_json(const Json& j);

/// {mtry, bootstrap, seed, n_cols, trees: [...]}
Json to_json(const ForestModel& forest);
ForestModel forest_from_json(const Json& j);

/// {kind, weights, bias}
Json to_json(const LinearModel& model);

Json to_json(const FittedClassifier& classifier);

/// {accuracy, auc, baseline_accuracy, confusion:{tp,fp,fn,tn}, per_cluster:{...}}
Json to_json(const EvaluationReport& report);

Json to_json(std::span<const ComparisonRow> rows);

/// "technique,accuracy,auc,interpretability" header plus one line per row.
std::string comparison_csv(std::span<const ComparisonRow> rows);

std::string_view interpretability_name(Interpretability i);

}  // namespace ctp

#endif  // CTP_SERIALIZE_HPP
