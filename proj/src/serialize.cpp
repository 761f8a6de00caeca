#include "ctp/serialize.hpp"

#include "ctp/io.hpp"

namespace ctp {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string_view interpretability_name(Interpretability i) { return i == Interpretability::High ? "High" : "Low"; }

Json to_json(const KMeansModel& model) {
  Json centroids = Json::array();
  for (Eigen::Index j = 0; j < model.centroids.rows(); ++j) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < model.centroids.cols(); ++c) row.push_back(model.centroids(j, c));
    centroids.push_back(std::move(row));
  }
  Json j;
  j["k"] = model.k();
  j["centroids"] = std::move(centroids);
  j["objective"] = model.objective;
  j["iterations_run"] = model.iterations_run;
  return j;
}

Json to_json(const Tree& tree) {
  Json nodes = Json::array();
  for (const auto& n : tree.nodes) {
    Json node;
    if (n.is_leaf()) {
      node["positive_fraction"] = n.positive_fraction;
      node["sample_count"] = n.sample_count;
    } else {
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
      node["positive_fraction"] = n.positive_fraction;
      node["sample_count"] = n.sample_count;
    }
    nodes.push_back(std::move(node));
  }
  Json j;
  j["n_cols"] = tree.n_cols;
  j["nodes"] = std::move(nodes);
  return j;
}

Tree tree_from_json(const Json& j) {
  try {
    Tree tree;
    tree.n_cols = j.at("n_cols").get<std::size_t>();
    for (const auto& node : j.at("nodes")) {
      TreeNode n;
      n.positive_fraction = node.at("positive_fraction").get<double>();
      n.sample_count = node.at("sample_count").get<int>();
      if (node.contains("feature")) {
        n.feature = node.at("feature").get<int>();
        n.threshold = node.at("threshold").get<double>();
        n.left = node.at("left").get<int>();
        n.right = node.at("right").get<int>();
      }
      tree.nodes.push_back(n);
    }
    const auto count = static_cast<int>(tree.nodes.size());
    if (count == 0) throw Error(ErrorCode::InvalidArgument, "tree has no nodes");
    for (const auto& n : tree.nodes) {
      if (n.is_leaf()) continue;
      if (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count ||
          static_cast<std::size_t>(n.feature) >= tree.n_cols)
        throw Error(ErrorCode::InvalidArgument, "tree node references out of range");
    }
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad tree JSON: ") + e.what());
  }
}

Json to_json(const ForestModel& forest) {
  Json trees = Json::array();
  for (const auto& t : forest.trees) trees.push_back(to_json(t));
  Json j;
  j["mtry"] = forest.mtry;
  j["bootstrap"] = forest.bootstrap;
  j["seed"] = forest.seed;
  j["n_cols"] = forest.n_cols;
  j["trees"] = std::move(trees);
  return j;
}

ForestModel forest_from_json(const Json& j) {
  try {
    ForestModel forest;
    forest.mtry = j.at("mtry").get<int>();
    forest.bootstrap = j.at("bootstrap").get<bool>();
    forest.seed = j.at("seed").get<Seed>();
    forest.n_cols = j.at("n_cols").get<std::size_t>();
    for (const auto& t : j.at("trees")) forest.trees.push_back(tree_from_json(t));
    if (forest.trees.empty()) throw Error(ErrorCode::InvalidArgument, "forest has no trees");
    return forest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad forest JSON: ") + e.what());
  }
}

Json to_json(const LinearModel& model) {
  Json j;
  j["kind"] = model.kind == LinearKind::Logistic ? "logistic" : "svm";
  j["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  j["bias"] = model.bias;
  return j;
}

Json to_json(const FittedClassifier& classifier) {
  struct Visitor {
    Json operator()(const ConstantClassifier& c) const {
      Json j;
      j["kind"] = "constant";
      j["label"] = std::string(label_name(c.label));
      return j;
    }
    Json operator()(const Tree& t) const {
      Json j;
      j["kind"] = "cart";
      j["tree"] = to_json(t);
      return j;
    }
    Json operator()(const ForestModel& f) const {
      Json j;
      j["kind"] = "forest";
      j["forest"] = to_json(f);
      return j;
    }
    Json operator()(const LinearModel& m) const { return to_json(m); }
  };
  return std::visit(Visitor{}, classifier);
}

Json to_json(const EvaluationReport& report) {
  Json j;
  j["n"] = report.n_samples;
  j["accuracy"] = optional_number(report.accuracy);
  j["auc"] = optional_number(report.auc);
  j["baseline_accuracy"] = optional_number(report.baseline_accuracy);
  if (report.accuracy) {
    j["confusion"] = {{"tp", report.confusion.tp}, {"fp", report.confusion.fp},
                      {"fn", report.confusion.fn}, {"tn", report.confusion.tn}};
  } else {
    j["confusion"] = nullptr;
  }
  if (!report.per_cluster.empty()) {
    Json per = Json::object();
    for (const auto& sub : report.per_cluster) per[std::to_string(sub.cluster)] = to_json(sub);
    j["per_cluster"] = std::move(per);
  }
  return j;
}

Json to_json(std::span<const ComparisonRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["technique"] = r.technique;
    j["accuracy"] = r.accuracy;
    j["auc"] = optional_number(r.auc);
    j["interpretability"] = std::string(interpretability_name(r.interpretability));
    out.push_back(std::move(j));
  }
  return out;
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::string csv = "technique,accuracy,auc,interpretability\n";
  for (const auto& r : rows) {
    csv += csv_field(r.technique) + "," + format_fixed(r.accuracy, 6) + "," + (r.auc ? format_fixed(*r.auc, 7) : "") +
           "," + std::string(interpretability_name(r.interpretability)) + "\n";
  }
  return csv;
}

}  // namespace ctp
