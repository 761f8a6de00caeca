// Command-line front end: run, compare, export-tree.

#include "ctp/corpus.hpp"
#include "ctp/io.hpp"
#include "ctp/pipeline.hpp"
#include "ctp/random.hpp"
#include "ctp/serialize.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string input;
  std::string text_col = "text";
  std::string label_col = "sentiment";
  std::optional<double> label_threshold;
  std::vector<std::string> positive_labels;
  std::vector<std::string> negative_labels;
  double train_frac = 0.7;
  std::uint64_t seed = 0;
  int k = 2;
  std::string classifier = "forest";
  double min_doc_frac = 0.005;
  bool binary_features = false;
  bool cluster_before_split = false;
  bool normalize_rows = false;
  int max_iterations = 100;
  // trees
  int n_trees = 200;
  std::string mtry;
  bool no_bootstrap = false;
  std::optional<int> max_depth;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  double min_impurity_decrease = 0.0;
  // linear models
  std::optional<double> learning_rate;
  double lambda = 1e-3;
  int epochs = 200;
  // outputs
  std::string out_dir = ".";
  std::string report;
  std::string features_out;
  // export-tree
  int tree_index = 0;
  std::string dot;
  std::string save_forest;
  std::string forest_json;
  std::string vocab_path;
};

/// Failure attributable to a flag value; exits with status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_data_options(CLI::App& cmd, Options& o, bool input_required) {
  auto* in = cmd.add_option("--input", o.input, "Labeled CSV corpus")->check(CLI::ExistingFile);
  if (input_required) in->required();
  cmd.add_option("--text-col", o.text_col, "Text column name")->capture_default_str();
  cmd.add_option("--label-col", o.label_col, "Label column name")->capture_default_str();
  cmd.add_option("--label-threshold", o.label_threshold,
                 "Treat labels as numeric scores: Negative iff score <= threshold");
  cmd.add_option("--positive-label", o.positive_labels, "Label strings mapped to Positive");
  cmd.add_option("--negative-label", o.negative_labels, "Label strings mapped to Negative");
  cmd.add_option("--train-frac", o.train_frac, "Training fraction in (0,1)")
      ->capture_default_str()
      ->check(CLI::Validator(
          [](std::string& v) -> std::string {
            double x = std::stod(v);
            return x > 0.0 && x < 1.0 ? "" : "train-frac must lie strictly between 0 and 1";
          },
          "(0,1)"));
  cmd.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd.add_option("--min-doc-frac", o.min_doc_frac, "Minimum document fraction for a vocabulary term")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_flag("--binary-features", o.binary_features, "Use term presence instead of counts");
}

void add_model_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--k", o.k, "Number of clusters")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--classifier", o.classifier, "Per-cluster classifier")
      ->capture_default_str()
      ->check(CLI::IsMember({"forest", "cart", "logistic", "svm"}));
  cmd.add_flag("--cluster-before-split", o.cluster_before_split, "Cluster training and test rows together");
  cmd.add_flag("--normalize-rows", o.normalize_rows, "L2-normalize rows before clustering");
  cmd.add_option("--max-iterations", o.max_iterations, "K-means iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--learning-rate", o.learning_rate, "Gradient step (logistic) or schedule scale (svm)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--lambda", o.lambda, "L2 regularization")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd.add_option("--epochs", o.epochs, "Training epochs for linear models")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_tree_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--n-trees", o.n_trees, "Trees per forest")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--mtry", o.mtry, "Candidate features per split: integer or 'all' (default floor(sqrt(p)))");
  cmd.add_flag("--no-bootstrap", o.no_bootstrap, "Grow every tree on the full training set");
  cmd.add_option("--max-depth", o.max_depth, "Tree depth limit")->check(CLI::NonNegativeNumber);
  cmd.add_option("--min-samples-split", o.min_samples_split)->capture_default_str()->check(CLI::Range(2, 1 << 30));
  cmd.add_option("--min-samples-leaf", o.min_samples_leaf)->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--min-impurity-decrease", o.min_impurity_decrease)
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

ctp::LabelRule label_rule(const Options& o) {
  if (o.label_threshold) return ctp::ThresholdLabelRule{*o.label_threshold};
  ctp::StringLabelRule rule;
  if (!o.positive_labels.empty()) rule.positive = o.positive_labels;
  if (!o.negative_labels.empty()) rule.negative = o.negative_labels;
  return rule;
}

ctp::TreeConfig tree_config(const Options& o) {
  ctp::TreeConfig c;
  c.max_depth = o.max_depth;
  c.min_samples_split = o.min_samples_split;
  c.min_samples_leaf = o.min_samples_leaf;
  c.min_impurity_decrease = o.min_impurity_decrease;
  return c;
}

ctp::ForestParams forest_params(const Options& o, std::size_t n_cols) {
  ctp::ForestParams p;
  p.tree = tree_config(o);
  p.forest.n_trees = o.n_trees;
  p.forest.bootstrap = !o.no_bootstrap;
  if (o.mtry == "all") {
    p.forest.mtry = static_cast<int>(n_cols);
  } else if (!o.mtry.empty()) {
    try {
      std::size_t used = 0;
      const int m = std::stoi(o.mtry, &used);
      if (used != o.mtry.size() || m < 1) throw std::invalid_argument("mtry");
      p.forest.mtry = m;
    } catch (const std::exception&) {
      throw ConfigError("--mtry: expected a positive integer or 'all', got '" + o.mtry + "'");
    }
    if (static_cast<std::size_t>(*p.forest.mtry) > n_cols)
      throw ConfigError("--mtry: " + o.mtry + " exceeds the " + std::to_string(n_cols) + " vocabulary terms");
  }
  return p;
}

ctp::GdConfig gd_config(const Options& o, bool svm) {
  auto c = svm ? ctp::GdConfig::svm_defaults() : ctp::GdConfig::logistic_defaults();
  if (o.learning_rate) c.learning_rate = *o.learning_rate;
  c.l2_lambda = o.lambda;
  c.epochs = o.epochs;
  if (svm && c.l2_lambda == 0.0) throw ConfigError("--lambda: the svm step schedule needs lambda > 0");
  return c;
}

ctp::ClassifierSpec classifier_spec(const Options& o, std::size_t n_cols) {
  if (o.classifier == "cart") return ctp::ClassifierSpec::cart(tree_config(o));
  if (o.classifier == "logistic") return ctp::ClassifierSpec::logistic(gd_config(o, false));
  if (o.classifier == "svm") return ctp::ClassifierSpec::svm(gd_config(o, true));
  return ctp::ClassifierSpec::forest(forest_params(o, n_cols));
}

ctp::FeatureOptions feature_options(const Options& o) {
  ctp::FeatureOptions f;
  f.min_doc_fraction = o.min_doc_frac;
  f.binary = o.binary_features;
  return f;
}

std::vector<ctp::LabeledDocument> load(const Options& o) {
  return ctp::load_csv(o.input, o.text_col, o.label_col, label_rule(o));
}

fs::path output_dir(const Options& o) {
  fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ctp::Error(ctp::ErrorCode::IoError, "cannot create output directory '" + o.out_dir + "'");
  return dir;
}

void check_k(const Options& o, std::size_t n_train) {
  if (static_cast<std::size_t>(o.k) > n_train)
    throw ConfigError("--k: " + std::to_string(o.k) + " exceeds the " + std::to_string(n_train) + " training documents");
}

int cmd_run(const Options& o) {
  const auto docs = load(o);
  ctp::PipelineConfig config;
  config.split = {o.train_frac, o.seed};
  config.features = feature_options(o);
  config.k = o.k;
  config.seed = o.seed;
  config.cluster_before_split = o.cluster_before_split;
  config.hybrid = {o.max_iterations, o.normalize_rows};

  // The vocabulary size is needed to resolve --mtry, so features come first.
  auto data = ctp::prepare_data(docs, config.split, config.features);
  check_k(o, data.train.n_rows());
  config.spec = classifier_spec(o, data.vocab.size());

  ctp::RunResult result;
  result.model = config.cluster_before_split
                     ? ctp::hybrid_fit_cluster_all(data.train, data.train_labels, data.test, config.k, config.spec,
                                                   config.seed, data.vocab, config.hybrid)
                     : ctp::hybrid_fit(data.train, data.train_labels, config.k, config.spec, config.seed, data.vocab,
                                       config.hybrid);
  result.report = ctp::hybrid_evaluate(result.model, data.test, data.test_labels);
  result.data = std::move(data);

  const auto dir = output_dir(o);
  const fs::path report_path = o.report.empty() ? dir / "report.json" : fs::path(o.report);
  ctp::write_file_atomic(report_path, ctp::run_report_json(result, config).dump(2) + "\n");

  int roc_files = 0;
  if (result.report.roc) {
    ctp::emit_roc_csv(*result.report.roc, dir / "roc_pooled.csv");
    ++roc_files;
  }
  for (const auto& sub : result.report.per_cluster) {
    if (!sub.roc) {
      std::cerr << "warning: cluster " << sub.cluster << " has " << sub.n_samples
                << " test rows without both classes; no ROC written\n";
      continue;
    }
    ctp::emit_roc_csv(*sub.roc, dir / ("roc_cluster" + std::to_string(sub.cluster) + ".csv"));
    ++roc_files;
  }
  if (!o.features_out.empty()) {
    fs::create_directories(o.features_out);
    ctp::export_features(result.data.train, result.data.vocab, fs::path(o.features_out) / "train_features.csv",
                         fs::path(o.features_out) / "vocabulary.txt");
  }
  for (const auto& w : result.model.warnings) std::cerr << "warning: " << w << "\n";

  std::cout << "accuracy " << ctp::format_fixed(*result.report.accuracy, 4) << "  auc "
            << (result.report.auc ? ctp::format_fixed(*result.report.auc, 4) : std::string("n/a")) << "  baseline "
            << ctp::format_fixed(*result.report.baseline_accuracy, 4) << "\n"
            << "wrote " << report_path.string() << " and " << roc_files << " ROC file(s) to " << dir.string() << "\n";
  return 0;
}

int cmd_compare(const Options& o) {
  const auto docs = load(o);
  const auto data = ctp::prepare_data(docs, {o.train_frac, o.seed}, feature_options(o));
  check_k(o, data.train.n_rows());

  ctp::CompareOptions options;
  options.forest = forest_params(o, data.vocab.size());
  options.cart = tree_config(o);
  options.logistic = gd_config(o, false);
  options.svm = gd_config(o, true);
  options.hybrid = {o.max_iterations, o.normalize_rows};
  const auto rows = ctp::compare_all(data.train, data.train_labels, data.test, data.test_labels, o.k, o.seed, options);

  const auto dir = output_dir(o);
  ctp::Json j;
  j["k"] = o.k;
  j["seed"] = o.seed;
  j["baseline_accuracy"] = ctp::baseline_accuracy(data.test_labels);
  j["comparison"] = ctp::to_json(rows);
  ctp::write_file_atomic(dir / "comparison.csv", ctp::comparison_csv(rows));
  ctp::write_file_atomic(dir / "comparison.json", j.dump(2) + "\n");
  std::cout << ctp::comparison_csv(rows);
  return 0;
}

int cmd_export_tree(const Options& o) {
  ctp::ForestModel forest;
  ctp::Vocabulary vocab;
  if (!o.forest_json.empty()) {
    if (o.vocab_path.empty()) throw ConfigError("--vocab: required together with --forest-json");
    forest = ctp::forest_from_json(ctp::Json::parse(ctp::read_file(o.forest_json)));
    std::vector<std::string> terms;
    std::istringstream in(ctp::read_file(o.vocab_path));
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) terms.push_back(line);
    vocab = ctp::vocabulary_from_terms(std::move(terms));
  } else {
    if (o.input.empty()) throw ConfigError("--input: required unless --forest-json is given");
    const auto docs = load(o);
    auto data = ctp::prepare_data(docs, {o.train_frac, o.seed}, feature_options(o));
    auto params = forest_params(o, data.vocab.size());
    params.forest.seed = ctp::derive_seed(o.seed, std::uint64_t{0});
    forest = ctp::forest_fit(data.train, data.train_labels, params.forest, params.tree);
    vocab = std::move(data.vocab);
  }
  if (o.tree_index < 0 || static_cast<std::size_t>(o.tree_index) >= forest.trees.size())
    throw ctp::Error(ctp::ErrorCode::IndexOutOfRange, "--tree-index: " + std::to_string(o.tree_index) +
                                                          " but the forest has " + std::to_string(forest.trees.size()) +
                                                          " tree(s)");

  const auto dir = output_dir(o);
  const fs::path dot_path = o.dot.empty() ? dir / "tree.dot" : fs::path(o.dot);
  ctp::write_file_atomic(dot_path, ctp::export_dot(forest.trees[static_cast<std::size_t>(o.tree_index)], vocab));
  if (!o.save_forest.empty()) {
    ctp::write_file_atomic(o.save_forest, ctp::to_json(forest).dump() + "\n");
    std::string terms;
    for (const auto& t : vocab.terms) terms += t + "\n";
    ctp::write_file_atomic(fs::path(o.save_forest).replace_extension(".vocab.txt"), terms);
  }
  std::cout << "wrote " << dot_path.string() << "\n";
  return 0;
}

bool is_config_error(ctp::ErrorCode code) {
  switch (code) {
    case ctp::ErrorCode::MissingColumn:
    case ctp::ErrorCode::InvalidArgument:
    case ctp::ErrorCode::KTooLarge:
    case ctp::ErrorCode::MtryTooLarge:
    case ctp::ErrorCode::IndexOutOfRange:
    case ctp::ErrorCode::TooFewDocuments:
    case ctp::ErrorCode::EmptyVocabulary:
    case ctp::ErrorCode::LambdaZero:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-then-predict sentiment classification"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Fit the hybrid model and write a report plus ROC files");
  add_data_options(*run, o, true);
  add_model_options(*run, o);
  add_tree_options(*run, o);
  run->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  run->add_option("--report", o.report, "Report JSON path (default OUT_DIR/report.json)");
  run->add_option("--features-out", o.features_out, "Directory for feature matrix and vocabulary dumps");

  auto* compare = app.add_subcommand("compare", "Hybrid vs SVM, CART, Random forest, Logistic Regression");
  add_data_options(*compare, o, true);
  add_model_options(*compare, o);
  add_tree_options(*compare, o);
  compare->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();

  auto* export_tree = app.add_subcommand("export-tree", "Write one forest tree as a Graphviz DOT file");
  add_data_options(*export_tree, o, false);
  add_tree_options(*export_tree, o);
  export_tree->add_option("--tree-index", o.tree_index, "Tree to export")->capture_default_str();
  export_tree->add_option("--dot", o.dot, "DOT output path (default OUT_DIR/tree.dot)");
  export_tree->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  export_tree->add_option("--save-forest", o.save_forest, "Also write the fitted forest as JSON");
  export_tree->add_option("--forest-json", o.forest_json, "Load a forest JSON instead of fitting")
      ->check(CLI::ExistingFile);
  export_tree->add_option("--vocab", o.vocab_path, "Vocabulary file for --forest-json")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (compare->parsed()) return cmd_compare(o);
    return cmd_export_tree(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ctp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
