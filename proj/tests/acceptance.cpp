// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "ctp/corpus.hpp"
#include "ctp/evaluation.hpp"
#include "ctp/hybrid.hpp"
#include "ctp/io.hpp"
#include "ctp/kmeans.hpp"
#include "ctp/linear.hpp"
#include "ctp/pipeline.hpp"
#include "ctp/random.hpp"
#include "ctp/synthetic.hpp"
#include "ctp/tree.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace ctp;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kCentroidTol = 1e-9;
constexpr double kObjectiveSlack = 1e-9;  // relative, for the non-increasing check
constexpr double kAucTol = 1e-9;
constexpr double kGradientRelTol = 1e-5;
constexpr double kFiniteDiffStep = 1e-5;
constexpr double kNegationTol = 1e-12;
constexpr double kBaselineMargin = 0.05;
constexpr double kForestSlack = 0.02;

constexpr double kBudgetKMeans = 30.0;
constexpr double kBudgetAuc = 5.0;
constexpr double kBudgetAccuracy = 1.0;
constexpr double kBudgetGradient = 5.0;
constexpr double kBudgetBenchmark = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<std::vector<double>> nested(const MatrixXd& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(m(r, c));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Endpoints, monotone coordinates and AUC range.
void check_roc_shape(const RocCurve& curve, Outcome& o, const std::string& where) {
  const auto& p = curve.points;
  if (p.size() < 2 || p.front() != RocPoint{0, 0} || p.back() != RocPoint{1, 1}) fail(o, where + ": bad endpoints");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].fpr < p[i - 1].fpr || p[i].tpr < p[i - 1].tpr) fail(o, where + ": non-monotone at point " + std::to_string(i));
  if (!(curve.auc >= 0.0 && curve.auc <= 1.0)) fail(o, where + ": AUC outside [0,1]");
}

// 1
Outcome kmeans_correctness() {
  Outcome o;
  Rng rng(101);
  int brute_checked = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const int k = 1 + static_cast<int>(rng.uniform_index(4));
    const int n = k + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(51 - k)));
    const int d = 1 + static_cast<int>(rng.uniform_index(10));
    MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform_real() * 10 - 5;
    const auto model = kmeans_fit(x, {k, rng.next(), 100});
    const std::string tag = "instance " + std::to_string(inst);

    const auto& trace = model.objective_trace;
    for (std::size_t t = 1; t < trace.size(); ++t)
      if (trace[t] > trace[t - 1] * (1 + kObjectiveSlack)) fail(o, tag + ": objective increased");

    for (int j = 0; j < k; ++j) {
      Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(d);
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (model.assignments[static_cast<std::size_t>(i)] == j) {
          sum += x.row(i);
          ++count;
        }
      if (count == 0) {
        fail(o, tag + ": empty cluster");
        continue;
      }
      if ((model.centroids.row(j) - sum / count).cwiseAbs().maxCoeff() > kCentroidTol)
        fail(o, tag + ": centroid is not the cluster mean");
    }
    if (n <= 8) {
      ++brute_checked;
      const double best = oracle::kmeans_global_optimum(nested(x), k);
      if (model.objective < best - kObjectiveSlack * std::max(1.0, best)) fail(o, tag + ": J below global optimum");
    }
  }
  if (o.pass) o.detail = "500 instances, " + std::to_string(brute_checked) + " checked against brute force";
  return o;
}

// 2
Outcome auc_oracle() {
  Outcome o;
  Rng rng(202);
  double worst = 0;
  for (int set = 0; set < 200; ++set) {
    const std::size_t n = 2 + rng.uniform_index(199);
    const std::size_t levels = 2 + rng.uniform_index(50);  // few levels force ties
    std::vector<Label> labels;
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(from_bool(rng.bernoulli(0.4)));
      scores.push_back(static_cast<double>(rng.uniform_index(levels)) / static_cast<double>(levels));
    }
    labels[0] = Label::Positive;
    labels[1] = Label::Negative;
    const double diff = std::abs(roc_curve(labels, scores).auc - oracle::pairwise_auc(labels, scores));
    worst = std::max(worst, diff);
    if (diff > kAucTol) fail(o, "set " + std::to_string(set) + ": |diff| = " + sci(diff));
  }
  if (o.pass) o.detail = "200 sets, max |diff| = " + sci(worst);
  return o;
}

// 3
Outcome accuracy_formula() {
  Outcome o;
  Rng rng(303);
  for (int i = 0; i < 1000; ++i) {
    ConfusionMatrix cm{rng.uniform_index(1000), rng.uniform_index(1000), rng.uniform_index(1000),
                       rng.uniform_index(1000)};
    if (cm.total() == 0) cm.tp = 1;
    const double expected = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.tp + cm.fp + cm.fn + cm.tn);
    if (accuracy(cm) != expected) fail(o, "matrix " + std::to_string(i) + " differs");
  }
  if (o.pass) o.detail = "1000 matrices, exact";
  return o;
}

// 4
Outcome gradient_check() {
  Outcome o;
  Rng rng(404);
  double worst = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 5, d = 4;
    MatrixXd x(n, d);
    VectorXd y(n);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> yi(n);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c)
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = x(i, c) = rng.uniform_real() * 4 - 2;
      yi[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_index(2));
      y(i) = yi[static_cast<std::size_t>(i)];
    }
    const double lambda = 0.1 * rng.uniform_real();
    const auto objective = [&](const std::vector<double>& p) { return oracle::logistic_objective(rows, yi, p, lambda); };
    for (int point = 0; point < 20; ++point) {
      std::vector<double> params(d + 1);
      for (auto& p : params) p = rng.uniform_real() * 4 - 2;
      VectorXd w(d);
      for (int c = 0; c < d; ++c) w(c) = params[static_cast<std::size_t>(c)];
      const auto analytic = logistic_loss_gradient(x, y, w, params[d], lambda);
      const auto numeric = oracle::central_difference(objective, params, kFiniteDiffStep);
      for (int c = 0; c <= d; ++c) {
        const double a = c < d ? analytic.grad_weights(c) : analytic.grad_bias;
        const double nd = numeric[static_cast<std::size_t>(c)];
        const double rel = std::abs(a - nd) / std::max(1.0, std::abs(nd));
        worst = std::max(worst, rel);
        if (rel > kGradientRelTol) fail(o, "instance " + std::to_string(inst) + ": relative error " + sci(rel));
      }
    }
  }
  if (o.pass) o.detail = "400 points, max relative error " + sci(worst);
  return o;
}

FeatureMatrix random_counts(Rng& rng, std::size_t n, std::size_t d, std::size_t max_count) {
  MatrixXd dense(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < dense.size(); ++i)
    dense.data()[i] = rng.bernoulli(0.4) ? static_cast<double>(rng.uniform_index(max_count + 1)) : 0.0;
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return from_dense(dense, ids);
}

// 5
Outcome identity_reductions() {
  Outcome o;
  Rng rng(505);
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 10 + rng.uniform_index(60);
    const std::size_t d = 1 + rng.uniform_index(12);
    const auto m = random_counts(rng, n, d, 3);
    std::vector<Label> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(from_bool(rng.bernoulli(0.5)));
    ForestConfig fc;
    fc.n_trees = 1;
    fc.bootstrap = false;
    fc.mtry = static_cast<int>(d);
    fc.seed = rng.next();
    const auto forest = forest_fit(m, labels, fc);
    const auto tree = cart_fit(m, labels);
    if (!(forest.trees.front() == tree)) fail(o, "instance " + std::to_string(inst) + ": tree structure differs");
    const auto probes = random_counts(rng, 30, d, 4);
    for (const auto* rows : {&m.rows, &probes.rows})
      for (const auto& row : *rows)
        if ((predict_score(forest, row) >= 0.5) != (predict_score(tree, row) >= 0.5))
          fail(o, "instance " + std::to_string(inst) + ": predictions differ");
  }

  SyntheticConfig sc;
  sc.n_docs = 400;
  sc.seed = 5;
  const auto data = prepare_data(generate_synthetic_corpus(sc), SplitSpec{0.7, 5});
  ForestParams fp;
  fp.forest.n_trees = 50;
  int hybrid_checks = 0;
  for (const auto& spec : {ClassifierSpec::forest(fp), ClassifierSpec::cart(), ClassifierSpec::logistic(),
                           ClassifierSpec::svm()}) {
    for (Seed seed : {Seed{0}, Seed{77}}) {
      const auto model = hybrid_fit(data.train, data.train_labels, 1, spec, seed);
      const auto standalone = fit_classifier(spec, data.train, data.train_labels, derive_seed(seed, std::uint64_t{0}));
      const auto routed = hybrid_predict(model, data.test);
      for (std::size_t i = 0; i < routed.size(); ++i) {
        ++hybrid_checks;
        if (routed[i].score != classifier_score(standalone, to_dense(data.test.rows[i], data.test.n_cols)))
          fail(o, std::string("hybrid k=1 differs for ") + std::string(classifier_kind_name(spec.kind)));
      }
    }
  }
  if (o.pass) o.detail = "50 forest/CART instances, " + std::to_string(hybrid_checks) + " hybrid k=1 test scores";
  return o;
}

// 6
Outcome synthetic_benchmark(std::vector<RocCurve>& curves) {
  Outcome o;
  constexpr int kSeeds = 20;
  std::vector<double> sums(5, 0.0);
  std::vector<std::string> names;
  double baseline_sum = 0;
  double worst_margin = 1.0;
  for (Seed seed = 1; seed <= kSeeds; ++seed) {
    SyntheticConfig sc;
    sc.n_docs = 1200;
    sc.seed = seed;
    const auto data = prepare_data(generate_synthetic_corpus(sc), SplitSpec{0.7, seed});
    const double baseline = baseline_accuracy(data.test_labels);
    baseline_sum += baseline;
    const auto rows = compare_all(data.train, data.train_labels, data.test, data.test_labels, 2, seed);
    names.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      names.push_back(rows[i].technique);
      sums[i] += rows[i].accuracy;
      worst_margin = std::min(worst_margin, rows[i].accuracy - baseline);
      if (rows[i].accuracy < baseline + kBaselineMargin)
        fail(o, "seed " + std::to_string(seed) + ": " + rows[i].technique + " " + fmt(rows[i].accuracy) +
                    " < baseline " + fmt(baseline) + " + " + fmt(kBaselineMargin, 2));
    }
    const auto model = hybrid_fit(data.train, data.train_labels, 2, ClassifierSpec::forest(), seed);
    const auto report = hybrid_evaluate(model, data.test, data.test_labels);
    if (report.roc) curves.push_back(*report.roc);
    for (const auto& c : report.per_cluster)
      if (c.roc) curves.push_back(*c.roc);
  }
  std::vector<double> mean(5);
  for (std::size_t i = 0; i < 5; ++i) mean[i] = sums[i] / kSeeds;
  // Row order: hybrid, SVM, CART, forest, logistic.
  if (mean[0] < mean[2]) fail(o, "hybrid mean " + fmt(mean[0]) + " < CART mean " + fmt(mean[2]));
  if (mean[0] < mean[4]) fail(o, "hybrid mean " + fmt(mean[0]) + " < logistic mean " + fmt(mean[4]));
  if (mean[0] < mean[3] - kForestSlack)
    fail(o, "hybrid mean " + fmt(mean[0]) + " < forest mean " + fmt(mean[3]) + " - " + fmt(kForestSlack, 2));

  std::ostringstream summary;
  summary << "baseline " << fmt(baseline_sum / kSeeds);
  for (std::size_t i = 0; i < names.size(); ++i) summary << ", " << names[i] << " " << fmt(mean[i]);
  summary << ", min margin over baseline " << fmt(worst_margin);
  o.detail = o.pass ? summary.str() : o.detail + " [" + summary.str() + "]";
  return o;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string("\"") + CTP_CLI_PATH + "\" " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<fs::path> output_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path().filename());
  std::sort(files.begin(), files.end());
  return files;
}

// 7
Outcome determinism(const fs::path& work, std::vector<RocCurve>& curves) {
  Outcome o;
  SyntheticConfig sc;
  sc.n_docs = 1200;
  sc.seed = 77;
  const auto corpus = work / "corpus.csv";
  write_file_atomic(corpus, documents_csv(generate_synthetic_corpus(sc)));
  const auto a = work / "run_a";
  const auto b = work / "run_b";
  fs::create_directories(a);
  fs::create_directories(b);
  const std::string args = "run --input \"" + corpus.string() + "\" --k 3 --seed 2024 --out-dir ";
  if (run_cli(args + "\"" + a.string() + "\"") != 0 || run_cli(args + "\"" + b.string() + "\"") != 0) {
    fail(o, "run exited non-zero");
    return o;
  }
  const auto files = output_files(a);
  if (files != output_files(b)) fail(o, "different output file sets");
  std::size_t roc_files = 0;
  for (const auto& f : files) {
    if (slurp(a / f) != slurp(b / f)) fail(o, f.string() + " differs");
    if (f.extension() == ".csv") {
      ++roc_files;
      const auto records = parse_csv(slurp(a / f));
      RocCurve curve;
      for (std::size_t i = 1; i < records.size(); ++i)
        curve.points.push_back({std::stod(records[i][0]), std::stod(records[i][1])});
      curve.auc = trapezoid_area(curve.points);
      curves.push_back(std::move(curve));
    }
  }
  if (!fs::exists(a / "report.json")) fail(o, "report.json missing");
  if (o.pass) o.detail = "report.json and " + std::to_string(roc_files) + " ROC CSVs byte-identical";
  return o;
}

// 8
Outcome cart_training_accuracy() {
  Outcome o;
  Rng rng(808);
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 5 + rng.uniform_index(150);
    const std::size_t d = 1 + rng.uniform_index(10);
    const auto m = random_counts(rng, n, d, 3);
    // Labels are a function of the row, so duplicate rows agree.
    const Seed salt = rng.next();
    std::vector<Label> labels;
    for (const auto& row : m.rows) {
      std::uint64_t h = salt;
      for (const auto& e : row) h = mix64(h ^ (static_cast<std::uint64_t>(e.col) << 32 | static_cast<std::uint32_t>(e.count)));
      labels.push_back(from_bool(h & 1));
    }
    TreeConfig config;
    config.min_samples_leaf = 1;
    const auto tree = cart_fit(m, labels, config);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += (predict_score(tree, m.rows[i]) >= 0.5) == (labels[i] == Label::Positive);
    if (correct != n)
      fail(o, "instance " + std::to_string(inst) + ": training accuracy " + fmt(static_cast<double>(correct) / n));
  }
  if (o.pass) o.detail = "50 instances at 1.0";
  return o;
}

// 9
Outcome roc_invariants(const std::vector<RocCurve>& emitted) {
  Outcome o;
  for (std::size_t i = 0; i < emitted.size(); ++i) check_roc_shape(emitted[i], o, "emitted curve " + std::to_string(i));

  Rng rng(909);
  double worst = 0;
  for (int set = 0; set < 200; ++set) {
    const std::size_t n = 2 + rng.uniform_index(199);
    const bool tied = rng.bernoulli(0.5);
    std::vector<Label> labels;
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(from_bool(rng.bernoulli(0.5)));
      scores.push_back(tied ? static_cast<double>(rng.uniform_index(8)) : rng.uniform_real() * 20 - 10);
    }
    labels[0] = Label::Positive;
    labels[1] = Label::Negative;
    std::vector<double> negated(scores.size());
    std::transform(scores.begin(), scores.end(), negated.begin(), [](double s) { return -s; });
    const auto curve = roc_curve(labels, scores);
    const auto flipped = roc_curve(labels, negated);
    check_roc_shape(curve, o, "random set " + std::to_string(set));
    check_roc_shape(flipped, o, "negated set " + std::to_string(set));
    const double diff = std::abs(flipped.auc - (1.0 - curve.auc));
    worst = std::max(worst, diff);
    if (diff > kNegationTol) fail(o, "set " + std::to_string(set) + ": negation asymmetry " + sci(diff));
  }
  if (o.pass)
    o.detail = std::to_string(emitted.size()) + " emitted curves, 200 random sets, max negation gap " + sci(worst);
  return o;
}

}  // namespace

int main() {
  const auto work = fs::temp_directory_path() / "ctp_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::vector<RocCurve> emitted;
  int failures = 0;
  auto report = [&](int id, const std::string& name, double budget, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget > 0 && secs > budget) fail(o, "took " + fmt(secs, 2) + " s, budget " + fmt(budget, 0) + " s");
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << " (" << fmt(secs, 2) << " s): " << o.detail
              << std::endl;
  };

  report(1, "K-means correctness", kBudgetKMeans, kmeans_correctness);
  report(2, "AUC oracle equivalence", kBudgetAuc, auc_oracle);
  report(3, "Accuracy formula", kBudgetAccuracy, accuracy_formula);
  report(4, "Logistic gradient check", kBudgetGradient, gradient_check);
  report(5, "Identity reductions", 0, identity_reductions);
  report(6, "Synthetic benchmark", kBudgetBenchmark, [&] { return synthetic_benchmark(emitted); });
  report(7, "Determinism", 0, [&] { return determinism(work, emitted); });
  report(8, "CART training accuracy", 0, cart_training_accuracy);
  report(9, "ROC invariants", 0, [&] { return roc_invariants(emitted); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  fs::remove_all(work);
  return failures;
}
