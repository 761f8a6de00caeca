#include "ctp/corpus.hpp"
#include "ctp/evaluation.hpp"
#include "ctp/io.hpp"
#include "ctp/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ctp;

namespace {

std::vector<Label> labels_of(std::initializer_list<int> v) {
  std::vector<Label> out;
  for (int x : v) out.push_back(from_bool(x != 0));
  return out;
}

}  // namespace

TEST_CASE("confusion counts") {
  auto cm = confusion(labels_of({1, 1, 0}), std::vector<double>{0.9, 0.2, 0.1});
  CHECK(cm == ConfusionMatrix{1, 0, 1, 1});
  auto all = confusion(labels_of({1, 1, 1}), std::vector<double>{0.7, 0.8, 0.9});
  CHECK(all == ConfusionMatrix{3, 0, 0, 0});
  auto tie = confusion(labels_of({0}), std::vector<double>{0.5});
  CHECK(tie.fp == 1);
  CHECK_THROWS_AS(confusion(labels_of({1, 0}), std::vector<double>{0.5}), Error);
  CHECK_THROWS_AS(confusion(labels_of({}), std::vector<double>{}), Error);
}

TEST_CASE("accuracy formula") {
  CHECK(accuracy({3, 1, 2, 2}) == 0.625);
  CHECK(accuracy({4, 0, 0, 9}) == 1.0);
  try {
    accuracy({});
    FAIL("expected EmptyMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMatrix);
  }
}

TEST_CASE("baseline accuracy") {
  std::vector<Label> mixed(13, Label::Negative);
  mixed.insert(mixed.end(), 11, Label::Positive);
  CHECK(baseline_accuracy(mixed) == doctest::Approx(13.0 / 24.0));
  CHECK(baseline_accuracy(labels_of({1, 1, 1})) == 1.0);
  CHECK(baseline_accuracy(labels_of({1, 0})) == 0.5);
  CHECK_THROWS_AS(baseline_accuracy(labels_of({})), Error);
}

TEST_CASE("ROC shapes") {
  auto perfect = roc_curve(labels_of({1, 0}), std::vector<double>{0.9, 0.1});
  CHECK(perfect.points == std::vector<RocPoint>{{0, 0}, {0, 1}, {1, 1}});
  CHECK(perfect.auc == 1.0);

  auto flat = roc_curve(labels_of({1, 0, 1, 0}), std::vector<double>{0.3, 0.3, 0.3, 0.3});
  CHECK(flat.points == std::vector<RocPoint>{{0, 0}, {1, 1}});
  CHECK(flat.auc == 0.5);

  try {
    roc_curve(labels_of({1, 1}), std::vector<double>{0.1, 0.2});
    FAIL("expected OneClassOnly");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OneClassOnly);
  }
}

TEST_CASE("trapezoidal AUC equals the concordance estimator") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(100);
    std::vector<Label> labels;
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(from_bool(rng.bernoulli(0.5)));
      scores.push_back(static_cast<double>(rng.uniform_index(10)) / 10.0);
    }
    labels[0] = Label::Positive;
    labels[1] = Label::Negative;
    auto curve = roc_curve(labels, scores);
    CHECK(std::abs(curve.auc - oracle::pairwise_auc(labels, scores)) <= 1e-9);

    // Strictly monotone transforms leave AUC unchanged; negation reflects it.
    std::vector<double> transformed, negated;
    for (double s : scores) {
      transformed.push_back(std::exp(3 * s) - 7);
      negated.push_back(-s);
    }
    CHECK(roc_curve(labels, transformed).auc == doctest::Approx(curve.auc).epsilon(1e-12));
    CHECK(std::abs(roc_curve(labels, negated).auc - (1 - curve.auc)) <= 1e-12);
  }
}

TEST_CASE("ROC CSV format and round trip") {
  auto curve = roc_curve(labels_of({1, 0}), std::vector<double>{0.9, 0.1});
  CHECK(roc_csv(curve) == "fpr,tpr\n0.000000000,0.000000000\n0.000000000,1.000000000\n1.000000000,1.000000000\n");

  Rng rng(9);
  const auto dir = std::filesystem::temp_directory_path();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Label> labels;
    std::vector<double> scores;
    for (int i = 0; i < 30; ++i) {
      labels.push_back(from_bool(i % 3 == 0));
      scores.push_back(rng.uniform_real());
    }
    auto c = roc_curve(labels, scores);
    const auto path = dir / "ctp_roc_test.csv";
    emit_roc_csv(c, path);
    auto records = parse_csv(read_file(path));
    REQUIRE(records.size() == c.points.size() + 1);
    CHECK(records[0] == std::vector<std::string>{"fpr", "tpr"});
    double prev_f = -1, prev_t = -1;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const double f = std::stod(records[i][0]);
      const double t = std::stod(records[i][1]);
      CHECK(std::abs(f - c.points[i - 1].fpr) <= 5e-10);
      CHECK(std::abs(t - c.points[i - 1].tpr) <= 5e-10);
      CHECK(f >= prev_f);
      CHECK(t >= prev_t);
      prev_f = f;
      prev_t = t;
    }
    std::filesystem::remove(path);
  }
}

TEST_CASE("evaluate handles empty and one-class inputs") {
  auto empty = evaluate(labels_of({}), std::vector<double>{}, 0.5);
  CHECK(empty.n_samples == 0);
  CHECK_FALSE(empty.accuracy);
  CHECK_FALSE(empty.auc);

  auto one = evaluate(labels_of({1, 1}), std::vector<double>{0.7, 0.2}, 0.5);
  CHECK(one.accuracy == 0.5);
  CHECK(one.baseline_accuracy == 1.0);
  CHECK_FALSE(one.roc);
}
