#include "ctp/tree.hpp"

#include "ctp/io.hpp"
#include "ctp/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace ctp {

double gini(int n_negative, int n_positive) {
  if (n_negative < 0 || n_positive < 0) throw Error(ErrorCode::InvalidArgument, "class counts must be non-negative");
  const int total = n_negative + n_positive;
  if (total == 0) throw Error(ErrorCode::EmptyCounts, "gini of an empty node");
  const double pn = static_cast<double>(n_negative) / total;
  const double pp = static_cast<double>(n_positive) / total;
  return 1.0 - pn * pn - pp * pp;
}

std::size_t Tree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const auto& node = nodes[static_cast<std::size_t>(i)];
    if (!node.is_leaf()) {
      stack.push_back({node.left, d + 1});
      stack.push_back({node.right, d + 1});
    }
  }
  return best;
}

namespace {

using Wide = __int128;

// Split quality as the exact fraction (q_l * n_r + q_r * n_l) / (n_l * n_r),
// where q = n_neg^2 + n_pos^2. Larger is purer; comparisons are exact.
struct SplitScore {
  Wide num = 0;
  Wide den = 1;
  bool better_than(const SplitScore& o) const { return num * o.den > o.num * den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  SplitScore score;
};

struct ValueGroup {
  double value;
  int neg;
  int pos;
};

class TreeBuilder {
public:
  TreeBuilder(const Eigen::MatrixXd& columns, const FeatureMatrix& sparse, std::span<const Label> labels,
              const TreeConfig& config, int mtry, Rng* rng)
      : columns_(columns),
        sparse_(sparse),
        labels_(labels),
        config_(config),
        mtry_(mtry),
        rng_(rng),
        nz_count_(sparse.n_cols, 0),
        nz_min_(sparse.n_cols, 0.0),
        nz_max_(sparse.n_cols, 0.0) {}

  Tree build(std::vector<std::size_t> samples) {
    tree_.n_cols = sparse_.n_cols;
    grow(samples, 0);
    return std::move(tree_);
  }

private:
  int grow(const std::vector<std::size_t>& samples, int depth) {
    const int m = static_cast<int>(samples.size());
    int pos = 0;
    for (auto i : samples) pos += to_int(labels_[i]);
    const int neg = m - pos;

    const int index = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    node.sample_count = m;
    node.positive_fraction = static_cast<double>(pos) / m;
    tree_.nodes.push_back(node);

    const bool pure = pos == 0 || neg == 0;
    const bool depth_limited = config_.max_depth && depth >= *config_.max_depth;
    if (pure || depth_limited || m < config_.min_samples_split || m < 2 * config_.min_samples_leaf) return index;

    const auto best = best_split(samples, neg, pos);
    if (best.feature < 0) return index;
    const double parent_q = static_cast<double>(neg) * neg + static_cast<double>(pos) * pos;
    const double decrease = (best.score.value() - parent_q / m) / m;
    if (decrease < config_.min_impurity_decrease - 1e-12) return index;

    std::vector<std::size_t> left, right;
    for (auto i : samples) (columns_(static_cast<Eigen::Index>(i), best.feature) < best.threshold ? left : right).push_back(i);

    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& self = tree_.nodes[static_cast<std::size_t>(index)];
    self.feature = best.feature;
    self.threshold = best.threshold;
    self.left = l;
    self.right = r;
    return index;
  }

  // Features that take at least two distinct values among `samples`, ascending.
  std::vector<int> varying_features(const std::vector<std::size_t>& samples) {
    std::vector<int> touched;
    for (auto i : samples) {
      for (const auto& e : sparse_.rows[i]) {
        const auto f = static_cast<std::size_t>(e.col);
        if (nz_count_[f] == 0) {
          touched.push_back(e.col);
          nz_min_[f] = nz_max_[f] = e.count;
        } else {
          nz_min_[f] = std::min<double>(nz_min_[f], e.count);
          nz_max_[f] = std::max<double>(nz_max_[f], e.count);
        }
        ++nz_count_[f];
      }
    }
    std::vector<int> varying;
    const int m = static_cast<int>(samples.size());
    for (int f : touched) {
      const auto uf = static_cast<std::size_t>(f);
      if (nz_count_[uf] < m || nz_min_[uf] != nz_max_[uf]) varying.push_back(f);
      nz_count_[uf] = 0;
    }
    std::sort(varying.begin(), varying.end());
    return varying;
  }

  Candidate best_split(const std::vector<std::size_t>& samples, int neg, int pos) {
    auto features = varying_features(samples);
    if (rng_ != nullptr && static_cast<int>(features.size()) > mtry_) {
      const auto picks = rng_->sample_without_replacement(features.size(), static_cast<std::size_t>(mtry_));
      std::vector<int> chosen;
      chosen.reserve(picks.size());
      for (auto p : picks) chosen.push_back(features[p]);
      features = std::move(chosen);
    }

    Candidate best;
    const int m = neg + pos;
    const int min_leaf = config_.min_samples_leaf;
    std::vector<std::pair<double, int>> nonzero;
    std::vector<ValueGroup> groups;
    for (int f : features) {
      nonzero.clear();
      groups.clear();
      int zero_neg = 0, zero_pos = 0;
      for (auto i : samples) {
        const double v = columns_(static_cast<Eigen::Index>(i), f);
        const int y = to_int(labels_[i]);
        if (v == 0.0) {
          zero_neg += 1 - y;
          zero_pos += y;
        } else {
          nonzero.emplace_back(v, y);
        }
      }
      std::sort(nonzero.begin(), nonzero.end());
      bool zero_placed = zero_neg + zero_pos == 0;
      auto add = [&](double v, int y) {
        if (!groups.empty() && groups.back().value == v) {
          groups.back().neg += 1 - y;
          groups.back().pos += y;
        } else {
          groups.push_back({v, 1 - y, y});
        }
      };
      for (auto [v, y] : nonzero) {
        if (!zero_placed && v > 0.0) {
          groups.push_back({0.0, zero_neg, zero_pos});
          zero_placed = true;
        }
        add(v, y);
      }
      if (!zero_placed) groups.push_back({0.0, zero_neg, zero_pos});

      Wide ln = 0, lp = 0;
      for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        ln += groups[g].neg;
        lp += groups[g].pos;
        const Wide nl = ln + lp;
        const Wide nr = m - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const Wide rn = neg - ln, rp = pos - lp;
        SplitScore score{(ln * ln + lp * lp) * nr + (rn * rn + rp * rp) * nl, nl * nr};
        if (best.feature < 0 || score.better_than(best.score)) {
          best.feature = f;
          best.threshold = 0.5 * (groups[g].value + groups[g + 1].value);
          best.score = score;
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& columns_;
  const FeatureMatrix& sparse_;
  std::span<const Label> labels_;
  const TreeConfig& config_;
  int mtry_;
  Rng* rng_;
  std::vector<int> nz_count_;
  std::vector<double> nz_min_, nz_max_;
  Tree tree_;
};

void validate(const FeatureMatrix& matrix, std::span<const Label> labels, const TreeConfig& config) {
  if (matrix.n_rows() != labels.size())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(labels.size()) + " labels for " +
                                              std::to_string(matrix.n_rows()) + " rows");
  if (matrix.n_rows() == 0) throw Error(ErrorCode::EmptyMatrix, "no training rows");
  if (config.min_samples_leaf < 1) throw Error(ErrorCode::InvalidArgument, "min_samples_leaf must be >= 1");
  if (config.min_samples_split < 2) throw Error(ErrorCode::InvalidArgument, "min_samples_split must be >= 2");
  if (config.min_impurity_decrease < 0) throw Error(ErrorCode::InvalidArgument, "min_impurity_decrease must be >= 0");
  if (config.max_depth && *config.max_depth < 0) throw Error(ErrorCode::InvalidArgument, "max_depth must be >= 0");
}

Eigen::MatrixXd column_major(const FeatureMatrix& matrix) { return to_dense(matrix); }

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

std::vector<std::size_t> draw_bootstrap(Rng& rng, std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.uniform_index(n);
  return rows;
}

const TreeNode& leaf_for(const Tree& tree, const VectorXd& row) {
  if (row.size() != static_cast<Eigen::Index>(tree.n_cols))
    throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(row.size()) + " columns, tree expects " +
                                                  std::to_string(tree.n_cols));
  const TreeNode* node = &tree.nodes.front();
  while (!node->is_leaf()) node = &tree.nodes[static_cast<std::size_t>(row(node->feature) < node->threshold ? node->left : node->right)];
  return *node;
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Tree cart_fit(const FeatureMatrix& matrix, std::span<const Label> labels, const TreeConfig& config, Seed /*seed*/) {
  validate(matrix, labels, config);
  const auto columns = column_major(matrix);
  TreeBuilder builder(columns, matrix, labels, config, static_cast<int>(matrix.n_cols), nullptr);
  return builder.build(all_rows(matrix.n_rows()));
}

std::vector<std::size_t> bootstrap_sample(Seed forest_seed, int tree_index, std::size_t n_rows) {
  Rng rng(derive_seed(forest_seed, static_cast<std::uint64_t>(tree_index)));
  return draw_bootstrap(rng, n_rows);
}

ForestModel forest_fit(const FeatureMatrix& matrix, std::span<const Label> labels, const ForestConfig& forest_config,
                       const TreeConfig& tree_config) {
  validate(matrix, labels, tree_config);
  if (forest_config.n_trees < 1) throw Error(ErrorCode::InvalidArgument, "n_trees must be >= 1");
  const int p = static_cast<int>(matrix.n_cols);
  const int mtry = forest_config.mtry.value_or(std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(p))))));
  if (mtry > p) throw Error(ErrorCode::MtryTooLarge, "mtry=" + std::to_string(mtry) + " exceeds " + std::to_string(p) + " features");
  if (mtry < 1) throw Error(ErrorCode::InvalidArgument, "mtry must be >= 1");

  ForestModel forest;
  forest.mtry = mtry;
  forest.bootstrap = forest_config.bootstrap;
  forest.seed = forest_config.seed;
  forest.n_cols = matrix.n_cols;
  forest.trees.reserve(static_cast<std::size_t>(forest_config.n_trees));

  const auto columns = column_major(matrix);
  const std::size_t n = matrix.n_rows();
  for (int t = 0; t < forest_config.n_trees; ++t) {
    Rng rng(derive_seed(forest_config.seed, static_cast<std::uint64_t>(t)));
    auto samples = forest_config.bootstrap ? draw_bootstrap(rng, n) : all_rows(n);
    TreeBuilder builder(columns, matrix, labels, tree_config, mtry, &rng);
    forest.trees.push_back(builder.build(std::move(samples)));
  }
  return forest;
}

double predict_score(const Tree& tree, const VectorXd& row) { return leaf_for(tree, row).positive_fraction; }

double predict_score(const Tree& tree, const SparseRow& row) { return predict_score(tree, to_dense(row, tree.n_cols)); }

double predict_score(const ForestModel& forest, const VectorXd& row) {
  int votes = 0;
  for (const auto& tree : forest.trees) votes += leaf_for(tree, row).positive_fraction >= 0.5 ? 1 : 0;
  return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
}

double predict_score(const ForestModel& forest, const SparseRow& row) {
  return predict_score(forest, to_dense(row, forest.n_cols));
}

std::string export_dot(const Tree& tree, const Vocabulary& vocab) {
  for (const auto& node : tree.nodes)
    if (!node.is_leaf() && static_cast<std::size_t>(node.feature) >= vocab.size())
      throw Error(ErrorCode::VocabMismatch, "feature " + std::to_string(node.feature) + " outside vocabulary of " +
                                                std::to_string(vocab.size()) + " terms");
  std::string dot = "digraph tree {\n  node [shape=box, fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    const std::string id = "n" + std::to_string(i);
    if (node.is_leaf()) {
      const Label cls = from_bool(node.positive_fraction >= 0.5);
      dot += "  " + id + " [label=\"" + std::string(label_name(cls)) + "\\npositive_fraction = " +
             format_fixed(node.positive_fraction, 4) + "\\nsamples = " + std::to_string(node.sample_count) +
             "\", style=rounded];\n";
    } else {
      dot += "  " + id + " [label=\"" + dot_escape(vocab.terms[static_cast<std::size_t>(node.feature)]) + " < " +
             shortest(node.threshold) + "\\nsamples = " + std::to_string(node.sample_count) + "\"];\n";
    }
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    if (node.is_leaf()) continue;
    dot += "  n" + std::to_string(i) + " -> n" + std::to_string(node.left) + " [label=\"yes\"];\n";
    dot += "  n" + std::to_string(i) + " -> n" + std::to_string(node.right) + " [label=\"no\"];\n";
  }
  dot += "}\n";
  return dot;
}

}  // namespace ctp
