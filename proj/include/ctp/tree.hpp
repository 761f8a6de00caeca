#ifndef CTP_TREE_HPP
#define CTP_TREE_HPP

#include "ctp/common.hpp"
#include "ctp/featurizer.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctp {

double gini(int n_negative, int n_positive);

/// A node is internal when `feature >= 0`. Rows with value < threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double positive_fraction = 0.0;
  int sample_count = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Nodes in preorder; the root is nodes[0].
struct Tree {
  std::vector<TreeNode> nodes;
  std::size_t n_cols = 0;

  const TreeNode& root() const { return nodes.front(); }
  std::size_t depth() const;
  bool operator==(const Tree&) const = default;
};

struct TreeConfig {
  std::optional<int> max_depth;  // unlimited when empty
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  double min_impurity_decrease = 0.0;
};

struct ForestConfig {
  int n_trees = 200;
  std::optional<int> mtry;  // floor(sqrt(n_cols)) when empty
  bool bootstrap = true;
  Seed seed = 0;
};

struct ForestModel {
  std::vector<Tree> trees;
  int mtry = 0;
  bool bootstrap = true;
  Seed seed = 0;
  std::size_t n_cols = 0;

  bool operator==(const ForestModel&) const = default;
};

/// Greedy Gini CART over all features. The seed is accepted for interface
/// symmetry with forest_fit; a plain CART tree draws no random numbers.
Tree cart_fit(const FeatureMatrix& matrix, std::span<const Label> labels, const TreeConfig& config = {},
              Seed seed = 0);

ForestModel forest_fit(const FeatureMatrix& matrix, std::span<const Label> labels, const ForestConfig& forest_config = {},
                       const TreeConfig& tree_config = {});

/// Bootstrap draw used for tree `tree_index` (row indices, with repetition).
std::vector<std::size_t> bootstrap_sample(Seed forest_seed, int tree_index, std::size_t n_rows);

/// Leaf positive fraction reached by `row`.
double predict_score(const Tree& tree, const VectorXd& row);
double predict_score(const Tree& tree, const SparseRow& row);

/// Fraction of trees whose leaf positive_fraction >= 0.5.
double predict_score(const ForestModel& forest, const VectorXd& row);
double predict_score(const ForestModel& forest, const SparseRow& row);

/// Graphviz digraph, nodes numbered in preorder.
std::string export_dot(const Tree& tree, const Vocabulary& vocab);

}  // namespace ctp

#endif  // CTP_TREE_HPP
