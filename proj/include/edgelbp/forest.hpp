#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "edgelbp/rng.hpp"

namespace edgelbp {

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 0;           ///< 0 = unlimited
  int features_per_split = 0;  ///< 0 = floor(sqrt(d))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

/// Leaf when `feature` < 0. Samples with value <= threshold go left; the
/// threshold is always a training value, so predictions are unchanged by
/// strictly increasing per-feature transforms.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  int depth() const;
};

/// CART tree grown on `rows` (duplicates allowed) with Gini splits.
/// Each node examines non-constant features in a random order until
/// `features_per_split` of them have been scored. Leaves predict their
/// majority class, ties to the lower class index.
DecisionTree fit_tree(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels, int n_classes,
                      std::span<const std::size_t> rows, int max_depth, int features_per_split, Rng& rng);

struct RandomForest {
  std::vector<DecisionTree> trees;
  int n_classes = 0;

  /// Majority vote; ties go to the lower class index.
  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Tree t draws from Rng(mix_seed(seed, t)), so the result does not depend
/// on how trees are scheduled across `threads`.
RandomForest fit_forest(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels, int n_classes,
                        const ForestConfig& config, int threads = 1);

}  // namespace edgelbp
