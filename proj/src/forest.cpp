#include "edgelbp/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgelbp/errors.hpp"
#include "parallel.hpp"

namespace edgelbp {
namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum over children of sum_c n_c^2 / n_child; larger is purer
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::Ref<const Eigen::MatrixXd>& x, std::span<const int> y, int n_classes, int max_depth,
              int features_per_split, Rng& rng)
      : x_(x), y_(y), n_classes_(n_classes), max_depth_(max_depth), mtry_(features_per_split), rng_(rng) {}

  DecisionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int majority(std::span<const std::size_t> rows, std::vector<int>& counts) const {
    counts.assign(static_cast<std::size_t>(n_classes_), 0);
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(y_[r])];
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }

  int grow(std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::vector<int> counts;
    tree_.nodes[static_cast<std::size_t>(id)].label = majority(rows, counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (pure || rows.size() < 2 || (max_depth_ > 0 && depth >= max_depth_)) return id;

    const SplitChoice split = best_split(rows);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[static_cast<std::size_t>(id)].feature = split.feature;
    tree_.nodes[static_cast<std::size_t>(id)].threshold = split.threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[static_cast<std::size_t>(id)].left = l;
    tree_.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  SplitChoice best_split(const std::vector<std::size_t>& rows) {
    const int d = static_cast<int>(x_.cols());
    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);

    SplitChoice best;
    std::vector<std::pair<double, int>> column(rows.size());
    std::vector<int> left_counts(static_cast<std::size_t>(n_classes_));
    std::vector<int> total_counts(static_cast<std::size_t>(n_classes_), 0);
    for (std::size_t r : rows) ++total_counts[static_cast<std::size_t>(y_[r])];
    const double n = static_cast<double>(rows.size());

    int scored = 0;
    for (int k = 0; k < d && scored < mtry_; ++k) {
      // Lazy Fisher-Yates: position k receives a uniformly drawn remaining feature.
      const std::size_t pick = static_cast<std::size_t>(k) + rng_.below(static_cast<std::size_t>(d - k));
      std::swap(order[static_cast<std::size_t>(k)], order[pick]);
      const int f = order[static_cast<std::size_t>(k)];

      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {x_(static_cast<Eigen::Index>(rows[i]), f), y_[rows[i]]};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++scored;

      std::fill(left_counts.begin(), left_counts.end(), 0);
      double left_sq = 0.0;
      double right_sq = 0.0;
      for (int c : total_counts) right_sq += static_cast<double>(c) * c;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        const auto c = static_cast<std::size_t>(column[i].second);
        const double lc = left_counts[c];
        const double rc = total_counts[c] - lc;
        left_sq += 2.0 * lc + 1.0;
        right_sq -= 2.0 * rc - 1.0;
        ++left_counts[c];
        if (column[i].first == column[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1);
        const double score = left_sq / nl + right_sq / (n - nl);
        if (score > best.score) {
          best.score = score;
          best.feature = f;
          best.threshold = column[i].first;
        }
      }
    }
    return best;
  }

  const Eigen::Ref<const Eigen::MatrixXd>& x_;
  std::span<const int> y_;
  int n_classes_;
  int max_depth_;
  int mtry_;
  Rng& rng_;
  DecisionTree tree_;
};

}  // namespace

int DecisionTree::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const TreeNode& n = nodes[node];
    node = static_cast<std::size_t>(x(n.feature) <= n.threshold ? n.left : n.right);
  }
  return nodes[node].label;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  // Children always follow their parent in `nodes`.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes[i].feature < 0) continue;
    level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
    level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
  }
  return deepest;
}

DecisionTree fit_tree(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels, int n_classes,
                      std::span<const std::size_t> rows, int max_depth, int features_per_split, Rng& rng) {
  if (rows.empty()) throw Error(Errc::InvalidArgument, "cannot grow a tree on zero samples");
  TreeBuilder builder(features, labels, n_classes, max_depth, std::max(1, features_per_split), rng);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

int RandomForest::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  std::vector<int> votes(static_cast<std::size_t>(n_classes), 0);
  for (const DecisionTree& t : trees) ++votes[static_cast<std::size_t>(t.predict(x))];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

RandomForest fit_forest(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const int> labels, int n_classes,
                        const ForestConfig& config, int threads) {
  if (config.n_trees < 1) throw Error(Errc::InvalidArgument, "forest needs at least one tree");
  const auto n = static_cast<std::size_t>(features.rows());
  const int mtry = config.features_per_split > 0
                       ? config.features_per_split
                       : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(features.cols())))));

  RandomForest forest;
  forest.n_classes = n_classes;
  forest.trees.resize(static_cast<std::size_t>(config.n_trees));
  parallel_for(forest.trees.size(), threads, [&](std::size_t t) {
    Rng rng(mix_seed(config.seed, t));
    std::vector<std::size_t> rows(n);
    if (config.bootstrap) {
      for (auto& r : rows) r = rng.below(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees[t] = fit_tree(features, labels, n_classes, rows, config.max_depth, mtry, rng);
  });
  return forest;
}

}  // namespace edgelbp
