#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "edgelbp/forest.hpp"
#include "support.hpp"

using namespace edgelbp;
using namespace edgelbp::testing;

namespace {

struct Blobs {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

// Gaussian-ish clusters: class c centred at c * spread on every axis.
Blobs blobs(Rng& rng, int classes, int per_class, int dims, double spread, double noise) {
  Blobs b;
  b.x.resize(classes * per_class, dims);
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      const int r = c * per_class + i;
      for (int d = 0; d < dims; ++d) {
        const double u = rng.uniform() + rng.uniform() + rng.uniform() - 1.5;
        b.x(r, d) = c * spread * ((d + c) % 2 ? 1.0 : -1.0) + noise * u;
      }
      b.y.push_back(c);
    }
  }
  return b;
}

double gini(const std::vector<int>& counts) {
  double n = 0, s = 0;
  for (int c : counts) n += c;
  if (n == 0) return 0;
  for (int c : counts) s += (c / n) * (c / n);
  return 1 - s;
}

}  // namespace

TEST_CASE("single-tree stump matches the exhaustive split oracle") {
  const std::vector<double> xs = {0.1, 0.4, 0.35, 0.8, 0.9, 0.7, 0.5, 0.05};
  const std::vector<int> ys = {0, 0, 0, 1, 1, 1, 1, 0};
  Eigen::MatrixXd x(8, 1);
  for (int i = 0; i < 8; ++i) x(i, 0) = xs[static_cast<std::size_t>(i)];

  // Oracle: try every training value as a "<= t goes left" threshold.
  double best_score = 1e9, best_t = 0;
  for (double t : xs) {
    std::vector<int> left(2, 0), right(2, 0);
    for (std::size_t i = 0; i < xs.size(); ++i) ++(xs[i] <= t ? left : right)[static_cast<std::size_t>(ys[i])];
    const double nl = left[0] + left[1], nr = right[0] + right[1];
    if (nl == 0 || nr == 0) continue;
    const double score = (nl * gini(left) + nr * gini(right)) / 8.0;
    if (score < best_score) {
      best_score = score;
      best_t = t;
    }
  }
  CHECK(best_t == 0.4);

  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.max_depth = 1;
  cfg.bootstrap = false;
  cfg.seed = 3;
  const RandomForest f = fit_forest(x, ys, 2, cfg);
  REQUIRE(f.trees.size() == 1);
  const DecisionTree& t = f.trees[0];
  CHECK(t.depth() == 1);
  CHECK(t.nodes[0].feature == 0);
  CHECK(t.nodes[0].threshold == best_t);
  for (double q = -1.0; q <= 2.0; q += 0.01) {
    Eigen::VectorXd v(1);
    v << q;
    CHECK(f.predict(v) == (q <= best_t ? 0 : 1));
  }
}

TEST_CASE("leaf majority ties go to the lower class") {
  // Identical feature values cannot be split, so the root is a 2-2 leaf.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 2);
  const std::vector<int> y = {1, 0, 1, 0};
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  const RandomForest f = fit_forest(x, y, 2, cfg);
  CHECK(f.trees[0].nodes.size() == 1);
  CHECK(f.predict(Eigen::VectorXd::Zero(2)) == 0);
}

TEST_CASE("forest fits separable data and is deterministic") {
  Rng rng(71);
  const Blobs b = blobs(rng, 3, 30, 6, 2.0, 0.5);
  ForestConfig cfg;
  cfg.n_trees = 25;
  cfg.seed = 99;
  const RandomForest f1 = fit_forest(b.x, b.y, 3, cfg, 1);
  const RandomForest f4 = fit_forest(b.x, b.y, 3, cfg, 4);
  REQUIRE(f1.trees.size() == 25);
  int correct = 0;
  for (Eigen::Index i = 0; i < b.x.rows(); ++i) {
    const int p = f1.predict(b.x.row(i).transpose());
    correct += p == b.y[static_cast<std::size_t>(i)];
    CHECK(p == f4.predict(b.x.row(i).transpose()));
  }
  CHECK(correct == b.x.rows());
  for (std::size_t t = 0; t < f1.trees.size(); ++t) {
    REQUIRE(f1.trees[t].nodes.size() == f4.trees[t].nodes.size());
    for (std::size_t n = 0; n < f1.trees[t].nodes.size(); ++n) {
      CHECK(f1.trees[t].nodes[n].feature == f4.trees[t].nodes[n].feature);
      CHECK(f1.trees[t].nodes[n].threshold == f4.trees[t].nodes[n].threshold);
    }
  }
  cfg.seed = 100;
  const RandomForest other = fit_forest(b.x, b.y, 3, cfg, 1);
  bool differs = false;
  for (std::size_t t = 0; t < other.trees.size() && !differs; ++t) {
    differs = other.trees[t].nodes.size() != f1.trees[t].nodes.size() ||
              other.trees[t].nodes[0].threshold != f1.trees[t].nodes[0].threshold;
  }
  CHECK(differs);
}

TEST_CASE("max_depth bounds every tree") {
  Rng rng(72);
  const Blobs b = blobs(rng, 4, 25, 5, 0.4, 1.0);
  for (int depth : {1, 2, 3}) {
    ForestConfig cfg;
    cfg.n_trees = 10;
    cfg.max_depth = depth;
    const RandomForest f = fit_forest(b.x, b.y, 4, cfg);
    for (const auto& t : f.trees) CHECK(t.depth() <= depth);
  }
}

TEST_CASE("strictly monotone feature transforms do not change predictions") {
  Rng rng(73);
  Blobs b = blobs(rng, 3, 25, 5, 0.8, 1.0);
  b.x = b.x.array().abs() + 0.01;  // non-negative
  Eigen::MatrixXd queries(40, 5);
  for (Eigen::Index i = 0; i < queries.size(); ++i) queries.data()[i] = 0.01 + 3.0 * rng.uniform();
  const Eigen::MatrixXd squared = b.x.array().square();
  ForestConfig cfg;
  cfg.n_trees = 15;
  cfg.seed = 5;
  const RandomForest plain = fit_forest(b.x, b.y, 3, cfg);
  const RandomForest sq = fit_forest(squared, b.y, 3, cfg);
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    const Eigen::VectorXd q = queries.row(i).transpose();
    CHECK(plain.predict(q) == sq.predict(q.array().square().matrix()));
  }
  for (Eigen::Index i = 0; i < b.x.rows(); ++i) {
    CHECK(plain.predict(b.x.row(i).transpose()) == sq.predict(squared.row(i).transpose()));
  }
}

TEST_CASE("fit_tree on explicit rows") {
  Rng rng(74);
  const Blobs b = blobs(rng, 2, 10, 3, 3.0, 0.3);
  std::vector<std::size_t> rows(20);
  std::iota(rows.begin(), rows.end(), 0);
  Rng tree_rng(1);
  const DecisionTree t = fit_tree(b.x, b.y, 2, rows, 0, 3, tree_rng);
  for (Eigen::Index i = 0; i < 20; ++i) CHECK(t.predict(b.x.row(i).transpose()) == b.y[static_cast<std::size_t>(i)]);
}
