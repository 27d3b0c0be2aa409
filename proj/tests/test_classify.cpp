#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "edgelbp/classify.hpp"
#include "edgelbp/errors.hpp"
#include "support.hpp"

using namespace edgelbp;
using namespace edgelbp::testing;

namespace {

const std::vector<std::string> kNames = {"alpha", "beta", "gamma"};

// Three well separated clusters in the 7-dim MOMENT space.
TrainingData clusters(Rng& rng, int per_class) {
  TrainingData d;
  d.scheme = Scheme::Moment;
  d.features.resize(3 * per_class, 7);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < per_class; ++i) {
      for (int k = 0; k < 7; ++k) {
        const double centre = (k % 3 == c) ? 4.0 : 0.0;
        d.features(c * per_class + i, k) = centre + rng.uniform(-0.5, 0.5);
      }
      d.labels.push_back(kNames[static_cast<std::size_t>(c)]);
    }
  }
  return d;
}

ClassifierConfig easy_config(ClassifierKind kind) {
  ClassifierConfig cfg = default_config(kind);
  if (auto* m = std::get_if<MlpConfig>(&cfg)) {
    m->hidden_units = 16;
    m->epochs = 300;
    m->learning_rate = 0.5;
  }
  if (auto* f = std::get_if<ForestConfig>(&cfg)) f->n_trees = 20;
  return with_seed(cfg, 1234);
}

std::optional<Normalizer> normalizer_for(ClassifierKind kind, const TrainingData& d) {
  if (kind == ClassifierKind::Forest) return std::nullopt;
  return fit_normalizer(d.scheme, d.features);
}

Errc error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("kind names") {
  CHECK(kind_name(ClassifierKind::Forest) == "forest");
  CHECK(kind_tag(ClassifierKind::Forest) == "RF");
  CHECK(kind_tag(ClassifierKind::Mlp) == "NN");
  CHECK(parse_kind("rf") == ClassifierKind::Forest);
  CHECK(parse_kind("MLP") == ClassifierKind::Mlp);
  CHECK(parse_kind("knn") == ClassifierKind::Knn);
  CHECK_FALSE(parse_kind("svm").has_value());
  CHECK(seed_of(with_seed(ForestConfig{}, 17)) == 17);
  CHECK(kind_of(default_config(ClassifierKind::Mlp)) == ClassifierKind::Mlp);
  const auto f = std::get<ForestConfig>(default_config(ClassifierKind::Forest));
  CHECK(f.n_trees == 100);
  CHECK(f.max_depth == 0);
  CHECK(f.bootstrap);
  const auto m = std::get<MlpConfig>(default_config(ClassifierKind::Mlp));
  CHECK(m.hidden_units == 64);
  CHECK(m.epochs == 200);
  CHECK(m.learning_rate == 0.01);
}

TEST_CASE("every classifier separates easy clusters") {
  Rng rng(91);
  const TrainingData train_data = clusters(rng, 20);
  const TrainingData held_out = clusters(rng, 10);
  std::vector<std::vector<int>> held_predictions;
  for (ClassifierKind kind : {ClassifierKind::Knn, ClassifierKind::Forest, ClassifierKind::Mlp}) {
    CAPTURE(kind_name(kind));
    const TrainedModel model = train(easy_config(kind), train_data, normalizer_for(kind, train_data));
    CHECK(model.classes() == kNames);
    CHECK(model.scheme() == Scheme::Moment);
    CHECK(model.dims() == 7);
    const std::vector<int> p = model.predict_rows(train_data.features);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(model.classes()[static_cast<std::size_t>(p[i])] == train_data.labels[i]);
    held_predictions.push_back(model.predict_rows(held_out.features));
  }
  // The MLP agrees with the 1-NN reference away from the training points.
  CHECK(held_predictions[2] == held_predictions[0]);
  CHECK(held_predictions[1] == held_predictions[0]);
}

TEST_CASE("k-NN details") {
  SUBCASE("one exemplar per class is stored verbatim") {
    TrainingData d{Scheme::Moment, Eigen::MatrixXd::Zero(2, 7), {"b", "a"}};
    d.features(0, 0) = 1.0;
    const TrainedModel m = train(KnnConfig{}, d);
    const auto& p = std::get<KnnParameters>(m.parameters());
    CHECK(p.exemplars == d.features);
    CHECK(m.classes() == std::vector<std::string>{"a", "b"});
    CHECK(p.labels == std::vector<int>{1, 0});
    CHECK(m.predict({Scheme::Moment, d.features.row(0).transpose()}) == "b");
    CHECK(m.predict({Scheme::Moment, d.features.row(1).transpose()}) == "a");
  }
  SUBCASE("equidistant exemplars: first in training order wins") {
    TrainingData d{Scheme::Moment, Eigen::MatrixXd::Zero(2, 7), {"z", "a"}};
    d.features(0, 0) = 1.0;
    d.features(1, 0) = -1.0;
    const TrainedModel m = train(KnnConfig{}, d);
    CHECK(m.predict({Scheme::Moment, Eigen::VectorXd::Zero(7)}) == "z");
  }
}

TEST_CASE("training errors") {
  TrainingData one{Scheme::Moment, Eigen::MatrixXd::Random(3, 7), {"a", "a", "a"}};
  CHECK(error_code([&] { train(KnnConfig{}, one); }) == Errc::DegenerateLabels);
  TrainingData nan{Scheme::Moment, Eigen::MatrixXd::Random(2, 7), {"a", "b"}};
  nan.features(1, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK(error_code([&] { train(ForestConfig{}, nan); }) == Errc::InvalidFeature);
  TrainingData wrong{Scheme::Edms, Eigen::MatrixXd::Random(2, 7), {"a", "b"}};
  CHECK_THROWS_AS(train(KnnConfig{}, wrong), Error);
}

TEST_CASE("scheme mismatch at prediction names both schemes") {
  Rng rng(92);
  const TrainingData d = clusters(rng, 5);
  const TrainedModel m = train(KnnConfig{}, d);
  try {
    m.predict({Scheme::Edms, Eigen::VectorXd::Zero(22)});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemeMismatch);
    const std::string what = e.what();
    CHECK(what.find("MOMENT") != std::string::npos);
    CHECK(what.find("EDMS") != std::string::npos);
  }
}

TEST_CASE("determinism and serialization round trip") {
  Rng rng(93);
  const TrainingData d = clusters(rng, 15);
  Rng qrng(94);
  Eigen::MatrixXd queries(50, 7);
  for (Eigen::Index i = 0; i < queries.size(); ++i) queries.data()[i] = qrng.uniform(-1.0, 5.0);
  for (ClassifierKind kind : {ClassifierKind::Knn, ClassifierKind::Forest, ClassifierKind::Mlp}) {
    CAPTURE(kind_name(kind));
    ClassifierConfig cfg = easy_config(kind);
    if (auto* m = std::get_if<MlpConfig>(&cfg)) m->epochs = 50;
    const TrainedModel a = train(cfg, d, normalizer_for(kind, d));
    const TrainedModel b = train(cfg, d, normalizer_for(kind, d));
    const std::string json = a.to_json();
    CHECK(json == b.to_json());
    CHECK(json.find("\"format_version\"") != std::string::npos);
    const TrainedModel loaded = TrainedModel::from_json(json);
    CHECK(loaded.to_json() == json);
    CHECK(loaded.kind() == kind);
    CHECK(loaded.seed() == (kind == ClassifierKind::Knn ? 0u : 1234u));
    CHECK(loaded.classes() == a.classes());
    CHECK(loaded.normalizer().has_value() == (kind != ClassifierKind::Forest));
    CHECK(loaded.predict_rows(queries) == a.predict_rows(queries));
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      const std::string label = a.predict({Scheme::Moment, queries.row(i).transpose()});
      CHECK(std::find(kNames.begin(), kNames.end(), label) != kNames.end());
    }
  }
  CHECK_THROWS_AS(TrainedModel::from_json("{\"format_version\": 99}"), Error);
  CHECK_THROWS_AS(TrainedModel::from_json("not json"), Error);
}
