#include "edgelbp/classify.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include <json.hpp>

#include "edgelbp/errors.hpp"

namespace edgelbp {

using nlohmann::json;

std::string_view kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::Forest: return "forest";
    case ClassifierKind::Mlp: return "mlp";
  }
  return "?";
}

std::string_view kind_tag(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Knn: return "KNN";
    case ClassifierKind::Forest: return "RF";
    case ClassifierKind::Mlp: return "NN";
  }
  return "?";
}

std::optional<ClassifierKind> parse_kind(std::string_view name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "knn" || s == "1nn") return ClassifierKind::Knn;
  if (s == "rf" || s == "forest") return ClassifierKind::Forest;
  if (s == "mlp" || s == "nn") return ClassifierKind::Mlp;
  return std::nullopt;
}

ClassifierKind kind_of(const ClassifierConfig& config) {
  return static_cast<ClassifierKind>(config.index());
}

ClassifierConfig default_config(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Knn: return KnnConfig{};
    case ClassifierKind::Forest: return ForestConfig{};
    case ClassifierKind::Mlp: return MlpConfig{};
  }
  return KnnConfig{};
}

std::uint64_t seed_of(const ClassifierConfig& config) {
  if (const auto* f = std::get_if<ForestConfig>(&config)) return f->seed;
  if (const auto* m = std::get_if<MlpConfig>(&config)) return m->seed;
  return 0;
}

ClassifierConfig with_seed(ClassifierConfig config, std::uint64_t seed) {
  if (auto* f = std::get_if<ForestConfig>(&config)) f->seed = seed;
  if (auto* m = std::get_if<MlpConfig>(&config)) m->seed = seed;
  return config;
}

TrainedModel::TrainedModel(ClassifierConfig config, Scheme scheme, std::vector<std::string> classes,
                           std::optional<Normalizer> normalizer, Parameters parameters)
    : config_(std::move(config)),
      scheme_(scheme),
      classes_(std::move(classes)),
      normalizer_(std::move(normalizer)),
      parameters_(std::move(parameters)) {}

int TrainedModel::predict_normalized(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (const auto* knn = std::get_if<KnnParameters>(&parameters_)) {
    Eigen::Index best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < knn->exemplars.rows(); ++i) {
      const double dist = (knn->exemplars.row(i).transpose() - x).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    return knn->labels[static_cast<std::size_t>(best)];
  }
  if (const auto* forest = std::get_if<RandomForest>(&parameters_)) return forest->predict(x);

  const auto& mlp = std::get<MlpWeights>(parameters_);
  const Eigen::RowVectorXd probs = mlp_forward(mlp, x.transpose());
  int best = 0;
  for (int c = 1; c < probs.size(); ++c) {
    if (probs(c) > probs(best)) best = c;
  }
  return best;
}

std::vector<int> TrainedModel::predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const {
  if (rows.cols() != dims()) {
    throw Error(Errc::SchemeMismatch, "model expects " + std::to_string(dims()) + " " +
                                          std::string(scheme_name(scheme_)) + " features, got " +
                                          std::to_string(rows.cols()));
  }
  const Eigen::MatrixXd x = normalizer_ ? apply_normalizer(*normalizer_, rows) : Eigen::MatrixXd(rows);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = predict_normalized(x.row(i).transpose());
  return out;
}

std::string TrainedModel::predict(const FeatureVector& v) const {
  if (v.scheme != scheme_) {
    throw Error(Errc::SchemeMismatch, "model was trained on " + std::string(scheme_name(scheme_)) +
                                          " features but the input is " + std::string(scheme_name(v.scheme)));
  }
  return classes_[static_cast<std::size_t>(predict_rows(v.values.transpose()).front())];
}

TrainedModel train(const ClassifierConfig& config, const TrainingData& data, std::optional<Normalizer> normalizer,
                   int threads) {
  const Eigen::Index n = data.features.rows();
  if (static_cast<std::size_t>(n) != data.labels.size()) {
    throw Error(Errc::InvalidArgument, "feature rows and labels disagree");
  }
  if (data.features.cols() != scheme_dims(data.scheme)) {
    throw Error(Errc::SchemeMismatch, "training features have " + std::to_string(data.features.cols()) +
                                          " columns, " + std::string(scheme_name(data.scheme)) + " has " +
                                          std::to_string(scheme_dims(data.scheme)));
  }
  if (!data.features.allFinite()) throw Error(Errc::InvalidFeature, "training features contain NaN or infinity");

  const std::set<std::string> unique(data.labels.begin(), data.labels.end());
  if (unique.size() < 2) throw Error(Errc::DegenerateLabels, "training data needs at least two classes");
  std::vector<std::string> classes(unique.begin(), unique.end());
  std::vector<int> y(data.labels.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(), data.labels[i]) - classes.begin());
  }

  const Eigen::MatrixXd x = normalizer ? apply_normalizer(*normalizer, data.features) : data.features;
  const int n_classes = static_cast<int>(classes.size());

  TrainedModel::Parameters params;
  switch (kind_of(config)) {
    case ClassifierKind::Knn: params = KnnParameters{x, y}; break;
    case ClassifierKind::Forest:
      params = fit_forest(x, y, n_classes, std::get<ForestConfig>(config), threads);
      break;
    case ClassifierKind::Mlp: params = train_mlp(x, y, n_classes, std::get<MlpConfig>(config)); break;
  }
  return TrainedModel(config, data.scheme, std::move(classes), std::move(normalizer), std::move(params));
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw Error(Errc::InvalidArgument, "matrix shape does not match its data");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

json config_to_json(const ClassifierConfig& config) {
  if (const auto* f = std::get_if<ForestConfig>(&config)) {
    return {{"n_trees", f->n_trees},
            {"max_depth", f->max_depth},
            {"features_per_split", f->features_per_split},
            {"bootstrap", f->bootstrap},
            {"seed", f->seed}};
  }
  if (const auto* m = std::get_if<MlpConfig>(&config)) {
    return {{"hidden_units", m->hidden_units},
            {"epochs", m->epochs},
            {"learning_rate", m->learning_rate},
            {"seed", m->seed}};
  }
  return json::object();
}

ClassifierConfig config_from_json(ClassifierKind kind, const json& j) {
  switch (kind) {
    case ClassifierKind::Knn: return KnnConfig{};
    case ClassifierKind::Forest:
      return ForestConfig{j.at("n_trees").get<int>(), j.at("max_depth").get<int>(),
                          j.at("features_per_split").get<int>(), j.at("bootstrap").get<bool>(),
                          j.at("seed").get<std::uint64_t>()};
    case ClassifierKind::Mlp:
      return MlpConfig{j.at("hidden_units").get<int>(), j.at("epochs").get<int>(),
                       j.at("learning_rate").get<double>(), j.at("seed").get<std::uint64_t>()};
  }
  return KnnConfig{};
}

json parameters_to_json(const TrainedModel::Parameters& params) {
  if (const auto* knn = std::get_if<KnnParameters>(&params)) {
    return {{"exemplars", matrix_to_json(knn->exemplars)}, {"labels", knn->labels}};
  }
  if (const auto* forest = std::get_if<RandomForest>(&params)) {
    json trees = json::array();
    for (const DecisionTree& t : forest->trees) {
      json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
           label = json::array();
      for (const TreeNode& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        label.push_back(n.label);
      }
      trees.push_back(
          {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"label", label}});
    }
    return {{"n_classes", forest->n_classes}, {"trees", trees}};
  }
  const auto& w = std::get<MlpWeights>(params);
  return {{"w1", matrix_to_json(w.w1)},
          {"b1", matrix_to_json(w.b1)},
          {"w2", matrix_to_json(w.w2)},
          {"b2", matrix_to_json(w.b2)}};
}

TrainedModel::Parameters parameters_from_json(ClassifierKind kind, const json& j, int dims, int n_classes) {
  const auto bad = [](const std::string& what) { return Error(Errc::InvalidArgument, "malformed model: " + what); };
  switch (kind) {
    case ClassifierKind::Knn: {
      KnnParameters p{matrix_from_json(j.at("exemplars")), j.at("labels").get<std::vector<int>>()};
      if (p.exemplars.cols() != dims || static_cast<std::size_t>(p.exemplars.rows()) != p.labels.size() ||
          p.labels.empty()) {
        throw bad("exemplar table shape");
      }
      for (int l : p.labels) {
        if (l < 0 || l >= n_classes) throw bad("exemplar label out of range");
      }
      return p;
    }
    case ClassifierKind::Forest: {
      RandomForest forest;
      forest.n_classes = j.at("n_classes").get<int>();
      if (forest.n_classes != n_classes) throw bad("class count");
      for (const json& t : j.at("trees")) {
        const auto feature = t.at("feature").get<std::vector<int>>();
        const auto threshold = t.at("threshold").get<std::vector<double>>();
        const auto left = t.at("left").get<std::vector<int>>();
        const auto right = t.at("right").get<std::vector<int>>();
        const auto label = t.at("label").get<std::vector<int>>();
        const std::size_t count = feature.size();
        if (count == 0 || threshold.size() != count || left.size() != count || right.size() != count ||
            label.size() != count) {
          throw bad("tree arrays differ in length");
        }
        DecisionTree tree;
        for (std::size_t i = 0; i < count; ++i) {
          const TreeNode node{feature[i], threshold[i], left[i], right[i], label[i]};
          if (node.label < 0 || node.label >= n_classes || node.feature >= dims) throw bad("tree node out of range");
          if (node.feature >= 0 && (node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
                                    node.left >= static_cast<int>(count) || node.right >= static_cast<int>(count))) {
            throw bad("tree child index");
          }
          tree.nodes.push_back(node);
        }
        forest.trees.push_back(std::move(tree));
      }
      if (forest.trees.empty()) throw bad("forest has no trees");
      return forest;
    }
    case ClassifierKind::Mlp: {
      MlpWeights w{matrix_from_json(j.at("w1")), matrix_from_json(j.at("b1")), matrix_from_json(j.at("w2")),
                   matrix_from_json(j.at("b2"))};
      if (w.w1.cols() != dims || w.b1.size() != w.w1.rows() || w.w2.cols() != w.w1.rows() ||
          w.w2.rows() != n_classes || w.b2.size() != n_classes) {
        throw bad("network shape");
      }
      return w;
    }
  }
  throw bad("kind");
}

}  // namespace

std::string TrainedModel::to_json() const {
  json j;
  j["format_version"] = 1;
  j["kind"] = std::string(kind_name(kind()));
  j["scheme"] = std::string(scheme_name(scheme_));
  j["dims"] = dims();
  j["classes"] = classes_;
  j["seed"] = seed();
  j["config"] = config_to_json(config_);
  j["normalizer"] = normalizer_ ? json::parse(normalizer_->to_json()) : json(nullptr);
  j["parameters"] = parameters_to_json(parameters_);
  return j.dump();
}

TrainedModel TrainedModel::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != 1) throw Error(Errc::InvalidArgument, "unsupported model version");
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (!kind || !scheme) throw Error(Errc::InvalidArgument, "unknown model kind or scheme");
    if (j.at("dims").get<int>() != scheme_dims(*scheme)) throw Error(Errc::SchemeMismatch, "model dims");
    auto classes = j.at("classes").get<std::vector<std::string>>();
    if (classes.size() < 2) throw Error(Errc::InvalidArgument, "model has fewer than two classes");
    ClassifierConfig config = config_from_json(*kind, j.at("config"));
    std::optional<Normalizer> normalizer;
    if (!j.at("normalizer").is_null()) {
      normalizer = Normalizer::from_json(j.at("normalizer").dump());
      if (normalizer->scheme != *scheme) throw Error(Errc::SchemeMismatch, "embedded normalizer scheme");
    }
    auto params = parameters_from_json(*kind, j.at("parameters"), scheme_dims(*scheme),
                                       static_cast<int>(classes.size()));
    return TrainedModel(std::move(config), *scheme, std::move(classes), std::move(normalizer), std::move(params));
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed model: ") + e.what());
  }
}

}  // namespace edgelbp
