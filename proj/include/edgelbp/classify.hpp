#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "edgelbp/descriptors.hpp"
#include "edgelbp/forest.hpp"
#include "edgelbp/mlp.hpp"

namespace edgelbp {

enum class ClassifierKind { Knn, Forest, Mlp };

/// "knn", "forest", "mlp".
std::string_view kind_name(ClassifierKind kind);

/// Row prefix used in reports: "KNN", "RF", "NN".
std::string_view kind_tag(ClassifierKind kind);

/// Accepts knn/1nn, rf/forest, mlp/nn (case-insensitive).
std::optional<ClassifierKind> parse_kind(std::string_view name);

/// 1-nearest-neighbour by Euclidean distance.
struct KnnConfig {};

using ClassifierConfig = std::variant<KnnConfig, ForestConfig, MlpConfig>;

ClassifierKind kind_of(const ClassifierConfig& config);
ClassifierConfig default_config(ClassifierKind kind);
std::uint64_t seed_of(const ClassifierConfig& config);
ClassifierConfig with_seed(ClassifierConfig config, std::uint64_t seed);

/// One feature row per sample.
struct TrainingData {
  Scheme scheme = Scheme::Edms;
  Eigen::MatrixXd features;
  std::vector<std::string> labels;
};

struct KnnParameters {
  Eigen::MatrixXd exemplars;
  std::vector<int> labels;
};

class TrainedModel {
 public:
  using Parameters = std::variant<KnnParameters, RandomForest, MlpWeights>;

  TrainedModel(ClassifierConfig config, Scheme scheme, std::vector<std::string> classes,
               std::optional<Normalizer> normalizer, Parameters parameters);

  ClassifierKind kind() const { return kind_of(config_); }
  Scheme scheme() const { return scheme_; }
  int dims() const { return scheme_dims(scheme_); }
  const std::vector<std::string>& classes() const { return classes_; }
  std::uint64_t seed() const { return seed_of(config_); }
  const ClassifierConfig& config() const { return config_; }
  const std::optional<Normalizer>& normalizer() const { return normalizer_; }
  const Parameters& parameters() const { return parameters_; }

  /// Label for a raw (unnormalized) feature vector. Throws
  /// Errc::SchemeMismatch when the vector's scheme differs from the model's.
  std::string predict(const FeatureVector& v) const;

  /// Class index for each raw feature row.
  std::vector<int> predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;

  /// Versioned JSON document; doubles are written with round-trip precision.
  std::string to_json() const;
  static TrainedModel from_json(std::string_view text);

 private:
  int predict_normalized(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  ClassifierConfig config_;
  Scheme scheme_;
  std::vector<std::string> classes_;
  std::optional<Normalizer> normalizer_;
  Parameters parameters_;
};

/// Fits a model. Classes are the sorted unique labels. When a normalizer
/// is given the features are z-scored with it before fitting and it is
/// stored in the model. Deterministic in (config, data order, seed).
/// Throws Errc::DegenerateLabels for fewer than two classes and
/// Errc::InvalidFeature for non-finite values.
TrainedModel train(const ClassifierConfig& config, const TrainingData& data,
                   std::optional<Normalizer> normalizer = std::nullopt, int threads = 1);

}  // namespace edgelbp
