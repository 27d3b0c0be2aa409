#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edgelbp/classify.hpp"
#include "edgelbp/dataset.hpp"
#include "edgelbp/descriptors.hpp"

namespace edgelbp {

/// Features of every sample in dataset order.
struct FeatureTable {
  Scheme scheme = Scheme::Edms;
  std::vector<std::string> sample_ids;
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  ///< one row per sample
};

/// Extraction failures are rethrown with the offending sample id attached.
FeatureTable extract_table(const LabeledDataset& dataset, Scheme scheme, const ExtractionConfig& config = {},
                           int threads = 1);

/// Fits a normalizer on the given rows of `table`, refusing any row that
/// is not in `split.train` (Errc::InvalidArgument). This is the only
/// normalizer entry point the harness uses, so test rows cannot leak into
/// the fitted statistics.
Normalizer fit_train_normalizer(const FeatureTable& table, const Split& split, std::span<const std::size_t> rows);

enum class NormalizeMode { Auto, On, Off };

/// Auto: on for MLP (and k-NN), off for the forest.
bool normalize_enabled(NormalizeMode mode, ClassifierKind kind);

struct ExperimentConfig {
  Scheme scheme = Scheme::Proposed;
  ClassifierConfig classifier = ForestConfig{};
  double train_fraction = 0.7;
  int repetitions = 5;
  std::uint64_t base_seed = 42;
  /// Repetition k uses fraction 0.6 + 0.025 * (k mod 5) instead of
  /// `train_fraction`.
  bool sweep_split = false;
  NormalizeMode normalize = NormalizeMode::Auto;
  ExtractionConfig extraction;
  int threads = 1;
};

/// mix_seed(base, k).
std::uint64_t repetition_seed(std::uint64_t base_seed, int repetition);
double repetition_fraction(const ExperimentConfig& config, int repetition);

/// Split for repetition k; identical for every scheme and classifier that
/// share the base seed.
Split repetition_split(const LabeledDataset& dataset, const ExperimentConfig& config, int repetition);

struct StageTimes {
  double extract_seconds = 0.0;
  double train_seconds = 0.0;
  double evaluate_seconds = 0.0;
};

struct ExperimentReport {
  std::string dataset;
  Scheme scheme = Scheme::Proposed;
  ClassifierKind classifier = ClassifierKind::Forest;
  std::vector<double> accuracies;  ///< percent, one per repetition
  double mean = 0.0;
  double stddev = 0.0;         ///< population
  double stddev_sample = 0.0;  ///< n - 1 convention, 0 for one run
  std::vector<std::vector<double>> per_class_accuracy;  ///< [repetition][class], percent
  std::vector<std::string> classes;
  std::vector<std::uint64_t> split_hashes;
  StageTimes times;

  /// "RF/PROPOSED" style row label.
  std::string method() const;
};

double mean_of(std::span<const double> values);
double population_stddev(std::span<const double> values);
double sample_stddev(std::span<const double> values);

/// Accuracy cells plus aggregates for one (scheme, classifier) pair.
ExperimentReport run_experiment(const LabeledDataset& dataset, const ExperimentConfig& config);

/// Same, reusing an already extracted table for `config.scheme`.
ExperimentReport run_experiment(const LabeledDataset& dataset, const FeatureTable& table,
                                const ExperimentConfig& config);

struct ComparisonReport {
  std::vector<ExperimentReport> cells;  ///< classifier-major, then scheme
};

/// Cross product of schemes and classifiers with paired splits: every
/// cell sees the same membership in repetition k. `base` supplies
/// everything except scheme and classifier.
ComparisonReport compare_schemes(const LabeledDataset& dataset, std::span<const Scheme> schemes,
                                 std::span<const ClassifierConfig> classifiers, const ExperimentConfig& base);

/// `dataset,method,exp1..expN,mean,stddev,stddev_sample`, four decimals.
/// Wall-clock times are not written so the file is reproducible.
std::string format_report_csv(const ComparisonReport& report);

/// Aligned text table: dataset, method, EXP#1..EXP#N, Mean, St.Dv.
std::string format_report_table(const ComparisonReport& report, bool use_sample_stddev = false);

}  // namespace edgelbp
