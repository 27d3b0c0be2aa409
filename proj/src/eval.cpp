#include "edgelbp/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "edgelbp/errors.hpp"
#include "edgelbp/rng.hpp"
#include "parallel.hpp"

namespace edgelbp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& values, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace

FeatureTable extract_table(const LabeledDataset& dataset, Scheme scheme, const ExtractionConfig& config,
                           int threads) {
  FeatureTable table;
  table.scheme = scheme;
  const std::size_t n = dataset.samples.size();
  table.values.resize(static_cast<Eigen::Index>(n), scheme_dims(scheme));
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      table.values.row(static_cast<Eigen::Index>(i)) =
          extract(dataset.samples[i].image, scheme, config).values.transpose();
    } catch (const Error& e) {
      throw Error(e.code(), "sample " + dataset.samples[i].id + ": " + e.what());
    }
  });
  for (const Sample& s : dataset.samples) {
    table.sample_ids.push_back(s.id);
    table.labels.push_back(s.label);
  }
  return table;
}

Normalizer fit_train_normalizer(const FeatureTable& table, const Split& split, std::span<const std::size_t> rows) {
  for (std::size_t r : rows) {
    if (!std::binary_search(split.train.begin(), split.train.end(), r)) {
      throw Error(Errc::InvalidArgument, "normalizer fit rejected row " + std::to_string(r) +
                                             (r < table.sample_ids.size() ? " (" + table.sample_ids[r] + ")" : "") +
                                             ": it is not in the training partition");
    }
  }
  return fit_normalizer(table.scheme, gather_rows(table.values, rows));
}

bool normalize_enabled(NormalizeMode mode, ClassifierKind kind) {
  switch (mode) {
    case NormalizeMode::On: return true;
    case NormalizeMode::Off: return false;
    case NormalizeMode::Auto: return kind != ClassifierKind::Forest;
  }
  return false;
}

std::uint64_t repetition_seed(std::uint64_t base_seed, int repetition) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(repetition));
}

double repetition_fraction(const ExperimentConfig& config, int repetition) {
  if (!config.sweep_split) return config.train_fraction;
  return 0.6 + 0.025 * (repetition % 5);
}

Split repetition_split(const LabeledDataset& dataset, const ExperimentConfig& config, int repetition) {
  return split(dataset, SplitSpec{repetition_fraction(config, repetition), repetition_seed(config.base_seed, repetition)});
}

std::string ExperimentReport::method() const {
  return std::string(kind_tag(classifier)) + "/" + std::string(scheme_name(scheme));
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

double sum_sq_dev(std::span<const double> values) {
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss;
}

}  // namespace

double population_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  return std::sqrt(sum_sq_dev(values) / static_cast<double>(values.size()));
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  return std::sqrt(sum_sq_dev(values) / static_cast<double>(values.size() - 1));
}

ExperimentReport run_experiment(const LabeledDataset& dataset, const ExperimentConfig& config) {
  const auto start = Clock::now();
  const FeatureTable table = extract_table(dataset, config.scheme, config.extraction, config.threads);
  const double extract_seconds = seconds_since(start);
  ExperimentReport report = run_experiment(dataset, table, config);
  report.times.extract_seconds = extract_seconds;
  return report;
}

ExperimentReport run_experiment(const LabeledDataset& dataset, const FeatureTable& table,
                                const ExperimentConfig& config) {
  if (config.repetitions < 1) throw Error(Errc::InvalidArgument, "repetitions must be >= 1");
  if (table.scheme != config.scheme || static_cast<std::size_t>(table.values.rows()) != dataset.samples.size()) {
    throw Error(Errc::SchemeMismatch, "feature table does not belong to this dataset/scheme");
  }

  ExperimentReport report;
  report.dataset = dataset.name;
  report.scheme = config.scheme;
  report.classifier = kind_of(config.classifier);
  report.classes = dataset.class_index;
  const bool normalize = normalize_enabled(config.normalize, report.classifier);

  for (int k = 0; k < config.repetitions; ++k) {
    try {
      const Split s = repetition_split(dataset, config, k);
      report.split_hashes.push_back(s.membership_hash());

      auto t0 = Clock::now();
      TrainingData train_data{config.scheme, gather_rows(table.values, s.train), {}};
      for (std::size_t i : s.train) train_data.labels.push_back(table.labels[i]);
      std::optional<Normalizer> normalizer;
      if (normalize) normalizer = fit_train_normalizer(table, s, s.train);
      const ClassifierConfig classifier = with_seed(config.classifier, mix_seed(repetition_seed(config.base_seed, k), 1));
      const TrainedModel model = train(classifier, train_data, std::move(normalizer), config.threads);
      report.times.train_seconds += seconds_since(t0);

      t0 = Clock::now();
      const std::vector<int> predicted = model.predict_rows(gather_rows(table.values, s.test));
      std::vector<int> class_total(dataset.class_index.size(), 0);
      std::vector<int> class_correct(dataset.class_index.size(), 0);
      int correct = 0;
      for (std::size_t i = 0; i < s.test.size(); ++i) {
        const std::string& truth = table.labels[s.test[i]];
        const auto c = static_cast<std::size_t>(
            std::lower_bound(dataset.class_index.begin(), dataset.class_index.end(), truth) -
            dataset.class_index.begin());
        ++class_total[c];
        if (model.classes()[static_cast<std::size_t>(predicted[i])] == truth) {
          ++correct;
          ++class_correct[c];
        }
      }
      report.times.evaluate_seconds += seconds_since(t0);

      report.accuracies.push_back(100.0 * correct / static_cast<double>(s.test.size()));
      std::vector<double> per_class;
      for (std::size_t c = 0; c < class_total.size(); ++c) {
        per_class.push_back(class_total[c] ? 100.0 * class_correct[c] / class_total[c] : 0.0);
      }
      report.per_class_accuracy.push_back(std::move(per_class));
    } catch (const Error& e) {
      throw Error(e.code(), "repetition " + std::to_string(k + 1) + " of " + report.method() + ": " + e.what());
    }
  }
  report.mean = mean_of(report.accuracies);
  report.stddev = population_stddev(report.accuracies);
  report.stddev_sample = sample_stddev(report.accuracies);
  return report;
}

ComparisonReport compare_schemes(const LabeledDataset& dataset, std::span<const Scheme> schemes,
                                 std::span<const ClassifierConfig> classifiers, const ExperimentConfig& base) {
  std::vector<FeatureTable> tables;
  std::vector<double> extract_seconds;
  for (Scheme scheme : schemes) {
    const auto start = Clock::now();
    tables.push_back(extract_table(dataset, scheme, base.extraction, base.threads));
    extract_seconds.push_back(seconds_since(start));
  }

  ComparisonReport out;
  for (const ClassifierConfig& classifier : classifiers) {
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      ExperimentConfig cfg = base;
      cfg.scheme = schemes[s];
      cfg.classifier = classifier;
      ExperimentReport cell = run_experiment(dataset, tables[s], cfg);
      cell.times.extract_seconds = extract_seconds[s];
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

std::string format_report_csv(const ComparisonReport& report) {
  std::size_t reps = 0;
  for (const auto& c : report.cells) reps = std::max(reps, c.accuracies.size());
  std::string out = "dataset,method";
  for (std::size_t k = 0; k < reps; ++k) out += ",exp" + std::to_string(k + 1);
  out += ",mean,stddev,stddev_sample\n";
  char buf[64];
  for (const auto& c : report.cells) {
    out += c.dataset + "," + c.method();
    for (std::size_t k = 0; k < reps; ++k) {
      if (k < c.accuracies.size()) {
        std::snprintf(buf, sizeof buf, ",%.4f", c.accuracies[k]);
        out += buf;
      } else {
        out += ",";
      }
    }
    std::snprintf(buf, sizeof buf, ",%.4f,%.4f,%.4f\n", c.mean, c.stddev, c.stddev_sample);
    out += buf;
  }
  return out;
}

std::string format_report_table(const ComparisonReport& report, bool use_sample_stddev) {
  std::size_t reps = 0;
  std::size_t dataset_width = 7;
  std::size_t method_width = 6;
  for (const auto& c : report.cells) {
    reps = std::max(reps, c.accuracies.size());
    dataset_width = std::max(dataset_width, c.dataset.size());
    method_width = std::max(method_width, c.method().size());
  }
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-*s  %-*s", static_cast<int>(dataset_width), "Dataset",
                static_cast<int>(method_width), "Method");
  out += buf;
  for (std::size_t k = 0; k < reps; ++k) {
    std::snprintf(buf, sizeof buf, "  %7s", ("EXP#" + std::to_string(k + 1)).c_str());
    out += buf;
  }
  out += "     Mean    St.Dv\n";

  std::string previous;
  for (const auto& c : report.cells) {
    const std::string dataset = c.dataset == previous ? "" : c.dataset;
    previous = c.dataset;
    std::snprintf(buf, sizeof buf, "%-*s  %-*s", static_cast<int>(dataset_width), dataset.c_str(),
                  static_cast<int>(method_width), c.method().c_str());
    out += buf;
    for (std::size_t k = 0; k < reps; ++k) {
      if (k < c.accuracies.size()) {
        std::snprintf(buf, sizeof buf, "  %7.2f", c.accuracies[k]);
      } else {
        std::snprintf(buf, sizeof buf, "  %7s", "");
      }
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "  %7.2f  %7.2f\n", c.mean, use_sample_stddev ? c.stddev_sample : c.stddev);
    out += buf;
  }
  return out;
}

}  // namespace edgelbp
