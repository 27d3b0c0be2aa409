#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgelbp/classify.hpp"
#include "edgelbp/dataset.hpp"
#include "edgelbp/descriptors.hpp"
#include "edgelbp/errors.hpp"
#include "edgelbp/eval.hpp"
#include "edgelbp/fileio.hpp"
#include "edgelbp/image_io.hpp"

namespace edgelbp::cli {

namespace fs = std::filesystem;

int worker_threads() {
  if (const char* env = std::getenv("EDGELBP_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min(n, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string dataset;
  std::string scheme = "PROPOSED";
  std::string schemes;
  std::string classifier = "rf";
  std::string classifiers;
  double split = 0.7;
  int reps = 5;
  std::uint64_t seed = 42;
  int glcm_levels = 16;
  std::string normalize = "auto";
  std::string out;
  bool sweep_split = false;
  bool sample_stddev = false;
  std::string model;
  std::string features;
  std::string manifest;
  bool raw_moments = false;
  std::string edge_direction = "argmax";
  int trees = 100;
  int max_depth = 0;
  int hidden = 64;
  int epochs = 200;
  double learning_rate = 0.01;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Scheme scheme_arg(const std::string& name) {
  const auto s = parse_scheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "'");
  return *s;
}

std::vector<Scheme> scheme_list(const Options& o, bool all_by_default) {
  const std::string text = !o.schemes.empty() ? o.schemes : (all_by_default ? std::string() : o.scheme);
  if (text.empty()) return {kAllSchemes.begin(), kAllSchemes.end()};
  std::vector<Scheme> out;
  for (const std::string& name : split_list(text)) out.push_back(scheme_arg(name));
  if (out.empty()) throw UsageError("empty scheme list");
  return out;
}

ClassifierConfig classifier_arg(const std::string& name, const Options& o) {
  const auto kind = parse_kind(name);
  if (!kind) throw UsageError("unknown classifier '" + name + "' (expected rf, mlp or knn)");
  switch (*kind) {
    case ClassifierKind::Knn: return KnnConfig{};
    case ClassifierKind::Forest: {
      if (o.trees < 1) throw UsageError("--trees must be >= 1");
      if (o.max_depth < 0) throw UsageError("--max-depth must be >= 0");
      ForestConfig f;
      f.n_trees = o.trees;
      f.max_depth = o.max_depth;
      f.seed = o.seed;
      return f;
    }
    case ClassifierKind::Mlp: {
      if (o.hidden < 1) throw UsageError("--hidden must be >= 1");
      if (o.epochs < 0) throw UsageError("--epochs must be >= 0");
      if (!(o.learning_rate > 0.0)) throw UsageError("--lr must be > 0");
      MlpConfig m;
      m.hidden_units = o.hidden;
      m.epochs = o.epochs;
      m.learning_rate = o.learning_rate;
      m.seed = o.seed;
      return m;
    }
  }
  throw UsageError("unknown classifier");
}

NormalizeMode normalize_arg(const std::string& text) {
  if (text == "auto") return NormalizeMode::Auto;
  if (text == "on" || text == "true" || text == "1") return NormalizeMode::On;
  if (text == "off" || text == "false" || text == "0") return NormalizeMode::Off;
  throw UsageError("--normalize must be auto, on or off");
}

ExtractionConfig extraction_arg(const Options& o) {
  if (o.glcm_levels < 2 || o.glcm_levels > 256) throw UsageError("--glcm-levels must be in [2, 256]");
  ExtractionConfig e;
  e.glcm_levels = o.glcm_levels;
  e.moment_scaling = o.raw_moments ? MomentScaling::Raw : MomentScaling::SignedLog;
  if (o.edge_direction == "argmax") {
    e.edge_direction = EdgeDirectionMode::ArgmaxIndex;
  } else if (o.edge_direction == "count") {
    e.edge_direction = EdgeDirectionMode::MaxCount;
  } else {
    throw UsageError("--edge-direction must be argmax or count");
  }
  return e;
}

void check_split(const Options& o) {
  if (!(o.split >= 0.5 && o.split <= 0.9)) throw UsageError("--split must be in [0.5, 0.9]");
  if (o.reps < 1) throw UsageError("--reps must be >= 1");
}

/// Validates the dataset flag up front so usage problems exit with 2
/// before any work starts.
void check_dataset(const std::string& source) {
  if (source.empty()) throw UsageError("--dataset is required");
  if (source.rfind("synthetic:", 0) == 0) {
    if (!SyntheticSpec::parse(source)) {
      throw UsageError("bad synthetic dataset '" + source + "', expected synthetic:<classes 2-5>x<per class>@<seed>");
    }
    return;
  }
  std::error_code ec;
  if (!fs::is_directory(source, ec)) throw UsageError("dataset directory '" + source + "' does not exist");
}

void check_out_dir(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required");
  const fs::path parent = fs::path(out).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw UsageError("output directory '" + parent.string() + "' does not exist");
  }
}

nlohmann::json extraction_to_json(const ExtractionConfig& e) {
  return {{"glcm_levels", e.glcm_levels},
          {"moment_scaling", e.moment_scaling == MomentScaling::Raw ? "raw" : "signed_log"},
          {"edge_direction", e.edge_direction == EdgeDirectionMode::MaxCount ? "count" : "argmax"}};
}

ExtractionConfig extraction_from_json(const nlohmann::json& j) {
  ExtractionConfig e;
  if (!j.is_object()) return e;
  e.glcm_levels = j.value("glcm_levels", 16);
  e.moment_scaling = j.value("moment_scaling", std::string("signed_log")) == "raw" ? MomentScaling::Raw
                                                                                   : MomentScaling::SignedLog;
  e.edge_direction = j.value("edge_direction", std::string("argmax")) == "count" ? EdgeDirectionMode::MaxCount
                                                                                 : EdgeDirectionMode::ArgmaxIndex;
  return e;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  check_dataset(o.dataset);
  check_out_dir(o.out);
  const Scheme scheme = scheme_arg(o.scheme);
  const ExtractionConfig extraction = extraction_arg(o);
  const int threads = worker_threads();

  const LabeledDataset data = resolve_dataset(o.dataset, threads);
  std::vector<FeatureRow> rows(data.samples.size());
  std::vector<std::string> failures(data.samples.size());
  // Per-sample errors are collected so every failing id gets reported.
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    try {
      rows[i] = {data.samples[i].id, data.samples[i].label, extract(data.samples[i].image, scheme, extraction)};
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  }
  bool failed = false;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i].empty()) continue;
    if (!failed) err << "error: feature extraction failed for:\n";
    failed = true;
    err << "  " << data.samples[i].id << ": " << failures[i] << '\n';
  }
  if (failed) return kFailure;

  write_file_atomic(o.out, format_feature_csv(scheme, rows));
  out << "wrote " << rows.size() << " " << scheme_name(scheme) << " rows (" << scheme_dims(scheme)
      << " features) to " << o.out << '\n';
  return kOk;
}

int cmd_bench(Options o, std::ostream& out, std::ostream& err) {
  if (o.dataset.empty()) o.dataset = SyntheticSpec{5, 100, o.seed}.to_string();
  check_dataset(o.dataset);
  check_split(o);
  if (!o.out.empty()) check_out_dir(o.out);
  if (!o.manifest.empty()) check_out_dir(o.manifest);
  const std::vector<Scheme> schemes = scheme_list(o, true);
  std::vector<ClassifierConfig> classifiers;
  for (const std::string& name : split_list(o.classifiers.empty() ? "rf,mlp" : o.classifiers)) {
    classifiers.push_back(classifier_arg(name, o));
  }
  if (classifiers.empty()) throw UsageError("empty classifier list");

  ExperimentConfig base;
  base.train_fraction = o.split;
  base.repetitions = o.reps;
  base.base_seed = o.seed;
  base.sweep_split = o.sweep_split;
  base.normalize = normalize_arg(o.normalize);
  base.extraction = extraction_arg(o);
  base.threads = worker_threads();

  const LabeledDataset data = resolve_dataset(o.dataset, base.threads);
  const ComparisonReport report = compare_schemes(data, schemes, classifiers, base);
  const std::string table = format_report_table(report, o.sample_stddev);

  if (!o.out.empty()) {
    write_file_atomic(o.out + ".csv", format_report_csv(report));
    write_file_atomic(o.out + ".txt", table);
  }
  if (!o.manifest.empty()) {
    std::string manifest;
    for (int k = 0; k < o.reps; ++k) {
      std::string part = manifest_csv(data, repetition_split(data, base, k), repetition_seed(o.seed, k));
      if (k > 0) part.erase(0, part.find('\n') + 1);
      manifest += part;
    }
    write_file_atomic(o.manifest, manifest);
  }
  out << table;
  for (const auto& cell : report.cells) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "timing %s: extract %.3fs train %.3fs evaluate %.3fs\n", cell.method().c_str(),
                  cell.times.extract_seconds, cell.times.train_seconds, cell.times.evaluate_seconds);
    err << buf;
  }
  return kOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream&) {
  check_dataset(o.dataset);
  check_out_dir(o.out);
  const Scheme scheme = scheme_arg(o.scheme);
  const ClassifierConfig classifier = classifier_arg(o.classifier, o);
  const NormalizeMode mode = normalize_arg(o.normalize);
  const ExtractionConfig extraction = extraction_arg(o);
  const int threads = worker_threads();

  const LabeledDataset data = resolve_dataset(o.dataset, threads);
  const FeatureTable table = extract_table(data, scheme, extraction, threads);
  std::optional<Normalizer> normalizer;
  if (normalize_enabled(mode, kind_of(classifier))) normalizer = fit_normalizer(scheme, table.values);
  const TrainedModel model = train(classifier, TrainingData{scheme, table.values, table.labels}, normalizer, threads);

  nlohmann::json doc = nlohmann::json::parse(model.to_json());
  doc["extraction"] = extraction_to_json(extraction);
  write_file_atomic(o.out, doc.dump());
  out << "trained " << kind_name(model.kind()) << " on " << data.samples.size() << " " << scheme_name(scheme)
      << " samples (" << model.classes().size() << " classes), model written to " << o.out << '\n';
  return kOk;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.model.empty()) throw UsageError("--model is required");
  std::error_code ec;
  if (!fs::is_regular_file(o.model, ec)) throw UsageError("model file '" + o.model + "' does not exist");
  if (o.features.empty()) check_dataset(o.dataset);
  if (!o.out.empty()) check_out_dir(o.out);

  const std::string text = read_file(o.model);
  const TrainedModel model = TrainedModel::from_json(text);
  ExtractionConfig extraction;
  try {
    extraction = extraction_from_json(nlohmann::json::parse(text).value("extraction", nlohmann::json()));
  } catch (const nlohmann::json::exception&) {
  }

  if (!o.schemes.empty() || o.scheme != "PROPOSED") {
    const Scheme requested = scheme_arg(o.schemes.empty() ? o.scheme : o.schemes);
    if (requested != model.scheme()) {
      err << "error: model was trained on " << scheme_name(model.scheme()) << " features but " << scheme_name(requested)
          << " was requested\n";
      return kFailure;
    }
  }

  std::vector<FeatureRow> rows;
  if (!o.features.empty()) {
    rows = parse_feature_csv(read_file(o.features));
    if (!rows.empty() && rows.front().features.scheme != model.scheme()) {
      err << "error: model was trained on " << scheme_name(model.scheme()) << " features but " << o.features
          << " holds " << scheme_name(rows.front().features.scheme) << " features\n";
      return kFailure;
    }
  } else {
    const int threads = worker_threads();
    const LabeledDataset data = resolve_dataset(o.dataset, threads);
    const FeatureTable table = extract_table(data, model.scheme(), extraction, threads);
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      rows.push_back({table.sample_ids[i], table.labels[i],
                      {model.scheme(), table.values.row(static_cast<Eigen::Index>(i)).transpose()}});
    }
  }

  std::string csv = "sample_id,label,predicted\n";
  std::size_t correct = 0;
  for (const FeatureRow& row : rows) {
    const std::string predicted = model.predict(row.features);
    correct += predicted == row.label;
    csv += row.sample_id + "," + row.label + "," + predicted + "\n";
  }
  if (!o.out.empty()) write_file_atomic(o.out, csv);
  else out << csv;
  char buf[96];
  std::snprintf(buf, sizeof buf, "accuracy: %.2f%% (%zu/%zu)\n",
                rows.empty() ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(rows.size()), correct,
                rows.size());
  (o.out.empty() ? err : out) << buf;
  return kOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  if (o.dataset.rfind("synthetic:", 0) != 0) throw UsageError("synth needs --dataset synthetic:<classes>x<n>@<seed>");
  check_dataset(o.dataset);
  if (o.out.empty()) throw UsageError("--out is required");
  const LabeledDataset data = resolve_dataset(o.dataset);
  for (const std::string& label : data.class_index) fs::create_directories(fs::path(o.out) / label);
  for (const Sample& s : data.samples) write_file_atomic(fs::path(o.out) / s.id, encode_pgm(s.image));
  out << "wrote " << data.samples.size() << " images in " << data.class_index.size() << " classes to " << o.out
      << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shape and texture descriptors (EDMS, LBP, GLCM, Hu moments) with RF/MLP evaluation", "edgelbp"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dataset", o.dataset, "Dataset directory or synthetic:<classes>x<n>@<seed>");
    sub->add_option("--seed", o.seed, "Base RNG seed");
    sub->add_option("--glcm-levels", o.glcm_levels, "GLCM gray-level quantization (2-256)");
    sub->add_flag("--raw-moments", o.raw_moments, "Use uncompressed Hu moments");
    sub->add_option("--edge-direction", o.edge_direction, "EDMS edge direction feature: argmax or count");
  };
  const auto add_model_opts = [&](CLI::App* sub) {
    sub->add_option("--normalize", o.normalize, "Feature z-scoring: auto, on or off");
    sub->add_option("--trees", o.trees, "Random forest size");
    sub->add_option("--max-depth", o.max_depth, "Random forest depth limit (0 = unlimited)");
    sub->add_option("--hidden", o.hidden, "MLP hidden units");
    sub->add_option("--epochs", o.epochs, "MLP training epochs");
    sub->add_option("--lr", o.learning_rate, "MLP learning rate");
  };

  CLI::App* extract_cmd = app.add_subcommand("extract", "Write one feature CSV row per sample");
  add_common(extract_cmd);
  extract_cmd->add_option("--scheme", o.scheme, "Descriptor scheme");
  extract_cmd->add_option("--out", o.out, "Output CSV path");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the scheme x classifier comparison");
  add_common(bench_cmd);
  add_model_opts(bench_cmd);
  bench_cmd->add_option("--schemes,--scheme", o.schemes, "Comma-separated schemes (default: all)");
  bench_cmd->add_option("--classifiers,--classifier", o.classifiers, "Comma-separated classifiers (default: rf,mlp)");
  bench_cmd->add_option("--split", o.split, "Training fraction per class (0.5-0.9)");
  bench_cmd->add_option("--reps", o.reps, "Repetitions");
  bench_cmd->add_flag("--sweep-split", o.sweep_split, "Sweep the training fraction over 60-70% across repetitions");
  bench_cmd->add_flag("--sample-stddev", o.sample_stddev, "Print the n-1 standard deviation in the table");
  bench_cmd->add_option("--out", o.out, "Report path prefix (.csv and .txt are appended)");
  bench_cmd->add_option("--manifest", o.manifest, "Write the split manifest CSV here");

  CLI::App* train_cmd = app.add_subcommand("train", "Train a classifier and save the model");
  add_common(train_cmd);
  add_model_opts(train_cmd);
  train_cmd->add_option("--scheme", o.scheme, "Descriptor scheme");
  train_cmd->add_option("--classifier", o.classifier, "rf, mlp or knn");
  train_cmd->add_option("--out", o.out, "Model JSON path");

  CLI::App* predict_cmd = app.add_subcommand("predict", "Label images or feature rows with a saved model");
  add_common(predict_cmd);
  predict_cmd->add_option("--model", o.model, "Model JSON path");
  predict_cmd->add_option("--features", o.features, "Feature CSV to classify instead of a dataset");
  predict_cmd->add_option("--scheme", o.scheme, "Expected scheme; must match the model");
  predict_cmd->add_option("--out", o.out, "Prediction CSV path (default: stdout)");

  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset to disk as PGM files");
  synth_cmd->add_option("--dataset", o.dataset, "synthetic:<classes>x<n>@<seed>");
  synth_cmd->add_option("--out", o.out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*extract_cmd) return cmd_extract(o, out, err);
    if (*bench_cmd) return cmd_bench(o, out, err);
    if (*train_cmd) return cmd_train(o, out, err);
    if (*predict_cmd) return cmd_predict(o, out, err);
    if (*synth_cmd) return cmd_synth(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::IoError ? kUsage : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace edgelbp::cli
