#include "edgelbp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

#include "edgelbp/errors.hpp"
#include "edgelbp/image_io.hpp"
#include "edgelbp/rng.hpp"
#include "parallel.hpp"

namespace edgelbp {

namespace fs = std::filesystem;

std::vector<std::string> LabeledDataset::labels() const {
  std::vector<std::string> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) out.push_back(s.label);
  return out;
}

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".bmp";
}

}  // namespace

LabeledDataset load_dataset(const fs::path& root, int threads) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(Errc::IoError, "dataset root " + root.string() + " is not a directory");

  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) throw Error(Errc::EmptyDataset, root.string() + " has no class directories");

  struct Pending {
    fs::path path;
    std::string label;
  };
  std::vector<Pending> files;
  for (const fs::path& dir : class_dirs) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && is_image_file(entry.path())) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    for (auto& p : paths) files.push_back({std::move(p), dir.filename().string()});
  }
  if (files.empty()) throw Error(Errc::EmptyDataset, root.string() + " contains no image files");

  std::vector<std::optional<GrayImage>> images(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) {
    try {
      images[i] = load_gray(files[i].path);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  LabeledDataset d;
  d.name = root.filename().empty() ? root.parent_path().filename().string() : root.filename().string();
  std::map<std::string, int> per_class;
  for (const fs::path& dir : class_dirs) per_class[dir.filename().string()] = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!images[i]) {
      d.warnings.push_back("skipped " + files[i].path.string() + ": " + errors[i]);
      std::cerr << "warning: " << d.warnings.back() << '\n';
      continue;
    }
    ++per_class[files[i].label];
    d.samples.push_back({files[i].label + "/" + files[i].path.filename().string(), files[i].label,
                         std::move(*images[i])});
  }
  for (const auto& [label, count] : per_class) {
    if (count == 0) {
      std::string skipped;
      for (const auto& f : files) {
        if (f.label == label) skipped += (skipped.empty() ? "" : ", ") + f.label + "/" + f.path.filename().string();
      }
      throw Error(Errc::DegenerateClass, "class '" + label + "' has no loadable images (skipped " + skipped + ")");
    }
    d.class_index.push_back(label);
  }
  return d;
}

std::uint64_t Split::membership_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i : train) feed(i);
  feed(~0ULL);
  for (std::size_t i : test) feed(i);
  return h;
}

std::size_t train_count(double fraction, std::size_t class_size) {
  // The epsilon absorbs products such as 0.7 * 10 = 7.000000000000001 and
  // 0.65 * 10 = 6.499999999999999 sitting on the wrong side of a half.
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(class_size) + 0.5 + 1e-9));
  if (class_size >= 2) k = std::clamp<std::size_t>(k, 1, class_size - 1);
  return k;
}

Split split(std::span<const std::string> labels, std::span<const std::string> class_index, const SplitSpec& spec) {
  if (!(spec.train_fraction >= 0.5 && spec.train_fraction <= 0.9)) {
    throw Error(Errc::InvalidArgument, "train fraction must be in [0.5, 0.9], got " +
                                           std::to_string(spec.train_fraction));
  }
  Rng rng(spec.seed);
  Split s;
  for (const std::string& label : class_index) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) members.push_back(i);
    }
    if (members.size() < 2) {
      throw Error(Errc::DegenerateClass, "class '" + label + "' has " + std::to_string(members.size()) +
                                             " sample(s); a split needs at least 2");
    }
    rng.shuffle(members.begin(), members.end());
    const std::size_t k = train_count(spec.train_fraction, members.size());
    s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
    s.test.insert(s.test.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Split split(const LabeledDataset& dataset, const SplitSpec& spec) {
  const std::vector<std::string> labels = dataset.labels();
  return split(labels, dataset.class_index, spec);
}

std::string manifest_csv(const LabeledDataset& dataset, const Split& s, std::uint64_t seed) {
  std::vector<const char*> partition(dataset.samples.size(), "unused");
  for (std::size_t i : s.train) partition[i] = "train";
  for (std::size_t i : s.test) partition[i] = "test";
  std::string out = "sample_id,label,partition,seed\n";
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    out += dataset.samples[i].id + "," + dataset.samples[i].label + "," + partition[i] + "," +
           std::to_string(seed) + "\n";
  }
  return out;
}

std::optional<SyntheticSpec> SyntheticSpec::parse(std::string_view source) {
  constexpr std::string_view prefix = "synthetic:";
  if (source.substr(0, prefix.size()) != prefix) return std::nullopt;
  source.remove_prefix(prefix.size());
  SyntheticSpec spec;
  const auto x = source.find('x');
  const auto at = source.find('@');
  if (x == std::string_view::npos || at == std::string_view::npos || at < x) return std::nullopt;
  const auto parse_num = [](std::string_view s, auto& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  if (!parse_num(source.substr(0, x), spec.n_classes) || !parse_num(source.substr(x + 1, at - x - 1), spec.n_per_class) ||
      !parse_num(source.substr(at + 1), spec.seed)) {
    return std::nullopt;
  }
  if (spec.n_classes < 2 || spec.n_classes > static_cast<int>(kAllShapes.size()) || spec.n_per_class < 2) {
    return std::nullopt;
  }
  return spec;
}

std::string SyntheticSpec::to_string() const {
  return "synthetic:" + std::to_string(n_classes) + "x" + std::to_string(n_per_class) + "@" + std::to_string(seed);
}

LabeledDataset resolve_dataset(std::string_view source, int threads) {
  if (source.substr(0, 10) == "synthetic:") {
    const auto spec = SyntheticSpec::parse(source);
    if (!spec) {
      throw Error(Errc::InvalidArgument, "bad synthetic dataset '" + std::string(source) +
                                             "', expected synthetic:<classes 2-5>x<per class, at least 2>@<seed>");
    }
    LabeledDataset d = synth_shapes(std::span(kAllShapes).first(static_cast<std::size_t>(spec->n_classes)),
                                    spec->n_per_class, spec->seed);
    d.name = spec->to_string();
    return d;
  }
  return load_dataset(fs::path(source), threads);
}

}  // namespace edgelbp
