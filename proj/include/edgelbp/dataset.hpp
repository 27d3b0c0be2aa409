#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgelbp/imaging.hpp"

namespace edgelbp {

struct Sample {
  std::string id;  ///< "class/filename" for loaded data
  std::string label;
  GrayImage image;
};

struct LabeledDataset {
  std::string name;
  std::vector<Sample> samples;
  std::vector<std::string> class_index;  ///< sorted unique labels
  std::vector<std::string> warnings;     ///< files skipped while loading

  std::vector<std::string> labels() const;
};

/// Reads `root/<class>/<file>` for .png, .pgm, .ppm and .bmp files.
/// Classes and files are visited in lexicographic order. Undecodable files
/// are skipped with a warning (also printed to stderr).
/// Throws Errc::IoError for a missing root, Errc::EmptyDataset when nothing
/// loads and Errc::DegenerateClass when a class directory ends up empty.
LabeledDataset load_dataset(const std::filesystem::path& root, int threads = 1);

struct SplitSpec {
  double train_fraction = 0.7;  ///< must lie in [0.5, 0.9]
  std::uint64_t seed = 0;
};

/// Indices into the dataset, each list ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  /// FNV-1a over the train list then the test list.
  std::uint64_t membership_hash() const;
};

/// round-half-up(fraction * n), clamped to [1, n - 1].
std::size_t train_count(double fraction, std::size_t class_size);

/// Stratified split. Each class (in class_index order) is shuffled with one
/// shared Rng(seed) and cut at train_count. Throws Errc::InvalidArgument for
/// a fraction outside [0.5, 0.9] and Errc::DegenerateClass for a class with
/// fewer than two samples.
Split split(const LabeledDataset& dataset, const SplitSpec& spec);
Split split(std::span<const std::string> labels, std::span<const std::string> class_index, const SplitSpec& spec);

/// Audit CSV: `sample_id,label,partition,seed`.
std::string manifest_csv(const LabeledDataset& dataset, const Split& split, std::uint64_t seed);

enum class ShapeKind { Square, Disk, Cross, Ring, RightTriangle };

inline constexpr std::array<ShapeKind, 5> kAllShapes = {ShapeKind::Square, ShapeKind::Disk, ShapeKind::Cross,
                                                        ShapeKind::Ring, ShapeKind::RightTriangle};

std::string_view shape_name(ShapeKind kind);

inline constexpr int kSynthCanvas = 64;

/// Renders one shape into an L x L tile, L in [32, 63]: black (true) inside.
BinaryImage render_shape(ShapeKind kind, int side);

/// n_per_class instances per generator on a 64 x 64 canvas. Each instance
/// picks a tile side L = 32 + below(32) (scale L/64 in [0.5, 1)), a
/// rotation by a multiple of 90 degrees and a translation keeping the tile
/// inside the canvas. Foreground is 0 and background 255.
LabeledDataset synth_shapes(std::span<const ShapeKind> classes, int n_per_class, std::uint64_t seed);

/// `synthetic:<n_classes>x<n_per_class>@<seed>`, n_classes in [2, 5].
struct SyntheticSpec {
  int n_classes = 5;
  int n_per_class = 100;
  std::uint64_t seed = 42;

  static std::optional<SyntheticSpec> parse(std::string_view source);
  std::string to_string() const;
};

/// A synthetic URI or a directory path.
LabeledDataset resolve_dataset(std::string_view source, int threads = 1);

}  // namespace edgelbp
