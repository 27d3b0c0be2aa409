#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace edgelbp {

/// Row-major pixel grid: rows() is the image height, cols() the width, and
/// pixel (x, y) lives at (y, x).
template <typename T>
using Raster = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit intensities, 0 = black.
using GrayImage = Raster<std::uint8_t>;

/// true = black / foreground.
using BinaryImage = Raster<bool>;

/// Boundary pixels of a BinaryImage; true = edge pixel.
struct EdgeMap {
  BinaryImage pixels;

  Eigen::Index width() const { return pixels.cols(); }
  Eigen::Index height() const { return pixels.rows(); }
  bool operator()(Eigen::Index x, Eigen::Index y) const { return pixels(y, x); }
};

/// Interleaved 8-bit raster as produced by a decoder (1, 2, 3 or 4 channels).
struct DecodedImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

/// Multi-channel rasters collapse to the equal-weight channel mean rounded
/// half up; a trailing alpha channel (2- or 4-channel input) is ignored.
/// Throws Errc::InvalidImage for empty or inconsistent rasters.
GrayImage to_gray(const DecodedImage& image);

/// Threshold t in [1, 255] maximizing between-class variance of the split
/// {intensity < t} / {intensity >= t}; ties go to the smallest t.
/// Returns 0 when no split separates anything (constant image).
int otsu_threshold(const GrayImage& image);

/// Otsu split, then the smaller class is declared foreground (black). When
/// both classes have the same size the dark class wins. A constant image is
/// all background.
BinaryImage binarize_otsu(const GrayImage& image);

/// Black pixels that lie on the image border or have at least one white
/// 8-neighbour.
EdgeMap extract_edges(const BinaryImage& image);

inline Eigen::Index count_black(const BinaryImage& image) { return image.count(); }

}  // namespace edgelbp
