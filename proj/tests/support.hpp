#pragma once

// Image builders and geometric transforms shared by the test suites.

#include <filesystem>
#include <string>

#include "edgelbp/imaging.hpp"
#include "edgelbp/rng.hpp"

namespace edgelbp::testing {

inline GrayImage random_gray(Rng& rng, Eigen::Index width, Eigen::Index height) {
  GrayImage g(height, width);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = static_cast<std::uint8_t>(rng.below(256));
  return g;
}

inline BinaryImage random_binary(Rng& rng, Eigen::Index width, Eigen::Index height, double black = 0.5) {
  BinaryImage b(height, width);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform() < black;
  return b;
}

/// A random blob: union of a few filled rectangles inside a w x h frame.
inline BinaryImage random_blob(Rng& rng, Eigen::Index width, Eigen::Index height, int rects = 3) {
  BinaryImage b = BinaryImage::Constant(height, width, false);
  for (int r = 0; r < rects; ++r) {
    const auto w = 2 + static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(width / 2)));
    const auto h = 2 + static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(height / 2)));
    const auto x = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(width - w + 1)));
    const auto y = static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(height - h + 1)));
    b.block(y, x, h, w).setConstant(true);
  }
  return b;
}

/// Quarter turn counter-clockwise on screen: pixel (x, y) of a w x h image
/// lands at (y, w - 1 - x).
template <typename T>
Raster<T> rotate90(const Raster<T>& img) {
  const Eigen::Index w = img.cols();
  const Eigen::Index h = img.rows();
  Raster<T> out(w, h);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) out(w - 1 - x, y) = img(y, x);
  }
  return out;
}

template <typename T>
Raster<T> mirror_x(const Raster<T>& img) {
  return img.rowwise().reverse();
}

template <typename T>
Raster<T> replicate2(const Raster<T>& img) {
  Raster<T> out(img.rows() * 2, img.cols() * 2);
  for (Eigen::Index y = 0; y < out.rows(); ++y) {
    for (Eigen::Index x = 0; x < out.cols(); ++x) out(y, x) = img(y / 2, x / 2);
  }
  return out;
}

template <typename T>
Raster<T> pad(const Raster<T>& img, Eigen::Index left, Eigen::Index top, Eigen::Index right, Eigen::Index bottom,
              T fill) {
  Raster<T> out = Raster<T>::Constant(img.rows() + top + bottom, img.cols() + left + right, fill);
  out.block(top, left, img.rows(), img.cols()) = img;
  return out;
}

inline GrayImage to_gray_image(const BinaryImage& b) {
  return b.select(GrayImage::Zero(b.rows(), b.cols()), GrayImage::Constant(b.rows(), b.cols(), 255));
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    Rng rng(static_cast<std::uint64_t>(std::hash<std::string>{}(tag)) ^
            static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)));
    path_ = std::filesystem::temp_directory_path() / ("edgelbp-" + tag + "-" + std::to_string(rng.next() % 1000000007));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& child = "") const { return child.empty() ? path_.string() : (path_ / child).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace edgelbp::testing
