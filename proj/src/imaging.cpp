#include "edgelbp/imaging.hpp"

#include <array>
#include <string>

#include "edgelbp/errors.hpp"

namespace edgelbp {

GrayImage to_gray(const DecodedImage& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw Error(Errc::InvalidImage, "raster has zero dimension (" + std::to_string(image.width) + "x" +
                                        std::to_string(image.height) + ")");
  }
  if (image.channels < 1 || image.channels > 4) {
    throw Error(Errc::InvalidImage, "unsupported channel count " + std::to_string(image.channels));
  }
  const std::size_t pixels = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
  if (image.data.size() != pixels * static_cast<std::size_t>(image.channels)) {
    throw Error(Errc::InvalidImage, "raster data length does not match its dimensions");
  }

  const int color = image.channels >= 3 ? 3 : 1;
  GrayImage out(image.height, image.width);
  const std::uint8_t* src = image.data.data();
  std::uint8_t* dst = out.data();
  for (std::size_t i = 0; i < pixels; ++i, src += image.channels) {
    if (color == 1) {
      dst[i] = src[0];
    } else {
      const int sum = src[0] + src[1] + src[2];
      dst[i] = static_cast<std::uint8_t>((2 * sum + 3) / 6);  // round(sum / 3), half up
    }
  }
  return out;
}

int otsu_threshold(const GrayImage& image) {
  std::array<std::int64_t, 256> hist{};
  for (Eigen::Index i = 0; i < image.size(); ++i) ++hist[image.data()[i]];

  const std::int64_t total = image.size();
  std::int64_t total_sum = 0;
  for (int v = 0; v < 256; ++v) total_sum += hist[v] * v;

  // Between-class variance is proportional to (n0*S1 - n1*S0)^2 / (n0*n1).
  // The numerator is formed exactly in integers, so an image and its
  // intensity inverse produce bit-identical scores for matching splits.
  int best_t = 0;
  double best_score = 0.0;
  std::int64_t n0 = 0;
  std::int64_t s0 = 0;
  for (int t = 1; t < 256; ++t) {
    n0 += hist[t - 1];
    s0 += hist[t - 1] * (t - 1);
    const std::int64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const std::int64_t s1 = total_sum - s0;
    const double diff = static_cast<double>(n0 * s1 - n1 * s0);
    const double score = diff * diff / (static_cast<double>(n0) * static_cast<double>(n1));
    if (score > best_score) {
      best_score = score;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize_otsu(const GrayImage& image) {
  BinaryImage out = BinaryImage::Constant(image.rows(), image.cols(), false);
  const int t = otsu_threshold(image);
  if (t == 0) return out;

  const auto dark = (image.cast<int>() < t).eval();
  const Eigen::Index dark_count = dark.count();
  if (dark_count <= image.size() - dark_count) {
    out = dark;
  } else {
    out = !dark;
  }
  return out;
}

EdgeMap extract_edges(const BinaryImage& image) {
  const Eigen::Index h = image.rows();
  const Eigen::Index w = image.cols();
  EdgeMap edges{BinaryImage::Constant(h, w, false)};
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      if (!image(y, x)) continue;
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) {
        edges.pixels(y, x) = true;
        continue;
      }
      const bool interior = image(y - 1, x - 1) && image(y - 1, x) && image(y - 1, x + 1) && image(y, x - 1) &&
                            image(y, x + 1) && image(y + 1, x - 1) && image(y + 1, x) && image(y + 1, x + 1);
      edges.pixels(y, x) = !interior;
    }
  }
  return edges;
}

}  // namespace edgelbp
