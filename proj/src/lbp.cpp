#include "edgelbp/lbp.hpp"

#include <array>
#include <string>

#include "edgelbp/errors.hpp"

namespace edgelbp {
namespace {

inline std::uint8_t code_at(const std::uint8_t* up, const std::uint8_t* mid, const std::uint8_t* down,
                            Eigen::Index x) {
  const std::uint8_t c = mid[x];
  return static_cast<std::uint8_t>((mid[x + 1] >= c) | (up[x + 1] >= c) << 1 | (up[x] >= c) << 2 |
                                   (up[x - 1] >= c) << 3 | (mid[x - 1] >= c) << 4 | (down[x - 1] >= c) << 5 |
                                   (down[x] >= c) << 6 | (down[x + 1] >= c) << 7);
}

}  // namespace

std::uint8_t lbp_code(const GrayImage& image, Eigen::Index x, Eigen::Index y) {
  if (x < 1 || y < 1 || x >= image.cols() - 1 || y >= image.rows() - 1) {
    throw Error(Errc::OutOfDomain,
                "pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") has no full 8-neighbourhood");
  }
  const std::uint8_t* row = image.data() + y * image.cols();
  return code_at(row - image.cols(), row, row + image.cols(), x);
}

LbpHistogram lbp_histogram(const GrayImage& image) {
  LbpHistogram hist = LbpHistogram::Zero();
  const Eigen::Index w = image.cols();
  const Eigen::Index h = image.rows();
  if (w < 3 || h < 3) return hist;

  std::array<std::int64_t, 256> counts{};
  for (Eigen::Index y = 1; y < h - 1; ++y) {
    const std::uint8_t* mid = image.data() + y * w;
    for (Eigen::Index x = 1; x < w - 1; ++x) ++counts[code_at(mid - w, mid, mid + w, x)];
  }
  const double interior = static_cast<double>((w - 2) * (h - 2));
  for (int i = 0; i < 256; ++i) hist(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) / interior;
  return hist;
}

}  // namespace edgelbp
