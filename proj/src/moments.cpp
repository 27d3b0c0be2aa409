#include "edgelbp/moments.hpp"

#include <algorithm>
#include <cstdint>

namespace edgelbp {

CentralMoments<double> central_moments(const BinaryImage& image) {
  CentralMoments<double> c;
  if (!image.any()) return c;

  // Coordinates are taken relative to the foreground bounding box so a
  // translated shape produces bit-identical sums.
  Eigen::Index min_x = image.cols();
  Eigen::Index min_y = image.rows();
  for (Eigen::Index y = 0; y < image.rows(); ++y) {
    for (Eigen::Index x = 0; x < image.cols(); ++x) {
      if (!image(y, x)) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
    }
  }

  double sx = 0.0;
  double sy = 0.0;
  std::int64_t count = 0;
  for (Eigen::Index y = min_y; y < image.rows(); ++y) {
    for (Eigen::Index x = min_x; x < image.cols(); ++x) {
      if (!image(y, x)) continue;
      ++count;
      sx += static_cast<double>(x - min_x);
      sy += static_cast<double>(y - min_y);
    }
  }
  c.m00 = static_cast<double>(count);
  const double rx = sx / c.m00;
  const double ry = sy / c.m00;
  c.cx = static_cast<double>(min_x) + rx;
  c.cy = static_cast<double>(min_y) + ry;

  c.u(0, 0) = c.m00;
  for (Eigen::Index y = min_y; y < image.rows(); ++y) {
    const double dy = static_cast<double>(y - min_y) - ry;
    for (Eigen::Index x = min_x; x < image.cols(); ++x) {
      if (!image(y, x)) continue;
      const double dx = static_cast<double>(x - min_x) - rx;
      c.u(2, 0) += dx * dx;
      c.u(0, 2) += dy * dy;
      c.u(1, 1) += dx * dy;
      c.u(3, 0) += dx * dx * dx;
      c.u(0, 3) += dy * dy * dy;
      c.u(2, 1) += dx * dx * dy;
      c.u(1, 2) += dx * dy * dy;
    }
  }
  return c;
}

Eigen::VectorXd moment_descriptor(const BinaryImage& image, MomentScaling scaling) {
  const CentralMoments<double> c = central_moments(image);
  if (c.m00 == 0.0) return Eigen::VectorXd::Zero(7);
  const HuVector<double> hu = hu_moments(normalized_moments(c));
  if (scaling == MomentScaling::Raw) return hu;
  return signed_log(hu.array()).matrix();
}

}  // namespace edgelbp
