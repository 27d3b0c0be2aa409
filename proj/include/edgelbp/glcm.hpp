#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "edgelbp/errors.hpp"
#include "edgelbp/imaging.hpp"

namespace edgelbp {

enum class GlcmAngle : std::uint8_t { Deg0, Deg45, Deg90, Deg135 };

inline constexpr std::array<GlcmAngle, 4> kGlcmAngles = {GlcmAngle::Deg0, GlcmAngle::Deg45, GlcmAngle::Deg90,
                                                         GlcmAngle::Deg135};

/// Distance-1 displacement; y grows downward so 45 degrees is (+1, -1).
struct GlcmOffset {
  int dx;
  int dy;
  GlcmAngle angle;

  static constexpr GlcmOffset of(GlcmAngle a) {
    switch (a) {
      case GlcmAngle::Deg0: return {1, 0, a};
      case GlcmAngle::Deg45: return {1, -1, a};
      case GlcmAngle::Deg90: return {0, -1, a};
      case GlcmAngle::Deg135: return {-1, -1, a};
    }
    return {1, 0, GlcmAngle::Deg0};
  }
};

struct QuantizedImage {
  Raster<std::uint8_t> values;
  int levels = 256;
};

/// value = floor(intensity * levels / 256). Throws Errc::InvalidArgument
/// unless levels is in [2, 256].
QuantizedImage quantize(const GrayImage& image, int levels);

using GlcmCounts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct GlcmMatrix {
  int levels = 0;
  GlcmCounts counts;
  Eigen::MatrixXd normalized;  ///< counts / total; empty unless requested
};

/// Counts (i, j) pairs with q(x, y) = i and q(x + dx, y + dy) = j. Pairs that
/// leave the image are skipped. `symmetric` adds the transpose.
GlcmMatrix compute_glcm(const QuantizedImage& image, GlcmOffset offset, bool symmetric, bool normalize);

template <typename Scalar>
struct GlcmFeatures {
  static constexpr int kDims = 7;

  Scalar contrast{0};
  Scalar homogeneity{0};
  Scalar asm_{0};
  Scalar entropy{0};
  Scalar variance_i{0};
  Scalar variance_j{0};
  Scalar correlation{0};

  Eigen::Matrix<Scalar, kDims, 1> to_vector() const {
    Eigen::Matrix<Scalar, kDims, 1> v;
    v << contrast, homogeneity, asm_, entropy, variance_i, variance_j, correlation;
    return v;
  }
};

/// Haralick-style statistics of a normalized co-occurrence matrix. The
/// all-zero matrix maps to all-zero features and a zero variance makes the
/// correlation 0. Throws Errc::InvalidArgument for a nonzero matrix that
/// does not sum to 1.
template <typename Derived>
GlcmFeatures<typename Derived::Scalar> glcm_features(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  GlcmFeatures<Scalar> f;
  const Scalar total = p.sum();
  if (total == Scalar(0) && (p.array() == Scalar(0)).all()) return f;
  if (std::abs(total - Scalar(1)) > Scalar(1e-9) || (p.array() < Scalar(0)).any()) {
    throw Error(Errc::InvalidArgument, "co-occurrence matrix is not normalized");
  }

  const Eigen::Index n = p.rows();
  Scalar mu_i{0};
  Scalar mu_j{0};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const Scalar pij = p(i, j);
      if (pij == Scalar(0)) continue;
      const Scalar d = Scalar(i - j);
      f.contrast += pij * d * d;
      f.homogeneity += pij / (Scalar(1) + d * d);
      f.asm_ += pij * pij;
      f.entropy -= pij * std::log(pij);
      mu_i += Scalar(i) * pij;
      mu_j += Scalar(j) * pij;
    }
  }
  Scalar cov{0};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const Scalar pij = p(i, j);
      if (pij == Scalar(0)) continue;
      const Scalar di = Scalar(i) - mu_i;
      const Scalar dj = Scalar(j) - mu_j;
      f.variance_i += pij * di * di;
      f.variance_j += pij * dj * dj;
      cov += pij * di * dj;
    }
  }
  if (f.variance_i > Scalar(0) && f.variance_j > Scalar(0)) {
    f.correlation = cov / std::sqrt(f.variance_i * f.variance_j);
  }
  return f;
}

/// Symmetric, normalized matrices at 0/45/90/135 degrees; the four feature
/// blocks are concatenated in that order (28 values).
Eigen::VectorXd glcm_descriptor(const GrayImage& image, int levels = 16);

}  // namespace edgelbp
