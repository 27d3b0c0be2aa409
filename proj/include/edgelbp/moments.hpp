#pragma once

#include <cmath>

#include <Eigen/Core>

#include "edgelbp/errors.hpp"
#include "edgelbp/imaging.hpp"

namespace edgelbp {

/// Central moments of the foreground through order three.
/// u(p, q) = sum over black pixels of (x - cx)^p (y - cy)^q for p + q <= 3;
/// entries with p + q > 3 are zero.
template <typename Scalar>
struct CentralMoments {
  Scalar m00{0};
  Scalar cx{0};
  Scalar cy{0};
  Eigen::Matrix<Scalar, 4, 4> u = Eigen::Matrix<Scalar, 4, 4>::Zero();

  Scalar operator()(int p, int q) const { return u(p, q); }
};

/// Scale-normalized moments eta(p, q) = u(p, q) / m00^(1 + (p + q) / 2).
template <typename Scalar>
struct NormalizedMoments {
  Eigen::Matrix<Scalar, 4, 4> eta = Eigen::Matrix<Scalar, 4, 4>::Zero();

  Scalar operator()(int p, int q) const { return eta(p, q); }
};

template <typename Scalar>
using HuVector = Eigen::Matrix<Scalar, 7, 1>;

CentralMoments<double> central_moments(const BinaryImage& image);

/// Throws Errc::EmptyShape when m00 is zero.
template <typename Scalar>
NormalizedMoments<Scalar> normalized_moments(const CentralMoments<Scalar>& c) {
  if (!(c.m00 > Scalar(0))) throw Error(Errc::EmptyShape, "shape has no foreground pixels");
  NormalizedMoments<Scalar> n;
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; p + q <= 3; ++q) {
      n.eta(p, q) = c.u(p, q) / std::pow(c.m00, Scalar(1) + Scalar(p + q) / Scalar(2));
    }
  }
  return n;
}

/// Hu's seven rotation invariants (canonical 1962 forms).
template <typename Scalar>
HuVector<Scalar> hu_moments(const NormalizedMoments<Scalar>& m) {
  const Scalar n20 = m(2, 0), n02 = m(0, 2), n11 = m(1, 1);
  const Scalar n30 = m(3, 0), n03 = m(0, 3), n21 = m(2, 1), n12 = m(1, 2);

  const Scalar a = n30 + n12;
  const Scalar b = n21 + n03;
  const Scalar c = n30 - Scalar(3) * n12;
  const Scalar d = Scalar(3) * n21 - n03;

  HuVector<Scalar> v;
  v(0) = n20 + n02;
  v(1) = (n20 - n02) * (n20 - n02) + Scalar(4) * n11 * n11;
  v(2) = c * c + d * d;
  v(3) = a * a + b * b;
  v(4) = c * a * (a * a - Scalar(3) * b * b) + d * b * (Scalar(3) * a * a - b * b);
  v(5) = (n20 - n02) * (a * a - b * b) + Scalar(4) * n11 * a * b;
  v(6) = d * a * (a * a - Scalar(3) * b * b) - c * b * (Scalar(3) * a * a - b * b);
  return v;
}

/// sign(v) * ln(1 + |v|), coefficient-wise.
template <typename Derived>
auto signed_log(const Eigen::ArrayBase<Derived>& v) {
  return v.sign() * v.abs().log1p();
}

enum class MomentScaling { SignedLog, Raw };

/// Seven Hu invariants of the foreground, signed-log compressed by
/// default. An empty image gives the zero vector.
Eigen::VectorXd moment_descriptor(const BinaryImage& image, MomentScaling scaling = MomentScaling::SignedLog);

}  // namespace edgelbp
