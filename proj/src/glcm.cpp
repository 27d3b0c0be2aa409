#include "edgelbp/glcm.hpp"

#include <algorithm>
#include <string>

namespace edgelbp {

QuantizedImage quantize(const GrayImage& image, int levels) {
  if (levels < 2 || levels > 256) {
    throw Error(Errc::InvalidArgument, "quantization levels must be in [2, 256], got " + std::to_string(levels));
  }
  QuantizedImage q;
  q.levels = levels;
  q.values = ((image.cast<int>() * levels) / 256).cast<std::uint8_t>();
  return q;
}

GlcmMatrix compute_glcm(const QuantizedImage& image, GlcmOffset offset, bool symmetric, bool normalize) {
  GlcmMatrix m;
  m.levels = image.levels;
  m.counts = GlcmCounts::Zero(image.levels, image.levels);

  const Eigen::Index w = image.values.cols();
  const Eigen::Index h = image.values.rows();
  const Eigen::Index x0 = std::max<Eigen::Index>(0, -offset.dx);
  const Eigen::Index x1 = std::min<Eigen::Index>(w, w - offset.dx);
  const Eigen::Index y0 = std::max<Eigen::Index>(0, -offset.dy);
  const Eigen::Index y1 = std::min<Eigen::Index>(h, h - offset.dy);
  for (Eigen::Index y = y0; y < y1; ++y) {
    for (Eigen::Index x = x0; x < x1; ++x) {
      ++m.counts(image.values(y, x), image.values(y + offset.dy, x + offset.dx));
    }
  }
  if (symmetric) m.counts += m.counts.transpose().eval();
  if (normalize) {
    const std::int64_t total = m.counts.sum();
    m.normalized = Eigen::MatrixXd::Zero(image.levels, image.levels);
    if (total > 0) m.normalized = m.counts.cast<double>() / static_cast<double>(total);
  }
  return m;
}

Eigen::VectorXd glcm_descriptor(const GrayImage& image, int levels) {
  const QuantizedImage q = quantize(image, levels);
  Eigen::VectorXd out(4 * GlcmFeatures<double>::kDims);
  for (std::size_t k = 0; k < kGlcmAngles.size(); ++k) {
    const GlcmMatrix m = compute_glcm(q, GlcmOffset::of(kGlcmAngles[k]), true, true);
    out.segment<GlcmFeatures<double>::kDims>(static_cast<Eigen::Index>(k) * GlcmFeatures<double>::kDims) =
        glcm_features(m.normalized).to_vector();
  }
  return out;
}

}  // namespace edgelbp
