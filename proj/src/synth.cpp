#include <algorithm>
#include <cstdio>

#include "edgelbp/dataset.hpp"
#include "edgelbp/errors.hpp"
#include "edgelbp/rng.hpp"

namespace edgelbp {

std::string_view shape_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Square: return "square";
    case ShapeKind::Disk: return "disk";
    case ShapeKind::Cross: return "cross";
    case ShapeKind::Ring: return "ring";
    case ShapeKind::RightTriangle: return "triangle";
  }
  return "?";
}

BinaryImage render_shape(ShapeKind kind, int side) {
  if (side < 1) throw Error(Errc::InvalidArgument, "shape tile side must be positive");
  BinaryImage tile = BinaryImage::Constant(side, side, false);
  // Pixel centres sit at half-integers; the tile centre is side / 2. For an
  // even side the disk is centred on a pixel corner, for an odd side on a
  // pixel centre; either way the rasterized area stays within pi r^2 bounds
  // for the tile sizes the generator uses.
  const double c = side / 2.0;
  const double outer2 = c * c;
  const double inner = 0.6 * c;
  const int bar = std::max(1, (side + 1) / 3);
  const int bar_lo = (side - bar) / 2;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double dx = x + 0.5 - c;
      const double dy = y + 0.5 - c;
      const double r2 = dx * dx + dy * dy;
      bool on = false;
      switch (kind) {
        case ShapeKind::Square: on = true; break;
        case ShapeKind::Disk: on = r2 <= outer2; break;
        case ShapeKind::Cross:
          on = (x >= bar_lo && x < bar_lo + bar) || (y >= bar_lo && y < bar_lo + bar);
          break;
        case ShapeKind::Ring: on = r2 <= outer2 && r2 > inner * inner; break;
        case ShapeKind::RightTriangle: on = x <= y; break;
      }
      tile(y, x) = on;
    }
  }
  return tile;
}

namespace {

BinaryImage rotate90(const BinaryImage& src) {
  // Counter-clockwise: (x, y) -> (y, w - 1 - x).
  BinaryImage out(src.cols(), src.rows());
  for (Eigen::Index y = 0; y < src.rows(); ++y) {
    for (Eigen::Index x = 0; x < src.cols(); ++x) out(src.cols() - 1 - x, y) = src(y, x);
  }
  return out;
}

}  // namespace

LabeledDataset synth_shapes(std::span<const ShapeKind> classes, int n_per_class, std::uint64_t seed) {
  if (n_per_class < 2) throw Error(Errc::InvalidArgument, "synthetic classes need at least 2 samples each");
  if (classes.empty()) throw Error(Errc::InvalidArgument, "no shape generators given");

  Rng rng(seed);
  LabeledDataset d;
  d.name = "synthetic";
  char name[64];
  for (ShapeKind kind : classes) {
    const std::string label(shape_name(kind));
    d.class_index.push_back(label);
    for (int i = 0; i < n_per_class; ++i) {
      const int side = 32 + static_cast<int>(rng.below(32));
      const int turns = static_cast<int>(rng.below(4));
      const int ox = static_cast<int>(rng.below(static_cast<std::size_t>(kSynthCanvas - side + 1)));
      const int oy = static_cast<int>(rng.below(static_cast<std::size_t>(kSynthCanvas - side + 1)));

      BinaryImage tile = render_shape(kind, side);
      for (int t = 0; t < turns; ++t) tile = rotate90(tile);

      GrayImage canvas = GrayImage::Constant(kSynthCanvas, kSynthCanvas, 255);
      canvas.block(oy, ox, side, side) = tile.select(GrayImage::Zero(side, side), GrayImage::Constant(side, side, 255));
      std::snprintf(name, sizeof name, "%s_%03d.pgm", label.c_str(), i);
      d.samples.push_back({label + "/" + name, label, std::move(canvas)});
    }
  }
  std::sort(d.class_index.begin(), d.class_index.end());
  d.class_index.erase(std::unique(d.class_index.begin(), d.class_index.end()), d.class_index.end());
  std::stable_sort(d.samples.begin(), d.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.id < b.id; });
  return d;
}

}  // namespace edgelbp
