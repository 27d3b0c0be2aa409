#include "edgelbp/edms.hpp"

#include <algorithm>

namespace edgelbp {
namespace {

// Bit d of the result is set when the neighbour in direction d is an edge.
std::uint8_t neighbour_mask(const EdgeMap& edges, Eigen::Index x, Eigen::Index y) {
  const Eigen::Index w = edges.width();
  const Eigen::Index h = edges.height();
  std::uint8_t mask = 0;
  for (const Direction d : kAllDirections) {
    const auto o = offset_of(d);
    const Eigen::Index nx = x + o.dx;
    const Eigen::Index ny = y + o.dy;
    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
    if (edges(nx, ny)) mask |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(d));
  }
  return mask;
}

double ratio(int num, int den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

Edm compute_edm1(const EdgeMap& edges) {
  std::array<int, 8> counts{};
  int pixels = 0;
  for (Eigen::Index y = 0; y < edges.height(); ++y) {
    for (Eigen::Index x = 0; x < edges.width(); ++x) {
      if (!edges(x, y)) continue;
      ++pixels;
      const std::uint8_t mask = neighbour_mask(edges, x, y);
      for (int d = 0; d < 8; ++d) counts[d] += (mask >> d) & 1;
    }
  }
  Edm edm;
  edm.center() = pixels;
  for (const Direction d : kAllDirections) edm[d] = counts[static_cast<std::size_t>(d)];
  return edm;
}

DirectionRanking rank_directions(const Edm& edm1) {
  DirectionRanking order = kAllDirections;
  std::stable_sort(order.begin(), order.end(), [&](Direction a, Direction b) { return edm1[a] > edm1[b]; });
  return order;
}

Edm compute_edm2(const EdgeMap& edges, const DirectionRanking& ranking) {
  Edm edm;
  for (Eigen::Index y = 0; y < edges.height(); ++y) {
    for (Eigen::Index x = 0; x < edges.width(); ++x) {
      if (!edges(x, y)) continue;
      ++edm.center();
      const std::uint8_t mask = neighbour_mask(edges, x, y);
      if (mask == 0) continue;
      for (const Direction d : ranking) {
        if ((mask >> static_cast<unsigned>(d)) & 1) {
          ++edm[d];
          break;
        }
      }
    }
  }
  return edm;
}

Eigen::VectorXd EdmsFeatures::to_vector() const {
  Eigen::VectorXd v(kDims);
  Eigen::Index k = 0;
  for (double x : pixel_regularity) v(k++) = x;
  for (double x : homogeneity) v(k++) = x;
  for (double x : correlation) v(k++) = x;
  v(k++) = weight;
  v(k++) = edge_direction;
  for (double x : edge_regularity) v(k++) = x;
  return v;
}

EdmsFeatures edms_features(const Edm& edm1, const Edm& edm2, const BinaryImage& source, EdgeDirectionMode mode) {
  EdmsFeatures f;
  const int edge_pixels = edm1.center();
  const int dir_sum = edm1.direction_sum();

  int best = 0;
  for (int k = 0; k < 4; ++k) {
    const int count = edm1[kAllDirections[static_cast<std::size_t>(k)]];
    f.pixel_regularity[static_cast<std::size_t>(k)] = ratio(count, edge_pixels);
    f.homogeneity[static_cast<std::size_t>(k)] = ratio(count, dir_sum);
    f.correlation[static_cast<std::size_t>(k)] = ratio(count, dir_sum + edge_pixels);
    if (count > edm1[kAllDirections[static_cast<std::size_t>(best)]]) best = k;
  }
  f.weight = ratio(edge_pixels, static_cast<int>(source.count()));
  f.edge_direction = mode == EdgeDirectionMode::ArgmaxIndex
                         ? static_cast<double>(best)
                         : static_cast<double>(edm1[kAllDirections[static_cast<std::size_t>(best)]]);
  for (const Direction d : kAllDirections) {
    f.edge_regularity[static_cast<std::size_t>(d)] = ratio(edm2[d], edm2.center());
  }
  return f;
}

EdmsFeatures edms_descriptor(const BinaryImage& source, EdgeDirectionMode mode) {
  const EdgeMap edges = extract_edges(source);
  const Edm edm1 = compute_edm1(edges);
  const Edm edm2 = compute_edm2(edges, rank_directions(edm1));
  return edms_features(edm1, edm2, source, mode);
}

}  // namespace edgelbp
