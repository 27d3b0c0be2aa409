#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "edgelbp/imaging.hpp"

namespace edgelbp {

/// Compass directions between neighbouring edge pixels, in 45 degree steps.
/// Image y grows downward, so 90 degrees points to the row above.
enum class Direction : std::uint8_t { Deg0, Deg45, Deg90, Deg135, Deg180, Deg225, Deg270, Deg315 };

inline constexpr std::array<Direction, 8> kAllDirections = {
    Direction::Deg0,   Direction::Deg45,  Direction::Deg90,  Direction::Deg135,
    Direction::Deg180, Direction::Deg225, Direction::Deg270, Direction::Deg315};

constexpr int angle_degrees(Direction d) { return 45 * static_cast<int>(d); }

struct PixelOffset {
  int dx;
  int dy;
};

constexpr PixelOffset offset_of(Direction d) {
  constexpr std::array<PixelOffset, 8> offsets = {
      PixelOffset{1, 0},  PixelOffset{1, -1}, PixelOffset{0, -1}, PixelOffset{-1, -1},
      PixelOffset{-1, 0}, PixelOffset{-1, 1}, PixelOffset{0, 1},  PixelOffset{1, 1}};
  return offsets[static_cast<std::size_t>(d)];
}

/// 3x3 occurrence matrix. The centre cell counts edge pixels; every other
/// cell counts relationships in one direction. Cell layout (1-based row,
/// col), rows counted upward from the bottom of the kernel:
///
///     (1,1)=225  (1,2)=270  (1,3)=315
///     (2,1)=180  (2,2)=edge (2,3)=0
///     (3,1)=135  (3,2)=90   (3,3)=45
///
/// Only the angle accessors are used by the feature code, so the layout is
/// a fixed convention rather than something the features depend on.
class Edm {
 public:
  Edm() : cells_(Eigen::Matrix3i::Zero()) {}

  static constexpr std::array<int, 2> cell_of(Direction d) {
    const auto o = offset_of(d);
    return {1 - o.dy, 1 + o.dx};  // 0-based (row, col)
  }

  int center() const { return cells_(1, 1); }
  int& center() { return cells_(1, 1); }

  int operator[](Direction d) const {
    const auto c = cell_of(d);
    return cells_(c[0], c[1]);
  }
  int& operator[](Direction d) {
    const auto c = cell_of(d);
    return cells_(c[0], c[1]);
  }

  /// Sum of the eight direction cells; the centre is excluded.
  int direction_sum() const { return cells_.sum() - center(); }

  const Eigen::Matrix3i& cells() const { return cells_; }

  bool operator==(const Edm& other) const { return cells_ == other.cells_; }

 private:
  Eigen::Matrix3i cells_;
};

/// Directions sorted by descending first-order count, ties by smaller angle.
using DirectionRanking = std::array<Direction, 8>;

/// First-order matrix: centre = #edge pixels, cell(d) = #edge pixels whose
/// neighbour in direction d is also an edge pixel.
Edm compute_edm1(const EdgeMap& edges);

DirectionRanking rank_directions(const Edm& edm1);

/// Second-order matrix: every edge pixel with at least one edge neighbour
/// votes once, for the available direction ranked highest in `ranking`.
Edm compute_edm2(const EdgeMap& edges, const DirectionRanking& ranking);

enum class EdgeDirectionMode {
  ArgmaxIndex,  ///< index 0..3 of the dominant angle among 0/45/90/135
  MaxCount,     ///< raw count of the dominant angle
};

/// The 22 edge-direction statistics, in vector order:
/// pixel_regularity[4], homogeneity[4], correlation[4], weight,
/// edge_direction, edge_regularity[8].
struct EdmsFeatures {
  static constexpr int kDims = 22;

  std::array<double, 4> pixel_regularity{};
  std::array<double, 4> homogeneity{};
  std::array<double, 4> correlation{};
  double weight = 0.0;
  double edge_direction = 0.0;
  std::array<double, 8> edge_regularity{};

  Eigen::VectorXd to_vector() const;
};

EdmsFeatures edms_features(const Edm& edm1, const Edm& edm2, const BinaryImage& source,
                           EdgeDirectionMode mode = EdgeDirectionMode::ArgmaxIndex);

/// Full chain: edges of `source`, both matrices, then the features.
EdmsFeatures edms_descriptor(const BinaryImage& source, EdgeDirectionMode mode = EdgeDirectionMode::ArgmaxIndex);

}  // namespace edgelbp
