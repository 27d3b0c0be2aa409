#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "edgelbp/imaging.hpp"

namespace edgelbp {

/// Normalized 256-bin code histogram.
using LbpHistogram = Eigen::Matrix<double, 256, 1>;

/// 8-neighbour code of an interior pixel. Bit i is set when neighbour i is
/// >= the centre; neighbours are numbered from east counter-clockwise:
/// E=0, NE=1, N=2, NW=3, W=4, SW=5, S=6, SE=7 (y grows downward).
/// Throws Errc::OutOfDomain for border pixels.
std::uint8_t lbp_code(const GrayImage& image, Eigen::Index x, Eigen::Index y);

/// Codes of all interior pixels, normalized by the interior pixel count.
/// Images narrower or shorter than 3 pixels give the zero histogram.
LbpHistogram lbp_histogram(const GrayImage& image);

}  // namespace edgelbp
