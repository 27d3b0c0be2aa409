#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgelbp/errors.hpp"
#include "edgelbp/lbp.hpp"
#include "support.hpp"

using namespace edgelbp;
using namespace edgelbp::testing;

namespace {

// Neighbour i in the documented order E, NE, N, NW, W, SW, S, SE.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

LbpHistogram histogram_oracle(const GrayImage& g) {
  LbpHistogram h = LbpHistogram::Zero();
  if (g.rows() < 3 || g.cols() < 3) return h;
  double n = 0;
  for (Eigen::Index y = 1; y + 1 < g.rows(); ++y) {
    for (Eigen::Index x = 1; x + 1 < g.cols(); ++x) {
      int code = 0;
      for (int i = 0; i < 8; ++i) {
        if (g(y + kDy[i], x + kDx[i]) >= g(y, x)) code += 1 << i;
      }
      h(code) += 1;
      n += 1;
    }
  }
  return h / n;
}

GrayImage neighbourhood(int centre, std::array<int, 8> ring) {
  GrayImage g(3, 3);
  g(1, 1) = static_cast<std::uint8_t>(centre);
  for (int i = 0; i < 8; ++i) g(1 + kDy[i], 1 + kDx[i]) = static_cast<std::uint8_t>(ring[static_cast<std::size_t>(i)]);
  return g;
}

}  // namespace

TEST_CASE("lbp_code") {
  CHECK(lbp_code(GrayImage::Constant(3, 3, 90), 1, 1) == 255);
  CHECK(lbp_code(neighbourhood(200, {1, 2, 3, 4, 5, 6, 7, 8}), 1, 1) == 0);
  CHECK(lbp_code(neighbourhood(100, {100, 0, 0, 0, 0, 0, 0, 0}), 1, 1) == 1);
  CHECK(lbp_code(neighbourhood(100, {0, 0, 101, 0, 0, 0, 0, 0}), 1, 1) == 4);
  CHECK(lbp_code(neighbourhood(100, {0, 0, 0, 0, 0, 0, 0, 255}), 1, 1) == 128);
  SUBCASE("border pixels are out of domain") {
    const GrayImage g = GrayImage::Constant(4, 4, 1);
    for (auto [x, y] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{3, 2}, std::pair{2, 3}}) {
      try {
        lbp_code(g, x, y);
        FAIL("no error");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::OutOfDomain);
      }
    }
  }
}

TEST_CASE("lbp_histogram") {
  SUBCASE("constant image puts all mass in bin 255") {
    const LbpHistogram h = lbp_histogram(GrayImage::Constant(6, 5, 17));
    CHECK(h(255) == 1.0);
    CHECK(h.sum() == 1.0);
  }
  SUBCASE("tiny images give the zero histogram") {
    CHECK(lbp_histogram(GrayImage::Constant(1, 1, 0)).isZero(0.0));
    CHECK(lbp_histogram(GrayImage::Constant(2, 9, 0)).isZero(0.0));
    CHECK(lbp_histogram(GrayImage::Constant(9, 2, 0)).isZero(0.0));
  }
  SUBCASE("4x4 pattern") {
    GrayImage g(4, 4);
    g << 5, 9, 1, 7, 3, 4, 8, 2, 6, 6, 0, 9, 1, 2, 3, 4;
    const LbpHistogram h = lbp_histogram(g);
    CHECK(h == histogram_oracle(g));
    // hand-computed code of the pixel at (1, 1), value 4:
    // E 8, NE 1, N 9, NW 5, W 3, SW 6, S 6, SE 0 -> bits 0, 2, 3, 5, 6
    CHECK(lbp_code(g, 1, 1) == 1 + 4 + 8 + 32 + 64);
  }
  SUBCASE("random images: exact recount, unit mass") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const GrayImage g = random_gray(rng, 3 + static_cast<Eigen::Index>(rng.below(20)),
                                      3 + static_cast<Eigen::Index>(rng.below(20)));
      const LbpHistogram h = lbp_histogram(g);
      CHECK(h == histogram_oracle(g));
      CHECK(std::abs(h.sum() - 1.0) <= 1e-9);
      CHECK((h.array() >= 0.0).all());
    }
  }
  SUBCASE("strictly increasing remaps leave the histogram unchanged") {
    Rng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
      const GrayImage g = random_gray(rng, 12, 9);
      // Send the occurring levels, in order, to a random increasing set of
      // target levels.
      std::vector<int> levels;
      for (int v = 0; v < 256; ++v) {
        if ((g == static_cast<std::uint8_t>(v)).any()) levels.push_back(v);
      }
      std::vector<int> targets(256);
      std::iota(targets.begin(), targets.end(), 0);
      rng.shuffle(targets.begin(), targets.end());
      targets.resize(levels.size());
      std::sort(targets.begin(), targets.end());
      std::array<std::uint8_t, 256> lut{};
      for (std::size_t i = 0; i < levels.size(); ++i) {
        lut[static_cast<std::size_t>(levels[i])] = static_cast<std::uint8_t>(targets[i]);
      }
      const GrayImage remapped = g.unaryExpr([&](std::uint8_t v) { return lut[v]; });
      CHECK(lbp_histogram(remapped) == lbp_histogram(g));
    }
  }
  SUBCASE("adding a constant leaves the histogram unchanged") {
    Rng rng(33);
    GrayImage g = random_gray(rng, 10, 10);
    g = g / 2;
    const GrayImage shifted = g + static_cast<std::uint8_t>(100);
    CHECK(lbp_histogram(shifted) == lbp_histogram(g));
  }
}
