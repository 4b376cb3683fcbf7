#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "wmark/wavelet.hpp"

using namespace wmark;
using wmark::testing::random_image;
using wmark::testing::random_matrix;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
  return m;
}

double energy(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return s;
}

double energy(const WaveletPyramid& p) {
  double s = 0.0;
  for (const auto& b : p.subbands()) s += energy(b.data);
  return s;
}

}  // namespace

TEST_SUITE("wavelet") {
  TEST_CASE("subband dimensions halve per level") {
    const auto pyr = dwt_forward(Matrix(512, 512, 1.0), 3, FilterBank::haar());
    CHECK(pyr.subbands().size() == 10);
    CHECK(pyr.band(3, Orientation::LL).data.rows() == 64);
    CHECK(pyr.band(3, Orientation::LL).data.cols() == 64);
    CHECK(pyr.band(2, Orientation::LH).data.rows() == 128);
    CHECK(pyr.band(2, Orientation::HL).data.cols() == 128);
    CHECK(pyr.band(1, Orientation::HH).data.rows() == 256);
    CHECK(pyr.coefficient_count() == 512u * 512u);
    CHECK_NOTHROW(pyr.validate());

    const auto rect = dwt_forward(Matrix(64, 128), 2, FilterBank::haar());
    CHECK(rect.band(2, Orientation::LH).data.rows() == 16);
    CHECK(rect.band(2, Orientation::LH).data.cols() == 32);
  }

  TEST_CASE("band order runs coarse to fine") {
    const auto pyr = dwt_forward(Matrix(32, 32), 3, FilterBank::haar());
    const auto& b = pyr.subbands();
    CHECK(b[0].orientation == Orientation::LL);
    CHECK(b[0].level == 3);
    CHECK(b[1].orientation == Orientation::LH);
    CHECK(b[2].orientation == Orientation::HL);
    CHECK(b[3].orientation == Orientation::HH);
    CHECK(b[9].level == 1);
    CHECK(b[9].orientation == Orientation::HH);
  }

  TEST_CASE("invalid dimensions and levels are rejected") {
    CHECK_THROWS_AS(dwt_forward(Matrix(500, 500), 3, FilterBank::haar()), DimensionError);
    CHECK_THROWS_AS(dwt_forward(Matrix(16, 12), 3, FilterBank::haar()), DimensionError);
    CHECK_THROWS_AS(dwt_forward(Matrix(16, 16), 0, FilterBank::haar()), std::invalid_argument);
    CHECK_THROWS_AS(filter_bank_by_name("sym8"), std::invalid_argument);
    CHECK(filter_bank_by_name("db4").analysis_lowpass.size() == 4);
  }

  TEST_CASE("constant image has zero detail bands") {
    for (const auto& fb : {FilterBank::haar(), FilterBank::daubechies4()}) {
      const auto pyr = dwt_forward(Matrix(64, 64, 173.0), 3, fb);
      for (const auto& b : pyr.subbands()) {
        if (b.orientation == Orientation::LL) continue;
        for (double v : b.data.values()) CHECK(std::fabs(v) <= 1e-9);
      }
      // LL of an orthonormal 2D bank scales a constant by 2 per level.
      CHECK(pyr.band(3, Orientation::LL).data(5, 5) == doctest::Approx(173.0 * 8.0).epsilon(1e-12));
    }
  }

  TEST_CASE("one-level Haar on an 8x8 ramp matches the hand-computed butterfly") {
    Matrix x(8, 8);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) x(r, c) = 8.0 * r + c;
    const auto pyr = dwt_forward(x, 1, FilterBank::haar());
    // Each 2x2 block [[a, a+1], [a+8, a+9]] with a = 16i + 2j:
    //   LL = (4a + 18) / 2, LH = (a + a+1 - a-8 - a-9) / 2 = -8,
    //   HL = (a - a-1 + a+8 - a-9) / 2 = -1, HH = 0.
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const double a = 16.0 * i + 2.0 * j;
        CHECK(pyr.band(1, Orientation::LL).data(i, j) == doctest::Approx((4 * a + 18) / 2));
        CHECK(pyr.band(1, Orientation::LH).data(i, j) == doctest::Approx(-8.0));
        CHECK(pyr.band(1, Orientation::HL).data(i, j) == doctest::Approx(-1.0));
        CHECK(std::fabs(pyr.band(1, Orientation::HH).data(i, j)) <= 1e-12);
      }
  }

  TEST_CASE("perfect reconstruction, both banks") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
      for (const auto& fb : {FilterBank::haar(), FilterBank::daubechies4()}) {
        const Matrix x = random_matrix(64, 128, seed, 0.0, 255.0);
        const Matrix y = dwt_inverse(dwt_forward(x, 3, fb), fb);
        CHECK(max_abs_diff(x, y) <= 1e-9);
      }
  }

  TEST_CASE("all-zero pyramid reconstructs to zeros") {
    WaveletPyramid pyr(3, 32, 32, "haar");
    const Matrix y = dwt_inverse(pyr, FilterBank::haar());
    CHECK(y == Matrix(32, 32, 0.0));
  }

  TEST_CASE("linearity") {
    const Matrix x = random_matrix(32, 32, 11, -50, 50);
    const Matrix y = random_matrix(32, 32, 12, -50, 50);
    const double a = 1.7, b = -0.3;
    Matrix z(32, 32);
    for (std::size_t i = 0; i < z.size(); ++i) z.values()[i] = a * x.values()[i] + b * y.values()[i];
    for (const auto& fb : {FilterBank::haar(), FilterBank::daubechies4()}) {
      const auto px = dwt_forward(x, 3, fb), py = dwt_forward(y, 3, fb), pz = dwt_forward(z, 3, fb);
      for (std::size_t k = 0; k < pz.subbands().size(); ++k)
        for (std::size_t i = 0; i < pz.subbands()[k].data.size(); ++i) {
          const double expect = a * px.subbands()[k].data.values()[i] + b * py.subbands()[k].data.values()[i];
          CHECK(std::fabs(pz.subbands()[k].data.values()[i] - expect) <= 1e-9);
        }
    }
  }

  TEST_CASE("energy conservation for orthonormal banks") {
    for (const auto& fb : {FilterBank::haar(), FilterBank::daubechies4()}) {
      const Matrix x = to_matrix(random_image(128, 128, 77));
      const double ex = energy(x);
      CHECK(std::fabs(energy(dwt_forward(x, 3, fb)) - ex) / ex <= 1e-9);
    }
  }

  TEST_CASE("perturbing one LH2 coefficient changes pixel energy by delta squared in a local patch") {
    const Matrix x = to_matrix(wmark::testing::random_image(64, 64, 5));
    auto pyr = dwt_forward(x, 3, FilterBank::haar());
    const double delta = 7.25;
    pyr.band(2, Orientation::LH).data(3, 5) += delta;
    const Matrix y = dwt_inverse(pyr, FilterBank::haar());
    double changed = 0.0;
    for (std::size_t r = 0; r < 64; ++r)
      for (std::size_t c = 0; c < 64; ++c) {
        const double d = y(r, c) - x(r, c);
        changed += d * d;
        const bool inside = r / 4 == 3 && c / 4 == 5;
        if (!inside) CHECK(std::fabs(d) <= 1e-9);
      }
    CHECK(changed == doctest::Approx(delta * delta).epsilon(1e-9));
  }

  TEST_CASE("pyramid addressing") {
    WaveletPyramid pyr(2, 16, 16, "haar");
    CHECK_THROWS_AS(pyr.band(3, Orientation::LH), std::out_of_range);
    CHECK_THROWS_AS(pyr.band(1, Orientation::LL), std::out_of_range);
    CHECK(orientation_name(Orientation::LH) == "LH");
  }
}

TEST_SUITE("quantize") {
  TEST_CASE("round half up and clamp") {
    CHECK(quantize_sample(127.5) == 128);
    CHECK(quantize_sample(127.49) == 127);
    CHECK(quantize_sample(-3.2) == 0);
    CHECK(quantize_sample(260.0) == 255);
    CHECK(quantize_sample(0.5) == 1);
    CHECK(quantize_sample(std::nan("")) == 0);
  }

  TEST_CASE("integer rasters are fixed points") {
    const GrayImage img = random_image(16, 8, 3);
    CHECK(quantize_to_image(to_matrix(img)) == img);
  }

  TEST_CASE("8-bit Haar round trip reproduces the image") {
    const GrayImage img = random_image(64, 64, 9);
    const auto fb = FilterBank::haar();
    CHECK(quantize_to_image(dwt_inverse(dwt_forward(img, 3, fb), fb)) == img);
  }
}
