#include "doctest.h"
#include "wmark/synth.hpp"

using namespace wmark;

TEST_SUITE("synth") {
  TEST_CASE("generators are deterministic and sized") {
    CHECK(synth::scene(64, 32, 3) == synth::scene(64, 32, 3));
    CHECK_FALSE(synth::scene(64, 32, 3) == synth::scene(64, 32, 4));
    CHECK(synth::noise(16, 16, 1).width == 16);
    const GrayImage r = synth::ramp(8, 8);
    CHECK(r.at(0, 0) == 0);
    CHECK(r.at(7, 7) == 255);
    const GrayImage c = synth::checkerboard(8, 8, 2);
    CHECK(c.at(0, 0) == 32);
    CHECK(c.at(0, 2) == 224);
    CHECK(c.at(2, 2) == 32);
  }

  TEST_CASE("block watermark is balanced") {
    const WatermarkBits wm = synth::block_pattern(32, 32, 5);
    std::size_t ones = 0;
    for (auto b : wm.bits) ones += b;
    CHECK(ones == 512);
  }

  TEST_CASE("generator strings") {
    CHECK(synth::from_spec("checker:4", 8, 8) == synth::checkerboard(8, 8, 4));
    CHECK(synth::from_spec("scene", 16, 16) == synth::scene(16, 16, 1));
    CHECK(synth::from_spec("noise:9", 16, 16) == synth::noise(16, 16, 9));
    CHECK_THROWS_AS(synth::from_spec("plasma", 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(synth::from_spec("noise:x", 8, 8), std::invalid_argument);
  }
}
