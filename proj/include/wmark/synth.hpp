#pragma once

#include <cstdint>
#include <string_view>

#include "wmark/codec.hpp"
#include "wmark/image.hpp"

namespace wmark::synth {

/// Diagonal gradient from 0 at the top-left to 255 at the bottom-right.
GrayImage ramp(std::size_t width, std::size_t height);
GrayImage checkerboard(std::size_t width, std::size_t height, std::size_t cell, std::uint8_t dark = 32,
                       std::uint8_t light = 224);
/// Independent uniform samples in [0,255].
GrayImage noise(std::size_t width, std::size_t height, std::uint64_t seed);
/// Natural-image stand-in: octave-summed value noise (roughly 1/f
/// spectrum) with a few smooth-edged discs and a mild gradient.
GrayImage scene(std::size_t width, std::size_t height, std::uint64_t seed);

/// Balanced random bit pattern made of 4x4 blocks (keeps the mark legible).
WatermarkBits block_pattern(std::size_t width, std::size_t height, std::uint64_t seed);

/// Generator spec strings: "ramp", "checker[:cell]", "noise[:seed]",
/// "scene[:seed]". Throws std::invalid_argument for anything else.
GrayImage from_spec(std::string_view spec, std::size_t width, std::size_t height);

}  // namespace wmark::synth
