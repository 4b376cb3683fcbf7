#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wmark/image.hpp"

namespace wmark::jpeg {

/// Annex K luminance table scaled by the IJG quality mapping
/// (q < 50: 5000/q percent, otherwise 200 - 2q percent), clamped to
/// [1, 255]. Natural (row-major) order. Throws std::invalid_argument
/// for quality outside [1, 100].
std::array<std::uint16_t, 64> quality_table(int quality);

/// Baseline sequential, single-component, standard Huffman tables.
/// Partial edge blocks are padded by edge replication.
std::vector<std::uint8_t> encode(const GrayImage& img, int quality);

/// Decodes a baseline grayscale stream (SOF0, one component, 1x1
/// sampling, optional restart intervals). Throws FormatError otherwise.
GrayImage decode(std::span<const std::uint8_t> stream);

}  // namespace wmark::jpeg
