#pragma once

#include <filesystem>
#include <string>

#include "wmark/codec.hpp"
#include "wmark/image.hpp"

namespace wmark {

/// Parses a binary (P5) or ASCII (P2) PGM with maxval 255.
/// Throws FormatError on a malformed header, other maxval, or short payload.
GrayImage decode_pgm(const std::string& bytes);
std::string encode_pgm(const GrayImage& img);  // always P5

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

/// pixel >= threshold -> 1, else 0.
WatermarkBits binarize(const GrayImage& img, int threshold = 128);
/// 1 -> 255, 0 -> 0.
GrayImage watermark_to_image(const WatermarkBits& wm);

WatermarkBits read_binary_watermark(const std::filesystem::path& path, int threshold = 128);

}  // namespace wmark
