#include "wmark/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmark/rng.hpp"

namespace wmark::synth {

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear-smoothstep interpolation of a random lattice with `cells` cells per side.
Matrix value_noise(std::size_t width, std::size_t height, std::size_t cells, Rng& rng) {
  const std::size_t lat = cells + 1;
  std::vector<double> grid(lat * lat);
  for (double& g : grid) g = rng.unit() * 2.0 - 1.0;
  Matrix out(height, width);
  for (std::size_t r = 0; r < height; ++r) {
    const double fy = static_cast<double>(r) / height * cells;
    const auto y0 = static_cast<std::size_t>(fy);
    const double ty = smoothstep(fy - y0);
    for (std::size_t c = 0; c < width; ++c) {
      const double fx = static_cast<double>(c) / width * cells;
      const auto x0 = static_cast<std::size_t>(fx);
      const double tx = smoothstep(fx - x0);
      const double a = grid[y0 * lat + x0], b = grid[y0 * lat + x0 + 1];
      const double d = grid[(y0 + 1) * lat + x0], e = grid[(y0 + 1) * lat + x0 + 1];
      out(r, c) = (a * (1 - tx) + b * tx) * (1 - ty) + (d * (1 - tx) + e * tx) * ty;
    }
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, std::uint64_t fallback) {
  if (s.empty()) return fallback;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("bad numeric parameter in generator spec: " + std::string(s));
  return v;
}

}  // namespace

GrayImage ramp(std::size_t width, std::size_t height) {
  GrayImage img(width, height);
  const double span = static_cast<double>(width + height - 2);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c)
      img.at(r, c) = quantize_sample(span > 0 ? 255.0 * static_cast<double>(r + c) / span : 0.0);
  return img;
}

GrayImage checkerboard(std::size_t width, std::size_t height, std::size_t cell, std::uint8_t dark,
                       std::uint8_t light) {
  if (cell == 0) throw std::invalid_argument("checkerboard cell must be > 0");
  GrayImage img(width, height);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) img.at(r, c) = ((r / cell + c / cell) % 2) ? light : dark;
  return img;
}

GrayImage noise(std::size_t width, std::size_t height, std::uint64_t seed) {
  Rng rng(seed);
  GrayImage img(width, height);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

GrayImage scene(std::size_t width, std::size_t height, std::uint64_t seed) {
  Rng rng(seed);
  Matrix acc(height, width);
  double amp = 1.0;
  for (std::size_t cells = 4; cells <= 128; cells *= 2) {
    const Matrix layer = value_noise(width, height, cells, rng);
    for (std::size_t i = 0; i < acc.size(); ++i) acc.values()[i] += amp * layer.values()[i];
    amp *= 0.55;
  }

  struct Disc {
    double cx, cy, radius, level;
  };
  std::vector<Disc> discs;
  for (int i = 0; i < 6; ++i)
    discs.push_back({rng.unit() * width, rng.unit() * height, (0.05 + 0.15 * rng.unit()) * std::min(width, height),
                     rng.unit() * 1.6 - 0.8});

  const double gx = rng.unit() - 0.5, gy = rng.unit() - 0.5;
  GrayImage img(width, height);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      double v = acc(r, c) + 0.6 * (gx * c / width + gy * r / height);
      for (const auto& d : discs) {
        const double dist = std::hypot(c - d.cx, r - d.cy);
        const double edge = std::clamp((d.radius - dist) / 2.0 + 0.5, 0.0, 1.0);
        v = v * (1.0 - edge) + d.level * edge;
      }
      img.at(r, c) = quantize_sample(128.0 + 80.0 * v);
    }
  return img;
}

WatermarkBits block_pattern(std::size_t width, std::size_t height, std::uint64_t seed) {
  Rng rng(seed);
  WatermarkBits wm(width, height);
  const std::size_t bw = (width + 3) / 4, bh = (height + 3) / 4;
  std::vector<std::uint8_t> blocks(bw * bh);
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = i % 2;
  for (std::size_t i = blocks.size(); i > 1; --i) std::swap(blocks[i - 1], blocks[rng.below(i)]);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) wm.bits[r * width + c] = blocks[(r / 4) * bw + c / 4];
  return wm;
}

GrayImage from_spec(std::string_view spec, std::size_t width, std::size_t height) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (name == "ramp") return ramp(width, height);
  if (name == "checker") return checkerboard(width, height, parse_u64(arg, 16));
  if (name == "noise") return noise(width, height, parse_u64(arg, 1));
  if (name == "scene") return scene(width, height, parse_u64(arg, 1));
  throw std::invalid_argument("unknown generator: " + std::string(spec));
}

}  // namespace wmark::synth
