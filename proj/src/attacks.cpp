#include "wmark/attacks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wmark/jpeg.hpp"
#include "wmark/rng.hpp"

namespace wmark {

namespace {

constexpr std::array<std::pair<AttackKind, std::string_view>, 9> kKindNames = {{
    {AttackKind::SaltPepper, "salt_pepper"},
    {AttackKind::GaussianNoise, "gaussian_noise"},
    {AttackKind::MeanFilter, "mean_filter"},
    {AttackKind::MedianFilter, "median_filter"},
    {AttackKind::GaussianFilter, "gaussian_filter"},
    {AttackKind::Crop, "crop"},
    {AttackKind::Jpeg, "jpeg"},
    {AttackKind::HistEq, "hist_eq"},
    {AttackKind::Contrast, "contrast"},
}};

constexpr std::array<std::pair<Corner, std::string_view>, 4> kCornerNames = {{
    {Corner::TopLeft, "top_left"},
    {Corner::TopRight, "top_right"},
    {Corner::BottomLeft, "bottom_left"},
    {Corner::BottomRight, "bottom_right"},
}};

void check_kernel(int k) {
  if (k < 3 || k % 2 == 0) throw std::invalid_argument("kernel size must be odd and >= 3, got " + std::to_string(k));
}

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

double default_sigma(int kernel) { return (kernel - 1) / 4.0; }

}  // namespace

std::string_view attack_kind_name(AttackKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view name) {
  for (const auto& [kind, n] : kKindNames)
    if (n == name) return kind;
  throw std::invalid_argument("unknown attack kind: " + std::string(name));
}

std::string_view corner_name(Corner c) {
  for (const auto& [corner, name] : kCornerNames)
    if (corner == c) return name;
  return "unknown";
}

Corner parse_corner(std::string_view name) {
  for (const auto& [corner, n] : kCornerNames)
    if (n == name) return corner;
  throw std::invalid_argument("unknown corner: " + std::string(name));
}

void AttackSpec::validate() const {
  switch (kind) {
    case AttackKind::SaltPepper:
      if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("salt_pepper density must be in [0,1]");
      break;
    case AttackKind::GaussianNoise:
      if (!(variance >= 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("gaussian_noise variance must be >= 0");
      break;
    case AttackKind::MeanFilter:
    case AttackKind::MedianFilter:
      check_kernel(kernel);
      break;
    case AttackKind::GaussianFilter:
      check_kernel(kernel);
      if (!std::isfinite(sigma)) throw std::invalid_argument("gaussian_filter sigma must be finite");
      break;
    case AttackKind::Crop:
      break;  // checked against the image
    case AttackKind::Jpeg:
      if (quality < 1 || quality > 100) throw std::invalid_argument("jpeg quality must be in [1,100]");
      break;
    case AttackKind::HistEq:
      break;
    case AttackKind::Contrast:
      if (!(percent >= 0.0 && percent < 100.0)) throw std::invalid_argument("contrast percent must be in [0,100)");
      break;
  }
}

std::string AttackSpec::label() const {
  std::ostringstream os;
  os << attack_kind_name(kind);
  switch (kind) {
    case AttackKind::SaltPepper: os << "(density=" << density << ')'; break;
    case AttackKind::GaussianNoise: os << "(variance=" << variance << ')'; break;
    case AttackKind::MeanFilter:
    case AttackKind::MedianFilter: os << '(' << kernel << 'x' << kernel << ')'; break;
    case AttackKind::GaussianFilter:
      os << '(' << kernel << 'x' << kernel << ",sigma=" << (sigma > 0.0 ? sigma : default_sigma(kernel)) << ')';
      break;
    case AttackKind::Crop: os << '(' << size << 'x' << size << ',' << corner_name(anchor) << ')'; break;
    case AttackKind::Jpeg: os << "(quality=" << quality << ')'; break;
    case AttackKind::HistEq: break;
    case AttackKind::Contrast: os << "(percent=" << percent << ')'; break;
  }
  return os.str();
}

nlohmann::json attack_to_json(const AttackSpec& spec) {
  nlohmann::json j = {{"kind", attack_kind_name(spec.kind)}};
  switch (spec.kind) {
    case AttackKind::SaltPepper: j["density"] = spec.density; break;
    case AttackKind::GaussianNoise: j["variance"] = spec.variance; break;
    case AttackKind::MeanFilter:
    case AttackKind::MedianFilter: j["kernel"] = spec.kernel; break;
    case AttackKind::GaussianFilter:
      j["kernel"] = spec.kernel;
      j["sigma"] = spec.sigma > 0.0 ? spec.sigma : default_sigma(spec.kernel);
      break;
    case AttackKind::Crop:
      j["size"] = spec.size;
      j["anchor"] = corner_name(spec.anchor);
      break;
    case AttackKind::Jpeg: j["quality"] = spec.quality; break;
    case AttackKind::HistEq: break;
    case AttackKind::Contrast: j["percent"] = spec.percent; break;
  }
  if (spec.stochastic()) j["seed"] = spec.seed;
  return j;
}

AttackSpec attack_from_json(const nlohmann::json& j) {
  AttackSpec s;
  try {
    s.kind = parse_attack_kind(j.at("kind").get<std::string>());
    switch (s.kind) {
      case AttackKind::SaltPepper: s.density = j.at("density").get<double>(); break;
      case AttackKind::GaussianNoise: s.variance = j.at("variance").get<double>(); break;
      case AttackKind::MeanFilter:
      case AttackKind::MedianFilter: s.kernel = j.at("kernel").get<int>(); break;
      case AttackKind::GaussianFilter:
        s.kernel = j.at("kernel").get<int>();
        s.sigma = j.value("sigma", 0.0);
        break;
      case AttackKind::Crop:
        s.size = j.at("size").get<std::size_t>();
        s.anchor = parse_corner(j.value("anchor", std::string("top_left")));
        break;
      case AttackKind::Jpeg: s.quality = j.at("quality").get<int>(); break;
      case AttackKind::HistEq: break;
      case AttackKind::Contrast: s.percent = j.at("percent").get<double>(); break;
    }
    s.seed = j.value("seed", std::uint64_t{0});
    s.validate();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad attack spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad attack spec: ") + e.what());
  }
  return s;
}

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case AttackKind::SaltPepper: return salt_pepper(img, spec.density, spec.seed);
    case AttackKind::GaussianNoise: return gaussian_noise(img, spec.variance, spec.seed);
    case AttackKind::MeanFilter: return mean_filter(img, spec.kernel);
    case AttackKind::MedianFilter: return median_filter(img, spec.kernel);
    case AttackKind::GaussianFilter: return gaussian_filter(img, spec.kernel, spec.sigma);
    case AttackKind::Crop: return crop(img, spec.size, spec.anchor);
    case AttackKind::Jpeg: return jpeg_roundtrip(img, spec.quality);
    case AttackKind::HistEq: return hist_eq(img);
    case AttackKind::Contrast: return contrast_adjust(img, spec.percent);
  }
  throw std::logic_error("unhandled attack kind");
}

GrayImage salt_pepper(const GrayImage& img, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("salt_pepper density must be in [0,1]");
  GrayImage out = img;
  const std::size_t n = img.size();
  const auto hits = static_cast<std::size_t>(std::floor(density * static_cast<double>(n)));
  if (hits == 0) return out;
  Rng rng(seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < hits; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
    out.pixels[idx[i]] = rng.coin() ? 255 : 0;
  }
  return out;
}

GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) throw std::invalid_argument("gaussian_noise variance must be >= 0");
  GrayImage out = img;
  if (variance == 0.0) return out;
  const double sd = std::sqrt(variance) * 255.0;
  Rng rng(seed);
  for (auto& p : out.pixels) p = quantize_sample(p + sd * rng.normal());
  return out;
}

GrayImage mean_filter(const GrayImage& img, int kernel) {
  check_kernel(kernel);
  const std::ptrdiff_t h = kernel / 2;
  const double area = static_cast<double>(kernel) * kernel;
  GrayImage out(img.width, img.height);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      long sum = 0;
      for (std::ptrdiff_t dr = -h; dr <= h; ++dr)
        for (std::ptrdiff_t dc = -h; dc <= h; ++dc)
          sum += img.at(clamp_index(static_cast<std::ptrdiff_t>(r) + dr, img.height),
                        clamp_index(static_cast<std::ptrdiff_t>(c) + dc, img.width));
      out.at(r, c) = quantize_sample(static_cast<double>(sum) / area);
    }
  return out;
}

GrayImage median_filter(const GrayImage& img, int kernel) {
  check_kernel(kernel);
  const std::ptrdiff_t h = kernel / 2;
  GrayImage out(img.width, img.height);
  std::vector<std::uint8_t> window(static_cast<std::size_t>(kernel) * kernel);
  const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      std::size_t k = 0;
      for (std::ptrdiff_t dr = -h; dr <= h; ++dr)
        for (std::ptrdiff_t dc = -h; dc <= h; ++dc)
          window[k++] = img.at(clamp_index(static_cast<std::ptrdiff_t>(r) + dr, img.height),
                               clamp_index(static_cast<std::ptrdiff_t>(c) + dc, img.width));
      std::nth_element(window.begin(), mid, window.end());
      out.at(r, c) = *mid;
    }
  return out;
}

GrayImage gaussian_filter(const GrayImage& img, int kernel, double sigma) {
  check_kernel(kernel);
  if (!(sigma > 0.0)) sigma = default_sigma(kernel);
  const std::ptrdiff_t h = kernel / 2;
  std::vector<double> w(static_cast<std::size_t>(kernel));
  double total = 0.0;
  for (std::ptrdiff_t i = -h; i <= h; ++i) {
    w[static_cast<std::size_t>(i + h)] = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    total += w[static_cast<std::size_t>(i + h)];
  }
  for (double& v : w) v /= total;

  // Separable pass in double precision, rounded once at the end.
  Matrix tmp(img.height, img.width);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      double s = 0.0;
      for (std::ptrdiff_t d = -h; d <= h; ++d)
        s += w[static_cast<std::size_t>(d + h)] * img.at(r, clamp_index(static_cast<std::ptrdiff_t>(c) + d, img.width));
      tmp(r, c) = s;
    }
  GrayImage out(img.width, img.height);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      double s = 0.0;
      for (std::ptrdiff_t d = -h; d <= h; ++d)
        s += w[static_cast<std::size_t>(d + h)] * tmp(clamp_index(static_cast<std::ptrdiff_t>(r) + d, img.height), c);
      out.at(r, c) = quantize_sample(s);
    }
  return out;
}

GrayImage crop(const GrayImage& img, std::size_t size, Corner anchor) {
  if (size > std::min(img.width, img.height))
    throw std::invalid_argument("crop size " + std::to_string(size) + " exceeds image dimensions");
  GrayImage out = img;
  const std::size_t r0 = (anchor == Corner::BottomLeft || anchor == Corner::BottomRight) ? img.height - size : 0;
  const std::size_t c0 = (anchor == Corner::TopRight || anchor == Corner::BottomRight) ? img.width - size : 0;
  for (std::size_t r = r0; r < r0 + size; ++r)
    for (std::size_t c = c0; c < c0 + size; ++c) out.at(r, c) = 0;
  return out;
}

GrayImage jpeg_roundtrip(const GrayImage& img, int quality) {
  const auto stream = jpeg::encode(img, quality);
  return jpeg::decode(stream);
}

GrayImage hist_eq(const GrayImage& img) {
  std::array<std::size_t, 256> hist{};
  for (auto p : img.pixels) ++hist[p];
  std::array<std::size_t, 256> cdf{};
  std::size_t run = 0;
  for (std::size_t v = 0; v < 256; ++v) {
    run += hist[v];
    cdf[v] = run;
  }
  const std::size_t total = img.size();
  std::size_t cdf_min = 0;
  for (std::size_t v = 0; v < 256; ++v)
    if (hist[v]) {
      cdf_min = cdf[v];
      break;
    }
  if (total == cdf_min) return img;  // constant image

  std::array<std::uint8_t, 256> lut{};
  const double denom = static_cast<double>(total - cdf_min);
  for (std::size_t v = 0; v < 256; ++v) {
    const double num = cdf[v] > cdf_min ? static_cast<double>(cdf[v] - cdf_min) : 0.0;
    lut[v] = quantize_sample(num / denom * 255.0);
  }
  GrayImage out = img;
  for (auto& p : out.pixels) p = lut[p];
  return out;
}

GrayImage contrast_adjust(const GrayImage& img, double percent) {
  if (!(percent >= 0.0 && percent < 100.0)) throw std::invalid_argument("contrast percent must be in [0,100)");
  const double lo = percent / 2.0 * 255.0 / 100.0;
  const double hi = 255.0 - lo;
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) lut[static_cast<std::size_t>(v)] = quantize_sample((v - lo) / (hi - lo) * 255.0);
  GrayImage out = img;
  for (auto& p : out.pixels) p = lut[p];
  return out;
}

}  // namespace wmark
