#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "wmark/image.hpp"

namespace wmark {

enum class AttackKind { SaltPepper, GaussianNoise, MeanFilter, MedianFilter, GaussianFilter, Crop, Jpeg, HistEq, Contrast };

enum class Corner { TopLeft, TopRight, BottomLeft, BottomRight };

std::string_view attack_kind_name(AttackKind k);
AttackKind parse_attack_kind(std::string_view name);
std::string_view corner_name(Corner c);
Corner parse_corner(std::string_view name);

/// Declarative attack. Only the fields relevant to `kind` are read:
///   salt_pepper      density in [0,1], seed
///   gaussian_noise   variance >= 0 (normalized intensity scale), seed
///   mean_filter      kernel (odd, >= 3)
///   median_filter    kernel
///   gaussian_filter  kernel, sigma (<= 0 selects (kernel - 1) / 4)
///   crop             size, anchor
///   jpeg             quality in [1,100]
///   hist_eq          -
///   contrast         percent in [0,100)
struct AttackSpec {
  AttackKind kind = AttackKind::SaltPepper;
  double density = 0.0;
  double variance = 0.0;
  int kernel = 3;
  double sigma = 0.0;
  std::size_t size = 0;
  Corner anchor = Corner::TopLeft;
  int quality = 75;
  double percent = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
  /// Short label such as "salt_pepper(density=0.01)"; seed excluded.
  std::string label() const;
  bool stochastic() const { return kind == AttackKind::SaltPepper || kind == AttackKind::GaussianNoise; }
};

/// {"kind": "jpeg", "quality": 50} etc. Only the kind's own fields are
/// written; "seed" only for stochastic kinds.
nlohmann::json attack_to_json(const AttackSpec& spec);
/// Throws FormatError on unknown kinds or missing parameters.
AttackSpec attack_from_json(const nlohmann::json& j);

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec);

// Individual attacks. All return an image of the input's dimensions with
// samples in [0,255]; windowed filters replicate edge samples.

/// floor(density * pixels) distinct positions, each set to 0 or 255 with
/// equal probability.
GrayImage salt_pepper(const GrayImage& img, double density, std::uint64_t seed);
/// Adds N(0, variance * 255^2) noise, then rounds and clamps.
GrayImage gaussian_noise(const GrayImage& img, double variance, std::uint64_t seed);
GrayImage mean_filter(const GrayImage& img, int kernel);
GrayImage median_filter(const GrayImage& img, int kernel);
GrayImage gaussian_filter(const GrayImage& img, int kernel, double sigma = 0.0);
/// Zeroes a size x size square at the given corner.
GrayImage crop(const GrayImage& img, std::size_t size, Corner anchor = Corner::TopLeft);
GrayImage jpeg_roundtrip(const GrayImage& img, int quality);
GrayImage hist_eq(const GrayImage& img);
/// Maps [p/2 % of 255, 255 - p/2 % of 255] linearly onto [0,255], saturating outside.
GrayImage contrast_adjust(const GrayImage& img, double percent);

}  // namespace wmark
