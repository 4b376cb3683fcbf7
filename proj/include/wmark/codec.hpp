#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wmark/image.hpp"
#include "wmark/nvf.hpp"
#include "wmark/spiht.hpp"
#include "wmark/wavelet.hpp"

namespace wmark {

/// Binary watermark pattern, `width` x `height`, row-major, values 0/1.
struct WatermarkBits {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;

  WatermarkBits() = default;
  WatermarkBits(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), bits(w * h, fill) {}

  std::size_t size() const { return bits.size(); }

  friend bool operator==(const WatermarkBits&, const WatermarkBits&) = default;
};

/// Watermark flattened to {-1, +1}.
using BipolarVector = std::vector<int>;

/// Row-major flattening with 0 -> -1 and 1 -> +1.
BipolarVector pretreat(const WatermarkBits& wm);
/// Inverse of pretreat: v >= 0 -> 1, v < 0 -> 0, reshaped to width x height.
WatermarkBits posttreat(const BipolarVector& v, std::size_t width, std::size_t height);

/// First half goes to LH2, second half to HL2. Throws std::invalid_argument on odd length.
std::pair<BipolarVector, BipolarVector> split(const BipolarVector& v);

struct EmbedConfig {
  double alpha_lh2 = 3.0;
  double alpha_hl2 = 1.0;
  NvfConfig nvf;
  QuantMatrix quant = QuantMatrix::watson();
  std::string filter_bank = "haar";

  static constexpr int kLevels = 3;

  double alpha(SelBand b) const { return b == SelBand::HL2 ? alpha_hl2 : alpha_lh2; }
  void validate() const;

  friend bool operator==(const EmbedConfig&, const EmbedConfig&) = default;
};

struct PlanEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double delta = 0.0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

/// Side information of the non-blind scheme: where each watermark bit
/// lives and the distortion budget used there.
struct EmbedPlan {
  std::size_t image_rows = 0;
  std::size_t image_cols = 0;
  std::size_t wm_width = 0;
  std::size_t wm_height = 0;
  EmbedConfig config;
  std::vector<PlanEntry> lh2;  // bit i of the first half
  std::vector<PlanEntry> hl2;  // bit i of the second half
  std::size_t fallback_positions = 0;  // not serialized

  const std::vector<PlanEntry>& entries(SelBand b) const { return b == SelBand::HL2 ? hl2 : lh2; }

  /// Structural checks: counts, distinct positions, bounds, positive deltas.
  /// Throws PlanMismatchError.
  void validate() const;
};

class PlanMismatchError : public Error {
 public:
  using Error::Error;
};

/// Runs DWT -> significance selection -> NVF distortion on `host` and
/// returns the positions that would carry a `wm_width` x `wm_height` mark.
/// Throws DimensionError (host not divisible by 8) or CapacityError.
EmbedPlan build_plan(const GrayImage& host, std::size_t wm_width, std::size_t wm_height, const EmbedConfig& cfg);

struct EmbedResult {
  GrayImage watermarked;
  Matrix watermarked_real;  // inverse DWT output before 8-bit quantization
  EmbedPlan plan;
};

/// f' = f + alpha(band) * w'(i) * delta at every plan position.
EmbedResult embed(const GrayImage& host, const WatermarkBits& wm, const EmbedConfig& cfg);

/// Per-bit raw statistic (suspect - original) / (alpha * delta), LH2 half
/// first. Both rasters are transformed with the plan's filter bank.
std::vector<double> extract_raw(const Matrix& original, const Matrix& suspect, const EmbedPlan& plan);

/// Sign decision on extract_raw (ties -> +1), mapped back to bits.
WatermarkBits extract(const GrayImage& original, const GrayImage& suspect, const EmbedPlan& plan);
WatermarkBits extract(const Matrix& original, const Matrix& suspect, const EmbedPlan& plan);

/// Non-blind extraction that rebuilds the plan from the original image.
WatermarkBits extract_regenerated(const GrayImage& original, const GrayImage& suspect, std::size_t wm_width,
                                  std::size_t wm_height, const EmbedConfig& cfg);

}  // namespace wmark
