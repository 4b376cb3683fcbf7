#pragma once

#include <span>
#include <string>

#include "wmark/codec.hpp"
#include "wmark/image.hpp"

namespace wmark {

struct Correlation {
  double value = 0.0;
  bool degenerate = false;  // one side has zero variance; value is 0
};

/// Pearson correlation of two equally sized sequences.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation over the flattened bit arrays. A constant input
/// yields {0, degenerate = true}. Throws DimensionError on size mismatch.
Correlation correlation(const WatermarkBits& a, const WatermarkBits& b);

/// Mean squared error. Throws DimensionError on size mismatch.
double mse(const GrayImage& x, const GrayImage& y);

/// 20 log10(255 / sqrt(mse)); +infinity when the images are identical.
double psnr(const GrayImage& x, const GrayImage& y);
double psnr_from_mse(double mse);

struct MetricReport {
  double correlation = 0.0;
  bool correlation_degenerate = false;
  double mse = 0.0;
  double psnr_db = 0.0;
  std::string image_id;
  std::string attack;
};

}  // namespace wmark
