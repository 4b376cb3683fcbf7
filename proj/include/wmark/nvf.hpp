#pragma once

#include <array>

#include "wmark/wavelet.hpp"

namespace wmark {

/// Perceptual quantization factors indexed by (orientation row, level).
/// Rows: 1 = approximation (LL), 2 = HL, 3 = HH, 4 = LH. Columns: levels 1..4.
struct QuantMatrix {
  std::array<std::array<double, 4>, 4> factors;

  /// Watson-Yang factors for a four-level DWT.
  static QuantMatrix watson();

  /// Factor for a subband. Throws std::out_of_range for levels outside 1..4.
  double factor(int level, Orientation o) const;

  /// Throws std::invalid_argument if any factor is not strictly positive.
  void validate() const;

  friend bool operator==(const QuantMatrix&, const QuantMatrix&) = default;
};

struct NvfConfig {
  int window_halfwidth = 1;          // L: the window is (2L+1) x (2L+1)
  double flat_region_strength = 3.0; // s1

  void validate() const;

  friend bool operator==(const NvfConfig&, const NvfConfig&) = default;
};

/// Local mean and population variance over a (2L+1)^2 window centred at
/// every position. Samples outside the array are replaced by the nearest
/// edge sample.
struct LocalMoments {
  Matrix mean;
  Matrix variance;
};

LocalMoments local_moments(const Matrix& band, int window_halfwidth);

/// NVF(i,j) = 1 / (1 + variance(i,j)).
Matrix compute_nvf(const Matrix& band, const NvfConfig& cfg);

/// Delta(i,j) = (1 - NVF) * Q + NVF * s1 with Q taken from `q` for the
/// band's level and orientation.
Matrix max_allowable_distortion(const Subband& band, const Matrix& nvf, const QuantMatrix& q,
                                const NvfConfig& cfg);

}  // namespace wmark
