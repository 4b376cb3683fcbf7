#include "wmark/nvf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wmark {

QuantMatrix QuantMatrix::watson() {
  return {{{
      {14.049, 11.106, 11.363, 14.5},
      {23.028, 14.608, 12.707, 14.156},
      {58.756, 28.408, 19.54, 17.864},
      {23.028, 14.685, 12.707, 14.156},
  }}};
}

double QuantMatrix::factor(int level, Orientation o) const {
  if (level < 1 || level > 4) throw std::out_of_range("no quantization factor for level " + std::to_string(level));
  std::size_t row = 0;
  switch (o) {
    case Orientation::LL: row = 0; break;
    case Orientation::HL: row = 1; break;
    case Orientation::HH: row = 2; break;
    case Orientation::LH: row = 3; break;
  }
  return factors[row][static_cast<std::size_t>(level - 1)];
}

void QuantMatrix::validate() const {
  for (const auto& row : factors)
    for (double f : row)
      if (!(f > 0.0)) throw std::invalid_argument("quantization factors must be > 0");
}

void NvfConfig::validate() const {
  if (window_halfwidth < 1) throw std::invalid_argument("NVF window half-width must be >= 1");
  if (!(flat_region_strength > 0.0)) throw std::invalid_argument("flat-region strength s1 must be > 0");
}

LocalMoments local_moments(const Matrix& band, int window_halfwidth) {
  if (window_halfwidth < 0) throw std::invalid_argument("window half-width must be >= 0");
  const std::size_t rows = band.rows();
  const std::size_t cols = band.cols();
  LocalMoments out{Matrix(rows, cols), Matrix(rows, cols)};
  if (band.empty()) return out;

  // Edge-replicated copy so every window reads in-bounds.
  const std::size_t pad = static_cast<std::size_t>(window_halfwidth);
  const std::size_t prow = rows + 2 * pad;
  const std::size_t pcol = cols + 2 * pad;
  Matrix padded(prow, pcol);
  for (std::size_t r = 0; r < prow; ++r) {
    const std::size_t sr = std::min(rows - 1, r < pad ? 0 : r - pad);
    for (std::size_t c = 0; c < pcol; ++c) {
      const std::size_t sc = std::min(cols - 1, c < pad ? 0 : c - pad);
      padded(r, c) = band(sr, sc);
    }
  }

  const std::size_t side = 2 * pad + 1;
  const double area = static_cast<double>(side * side);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (std::size_t dr = 0; dr < side; ++dr)
        for (double v : padded.row(r + dr).subspan(c, side)) sum += v;
      const double mu = sum / area;
      double sq = 0.0;
      for (std::size_t dr = 0; dr < side; ++dr)
        for (double v : padded.row(r + dr).subspan(c, side)) sq += (v - mu) * (v - mu);
      out.mean(r, c) = mu;
      out.variance(r, c) = sq / area;
    }
  }
  return out;
}

Matrix compute_nvf(const Matrix& band, const NvfConfig& cfg) {
  cfg.validate();
  Matrix nvf = local_moments(band, cfg.window_halfwidth).variance;
  for (double& v : nvf.values()) v = 1.0 / (1.0 + v);
  return nvf;
}

Matrix max_allowable_distortion(const Subband& band, const Matrix& nvf, const QuantMatrix& q,
                                const NvfConfig& cfg) {
  cfg.validate();
  q.validate();
  if (nvf.rows() != band.data.rows() || nvf.cols() != band.data.cols())
    throw DimensionError("NVF map does not match band dimensions");
  const double qf = q.factor(band.level, band.orientation);
  const double s1 = cfg.flat_region_strength;
  Matrix delta(nvf.rows(), nvf.cols());
  auto src = nvf.values();
  auto dst = delta.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (1.0 - src[i]) * qf + src[i] * s1;
  return delta;
}

}  // namespace wmark
