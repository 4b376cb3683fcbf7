#include "wmark/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace wmark {

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("correlation inputs differ in length");
  if (x.empty()) return {0.0, true};
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, true};
  return {sxy / (std::sqrt(sxx) * std::sqrt(syy)), false};
}

Correlation correlation(const WatermarkBits& a, const WatermarkBits& b) {
  if (a.width != b.width || a.height != b.height) throw DimensionError("watermarks differ in size");
  std::vector<double> x(a.bits.begin(), a.bits.end());
  std::vector<double> y(b.bits.begin(), b.bits.end());
  return pearson(x, y);
}

double mse(const GrayImage& x, const GrayImage& y) {
  if (!x.same_dims(y)) throw DimensionError("images differ in size");
  if (x.pixels.empty()) return 0.0;
  // Integer accumulation keeps the sum exact.
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < x.pixels.size(); ++i) {
    const int d = int{x.pixels[i]} - int{y.pixels[i]};
    acc += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(acc) / static_cast<double>(x.pixels.size());
}

double psnr_from_mse(double m) {
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(255.0 / std::sqrt(m));
}

double psnr(const GrayImage& x, const GrayImage& y) { return psnr_from_mse(mse(x, y)); }

}  // namespace wmark
