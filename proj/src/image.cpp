#include "wmark/image.hpp"

#include <cmath>

namespace wmark {

Matrix to_matrix(const GrayImage& img) {
  Matrix m(img.height, img.width);
  auto dst = m.values();
  for (std::size_t i = 0; i < img.pixels.size(); ++i) dst[i] = img.pixels[i];
  return m;
}

std::uint8_t quantize_sample(double v) {
  if (!(v > 0.0)) return 0;  // also catches NaN
  const double r = std::floor(v + 0.5);
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

GrayImage quantize_to_image(const Matrix& raster) {
  GrayImage img(raster.cols(), raster.rows());
  auto src = raster.values();
  for (std::size_t i = 0; i < src.size(); ++i) img.pixels[i] = quantize_sample(src[i]);
  return img;
}

}  // namespace wmark
