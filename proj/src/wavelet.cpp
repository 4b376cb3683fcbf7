#include "wmark/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace wmark {

namespace {

// Row-major location of an orientation's quadrant inside a level's block.
struct Quadrant {
  std::size_t row0;
  std::size_t col0;
};

Quadrant quadrant_of(Orientation o, std::size_t half_rows, std::size_t half_cols) {
  switch (o) {
    case Orientation::LL: return {0, 0};
    case Orientation::HL: return {0, half_cols};
    case Orientation::LH: return {half_rows, 0};
    case Orientation::HH: return {half_rows, half_cols};
  }
  return {0, 0};
}

void analyze_1d(const std::vector<double>& in, std::vector<double>& out, const FilterBank& fb) {
  const std::size_t n = in.size();
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    double lo = 0.0;
    for (std::size_t t = 0; t < fb.analysis_lowpass.size(); ++t)
      lo += fb.analysis_lowpass[t] * in[(2 * k + t) % n];
    double hi = 0.0;
    for (std::size_t t = 0; t < fb.analysis_highpass.size(); ++t)
      hi += fb.analysis_highpass[t] * in[(2 * k + t) % n];
    out[k] = lo;
    out[half + k] = hi;
  }
}

void synthesize_1d(const std::vector<double>& in, std::vector<double>& out, const FilterBank& fb) {
  const std::size_t n = in.size();
  const std::size_t half = n / 2;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    const double lo = in[k];
    const double hi = in[half + k];
    for (std::size_t t = 0; t < fb.synthesis_lowpass.size(); ++t)
      out[(2 * k + t) % n] += fb.synthesis_lowpass[t] * lo;
    for (std::size_t t = 0; t < fb.synthesis_highpass.size(); ++t)
      out[(2 * k + t) % n] += fb.synthesis_highpass[t] * hi;
  }
}

// One analysis step on the top-left rows x cols block of `work`.
void forward_level(Matrix& work, std::size_t rows, std::size_t cols, const FilterBank& fb) {
  std::vector<double> in(cols), out(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) in[c] = work(r, c);
    analyze_1d(in, out, fb);
    for (std::size_t c = 0; c < cols; ++c) work(r, c) = out[c];
  }
  in.resize(rows);
  out.resize(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) in[r] = work(r, c);
    analyze_1d(in, out, fb);
    for (std::size_t r = 0; r < rows; ++r) work(r, c) = out[r];
  }
}

void inverse_level(Matrix& work, std::size_t rows, std::size_t cols, const FilterBank& fb) {
  std::vector<double> in(rows), out(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) in[r] = work(r, c);
    synthesize_1d(in, out, fb);
    for (std::size_t r = 0; r < rows; ++r) work(r, c) = out[r];
  }
  in.resize(cols);
  out.resize(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) in[c] = work(r, c);
    synthesize_1d(in, out, fb);
    for (std::size_t c = 0; c < cols; ++c) work(r, c) = out[c];
  }
}

Matrix copy_block(const Matrix& src, Quadrant q, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = src(q.row0 + r, q.col0 + c);
  return m;
}

void paste_block(Matrix& dst, Quadrant q, const Matrix& src) {
  for (std::size_t r = 0; r < src.rows(); ++r)
    for (std::size_t c = 0; c < src.cols(); ++c) dst(q.row0 + r, q.col0 + c) = src(r, c);
}

}  // namespace

std::string_view orientation_name(Orientation o) {
  switch (o) {
    case Orientation::LL: return "LL";
    case Orientation::LH: return "LH";
    case Orientation::HL: return "HL";
    case Orientation::HH: return "HH";
  }
  return "??";
}

FilterBank FilterBank::haar() {
  const double s = 1.0 / std::sqrt(2.0);
  FilterBank fb;
  fb.name = "haar";
  fb.analysis_lowpass = {s, s};
  fb.analysis_highpass = {s, -s};
  fb.synthesis_lowpass = fb.analysis_lowpass;
  fb.synthesis_highpass = fb.analysis_highpass;
  return fb;
}

FilterBank FilterBank::daubechies4() {
  const double r3 = std::sqrt(3.0);
  const double d = 4.0 * std::sqrt(2.0);
  const std::vector<double> h = {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d};
  FilterBank fb;
  fb.name = "db4";
  fb.analysis_lowpass = h;
  // Quadrature mirror: g[n] = (-1)^n h[L-1-n]
  fb.analysis_highpass = {h[3], -h[2], h[1], -h[0]};
  fb.synthesis_lowpass = fb.analysis_lowpass;
  fb.synthesis_highpass = fb.analysis_highpass;
  return fb;
}

void FilterBank::validate() const {
  for (const auto* f : {&analysis_lowpass, &analysis_highpass, &synthesis_lowpass, &synthesis_highpass}) {
    if (f->size() < 2) throw std::invalid_argument("filter bank '" + name + "': filters need at least 2 taps");
  }
}

FilterBank filter_bank_by_name(std::string_view name) {
  if (name == "haar") return FilterBank::haar();
  if (name == "db4") return FilterBank::daubechies4();
  throw std::invalid_argument("unknown filter bank: " + std::string(name));
}

WaveletPyramid::WaveletPyramid(int levels, std::size_t rows, std::size_t cols, std::string filter_bank_name)
    : levels_(levels), rows_(rows), cols_(cols), fb_name_(std::move(filter_bank_name)) {
  if (levels < 1) throw std::invalid_argument("wavelet levels must be >= 1");
  const std::size_t cell = std::size_t{1} << levels;
  if (rows == 0 || cols == 0 || rows % cell != 0 || cols % cell != 0) {
    throw DimensionError("image " + std::to_string(cols) + "x" + std::to_string(rows) +
                         " is not divisible by 2^" + std::to_string(levels));
  }
  const std::size_t top_r = rows >> levels;
  const std::size_t top_c = cols >> levels;
  bands_.push_back({levels, Orientation::LL, Matrix(top_r, top_c)});
  for (int lev = levels; lev >= 1; --lev) {
    const std::size_t r = rows >> lev;
    const std::size_t c = cols >> lev;
    for (auto o : {Orientation::LH, Orientation::HL, Orientation::HH}) bands_.push_back({lev, o, Matrix(r, c)});
  }
}

const Subband& WaveletPyramid::band(int level, Orientation o) const {
  for (const auto& b : bands_)
    if (b.level == level && b.orientation == o) return b;
  throw std::out_of_range("pyramid has no band " + std::string(orientation_name(o)) + std::to_string(level));
}

Subband& WaveletPyramid::band(int level, Orientation o) {
  return const_cast<Subband&>(std::as_const(*this).band(level, o));
}

std::size_t WaveletPyramid::coefficient_count() const {
  std::size_t n = 0;
  for (const auto& b : bands_) n += b.data.size();
  return n;
}

void WaveletPyramid::validate() const {
  if (levels_ < 1) throw DimensionError("pyramid has no levels");
  if (bands_.size() != static_cast<std::size_t>(3 * levels_ + 1))
    throw DimensionError("pyramid has " + std::to_string(bands_.size()) + " subbands, expected " +
                         std::to_string(3 * levels_ + 1));
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const auto& b = bands_[i];
    if (b.level < 1 || b.level > levels_) throw DimensionError("subband level out of range");
    if (b.orientation == Orientation::LL && b.level != levels_)
      throw DimensionError("LL subband only allowed at the coarsest level");
    for (std::size_t j = 0; j < i; ++j)
      if (bands_[j].level == b.level && bands_[j].orientation == b.orientation)
        throw DimensionError("duplicate subband address");
    if (b.data.rows() != (rows_ >> b.level) || b.data.cols() != (cols_ >> b.level))
      throw DimensionError("subband " + std::string(orientation_name(b.orientation)) + std::to_string(b.level) +
                           " has inconsistent dimensions");
  }
}

WaveletPyramid dwt_forward(const Matrix& image, int levels, const FilterBank& fb) {
  fb.validate();
  WaveletPyramid pyr(levels, image.rows(), image.cols(), fb.name);
  Matrix work = image;
  std::size_t rows = image.rows();
  std::size_t cols = image.cols();
  for (int lev = 1; lev <= levels; ++lev) {
    forward_level(work, rows, cols, fb);
    rows /= 2;
    cols /= 2;
    for (auto o : {Orientation::LH, Orientation::HL, Orientation::HH})
      pyr.band(lev, o).data = copy_block(work, quadrant_of(o, rows, cols), rows, cols);
  }
  pyr.band(levels, Orientation::LL).data = copy_block(work, {0, 0}, rows, cols);
  return pyr;
}

WaveletPyramid dwt_forward(const GrayImage& image, int levels, const FilterBank& fb) {
  return dwt_forward(to_matrix(image), levels, fb);
}

Matrix dwt_inverse(const WaveletPyramid& pyramid, const FilterBank& fb) {
  fb.validate();
  pyramid.validate();
  const int levels = pyramid.levels();
  Matrix work(pyramid.source_rows(), pyramid.source_cols());
  paste_block(work, {0, 0}, pyramid.band(levels, Orientation::LL).data);
  for (int lev = levels; lev >= 1; --lev) {
    const std::size_t half_r = pyramid.source_rows() >> lev;
    const std::size_t half_c = pyramid.source_cols() >> lev;
    for (auto o : {Orientation::LH, Orientation::HL, Orientation::HH})
      paste_block(work, quadrant_of(o, half_r, half_c), pyramid.band(lev, o).data);
    inverse_level(work, 2 * half_r, 2 * half_c, fb);
  }
  return work;
}

}  // namespace wmark
