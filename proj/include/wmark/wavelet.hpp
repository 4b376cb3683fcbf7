#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wmark/image.hpp"

namespace wmark {

/// Subband orientation. LH is lowpass along rows and highpass along
/// columns (horizontal edges); HL is the transpose. Spatial layout per
/// level: LL top-left, HL top-right, LH bottom-left, HH bottom-right.
enum class Orientation { LL, LH, HL, HH };

std::string_view orientation_name(Orientation o);

/// Two-channel filter bank. Analysis filters are applied as periodic
/// correlations followed by decimation by two:
///
///   low[k]  = sum_n analysis_lowpass[n]  * x[(2k + n) mod N]
///   high[k] = sum_n analysis_highpass[n] * x[(2k + n) mod N]
///
/// and synthesis scatters each coefficient back through the synthesis
/// filters at the same offsets. For an orthonormal bank the synthesis
/// filters equal the analysis filters and the scatter is the exact adjoint.
struct FilterBank {
  std::string name;
  std::vector<double> analysis_lowpass;
  std::vector<double> analysis_highpass;
  std::vector<double> synthesis_lowpass;
  std::vector<double> synthesis_highpass;

  /// Orthonormal Haar: low = (a + b)/sqrt2, high = (a - b)/sqrt2.
  static FilterBank haar();
  /// Orthonormal Daubechies with two vanishing moments (4 taps).
  static FilterBank daubechies4();

  /// Throws std::invalid_argument when a filter is shorter than 2 taps.
  void validate() const;
};

/// Looks up "haar" or "db4"; throws std::invalid_argument otherwise.
FilterBank filter_bank_by_name(std::string_view name);

struct Subband {
  int level = 0;
  Orientation orientation = Orientation::LL;
  Matrix data;
};

/// Multi-level decomposition. Holds LL at the coarsest level plus
/// LH/HL/HH at every level, ordered coarse to fine:
/// {LLn, LHn, HLn, HHn, LH(n-1), HL(n-1), HH(n-1), ..., LH1, HL1, HH1}.
class WaveletPyramid {
 public:
  WaveletPyramid() = default;
  WaveletPyramid(int levels, std::size_t rows, std::size_t cols, std::string filter_bank_name);

  int levels() const { return levels_; }
  std::size_t source_rows() const { return rows_; }
  std::size_t source_cols() const { return cols_; }
  const std::string& filter_bank_name() const { return fb_name_; }

  const std::vector<Subband>& subbands() const { return bands_; }

  /// Throws std::out_of_range for an address that is not part of the pyramid.
  const Subband& band(int level, Orientation o) const;
  Subband& band(int level, Orientation o);

  std::size_t coefficient_count() const;

  /// Checks band count, uniqueness of addresses and the halving law.
  /// Throws DimensionError on the first violation.
  void validate() const;

 private:
  int levels_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::string fb_name_;
  std::vector<Subband> bands_;
};

/// Separable forward DWT of a real raster. Dimensions must be divisible
/// by 2^levels.
WaveletPyramid dwt_forward(const Matrix& image, int levels, const FilterBank& fb);
WaveletPyramid dwt_forward(const GrayImage& image, int levels, const FilterBank& fb);

/// Inverse of dwt_forward. Throws DimensionError on an inconsistent pyramid.
Matrix dwt_inverse(const WaveletPyramid& pyramid, const FilterBank& fb);

}  // namespace wmark
