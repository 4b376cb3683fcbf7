#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "wmark/wavelet.hpp"

namespace wmark {

/// The four subbands that take part in significance selection.
enum class SelBand { LH3, HL3, LH2, HL2 };

std::string_view sel_band_name(SelBand b);
/// Parses "LH3", "HL3", "LH2", "HL2"; throws std::invalid_argument otherwise.
SelBand parse_sel_band(std::string_view name);
int sel_band_level(SelBand b);
Orientation sel_band_orientation(SelBand b);

struct CoeffRef {
  SelBand band = SelBand::LH2;
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const CoeffRef&, const CoeffRef&) = default;
};

/// The four children of a level-3 parent in the matching level-2 band, in
/// the order (2i,2j), (2i,2j+1), (2i+1,2j), (2i+1,2j+1).
/// Throws std::invalid_argument when `parent` is not in LH3 or HL3.
std::array<CoeffRef, 4> offspring(const CoeffRef& parent);

/// Per-band significance floor over the two child bands.
struct BandFloor {
  double lh2 = 0.0;
  double hl2 = 0.0;

  double of(SelBand b) const { return b == SelBand::HL2 ? hl2 : lh2; }
  double min() const { return lh2 < hl2 ? lh2 : hl2; }
};

/// mean(|band|) / M for LH2 and HL2, with M the side length of the
/// level-2 band (geometric mean of both sides when not square).
BandFloor compute_band_floor(const WaveletPyramid& pyramid);

/// Lists at the end of the sorting passes, plus the schedule that ran.
struct SpihtState {
  std::vector<CoeffRef> lip;
  std::vector<CoeffRef> lsp;
  std::vector<CoeffRef> lis;
  std::vector<int> lsp_pass;     // pass index that admitted each LSP entry
  BandFloor floor;
  int initial_exponent = 0;      // floor(log2 max|c|)
  int passes = 0;                // number of sorting passes executed
};

/// Runs the sorting passes over LH3/HL3 (parents) and LH2/HL2 (children).
///
/// LIS starts with every LH3 ref row-major followed by every HL3 ref
/// row-major; LIP and LSP start empty. Each pass first re-tests LIP in list
/// order, then LIS in list order. A parent whose largest child magnitude
/// reaches T (with T >= floor of the child band) is removed from LIS and its
/// children are appended to LSP (|c| >= T) or LIP. The threshold starts at
/// 2^floor(log2 max|c|), halves after every pass, and the loop stops once
/// T < min(floor). An all-zero input runs no passes.
SpihtState run_sorting_passes(const WaveletPyramid& pyramid);

struct Selection {
  std::vector<CoeffRef> lh2;
  std::vector<CoeffRef> hl2;
  std::size_t lh2_fallback = 0;  // slots filled by magnitude order
  std::size_t hl2_fallback = 0;

  const std::vector<CoeffRef>& of(SelBand b) const { return b == SelBand::HL2 ? hl2 : lh2; }
};

/// First `count_per_band` LSP entries of each child band, in LSP order.
/// A band whose LSP is short is topped up with its largest-magnitude
/// unselected coefficients (ties row-major). Throws CapacityError when the
/// band holds fewer than `count_per_band` coefficients.
Selection select_significant(const WaveletPyramid& pyramid, std::size_t count_per_band);

}  // namespace wmark
