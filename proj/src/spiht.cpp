#include "wmark/spiht.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wmark {

namespace {

const Matrix& band_data(const WaveletPyramid& pyr, SelBand b) {
  return pyr.band(sel_band_level(b), sel_band_orientation(b)).data;
}

double magnitude(const WaveletPyramid& pyr, const CoeffRef& ref) {
  return std::abs(band_data(pyr, ref.band)(ref.row, ref.col));
}

SelBand child_band(SelBand parent) { return parent == SelBand::LH3 ? SelBand::LH2 : SelBand::HL2; }

void require_selection_bands(const WaveletPyramid& pyr) {
  if (pyr.levels() < 3) throw DimensionError("significance selection needs a pyramid of at least 3 levels");
}

void fill_by_magnitude(const WaveletPyramid& pyr, SelBand band, std::vector<CoeffRef>& picked,
                       std::size_t count) {
  const Matrix& data = band_data(pyr, band);
  std::vector<char> taken(data.size(), 0);
  for (const auto& ref : picked) taken[ref.row * data.cols() + ref.col] = 1;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto values = data.values();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  for (std::size_t idx : order) {
    if (picked.size() >= count) break;
    if (taken[idx]) continue;
    picked.push_back({band, idx / data.cols(), idx % data.cols()});
  }
}

}  // namespace

std::string_view sel_band_name(SelBand b) {
  switch (b) {
    case SelBand::LH3: return "LH3";
    case SelBand::HL3: return "HL3";
    case SelBand::LH2: return "LH2";
    case SelBand::HL2: return "HL2";
  }
  return "??";
}

SelBand parse_sel_band(std::string_view name) {
  for (auto b : {SelBand::LH3, SelBand::HL3, SelBand::LH2, SelBand::HL2})
    if (sel_band_name(b) == name) return b;
  throw std::invalid_argument("unknown band: " + std::string(name));
}

int sel_band_level(SelBand b) { return (b == SelBand::LH3 || b == SelBand::HL3) ? 3 : 2; }

Orientation sel_band_orientation(SelBand b) {
  return (b == SelBand::LH3 || b == SelBand::LH2) ? Orientation::LH : Orientation::HL;
}

std::array<CoeffRef, 4> offspring(const CoeffRef& parent) {
  if (parent.band != SelBand::LH3 && parent.band != SelBand::HL3)
    throw std::invalid_argument("offspring: parent must be in LH3 or HL3, got " +
                                std::string(sel_band_name(parent.band)));
  const SelBand c = child_band(parent.band);
  const std::size_t i = 2 * parent.row;
  const std::size_t j = 2 * parent.col;
  return {CoeffRef{c, i, j}, CoeffRef{c, i, j + 1}, CoeffRef{c, i + 1, j}, CoeffRef{c, i + 1, j + 1}};
}

BandFloor compute_band_floor(const WaveletPyramid& pyramid) {
  require_selection_bands(pyramid);
  auto floor_of = [&](SelBand b) {
    const Matrix& m = band_data(pyramid, b);
    if (m.empty()) return 0.0;
    double sum = 0.0;
    for (double v : m.values()) sum += std::abs(v);
    const double mean = sum / static_cast<double>(m.size());
    const double side = m.rows() == m.cols() ? static_cast<double>(m.rows())
                                             : std::sqrt(static_cast<double>(m.rows()) * m.cols());
    return mean / side;
  };
  return {floor_of(SelBand::LH2), floor_of(SelBand::HL2)};
}

SpihtState run_sorting_passes(const WaveletPyramid& pyramid) {
  require_selection_bands(pyramid);
  SpihtState st;
  st.floor = compute_band_floor(pyramid);

  for (auto parent : {SelBand::LH3, SelBand::HL3}) {
    const Matrix& m = band_data(pyramid, parent);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) st.lis.push_back({parent, r, c});
  }

  double max_mag = 0.0;
  for (auto b : {SelBand::LH3, SelBand::HL3, SelBand::LH2, SelBand::HL2})
    for (double v : band_data(pyramid, b).values()) max_mag = std::max(max_mag, std::abs(v));
  if (!(max_mag > 0.0) || !std::isfinite(max_mag)) return st;

  int n = std::ilogb(max_mag);
  st.initial_exponent = n;
  double threshold = std::ldexp(1.0, n);

  while (true) {
    const int pass = st.passes;

    std::vector<CoeffRef> still_insignificant;
    still_insignificant.reserve(st.lip.size());
    for (const auto& ref : st.lip) {
      if (magnitude(pyramid, ref) >= threshold && threshold >= st.floor.of(ref.band)) {
        st.lsp.push_back(ref);
        st.lsp_pass.push_back(pass);
      } else {
        still_insignificant.push_back(ref);
      }
    }
    st.lip = std::move(still_insignificant);

    std::vector<CoeffRef> remaining_sets;
    remaining_sets.reserve(st.lis.size());
    for (const auto& parent : st.lis) {
      const auto kids = offspring(parent);
      const double gate = st.floor.of(kids[0].band);
      double set_max = 0.0;
      for (const auto& k : kids) set_max = std::max(set_max, magnitude(pyramid, k));
      if (set_max >= threshold && threshold >= gate) {
        for (const auto& k : kids) {
          if (magnitude(pyramid, k) >= threshold && threshold >= gate) {
            st.lsp.push_back(k);
            st.lsp_pass.push_back(pass);
          } else {
            st.lip.push_back(k);
          }
        }
      } else {
        remaining_sets.push_back(parent);
      }
    }
    st.lis = std::move(remaining_sets);

    ++st.passes;
    --n;
    threshold = std::ldexp(1.0, n);
    // A zero floor keeps the loop alive until the threshold underflows.
    if (threshold == 0.0 || !(threshold >= st.floor.min())) break;
  }
  return st;
}

Selection select_significant(const WaveletPyramid& pyramid, std::size_t count_per_band) {
  require_selection_bands(pyramid);
  for (auto b : {SelBand::LH2, SelBand::HL2}) {
    if (band_data(pyramid, b).size() < count_per_band)
      throw CapacityError("band " + std::string(sel_band_name(b)) + " holds " +
                          std::to_string(band_data(pyramid, b).size()) + " coefficients, " +
                          std::to_string(count_per_band) + " requested");
  }

  const SpihtState st = run_sorting_passes(pyramid);
  Selection sel;
  for (const auto& ref : st.lsp) {
    auto& dst = ref.band == SelBand::LH2 ? sel.lh2 : sel.hl2;
    if (dst.size() < count_per_band) dst.push_back(ref);
  }
  const std::size_t lh2_found = sel.lh2.size();
  const std::size_t hl2_found = sel.hl2.size();
  fill_by_magnitude(pyramid, SelBand::LH2, sel.lh2, count_per_band);
  fill_by_magnitude(pyramid, SelBand::HL2, sel.hl2, count_per_band);
  sel.lh2_fallback = sel.lh2.size() - lh2_found;
  sel.hl2_fallback = sel.hl2.size() - hl2_found;
  return sel;
}

}  // namespace wmark
