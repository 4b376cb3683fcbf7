#pragma once

// Reference selection computed without simulating the LIP/LIS lists.
//
// Each parent set is partitioned in the first pass whose threshold reaches
// both its largest child and its band floor. Children at or above that
// threshold are admitted in the same pass, during the set phase, in
// (parent order, child index) order. The rest wait in LIP and are admitted
// during the LIP phase of the first later pass that satisfies both tests;
// LIP keeps insertion order, so their key is (insertion pass, parent order,
// child index). Sorting all admissions by (pass, phase, key) yields LSP.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "wmark/spiht.hpp"

namespace wmark::testing {

struct OracleSelection {
  std::vector<CoeffRef> lh2;
  std::vector<CoeffRef> hl2;
};

inline OracleSelection oracle_select(const WaveletPyramid& pyr, std::size_t count) {
  const Matrix& lh3 = pyr.band(3, Orientation::LH).data;
  const Matrix& hl3 = pyr.band(3, Orientation::HL).data;
  const Matrix& lh2 = pyr.band(2, Orientation::LH).data;
  const Matrix& hl2 = pyr.band(2, Orientation::HL).data;

  auto band_floor = [](const Matrix& m) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) s += std::fabs(m(r, c));
    return s / (m.rows() * m.cols()) / std::sqrt(double(m.rows()) * double(m.cols()));
  };
  const double floor_lh = band_floor(lh2);
  const double floor_hl = band_floor(hl2);
  const double floor_min = std::min(floor_lh, floor_hl);

  double peak = 0.0;
  for (const Matrix* m : {&lh3, &hl3, &lh2, &hl2})
    for (std::size_t r = 0; r < m->rows(); ++r)
      for (std::size_t c = 0; c < m->cols(); ++c) peak = std::max(peak, std::fabs((*m)(r, c)));

  // Threshold schedule: 2^e for the largest e with 2^e <= peak, halving;
  // the first pass always runs, later ones only while T >= min floor.
  std::vector<double> thresholds;
  if (peak > 0.0) {
    double t = 1.0;
    while (t <= peak) t *= 2.0;
    while (t > peak) t /= 2.0;
    thresholds.push_back(t);
    for (t /= 2.0; t > 0.0 && t >= floor_min; t /= 2.0) thresholds.push_back(t);
  }

  struct Admission {
    std::size_t pass;
    int phase;  // 0 = LIP, 1 = set
    std::size_t k1, k2, k3;
    CoeffRef ref;
  };
  std::vector<Admission> adm;

  std::size_t order = 0;
  for (int b = 0; b < 2; ++b) {
    const Matrix& parent = b == 0 ? lh3 : hl3;
    const Matrix& child = b == 0 ? lh2 : hl2;
    const double gate = b == 0 ? floor_lh : floor_hl;
    const SelBand cb = b == 0 ? SelBand::LH2 : SelBand::HL2;
    for (std::size_t r = 0; r < parent.rows(); ++r) {
      for (std::size_t c = 0; c < parent.cols(); ++c, ++order) {
        double kids[4];
        CoeffRef refs[4];
        for (int k = 0; k < 4; ++k) {
          const std::size_t cr = 2 * r + k / 2, cc = 2 * c + k % 2;
          kids[k] = std::fabs(child(cr, cc));
          refs[k] = {cb, cr, cc};
        }
        const double kmax = *std::max_element(kids, kids + 4);
        std::size_t split = thresholds.size();
        for (std::size_t p = 0; p < thresholds.size(); ++p)
          if (kmax >= thresholds[p] && thresholds[p] >= gate) {
            split = p;
            break;
          }
        if (split == thresholds.size()) continue;
        for (std::size_t k = 0; k < 4; ++k) {
          if (kids[k] >= thresholds[split]) {
            adm.push_back({split, 1, order, k, 0, refs[k]});
            continue;
          }
          for (std::size_t q = split + 1; q < thresholds.size(); ++q)
            if (kids[k] >= thresholds[q] && thresholds[q] >= gate) {
              adm.push_back({q, 0, split, order, k, refs[k]});
              break;
            }
        }
      }
    }
  }
  std::sort(adm.begin(), adm.end(), [](const Admission& a, const Admission& b) {
    return std::tie(a.pass, a.phase, a.k1, a.k2, a.k3) < std::tie(b.pass, b.phase, b.k1, b.k2, b.k3);
  });

  OracleSelection out;
  for (const auto& a : adm) {
    auto& dst = a.ref.band == SelBand::LH2 ? out.lh2 : out.hl2;
    if (dst.size() < count) dst.push_back(a.ref);
  }

  // Shortfall: largest remaining magnitudes, ties broken row-major.
  auto top_up = [count](const Matrix& m, SelBand band, std::vector<CoeffRef>& dst) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> rest;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const bool taken = std::any_of(dst.begin(), dst.end(),
                                       [&](const CoeffRef& x) { return x.row == r && x.col == c; });
        if (!taken) rest.emplace_back(-std::fabs(m(r, c)), r, c);
      }
    std::sort(rest.begin(), rest.end());
    for (const auto& [neg, r, c] : rest) {
      if (dst.size() >= count) break;
      dst.push_back({band, r, c});
    }
  };
  top_up(lh2, SelBand::LH2, out.lh2);
  top_up(hl2, SelBand::HL2, out.hl2);
  return out;
}

}  // namespace wmark::testing
