#include "wmark/codec.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace wmark {

namespace {

const Matrix& child_data(const WaveletPyramid& pyr, SelBand b) {
  return pyr.band(sel_band_level(b), sel_band_orientation(b)).data;
}

Matrix& child_data(WaveletPyramid& pyr, SelBand b) {
  return pyr.band(sel_band_level(b), sel_band_orientation(b)).data;
}

void check_plan_against(const EmbedPlan& plan, std::size_t rows, std::size_t cols) {
  plan.validate();
  if (plan.image_rows != rows || plan.image_cols != cols)
    throw PlanMismatchError("plan was built for a " + std::to_string(plan.image_cols) + "x" +
                            std::to_string(plan.image_rows) + " image, got " + std::to_string(cols) + "x" +
                            std::to_string(rows));
}

}  // namespace

BipolarVector pretreat(const WatermarkBits& wm) {
  BipolarVector v(wm.bits.size());
  for (std::size_t i = 0; i < wm.bits.size(); ++i) v[i] = wm.bits[i] ? 1 : -1;
  return v;
}

WatermarkBits posttreat(const BipolarVector& v, std::size_t width, std::size_t height) {
  if (v.size() != width * height)
    throw std::invalid_argument("posttreat: " + std::to_string(v.size()) + " values cannot fill " +
                                std::to_string(width) + "x" + std::to_string(height));
  WatermarkBits wm(width, height);
  for (std::size_t i = 0; i < v.size(); ++i) wm.bits[i] = v[i] >= 0 ? 1 : 0;
  return wm;
}

std::pair<BipolarVector, BipolarVector> split(const BipolarVector& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("split: watermark length must be even");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  return {BipolarVector(v.begin(), mid), BipolarVector(mid, v.end())};
}

void EmbedConfig::validate() const {
  if (!std::isfinite(alpha_lh2) || !std::isfinite(alpha_hl2))
    throw std::invalid_argument("scaling factors must be finite");
  nvf.validate();
  quant.validate();
  filter_bank_by_name(filter_bank);
}

void EmbedPlan::validate() const {
  if (wm_width * wm_height != lh2.size() + hl2.size() || lh2.size() != hl2.size())
    throw PlanMismatchError("plan position counts do not match the watermark size");
  const std::size_t band_rows = image_rows >> 2;
  const std::size_t band_cols = image_cols >> 2;
  for (auto b : {SelBand::LH2, SelBand::HL2}) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : entries(b)) {
      if (e.row >= band_rows || e.col >= band_cols)
        throw PlanMismatchError("plan position outside band " + std::string(sel_band_name(b)));
      if (!seen.insert({e.row, e.col}).second)
        throw PlanMismatchError("duplicate plan position in band " + std::string(sel_band_name(b)));
      if (!(e.delta > 0.0)) throw PlanMismatchError("plan delta must be > 0");
    }
  }
}

EmbedPlan build_plan(const GrayImage& host, std::size_t wm_width, std::size_t wm_height, const EmbedConfig& cfg) {
  cfg.validate();
  const std::size_t total = wm_width * wm_height;
  if (total == 0 || total % 2 != 0) throw CapacityError("watermark must have a non-zero even number of bits");

  const FilterBank fb = filter_bank_by_name(cfg.filter_bank);
  const WaveletPyramid pyr = dwt_forward(host, EmbedConfig::kLevels, fb);
  const std::size_t per_band = total / 2;
  const Selection sel = select_significant(pyr, per_band);

  EmbedPlan plan;
  plan.image_rows = host.height;
  plan.image_cols = host.width;
  plan.wm_width = wm_width;
  plan.wm_height = wm_height;
  plan.config = cfg;
  plan.fallback_positions = sel.lh2_fallback + sel.hl2_fallback;

  for (auto b : {SelBand::LH2, SelBand::HL2}) {
    const Subband& band = pyr.band(sel_band_level(b), sel_band_orientation(b));
    const Matrix nvf = compute_nvf(band.data, cfg.nvf);
    const Matrix delta = max_allowable_distortion(band, nvf, cfg.quant, cfg.nvf);
    auto& dst = b == SelBand::LH2 ? plan.lh2 : plan.hl2;
    dst.reserve(per_band);
    for (const auto& ref : sel.of(b)) dst.push_back({ref.row, ref.col, delta(ref.row, ref.col)});
  }
  return plan;
}

EmbedResult embed(const GrayImage& host, const WatermarkBits& wm, const EmbedConfig& cfg) {
  EmbedPlan plan = build_plan(host, wm.width, wm.height, cfg);
  const auto [first, second] = split(pretreat(wm));

  const FilterBank fb = filter_bank_by_name(cfg.filter_bank);
  WaveletPyramid pyr = dwt_forward(host, EmbedConfig::kLevels, fb);
  for (auto b : {SelBand::LH2, SelBand::HL2}) {
    Matrix& data = child_data(pyr, b);
    const auto& bits = b == SelBand::LH2 ? first : second;
    const auto& entries = plan.entries(b);
    const double alpha = cfg.alpha(b);
    for (std::size_t i = 0; i < entries.size(); ++i)
      data(entries[i].row, entries[i].col) += alpha * bits[i] * entries[i].delta;
  }

  EmbedResult out;
  out.watermarked_real = dwt_inverse(pyr, fb);
  out.watermarked = quantize_to_image(out.watermarked_real);
  out.plan = std::move(plan);
  return out;
}

std::vector<double> extract_raw(const Matrix& original, const Matrix& suspect, const EmbedPlan& plan) {
  if (original.rows() != suspect.rows() || original.cols() != suspect.cols())
    throw DimensionError("original and suspect images differ in size");
  check_plan_against(plan, original.rows(), original.cols());

  const FilterBank fb = filter_bank_by_name(plan.config.filter_bank);
  const WaveletPyramid po = dwt_forward(original, EmbedConfig::kLevels, fb);
  const WaveletPyramid ps = dwt_forward(suspect, EmbedConfig::kLevels, fb);

  std::vector<double> raw;
  raw.reserve(plan.lh2.size() + plan.hl2.size());
  for (auto b : {SelBand::LH2, SelBand::HL2}) {
    const Matrix& co = child_data(po, b);
    const Matrix& cs = child_data(ps, b);
    const double alpha = plan.config.alpha(b);
    for (const auto& e : plan.entries(b))
      raw.push_back((cs(e.row, e.col) - co(e.row, e.col)) / (alpha * e.delta));
  }
  return raw;
}

WatermarkBits extract(const Matrix& original, const Matrix& suspect, const EmbedPlan& plan) {
  const std::vector<double> raw = extract_raw(original, suspect, plan);
  BipolarVector decided(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) decided[i] = raw[i] >= 0.0 ? 1 : -1;
  return posttreat(decided, plan.wm_width, plan.wm_height);
}

WatermarkBits extract(const GrayImage& original, const GrayImage& suspect, const EmbedPlan& plan) {
  if (!original.same_dims(suspect)) throw DimensionError("original and suspect images differ in size");
  return extract(to_matrix(original), to_matrix(suspect), plan);
}

WatermarkBits extract_regenerated(const GrayImage& original, const GrayImage& suspect, std::size_t wm_width,
                                  std::size_t wm_height, const EmbedConfig& cfg) {
  return extract(original, suspect, build_plan(original, wm_width, wm_height, cfg));
}

}  // namespace wmark
