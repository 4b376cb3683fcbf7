#include "wmark/plan_io.hpp"

#include <fstream>

namespace wmark {

using nlohmann::json;

json embed_config_to_json(const EmbedConfig& cfg) {
  json q = json::array();
  for (const auto& row : cfg.quant.factors) q.push_back(row);
  return {
      {"filter_bank", cfg.filter_bank},
      {"alpha", {{"LH2", cfg.alpha_lh2}, {"HL2", cfg.alpha_hl2}}},
      {"nvf", {{"window_halfwidth", cfg.nvf.window_halfwidth}, {"flat_region_strength", cfg.nvf.flat_region_strength}}},
      {"quant_matrix", q},
  };
}

EmbedConfig embed_config_from_json(const json& j) {
  EmbedConfig cfg;
  try {
    if (!j.is_object()) throw FormatError("embed config must be a JSON object");
    if (j.contains("filter_bank")) cfg.filter_bank = j.at("filter_bank").get<std::string>();
    if (j.contains("alpha")) {
      const auto& a = j.at("alpha");
      if (a.contains("LH2")) cfg.alpha_lh2 = a.at("LH2").get<double>();
      if (a.contains("HL2")) cfg.alpha_hl2 = a.at("HL2").get<double>();
    }
    if (j.contains("nvf")) {
      const auto& n = j.at("nvf");
      if (n.contains("window_halfwidth")) cfg.nvf.window_halfwidth = n.at("window_halfwidth").get<int>();
      if (n.contains("flat_region_strength")) cfg.nvf.flat_region_strength = n.at("flat_region_strength").get<double>();
    }
    if (j.contains("quant_matrix")) {
      const auto& q = j.at("quant_matrix");
      if (!q.is_array() || q.size() != 4) throw FormatError("quant_matrix must have 4 rows");
      for (std::size_t r = 0; r < 4; ++r) {
        if (!q[r].is_array() || q[r].size() != 4) throw FormatError("quant_matrix rows must have 4 entries");
        for (std::size_t c = 0; c < 4; ++c) cfg.quant.factors[r][c] = q[r][c].get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad embed config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad embed config: ") + e.what());
  }
  return cfg;
}

json plan_to_json(const EmbedPlan& plan) {
  json positions = json::object();
  json delta = json::object();
  for (auto b : {SelBand::LH2, SelBand::HL2}) {
    json pos = json::array();
    json d = json::array();
    for (const auto& e : plan.entries(b)) {
      pos.push_back({e.row, e.col});
      d.push_back(e.delta);
    }
    positions[std::string(sel_band_name(b))] = std::move(pos);
    delta[std::string(sel_band_name(b))] = std::move(d);
  }
  return {
      {"format_version", kPlanFormatVersion},
      {"image_dims", {{"rows", plan.image_rows}, {"cols", plan.image_cols}}},
      {"watermark_dims", {{"width", plan.wm_width}, {"height", plan.wm_height}}},
      {"config", embed_config_to_json(plan.config)},
      {"positions", positions},
      {"delta", delta},
  };
}

EmbedPlan plan_from_json(const json& j) {
  EmbedPlan plan;
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kPlanFormatVersion)
      throw FormatError("unsupported plan format_version " + std::to_string(version));
    plan.image_rows = j.at("image_dims").at("rows").get<std::size_t>();
    plan.image_cols = j.at("image_dims").at("cols").get<std::size_t>();
    plan.wm_width = j.at("watermark_dims").at("width").get<std::size_t>();
    plan.wm_height = j.at("watermark_dims").at("height").get<std::size_t>();
    plan.config = embed_config_from_json(j.at("config"));
    for (auto b : {SelBand::LH2, SelBand::HL2}) {
      const std::string name(sel_band_name(b));
      const auto& pos = j.at("positions").at(name);
      const auto& d = j.at("delta").at(name);
      if (pos.size() != d.size()) throw FormatError("plan band " + name + ": positions and deltas differ in length");
      auto& dst = b == SelBand::LH2 ? plan.lh2 : plan.hl2;
      for (std::size_t i = 0; i < pos.size(); ++i) {
        if (!pos[i].is_array() || pos[i].size() != 2) throw FormatError("plan positions must be [row, col] pairs");
        dst.push_back({pos[i][0].get<std::size_t>(), pos[i][1].get<std::size_t>(), d[i].get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed plan: ") + e.what());
  }
  try {
    plan.validate();
  } catch (const PlanMismatchError& e) {
    throw FormatError(std::string("inconsistent plan: ") + e.what());
  }
  return plan;
}

void write_plan(const EmbedPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << plan_to_json(plan).dump(1) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

EmbedPlan read_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open plan " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("plan " + path.string() + " is not valid JSON: " + e.what());
  }
  return plan_from_json(j);
}

}  // namespace wmark
