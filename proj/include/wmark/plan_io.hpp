#pragma once

#include <filesystem>

#include "json.hpp"

#include "wmark/codec.hpp"

namespace wmark {

inline constexpr int kPlanFormatVersion = 1;

/// Plan file layout (format_version 1):
///
///   {
///     "format_version": 1,
///     "image_dims":     {"rows": 512, "cols": 512},
///     "watermark_dims": {"width": 32, "height": 32},
///     "config":         <embed config, see embed_config_to_json>,
///     "positions":      {"LH2": [[row, col], ...], "HL2": [[row, col], ...]},
///     "delta":          {"LH2": [d0, d1, ...],     "HL2": [...]}
///   }
///
/// Positions are listed in bit order. Deltas are written with
/// round-trip precision, so a reloaded plan extracts identically.
nlohmann::json plan_to_json(const EmbedPlan& plan);
/// Throws FormatError on missing fields or an unsupported version.
EmbedPlan plan_from_json(const nlohmann::json& j);

void write_plan(const EmbedPlan& plan, const std::filesystem::path& path);
EmbedPlan read_plan(const std::filesystem::path& path);

/// {"filter_bank": "haar", "alpha": {"LH2": 3, "HL2": 1},
///  "nvf": {"window_halfwidth": 1, "flat_region_strength": 3},
///  "quant_matrix": [[...4 levels...] x 4 orientation rows]}
/// Every key is optional when reading; missing keys keep their defaults.
nlohmann::json embed_config_to_json(const EmbedConfig& cfg);
EmbedConfig embed_config_from_json(const nlohmann::json& j);

}  // namespace wmark
