#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wmark/attacks.hpp"
#include "wmark/codec.hpp"

namespace wmark::bench {

/// A corpus or watermark source: a PGM path, or "synth:<generator>"
/// (see synth::from_spec) rendered at 512x512 for hosts. Watermarks also
/// accept "synth:blocks[:seed]" rendered at 32x32.
struct BenchManifest {
  std::vector<std::string> corpus;
  std::string watermark = "synth:blocks:1";
  EmbedConfig config;
  std::vector<AttackSpec> attacks;  // empty -> fidelity-only report
  std::vector<std::uint64_t> seeds = {1};
  std::filesystem::path output_dir = "bench_out";
  unsigned workers = 0;  // 0 -> hardware concurrency

  /// Throws std::invalid_argument for an empty corpus or seed list.
  void validate() const;
};

/// Paths inside the manifest are resolved against `base_dir`.
/// Throws FormatError on malformed JSON.
BenchManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json manifest_to_json(const BenchManifest& m);
BenchManifest read_manifest(const std::filesystem::path& path);

GrayImage load_host(const std::string& source);
WatermarkBits load_watermark(const std::string& source);

struct FidelityRow {
  std::string image;
  double psnr_db = 0.0;
  double mse = 0.0;
  double correlation = 0.0;
  std::size_t fallback_positions = 0;
  std::string error;
};

struct Cell {
  std::size_t attack_index = 0;
  std::size_t image_index = 0;
  std::string image;
  AttackSpec attack;
  std::optional<std::uint64_t> seed;  // set for stochastic attacks only
  double correlation = 0.0;
  bool degenerate = false;
  double psnr_db = 0.0;  // watermarked vs attacked
  std::string error;
};

struct BenchReport {
  std::string config_hash;
  nlohmann::json config;
  std::vector<std::string> images;
  std::vector<FidelityRow> fidelity;
  std::vector<Cell> cells;

  /// Mean / min correlation over seeds for (attack index, image index);
  /// NaN when every run of the cell failed.
  double mean_correlation(std::size_t attack, std::size_t image) const;
  double min_correlation(std::size_t attack, std::size_t image) const;

  std::vector<AttackSpec> attacks;
};

/// 64-bit FNV-1a of the compact JSON form, as 16 hex digits.
std::string config_hash(const EmbedConfig& cfg);

/// Embeds the watermark into every host, then runs every
/// (image x attack x seed) cell; deterministic attacks run once per image.
/// Cells run on `workers` threads; results are ordered by grid position,
/// so the report is independent of scheduling. Per-cell failures are
/// recorded in the cell and do not abort the run.
BenchReport run(const BenchManifest& manifest);

/// fidelity.csv, robustness_mean.csv, robustness_min.csv, cells.csv and
/// report.json. Rows of the robustness tables are attacks, columns images.
void write_report(const BenchReport& report, const std::filesystem::path& dir);

nlohmann::json report_to_json(const BenchReport& report);
std::string fidelity_csv(const BenchReport& report);
std::string robustness_csv(const BenchReport& report, bool use_min);
std::string cells_csv(const BenchReport& report);

}  // namespace wmark::bench
