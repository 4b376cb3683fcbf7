// wmark: command-line front end for embedding, extraction, attacks,
// metrics and the benchmark harness.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "wmark/attacks.hpp"
#include "wmark/bench.hpp"
#include "wmark/codec.hpp"
#include "wmark/imageio.hpp"
#include "wmark/metrics.hpp"
#include "wmark/plan_io.hpp"
#include "wmark/synth.hpp"

namespace {

using nlohmann::json;
using namespace wmark;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigFlags {
  std::string config_file;
  std::optional<double> alpha_lh2;
  std::optional<double> alpha_hl2;
  std::optional<int> nvf_window;
  std::optional<double> s1;
  std::optional<std::string> filter_bank;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_file, "Embed config JSON (alpha, nvf, quant_matrix, filter_bank)")
        ->check(CLI::ExistingFile);
    app->add_option("--alpha-lh2", alpha_lh2, "Scaling factor for LH2 (default 3)");
    app->add_option("--alpha-hl2", alpha_hl2, "Scaling factor for HL2 (default 1)");
    app->add_option("--nvf-window", nvf_window, "NVF window half-width L (default 1)");
    app->add_option("--s1", s1, "Flat-region distortion s1 (default 3)");
    app->add_option("--filter-bank", filter_bank, "haar | db4 (default haar)");
  }

  EmbedConfig build() const {
    EmbedConfig cfg;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw FormatError("config " + config_file + " is not valid JSON: " + e.what());
      }
      cfg = embed_config_from_json(j);
    }
    if (alpha_lh2) cfg.alpha_lh2 = *alpha_lh2;
    if (alpha_hl2) cfg.alpha_hl2 = *alpha_hl2;
    if (nvf_window) cfg.nvf.window_halfwidth = *nvf_window;
    if (s1) cfg.nvf.flat_region_strength = *s1;
    if (filter_bank) cfg.filter_bank = *filter_bank;
    cfg.validate();
    return cfg;
  }
};

void write_json_file(const json& j, const std::string& path) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

json load_json_arg(const std::string& arg) {
  // Inline JSON when it looks like an object, otherwise a file path.
  try {
    if (!arg.empty() && arg.front() == '{') return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw Error("cannot open " + arg);
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid JSON in " + arg + ": " + e.what());
  }
}

json metric_json(double value) { return std::isfinite(value) ? json(value) : json("inf"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-domain image watermarking toolkit"};
  app.require_subcommand(1);
  bool error_json = false;
  app.add_flag("--error-json", error_json, "Print errors as JSON on stdout");

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "Embed a binary watermark into a host image");
  std::string host_path, wm_path, out_image, out_plan;
  int wm_threshold = 128;
  ConfigFlags embed_flags;
  embed_cmd->add_option("--host", host_path, "Host image (PGM)")->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--watermark", wm_path, "Watermark image (PGM, thresholded)")->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--threshold", wm_threshold, "Watermark binarization threshold");
  embed_cmd->add_option("--out-image", out_image, "Watermarked image output (PGM)")->required();
  embed_cmd->add_option("--out-plan", out_plan, "Embedding plan output (JSON)")->required();
  embed_flags.add_to(embed_cmd);

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Extract a watermark using the original image");
  std::string original_path, suspect_path, plan_path, out_wm, reference_path, out_metrics;
  bool regenerate = false;
  std::size_t wm_width = 32, wm_height = 32;
  ConfigFlags extract_flags;
  extract_cmd->add_option("--original", original_path, "Original host image")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--suspect", suspect_path, "Watermarked / attacked image")->required()->check(CLI::ExistingFile);
  auto* plan_opt = extract_cmd->add_option("--plan", plan_path, "Plan written by embed")->check(CLI::ExistingFile);
  auto* regen_opt =
      extract_cmd->add_flag("--regenerate", regenerate, "Rebuild the plan from the original instead of reading one");
  plan_opt->excludes(regen_opt);
  extract_cmd->add_option("--wm-width", wm_width, "Watermark width when regenerating");
  extract_cmd->add_option("--wm-height", wm_height, "Watermark height when regenerating");
  extract_cmd->add_option("--out-watermark", out_wm, "Extracted watermark output (PGM)")->required();
  extract_cmd->add_option("--reference", reference_path, "Reference watermark for correlation")
      ->check(CLI::ExistingFile);
  extract_cmd->add_option("--out-metrics", out_metrics, "Metric report output (JSON, '-' for stdout)");
  extract_flags.add_to(extract_cmd);

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Apply an attack to an image");
  std::string attack_in, attack_out, attack_spec;
  attack_cmd->add_option("--image", attack_in, "Input image")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--spec", attack_spec, "Attack spec: inline JSON object or path to a JSON file")->required();
  attack_cmd->add_option("--out", attack_out, "Output image")->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR/MSE between images or correlation between watermarks");
  std::string metric_a, metric_b;
  bool as_watermarks = false;
  metrics_cmd->add_option("a", metric_a, "First image")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("b", metric_b, "Second image")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_flag("--watermark", as_watermarks, "Treat inputs as binary watermarks and report correlation");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run an embed/attack/extract grid from a manifest");
  std::string manifest_path, bench_out;
  unsigned bench_workers = 0;
  bench_cmd->add_option("manifest", manifest_path, "Manifest JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench_out, "Override the manifest's output directory");
  bench_cmd->add_option("--workers", bench_workers, "Worker threads (default: WMARK_WORKERS or all cores)");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Render a synthetic test image");
  std::string gen_spec, gen_out;
  std::size_t gen_w = 512, gen_h = 512;
  gen_cmd->add_option("spec", gen_spec, "ramp | checker[:cell] | noise[:seed] | scene[:seed] | blocks[:seed]")
      ->required();
  gen_cmd->add_option("--width", gen_w, "Width");
  gen_cmd->add_option("--height", gen_h, "Height");
  gen_cmd->add_option("--out", gen_out, "Output PGM")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto fail = [&](int code, std::string_view kind, const std::string& message) {
    if (error_json) {
      std::cout << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
    } else {
      std::cerr << "wmark: " << message << '\n';
    }
    return code;
  };

  try {
    if (*embed_cmd) {
      const EmbedConfig cfg = embed_flags.build();
      const GrayImage host = read_pgm(host_path);
      const WatermarkBits wm = read_binary_watermark(wm_path, wm_threshold);
      const EmbedResult res = embed(host, wm, cfg);
      if (res.plan.fallback_positions > 0)
        std::cerr << "wmark: warning: " << res.plan.fallback_positions
                  << " positions chosen by magnitude because the sorting passes found too few\n";
      write_pgm(res.watermarked, out_image);
      write_plan(res.plan, out_plan);
      std::cerr << "embedded " << wm.width << "x" << wm.height << " watermark, PSNR "
                << psnr(host, res.watermarked) << " dB\n";
    } else if (*extract_cmd) {
      if (plan_path.empty() && !regenerate) throw UsageError("extract needs --plan or --regenerate");
      const GrayImage original = read_pgm(original_path);
      const GrayImage suspect = read_pgm(suspect_path);
      const EmbedPlan plan =
          regenerate ? build_plan(original, wm_width, wm_height, extract_flags.build()) : read_plan(plan_path);
      const WatermarkBits extracted = extract(original, suspect, plan);
      write_pgm(watermark_to_image(extracted), out_wm);
      if (!out_metrics.empty()) {
        json report = {{"original", original_path},
                       {"suspect", suspect_path},
                       {"mse", mse(original, suspect)},
                       {"psnr_db", metric_json(psnr(original, suspect))},
                       {"plan_source", regenerate ? "regenerated" : "file"}};
        if (!reference_path.empty()) {
          const Correlation c = correlation(read_binary_watermark(reference_path), extracted);
          report["correlation"] = c.value;
          report["correlation_degenerate"] = c.degenerate;
        }
        write_json_file(report, out_metrics);
      }
    } else if (*attack_cmd) {
      const AttackSpec spec = attack_from_json(load_json_arg(attack_spec));
      write_pgm(apply_attack(read_pgm(attack_in), spec), attack_out);
    } else if (*metrics_cmd) {
      const GrayImage a = read_pgm(metric_a);
      const GrayImage b = read_pgm(metric_b);
      json out;
      if (as_watermarks) {
        const Correlation c = correlation(binarize(a), binarize(b));
        out = {{"correlation", c.value}, {"correlation_degenerate", c.degenerate}};
      } else {
        const double m = mse(a, b);
        out = {{"mse", m}, {"psnr_db", metric_json(psnr_from_mse(m))}};
      }
      std::cout << out.dump(2) << '\n';
    } else if (*bench_cmd) {
      bench::BenchManifest manifest = bench::read_manifest(manifest_path);
      if (!bench_out.empty()) manifest.output_dir = bench_out;
      if (bench_workers > 0) manifest.workers = bench_workers;
      const bench::BenchReport report = bench::run(manifest);
      bench::write_report(report, manifest.output_dir);
      std::size_t failed = 0;
      for (const auto& c : report.cells) failed += c.error.empty() ? 0 : 1;
      std::cerr << "bench: " << report.cells.size() << " cells (" << failed << " failed) -> "
                << manifest.output_dir.string() << '\n';
    } else if (*gen_cmd) {
      if (gen_spec.rfind("blocks", 0) == 0) {
        write_pgm(watermark_to_image(bench::load_watermark("synth:" + gen_spec)), gen_out);
      } else {
        write_pgm(synth::from_spec(gen_spec, gen_w, gen_h), gen_out);
      }
    }
  } catch (const UsageError& e) {
    return fail(kExitUsage, "usage", e.what());
  } catch (const DimensionError& e) {
    return fail(kExitData, "dimension", e.what());
  } catch (const CapacityError& e) {
    return fail(kExitData, "capacity", e.what());
  } catch (const FormatError& e) {
    return fail(kExitData, "format", e.what());
  } catch (const Error& e) {
    return fail(kExitData, "data", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitData, "invalid_argument", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInternal, "internal", e.what());
  }
  return 0;
}
