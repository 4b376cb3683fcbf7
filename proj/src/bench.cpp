#include "wmark/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "wmark/imageio.hpp"
#include "wmark/metrics.hpp"
#include "wmark/plan_io.hpp"
#include "wmark/synth.hpp"

namespace wmark::bench {

using nlohmann::json;

namespace {

constexpr std::size_t kSynthSide = 512;
constexpr std::size_t kSynthWatermarkSide = 32;

bool is_synth(const std::string& s) { return s.rfind("synth:", 0) == 0; }

std::string image_id(const std::string& source) {
  if (is_synth(source)) return source;
  return std::filesystem::path(source).stem().string();
}

std::string resolve(const std::string& source, const std::filesystem::path& base) {
  if (is_synth(source) || base.empty()) return source;
  const std::filesystem::path p(source);
  return p.is_absolute() ? source : (base / p).lexically_normal().string();
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WMARK_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (n <= 1) {
    body();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void BenchManifest::validate() const {
  if (corpus.empty()) throw std::invalid_argument("bench manifest: corpus is empty");
  if (seeds.empty()) throw std::invalid_argument("bench manifest: seed list is empty");
  config.validate();
  for (const auto& a : attacks) a.validate();
}

BenchManifest manifest_from_json(const json& j, const std::filesystem::path& base_dir) {
  BenchManifest m;
  try {
    for (const auto& s : j.at("corpus")) m.corpus.push_back(resolve(s.get<std::string>(), base_dir));
    if (j.contains("watermark")) m.watermark = resolve(j.at("watermark").get<std::string>(), base_dir);
    if (j.contains("embed_config")) m.config = embed_config_from_json(j.at("embed_config"));
    if (j.contains("attacks"))
      for (const auto& a : j.at("attacks")) m.attacks.push_back(attack_from_json(a));
    if (j.contains("seeds")) m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("output_dir")) m.output_dir = resolve(j.at("output_dir").get<std::string>(), base_dir);
    if (j.contains("workers")) m.workers = j.at("workers").get<unsigned>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad bench manifest: ") + e.what());
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return m;
}

json manifest_to_json(const BenchManifest& m) {
  json attacks = json::array();
  for (const auto& a : m.attacks) attacks.push_back(attack_to_json(a));
  return {{"corpus", m.corpus},        {"watermark", m.watermark}, {"embed_config", embed_config_to_json(m.config)},
          {"attacks", attacks},        {"seeds", m.seeds},         {"output_dir", m.output_dir.string()},
          {"workers", m.workers}};
}

BenchManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

GrayImage load_host(const std::string& source) {
  if (is_synth(source)) return synth::from_spec(source.substr(6), kSynthSide, kSynthSide);
  return read_pgm(source);
}

WatermarkBits load_watermark(const std::string& source) {
  if (is_synth(source)) {
    const std::string spec = source.substr(6);
    if (spec.rfind("blocks", 0) == 0) {
      std::uint64_t seed = 1;
      if (spec.size() > 7 && spec[6] == ':') seed = std::stoull(spec.substr(7));
      return synth::block_pattern(kSynthWatermarkSide, kSynthWatermarkSide, seed);
    }
    return binarize(synth::from_spec(spec, kSynthWatermarkSide, kSynthWatermarkSide));
  }
  return read_binary_watermark(source);
}

std::string config_hash(const EmbedConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : embed_config_to_json(cfg).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double BenchReport::mean_correlation(std::size_t attack, std::size_t image) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& c : cells) {
    if (c.attack_index != attack || c.image_index != image || !c.error.empty()) continue;
    sum += c.correlation;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double BenchReport::min_correlation(std::size_t attack, std::size_t image) const {
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& c : cells) {
    if (c.attack_index != attack || c.image_index != image || !c.error.empty()) continue;
    best = std::min(best, c.correlation);
    any = true;
  }
  return any ? best : std::numeric_limits<double>::quiet_NaN();
}

BenchReport run(const BenchManifest& manifest) {
  manifest.validate();
  const unsigned workers = resolve_workers(manifest.workers);

  BenchReport report;
  report.config = embed_config_to_json(manifest.config);
  report.config_hash = config_hash(manifest.config);
  report.attacks = manifest.attacks;
  for (const auto& src : manifest.corpus) report.images.push_back(image_id(src));

  const WatermarkBits wm = load_watermark(manifest.watermark);

  struct Prepared {
    GrayImage host;
    EmbedResult embedded;
    bool ok = false;
  };
  std::vector<Prepared> prepared(manifest.corpus.size());
  report.fidelity.resize(manifest.corpus.size());
  parallel_for(manifest.corpus.size(), workers, [&](std::size_t i) {
    FidelityRow& row = report.fidelity[i];
    row.image = report.images[i];
    try {
      prepared[i].host = load_host(manifest.corpus[i]);
      prepared[i].embedded = embed(prepared[i].host, wm, manifest.config);
      const auto& out = prepared[i].embedded;
      row.mse = mse(prepared[i].host, out.watermarked);
      row.psnr_db = psnr_from_mse(row.mse);
      row.correlation = correlation(wm, extract(prepared[i].host, out.watermarked, out.plan)).value;
      row.fallback_positions = out.plan.fallback_positions;
      prepared[i].ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  for (std::size_t a = 0; a < manifest.attacks.size(); ++a) {
    const AttackSpec& spec = manifest.attacks[a];
    for (std::size_t i = 0; i < manifest.corpus.size(); ++i) {
      Cell base;
      base.attack_index = a;
      base.image_index = i;
      base.image = report.images[i];
      base.attack = spec;
      if (!spec.stochastic()) {
        report.cells.push_back(std::move(base));
        continue;
      }
      for (auto seed : manifest.seeds) {
        Cell c = base;
        c.seed = seed;
        c.attack.seed = seed;
        report.cells.push_back(std::move(c));
      }
    }
  }

  parallel_for(report.cells.size(), workers, [&](std::size_t k) {
    Cell& cell = report.cells[k];
    const Prepared& p = prepared[cell.image_index];
    if (!p.ok) {
      cell.error = "embedding failed: " + report.fidelity[cell.image_index].error;
      return;
    }
    try {
      const GrayImage attacked = apply_attack(p.embedded.watermarked, cell.attack);
      const Correlation corr = correlation(wm, extract(p.host, attacked, p.embedded.plan));
      cell.correlation = corr.value;
      cell.degenerate = corr.degenerate;
      cell.psnr_db = psnr(p.embedded.watermarked, attacked);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return report;
}

json report_to_json(const BenchReport& report) {
  json fidelity = json::array();
  for (const auto& f : report.fidelity) {
    json row = {{"image", f.image},
                {"psnr_db", number_or_null(f.psnr_db)},
                {"mse", f.mse},
                {"correlation", f.correlation},
                {"fallback_positions", f.fallback_positions}};
    if (!f.error.empty()) row["error"] = f.error;
    fidelity.push_back(std::move(row));
  }
  json cells = json::array();
  for (const auto& c : report.cells) {
    json row = {{"image", c.image},
                {"attack", attack_to_json(c.attack)},
                {"label", c.attack.label()},
                {"seed", c.seed ? json(*c.seed) : json(nullptr)},
                {"correlation", c.correlation},
                {"degenerate", c.degenerate},
                {"psnr_db", number_or_null(c.psnr_db)},
                {"config_hash", report.config_hash}};
    if (!c.error.empty()) row["error"] = c.error;
    cells.push_back(std::move(row));
  }
  json tables = json::array();
  for (std::size_t a = 0; a < report.attacks.size(); ++a) {
    json mean = json::object(), min = json::object();
    for (std::size_t i = 0; i < report.images.size(); ++i) {
      mean[report.images[i]] = number_or_null(report.mean_correlation(a, i));
      min[report.images[i]] = number_or_null(report.min_correlation(a, i));
    }
    json spec = attack_to_json(report.attacks[a]);
    spec.erase("seed");
    tables.push_back({{"attack", spec}, {"label", report.attacks[a].label()}, {"mean", mean}, {"min", min}});
  }
  return {{"config_hash", report.config_hash},
          {"config", report.config},
          {"images", report.images},
          {"fidelity", fidelity},
          {"robustness", tables},
          {"cells", cells}};
}

std::string fidelity_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "image,psnr_db,mse,correlation,fallback_positions,error\n";
  for (const auto& f : report.fidelity)
    os << csv_field(f.image) << ',' << fmt(f.psnr_db) << ',' << fmt(f.mse) << ',' << fmt(f.correlation) << ','
       << f.fallback_positions << ',' << csv_field(f.error) << '\n';
  return os.str();
}

std::string robustness_csv(const BenchReport& report, bool use_min) {
  std::ostringstream os;
  os << "attack";
  for (const auto& img : report.images) os << ',' << csv_field(img);
  os << '\n';
  for (std::size_t a = 0; a < report.attacks.size(); ++a) {
    os << csv_field(report.attacks[a].label());
    for (std::size_t i = 0; i < report.images.size(); ++i)
      os << ',' << fmt(use_min ? report.min_correlation(a, i) : report.mean_correlation(a, i));
    os << '\n';
  }
  return os.str();
}

std::string cells_csv(const BenchReport& report) {
  std::ostringstream os;
  os << "image,attack,seed,correlation,degenerate,psnr_db,config_hash,error\n";
  for (const auto& c : report.cells)
    os << csv_field(c.image) << ',' << csv_field(c.attack.label()) << ',' << (c.seed ? std::to_string(*c.seed) : "")
       << ',' << fmt(c.correlation) << ',' << (c.degenerate ? 1 : 0) << ',' << fmt(c.psnr_db) << ','
       << report.config_hash << ',' << csv_field(c.error) << '\n';
  return os.str();
}

void write_report(const BenchReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "fidelity.csv", fidelity_csv(report));
  write_text(dir / "robustness_mean.csv", robustness_csv(report, false));
  write_text(dir / "robustness_min.csv", robustness_csv(report, true));
  write_text(dir / "cells.csv", cells_csv(report));
  write_text(dir / "report.json", report_to_json(report).dump(2) + "\n");
}

}  // namespace wmark::bench
