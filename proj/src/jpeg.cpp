#include "wmark/jpeg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wmark::jpeg {

namespace {

constexpr std::array<std::uint8_t, 64> kZigZag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,  12, 19, 26, 33, 40, 48,
    41, 34, 27, 20, 13, 6,  7,  14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23,
    30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

constexpr std::array<std::uint8_t, 64> kLuminanceQuant = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr std::array<std::uint8_t, 16> kDcCounts = {0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
constexpr std::array<std::uint8_t, 12> kDcValues = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
constexpr std::array<std::uint8_t, 16> kAcCounts = {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125};
constexpr std::array<std::uint8_t, 162> kAcValues = {
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07, 0x22, 0x71,
    0x14, 0x32, 0x81, 0x91, 0xA1, 0x08, 0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0, 0x24, 0x33, 0x62, 0x72,
    0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28, 0x29, 0x2A, 0x34, 0x35, 0x36, 0x37,
    0x38, 0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
    0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x83,
    0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3,
    0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3,
    0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA};

// basis[u][x] = C(u)/2 * cos((2x + 1) u pi / 16), C(0) = 1/sqrt2, else 1.
const std::array<std::array<double, 8>, 8>& dct_basis() {
  static const auto table = [] {
    std::array<std::array<double, 8>, 8> t{};
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      for (int x = 0; x < 8; ++x) t[u][x] = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
    return t;
  }();
  return table;
}

// Natural-order 8x8 block, index = row * 8 + col.
using Block = std::array<double, 64>;

Block forward_dct(const Block& px) {
  const auto& b = dct_basis();
  Block tmp{}, out{};
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += b[u][x] * px[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += b[v][y] * tmp[y * 8 + u];
      out[v * 8 + u] = s;
    }
  return out;
}

Block inverse_dct(const Block& coef) {
  const auto& b = dct_basis();
  Block tmp{}, out{};
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += b[u][x] * coef[v * 8 + u];
      tmp[v * 8 + x] = s;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += b[v][y] * tmp[v * 8 + x];
      out[y * 8 + x] = s;
    }
  return out;
}

struct HuffCode {
  std::uint16_t code = 0;
  std::uint8_t length = 0;
};

std::array<HuffCode, 256> build_encoder_table(std::span<const std::uint8_t> counts,
                                              std::span<const std::uint8_t> values) {
  std::array<HuffCode, 256> table{};
  std::uint16_t code = 0;
  std::size_t k = 0;
  for (int len = 1; len <= 16; ++len) {
    for (int i = 0; i < counts[len - 1]; ++i) table[values[k++]] = {code++, static_cast<std::uint8_t>(len)};
    code <<= 1;
  }
  return table;
}

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t bits, int count) {
    for (int i = count - 1; i >= 0; --i) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((bits >> i) & 1u));
      if (++filled_ == 8) emit();
    }
  }
  void put(const HuffCode& c) { put(c.code, c.length); }

  void flush() {
    while (filled_ != 0) put(1, 1);
  }

 private:
  void emit() {
    out_.push_back(acc_);
    if (acc_ == 0xFF) out_.push_back(0x00);
    acc_ = 0;
    filled_ = 0;
  }

  std::vector<std::uint8_t>& out_;
  std::uint8_t acc_ = 0;
  int filled_ = 0;
};

int bit_size(int v) {
  int a = v < 0 ? -v : v;
  int n = 0;
  while (a) {
    ++n;
    a >>= 1;
  }
  return n;
}

std::uint32_t value_bits(int v, int size) {
  return static_cast<std::uint32_t>(v < 0 ? v + (1 << size) - 1 : v);
}

void put_u16(std::vector<std::uint8_t>& out, unsigned v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_marker(std::vector<std::uint8_t>& out, std::uint8_t m) {
  out.push_back(0xFF);
  out.push_back(m);
}

// ---- decoding ---------------------------------------------------------

struct HuffDecoder {
  std::array<int, 17> maxcode{};
  std::array<int, 17> valptr{};
  std::array<int, 17> mincode{};
  std::vector<std::uint8_t> values;
  bool defined = false;
};

HuffDecoder build_decoder(std::span<const std::uint8_t> counts, std::span<const std::uint8_t> values) {
  HuffDecoder d;
  d.values.assign(values.begin(), values.end());
  int code = 0;
  int k = 0;
  for (int len = 1; len <= 16; ++len) {
    const int n = counts[len - 1];
    if (n == 0) {
      d.maxcode[len] = -1;
    } else {
      d.valptr[len] = k;
      d.mincode[len] = code;
      code += n;
      k += n;
      d.maxcode[len] = code - 1;
    }
    code <<= 1;
  }
  d.defined = true;
  return d;
}

class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> data, std::size_t pos) : data_(data), pos_(pos) {}

  int bit() {
    if (filled_ == 0) fill();
    --filled_;
    return (acc_ >> filled_) & 1;
  }

  int bits(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | bit();
    return v;
  }

  int decode(const HuffDecoder& h) {
    if (!h.defined) throw FormatError("JPEG: scan references an undefined Huffman table");
    int code = bit();
    for (int len = 1; len <= 16; ++len) {
      if (h.maxcode[len] >= 0 && code <= h.maxcode[len]) return h.values[h.valptr[len] + code - h.mincode[len]];
      code = (code << 1) | bit();
    }
    throw FormatError("JPEG: invalid Huffman code");
  }

  /// Drops buffered bits and consumes the expected RSTn marker.
  void restart(int expected) {
    filled_ = 0;
    if (pending_marker_ < 0) {
      while (pos_ + 1 < data_.size() && !(data_[pos_] == 0xFF && data_[pos_ + 1] != 0x00)) ++pos_;
      if (pos_ + 1 >= data_.size()) throw FormatError("JPEG: missing restart marker");
      pending_marker_ = data_[pos_ + 1];
      pos_ += 2;
    }
    if (pending_marker_ != 0xD0 + expected) throw FormatError("JPEG: unexpected restart marker");
    pending_marker_ = -1;
  }

  /// Position after the entropy-coded segment, at the next marker.
  std::size_t marker_position() const {
    if (pending_marker_ >= 0) return pos_ - 2;
    std::size_t p = pos_;
    while (p + 1 < data_.size() && !(data_[p] == 0xFF && data_[p + 1] != 0x00)) ++p;
    return p;
  }

 private:
  void fill() {
    if (pending_marker_ >= 0 || pos_ >= data_.size()) {
      // Past the segment end: feed 1 bits, as decoders conventionally do.
      acc_ = 0xFF;
      filled_ = 8;
      return;
    }
    std::uint8_t b = data_[pos_++];
    if (b == 0xFF) {
      if (pos_ >= data_.size()) throw FormatError("JPEG: truncated entropy segment");
      const std::uint8_t next = data_[pos_++];
      if (next != 0x00) {
        pending_marker_ = next;
        acc_ = 0xFF;
        filled_ = 8;
        return;
      }
    }
    acc_ = b;
    filled_ = 8;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_;
  std::uint32_t acc_ = 0;
  int filled_ = 0;
  int pending_marker_ = -1;
};

int extend(int v, int size) { return v < (1 << (size - 1)) ? v - (1 << size) + 1 : v; }

}  // namespace

std::array<std::uint16_t, 64> quality_table(int quality) {
  if (quality < 1 || quality > 100) throw std::invalid_argument("JPEG quality must be in [1, 100]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<std::uint16_t, 64> t{};
  for (std::size_t i = 0; i < 64; ++i) {
    const int q = (kLuminanceQuant[i] * scale + 50) / 100;
    t[i] = static_cast<std::uint16_t>(std::clamp(q, 1, 255));
  }
  return t;
}

std::vector<std::uint8_t> encode(const GrayImage& img, int quality) {
  if (img.width == 0 || img.height == 0 || img.width > 65535 || img.height > 65535)
    throw DimensionError("JPEG: image dimensions must be in [1, 65535]");
  const auto qt = quality_table(quality);
  const auto dc_table = build_encoder_table(kDcCounts, kDcValues);
  const auto ac_table = build_encoder_table(kAcCounts, kAcValues);

  std::vector<std::uint8_t> out;
  out.reserve(img.size() / 2 + 1024);
  put_marker(out, 0xD8);

  put_marker(out, 0xE0);  // JFIF APP0
  put_u16(out, 16);
  for (char c : {'J', 'F', 'I', 'F', '\0'}) out.push_back(static_cast<std::uint8_t>(c));
  out.insert(out.end(), {1, 1, 0, 0, 1, 0, 1, 0, 0});

  put_marker(out, 0xDB);
  put_u16(out, 2 + 65);
  out.push_back(0);
  for (int i = 0; i < 64; ++i) out.push_back(static_cast<std::uint8_t>(qt[kZigZag[i]]));

  put_marker(out, 0xC0);
  put_u16(out, 11);
  out.push_back(8);
  put_u16(out, static_cast<unsigned>(img.height));
  put_u16(out, static_cast<unsigned>(img.width));
  out.insert(out.end(), {1, 1, 0x11, 0});

  put_marker(out, 0xC4);
  put_u16(out, 2 + 17 + kDcValues.size() + 17 + kAcValues.size());
  out.push_back(0x00);
  out.insert(out.end(), kDcCounts.begin(), kDcCounts.end());
  out.insert(out.end(), kDcValues.begin(), kDcValues.end());
  out.push_back(0x10);
  out.insert(out.end(), kAcCounts.begin(), kAcCounts.end());
  out.insert(out.end(), kAcValues.begin(), kAcValues.end());

  put_marker(out, 0xDA);
  put_u16(out, 8);
  out.insert(out.end(), {1, 1, 0x00, 0, 63, 0});

  BitWriter bw(out);
  int prev_dc = 0;
  for (std::size_t by = 0; by < img.height; by += 8) {
    for (std::size_t bx = 0; bx < img.width; bx += 8) {
      Block px{};
      for (std::size_t y = 0; y < 8; ++y)
        for (std::size_t x = 0; x < 8; ++x) {
          const std::size_t r = std::min(by + y, img.height - 1);
          const std::size_t c = std::min(bx + x, img.width - 1);
          px[y * 8 + x] = static_cast<double>(img.at(r, c)) - 128.0;
        }
      const Block coef = forward_dct(px);
      std::array<int, 64> zz{};
      for (int i = 0; i < 64; ++i) zz[i] = static_cast<int>(std::lround(coef[kZigZag[i]] / qt[kZigZag[i]]));

      const int diff = zz[0] - prev_dc;
      prev_dc = zz[0];
      const int dsize = bit_size(diff);
      bw.put(dc_table[dsize]);
      if (dsize) bw.put(value_bits(diff, dsize), dsize);

      int run = 0;
      for (int i = 1; i < 64; ++i) {
        if (zz[i] == 0) {
          ++run;
          continue;
        }
        while (run > 15) {
          bw.put(ac_table[0xF0]);
          run -= 16;
        }
        const int size = bit_size(zz[i]);
        bw.put(ac_table[(run << 4) | size]);
        bw.put(value_bits(zz[i], size), size);
        run = 0;
      }
      if (run > 0) bw.put(ac_table[0x00]);
    }
  }
  bw.flush();
  put_marker(out, 0xD9);
  return out;
}

GrayImage decode(std::span<const std::uint8_t> s) {
  auto u16 = [&](std::size_t p) -> unsigned {
    if (p + 1 >= s.size()) throw FormatError("JPEG: truncated stream");
    return (unsigned{s[p]} << 8) | s[p + 1];
  };
  if (s.size() < 4 || s[0] != 0xFF || s[1] != 0xD8) throw FormatError("JPEG: missing SOI marker");

  std::array<std::array<std::uint16_t, 64>, 4> qtables{};
  std::array<bool, 4> qdefined{};
  std::array<HuffDecoder, 4> dc_tables, ac_tables;
  std::size_t width = 0, height = 0;
  int component_id = -1;
  int component_qt = 0;
  unsigned restart_interval = 0;
  GrayImage img;
  bool have_frame = false, decoded = false;

  std::size_t pos = 2;
  while (pos + 1 < s.size()) {
    if (s[pos] != 0xFF) throw FormatError("JPEG: expected marker");
    const std::uint8_t marker = s[pos + 1];
    pos += 2;
    if (marker == 0xFF) {
      --pos;  // fill byte
      continue;
    }
    if (marker == 0xD9) break;
    const unsigned len = u16(pos);
    if (len < 2 || pos + len > s.size()) throw FormatError("JPEG: bad segment length");
    const std::size_t seg = pos + 2;
    const std::size_t seg_end = pos + len;

    switch (marker) {
      case 0xDB: {
        std::size_t p = seg;
        while (p < seg_end) {
          const int precision = s[p] >> 4;
          const int id = s[p] & 0x0F;
          ++p;
          if (id > 3) throw FormatError("JPEG: bad quantization table id");
          for (int i = 0; i < 64; ++i) {
            std::uint16_t v;
            if (precision) {
              v = static_cast<std::uint16_t>(u16(p));
              p += 2;
            } else {
              if (p >= seg_end) throw FormatError("JPEG: truncated DQT");
              v = s[p++];
            }
            qtables[id][kZigZag[i]] = v;
          }
          qdefined[id] = true;
        }
        break;
      }
      case 0xC4: {
        std::size_t p = seg;
        while (p < seg_end) {
          const int cls = s[p] >> 4;
          const int id = s[p] & 0x0F;
          if (cls > 1 || id > 3 || p + 17 > seg_end) throw FormatError("JPEG: bad Huffman table header");
          std::span<const std::uint8_t> counts = s.subspan(p + 1, 16);
          std::size_t total = 0;
          for (auto c : counts) total += c;
          if (p + 17 + total > seg_end || total > 256) throw FormatError("JPEG: truncated DHT");
          auto dec = build_decoder(counts, s.subspan(p + 17, total));
          (cls == 0 ? dc_tables : ac_tables)[id] = std::move(dec);
          p += 17 + total;
        }
        break;
      }
      case 0xC0: {
        if (len < 11) throw FormatError("JPEG: short SOF0");
        if (s[seg] != 8) throw FormatError("JPEG: only 8-bit precision is supported");
        height = u16(seg + 1);
        width = u16(seg + 3);
        if (s[seg + 5] != 1) throw FormatError("JPEG: only single-component streams are supported");
        component_id = s[seg + 6];
        if (s[seg + 7] != 0x11) throw FormatError("JPEG: unsupported sampling factors");
        component_qt = s[seg + 8] & 0x03;
        if (width == 0 || height == 0) throw FormatError("JPEG: zero dimensions");
        have_frame = true;
        break;
      }
      case 0xC1: case 0xC2: case 0xC3: case 0xC5: case 0xC6: case 0xC7:
      case 0xC9: case 0xCA: case 0xCB: case 0xCD: case 0xCE: case 0xCF:
        throw FormatError("JPEG: only baseline sequential streams are supported");
      case 0xDD:
        restart_interval = u16(seg);
        break;
      case 0xDA: {
        if (!have_frame) throw FormatError("JPEG: scan before frame header");
        if (s[seg] != 1 || s[seg + 1] != component_id) throw FormatError("JPEG: unexpected scan components");
        const int dc_id = s[seg + 2] >> 4;
        const int ac_id = s[seg + 2] & 0x0F;
        if (dc_id > 3 || ac_id > 3) throw FormatError("JPEG: bad table selector");
        if (!qdefined[component_qt]) throw FormatError("JPEG: missing quantization table");
        const auto& qt = qtables[component_qt];

        img = GrayImage(width, height);
        BitReader br(s, seg_end);
        int prev_dc = 0;
        unsigned mcu_count = 0;
        int next_rst = 0;
        for (std::size_t by = 0; by < height; by += 8) {
          for (std::size_t bx = 0; bx < width; bx += 8) {
            if (restart_interval && mcu_count && mcu_count % restart_interval == 0) {
              br.restart(next_rst);
              next_rst = (next_rst + 1) & 7;
              prev_dc = 0;
            }
            ++mcu_count;
            Block coef{};
            const int dsize = br.decode(dc_tables[dc_id]);
            if (dsize > 11) throw FormatError("JPEG: bad DC size");
            const int diff = dsize ? extend(br.bits(dsize), dsize) : 0;
            prev_dc += diff;
            coef[0] = static_cast<double>(prev_dc) * qt[0];
            for (int k = 1; k < 64;) {
              const int rs = br.decode(ac_tables[ac_id]);
              const int run = rs >> 4;
              const int size = rs & 0x0F;
              if (size == 0) {
                if (run == 15) {
                  k += 16;
                  continue;
                }
                break;  // EOB
              }
              k += run;
              if (k > 63) throw FormatError("JPEG: AC run past block end");
              coef[kZigZag[k]] = static_cast<double>(extend(br.bits(size), size)) * qt[kZigZag[k]];
              ++k;
            }
            const Block px = inverse_dct(coef);
            for (std::size_t y = 0; y < 8 && by + y < height; ++y)
              for (std::size_t x = 0; x < 8 && bx + x < width; ++x)
                img.at(by + y, bx + x) = quantize_sample(px[y * 8 + x] + 128.0);
          }
        }
        decoded = true;
        pos = br.marker_position();
        continue;
      }
      default:
        break;  // APPn, COM and other segments are skipped
    }
    pos = seg_end;
  }
  if (!decoded) throw FormatError("JPEG: no image data");
  return img;
}

}  // namespace wmark::jpeg
