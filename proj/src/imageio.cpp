#include "wmark/imageio.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace wmark {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : s_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < s_.size()) {
      const unsigned char ch = static_cast<unsigned char>(s_[pos_]);
      if (ch == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1'000'000'000L) throw FormatError(std::string("PGM ") + what + " out of range");
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("PGM header: expected ") + what);
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw FormatError("not a PGM file (expected P5 or P2 magic)");
  const bool binary = bytes[1] == '5';
  HeaderReader hdr(bytes);
  hdr.advance(2);
  const long width = hdr.number("width");
  const long height = hdr.number("height");
  const long maxval = hdr.number("maxval");
  if (width <= 0 || height <= 0) throw FormatError("PGM dimensions must be positive");
  if (maxval != 255) throw FormatError("PGM maxval must be 255, got " + std::to_string(maxval));

  GrayImage img(static_cast<std::size_t>(width), static_cast<std::size_t>(height));
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (hdr.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[hdr.pos()])))
      throw FormatError("PGM header not terminated by whitespace");
    const std::size_t start = hdr.pos() + 1;
    if (bytes.size() - start < img.pixels.size()) throw FormatError("PGM payload truncated");
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(start), img.pixels.size(), img.pixels.begin());
  } else {
    for (auto& p : img.pixels) {
      long v = 0;
      try {
        v = hdr.number("sample");
      } catch (const FormatError&) {
        throw FormatError("PGM payload truncated");
      }
      if (v > 255) throw FormatError("PGM sample exceeds maxval");
      p = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

std::string encode_pgm(const GrayImage& img) {
  std::ostringstream out;
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::string s = out.str();
  s.append(img.pixels.begin(), img.pixels.end());
  return s;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_pgm(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_pgm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

WatermarkBits binarize(const GrayImage& img, int threshold) {
  WatermarkBits wm(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) wm.bits[i] = img.pixels[i] >= threshold ? 1 : 0;
  return wm;
}

GrayImage watermark_to_image(const WatermarkBits& wm) {
  GrayImage img(wm.width, wm.height);
  for (std::size_t i = 0; i < wm.bits.size(); ++i) img.pixels[i] = wm.bits[i] ? 255 : 0;
  return img;
}

WatermarkBits read_binary_watermark(const std::filesystem::path& path, int threshold) {
  return binarize(read_pgm(path), threshold);
}

}  // namespace wmark
