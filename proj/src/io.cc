// Copyright 2026 The envbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "envbench/io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string_view>

namespace envbench {

namespace {

bool IsSpace(std::uint8_t c) {
  return c == ' ' || c == '\n' || c == '\r' || c == '\t';
}

// Cursor over a byte buffer that reports positions in its errors.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  [[noreturn]] void Fail(const std::string& message) const {
    throw ParseError(message, pos_);
  }

  std::uint8_t Byte() {
    if (at_end()) Fail("unexpected end of file");
    return bytes_[pos_++];
  }

  std::span<const std::uint8_t> Take(std::size_t n) {
    if (remaining() < n) {
      Fail("truncated payload: need " + std::to_string(n) + " bytes, have " +
           std::to_string(remaining()));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void SkipSpace() {
    while (!at_end() && IsSpace(bytes_[pos_])) ++pos_;
  }

  // Whitespace-delimited token of at most `max_len` characters.
  std::string Token(std::size_t max_len) {
    SkipSpace();
    std::string tok;
    while (!at_end() && !IsSpace(bytes_[pos_])) {
      if (tok.size() >= max_len) Fail("header token too long");
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) Fail("missing header field");
    return tok;
  }

  // Line without its terminating '\n'.
  std::string Line(std::size_t max_len) {
    std::string line;
    for (;;) {
      if (at_end()) Fail("unterminated header line");
      const std::uint8_t c = bytes_[pos_++];
      if (c == '\n') return line;
      if (line.size() >= max_len) Fail("header line too long");
      line.push_back(static_cast<char>(c));
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int ParseDimension(Reader& r, const char* what) {
  const std::size_t at = r.pos();
  const std::string tok = r.Token(10);
  int value = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError(std::string("invalid ") + what + " '" + tok + "'", at);
    }
    value = value * 10 + (c - '0');
    if (value > kMaxImageDimension) {
      throw ParseError(std::string(what) + " exceeds the supported maximum",
                       at);
    }
  }
  if (value < 1) throw ParseError(std::string(what) + " must be >= 1", at);
  return value;
}

float LoadFloat(const std::uint8_t* p, bool little_endian) {
  std::uint8_t b[4] = {p[0], p[1], p[2], p[3]};
  const bool native_little = std::endian::native == std::endian::little;
  if (little_endian != native_little) std::reverse(b, b + 4);
  float f;
  std::memcpy(&f, b, 4);
  return f;
}

void StoreFloatLe(float f, std::vector<std::uint8_t>& out) {
  std::uint8_t b[4];
  std::memcpy(b, &f, 4);
  if (std::endian::native == std::endian::big) std::reverse(b, b + 4);
  out.insert(out.end(), b, b + 4);
}

void AppendString(std::vector<std::uint8_t>& out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

std::string Lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string Extension(const std::string& path) {
  return Lowercase(std::filesystem::path(path).extension().string());
}

// Run-length encodes one channel of a scanline (new-style Radiance RLE).
void WriteRleChannel(const std::uint8_t* data, int n,
                     std::vector<std::uint8_t>& out) {
  constexpr int kMinRun = 4;
  int cur = 0;
  while (cur < n) {
    int beg_run = cur;
    int run_count = 0;
    int old_run_count = 0;
    // Find the next run of at least kMinRun equal bytes.
    while (run_count < kMinRun && beg_run < n) {
      beg_run += run_count;
      old_run_count = run_count;
      run_count = 1;
      while (beg_run + run_count < n && run_count < 127 &&
             data[beg_run] == data[beg_run + run_count]) {
        ++run_count;
      }
    }
    // A short run right before the long one is cheaper as a run too.
    if (old_run_count > 1 && old_run_count == beg_run - cur) {
      out.push_back(static_cast<std::uint8_t>(128 + old_run_count));
      out.push_back(data[cur]);
      cur = beg_run;
    }
    while (cur < beg_run) {
      const int literal = std::min(128, beg_run - cur);
      out.push_back(static_cast<std::uint8_t>(literal));
      out.insert(out.end(), data + cur, data + cur + literal);
      cur += literal;
    }
    if (run_count >= kMinRun) {
      out.push_back(static_cast<std::uint8_t>(128 + run_count));
      out.push_back(data[beg_run]);
      cur += run_count;
    }
  }
}

Image PngToImage(std::span<const std::uint8_t> bytes, bool gray) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ParseError("PNG: " + msg, 0);
  }
  if (img.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&img);
    throw ParseError("PNG: unsupported bit depth (only 8-bit is accepted)", 24);
  }
  if (img.width < 1 || img.height < 1 ||
      img.width > static_cast<png_uint_32>(kMaxImageDimension) ||
      img.height > static_cast<png_uint_32>(kMaxImageDimension)) {
    png_image_free(&img);
    throw ParseError("PNG: unsupported dimensions", 16);
  }
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ParseError("PNG: " + msg, 0);
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  Image out(w, h, Domain::kNormalizedLDR);
  const int channels = gray ? 1 : 3;
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u)
      for (int c = 0; c < 3; ++c)
        out.at(u, v, c) =
            buffer[(static_cast<std::size_t>(v) * w + u) * channels +
                   (gray ? 0 : c)] /
            255.0;
  return out;
}

std::vector<std::uint8_t> PngFromBuffer(const std::vector<std::uint8_t>& buf,
                                        int w, int h, bool gray) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, buf.data(), 0,
                                 nullptr)) {
    throw Error(std::string("PNG encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, buf.data(), 0,
                                 nullptr)) {
    throw Error(std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset,
                       const std::string& context)
    : Error((context.empty() ? "" : context + ": ") + "byte " +
            std::to_string(offset) + ": " + message),
      offset_(offset),
      message_(message) {}

Image DecodePfm(std::span<const std::uint8_t> bytes, Domain domain) {
  Reader r(bytes);
  if (r.Byte() != 'P') r.Fail("not a PFM file (expected 'P')");
  const std::uint8_t kind = r.Byte();
  if (kind != 'F' && kind != 'f') r.Fail("not a PFM file (expected PF or Pf)");
  const int channels = kind == 'F' ? 3 : 1;
  if (r.at_end() || !IsSpace(bytes[r.pos()])) r.Fail("expected whitespace");
  const int width = ParseDimension(r, "width");
  const int height = ParseDimension(r, "height");
  const std::size_t scale_at = r.pos();
  const std::string scale_tok = r.Token(32);
  char* end = nullptr;
  const double scale = std::strtod(scale_tok.c_str(), &end);
  if (end != scale_tok.c_str() + scale_tok.size() || !std::isfinite(scale) ||
      scale == 0.0) {
    throw ParseError("invalid scale '" + scale_tok + "'", scale_at);
  }
  if (!IsSpace(r.Byte())) r.Fail("expected a single whitespace after scale");
  const bool little = scale < 0.0;

  const std::size_t row_bytes = static_cast<std::size_t>(width) * channels * 4;
  const std::size_t payload = row_bytes * height;
  if (r.remaining() < payload) {
    r.Fail("truncated payload: need " + std::to_string(payload) +
           " bytes, have " + std::to_string(r.remaining()));
  }
  if (r.remaining() > payload) {
    throw ParseError("trailing data after pixel payload", r.pos() + payload);
  }
  const std::size_t data_start = r.pos();
  const auto data = r.Take(payload);
  Image out(width, height, domain);
  for (int row = 0; row < height; ++row) {
    const int v = height - 1 - row;  // stored bottom-up
    for (int u = 0; u < width; ++u) {
      for (int c = 0; c < 3; ++c) {
        const std::size_t off =
            row * row_bytes +
            (static_cast<std::size_t>(u) * channels + (channels == 3 ? c : 0)) *
                4;
        const float f = LoadFloat(data.data() + off, little);
        if (!std::isfinite(f)) {
          throw ParseError("non-finite sample", data_start + off);
        }
        out.at(u, v, c) = f;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> EncodePfm(const Image& image) {
  std::vector<std::uint8_t> out;
  AppendString(out, "PF\n" + std::to_string(image.width()) + " " +
                        std::to_string(image.height()) + "\n-1.0\n");
  out.reserve(out.size() + image.pixel_count() * 12);
  for (int v = image.height() - 1; v >= 0; --v)
    for (int u = 0; u < image.width(); ++u)
      for (int c = 0; c < 3; ++c)
        StoreFloatLe(static_cast<float>(image.at(u, v, c)), out);
  return out;
}

void RgbeToFloat(const std::uint8_t rgbe[4], double rgb[3]) {
  if (rgbe[3] == 0) {
    rgb[0] = rgb[1] = rgb[2] = 0.0;
    return;
  }
  const double f = std::ldexp(1.0, static_cast<int>(rgbe[3]) - (128 + 8));
  for (int c = 0; c < 3; ++c) rgb[c] = rgbe[c] * f;
}

void FloatToRgbe(const double rgb[3], std::uint8_t rgbe[4]) {
  const double v = std::max({rgb[0], rgb[1], rgb[2]});
  if (!(v >= 1e-32)) {
    rgbe[0] = rgbe[1] = rgbe[2] = rgbe[3] = 0;
    return;
  }
  int e;
  const double scale = std::frexp(v, &e) * 256.0 / v;
  for (int c = 0; c < 3; ++c) {
    rgbe[c] = static_cast<std::uint8_t>(std::clamp(rgb[c] * scale, 0.0, 255.0));
  }
  rgbe[3] = static_cast<std::uint8_t>(std::clamp(e + 128, 0, 255));
}

Image DecodeRgbe(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  constexpr std::size_t kMaxLine = 4096;
  const std::string magic = r.Line(kMaxLine);
  if (magic.rfind("#?", 0) != 0) {
    throw ParseError("not a Radiance file (missing #? signature)", 0);
  }
  bool have_format = false;
  for (;;) {
    const std::size_t at = r.pos();
    const std::string line = r.Line(kMaxLine);
    if (line.empty()) break;
    if (line.rfind("FORMAT=", 0) == 0) {
      if (line != "FORMAT=32-bit_rle_rgbe") {
        throw ParseError("unsupported pixel format '" + line.substr(7) + "'",
                         at);
      }
      have_format = true;
    }
  }
  if (!have_format) r.Fail("missing FORMAT=32-bit_rle_rgbe header line");
  const std::size_t res_at = r.pos();
  const std::string res = r.Line(64);
  int height = 0;
  int width = 0;
  {
    std::span<const std::uint8_t> res_bytes(
        reinterpret_cast<const std::uint8_t*>(res.data()), res.size());
    Reader rr(res_bytes);
    try {
      if (rr.Token(2) != "-Y") {
        throw ParseError("unsupported orientation (expected -Y h +X w)",
                         res_at);
      }
      height = ParseDimension(rr, "height");
      if (rr.Token(2) != "+X") {
        throw ParseError("unsupported orientation (expected -Y h +X w)",
                         res_at);
      }
      width = ParseDimension(rr, "width");
      rr.SkipSpace();
      if (!rr.at_end()) {
        throw ParseError("unexpected text after resolution", res_at);
      }
    } catch (const ParseError& e) {
      throw ParseError("resolution line: " + e.message(), res_at);
    }
  }

  bool flat = width < 8 || width > 0x7fff;
  // Cheapest encoding of a scanline: flat pixels, or four planes of
  // maximal runs. Checked before allocating so a forged header cannot
  // request gigabytes.
  const std::size_t min_row =
      flat ? static_cast<std::size_t>(width) * 4
           : 4 + 8 * static_cast<std::size_t>((width + 126) / 127);
  if (r.remaining() / min_row < static_cast<std::size_t>(height)) {
    r.Fail("truncated pixel data");
  }
  Image out(width, height, Domain::kLinearHDR);
  std::vector<std::uint8_t> scan(static_cast<std::size_t>(width) * 4);
  for (int v = 0; v < height; ++v) {
    if (!flat) {
      if (r.remaining() < 4) r.Fail("truncated scanline header");
      const std::size_t at = r.pos();
      const auto head = bytes.subspan(at, 4);
      if (head[0] == 2 && head[1] == 2 && !(head[2] & 0x80)) {
        r.Take(4);
        if (((head[2] << 8) | head[3]) != width) {
          throw ParseError("scanline width mismatch", at);
        }
        // Channel-planar runs: the scanline buffer holds R..., G..., B..., E...
        for (int c = 0; c < 4; ++c) {
          std::uint8_t* plane = scan.data() + static_cast<std::size_t>(c) * width;
          int filled = 0;
          while (filled < width) {
            const std::size_t run_at = r.pos();
            int count = r.Byte();
            if (count > 128) {
              count -= 128;
              if (count > width - filled) {
                throw ParseError("run overflows scanline", run_at);
              }
              std::fill(plane + filled, plane + filled + count, r.Byte());
            } else {
              if (count == 0 || count > width - filled) {
                throw ParseError("bad literal count in scanline", run_at);
              }
              const auto lit = r.Take(static_cast<std::size_t>(count));
              std::copy(lit.begin(), lit.end(), plane + filled);
            }
            filled += count;
          }
        }
        for (int u = 0; u < width; ++u) {
          const std::uint8_t q[4] = {scan[u], scan[width + u],
                                     scan[2 * width + u], scan[3 * width + u]};
          double rgb[3];
          RgbeToFloat(q, rgb);
          for (int c = 0; c < 3; ++c) out.at(u, v, c) = rgb[c];
        }
        continue;
      }
      // Not run-length encoded; the rest of the file is flat.
      flat = true;
    }
    const auto row = r.Take(static_cast<std::size_t>(width) * 4);
    for (int u = 0; u < width; ++u) {
      double rgb[3];
      RgbeToFloat(row.data() + 4 * u, rgb);
      for (int c = 0; c < 3; ++c) out.at(u, v, c) = rgb[c];
    }
  }
  if (!r.at_end()) r.Fail("trailing data after pixel payload");
  return out;
}

std::vector<std::uint8_t> EncodeRgbe(const Image& image, bool rle) {
  const int w = image.width();
  const int h = image.height();
  std::vector<std::uint8_t> out;
  AppendString(out, "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " +
                        std::to_string(h) + " +X " + std::to_string(w) + "\n");
  const bool use_rle = rle && w >= 8 && w <= 0x7fff;
  std::vector<std::uint8_t> planes(static_cast<std::size_t>(w) * 4);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double rgb[3] = {image.at(u, v, 0), image.at(u, v, 1), image.at(u, v, 2)};
      std::uint8_t q[4];
      FloatToRgbe(rgb, q);
      if (use_rle) {
        for (int c = 0; c < 4; ++c) planes[static_cast<std::size_t>(c) * w + u] = q[c];
      } else {
        out.insert(out.end(), q, q + 4);
      }
    }
    if (use_rle) {
      out.push_back(2);
      out.push_back(2);
      out.push_back(static_cast<std::uint8_t>(w >> 8));
      out.push_back(static_cast<std::uint8_t>(w & 0xff));
      for (int c = 0; c < 4; ++c)
        WriteRleChannel(planes.data() + static_cast<std::size_t>(c) * w, w, out);
    }
  }
  return out;
}

Image DecodePng(std::span<const std::uint8_t> bytes) {
  return PngToImage(bytes, false);
}

std::vector<std::uint8_t> EncodePng(const Image& image) {
  std::vector<std::uint8_t> buf(image.pixel_count() * 3);
  std::size_t i = 0;
  for (int v = 0; v < image.height(); ++v)
    for (int u = 0; u < image.width(); ++u)
      for (int c = 0; c < 3; ++c)
        buf[i++] = static_cast<std::uint8_t>(
            std::lround(std::clamp(image.at(u, v, c), 0.0, 1.0) * 255.0));
  return PngFromBuffer(buf, image.width(), image.height(), false);
}

BinaryMask DecodeMaskPng(std::span<const std::uint8_t> bytes) {
  const Image gray = PngToImage(bytes, true);
  BinaryMask mask(gray.width(), gray.height());
  for (int v = 0; v < gray.height(); ++v)
    for (int u = 0; u < gray.width(); ++u)
      mask.set(u, v, gray.at(u, v, 0) >= 128.0 / 255.0);
  return mask;
}

std::vector<std::uint8_t> EncodeMaskPng(const BinaryMask& mask) {
  std::vector<std::uint8_t> buf(mask.pixel_count());
  for (int v = 0; v < mask.height(); ++v)
    for (int u = 0; u < mask.width(); ++u)
      buf[static_cast<std::size_t>(v) * mask.width() + u] =
          mask.at(u, v) ? 255 : 0;
  return PngFromBuffer(buf, mask.width(), mask.height(), true);
}

std::vector<std::uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

Image ReadImage(const std::string& path, Domain domain) {
  const std::string ext = Extension(path);
  const auto bytes = ReadFileBytes(path);
  try {
    if (ext == ".pfm") return DecodePfm(bytes, domain);
    if (ext == ".hdr") return DecodeRgbe(bytes);
    if (ext == ".png") return DecodePng(bytes);
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.offset(), path);
  }
  throw Error("unsupported image extension '" + ext + "' for " + path);
}

void WriteImage(const std::string& path, const Image& image) {
  const std::string ext = Extension(path);
  if (ext == ".pfm") return WriteFileBytes(path, EncodePfm(image));
  if (ext == ".hdr") return WriteFileBytes(path, EncodeRgbe(image));
  if (ext == ".png") return WriteFileBytes(path, EncodePng(image));
  throw Error("unsupported image extension '" + ext + "' for " + path);
}

BinaryMask ReadMask(const std::string& path) {
  if (Extension(path) != ".png") throw Error("masks must be PNG files");
  try {
    return DecodeMaskPng(ReadFileBytes(path));
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.offset(), path);
  }
}

void WriteMask(const std::string& path, const BinaryMask& mask) {
  WriteFileBytes(path, EncodeMaskPng(mask));
}

}  // namespace envbench
