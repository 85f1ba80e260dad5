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

#ifndef ENVBENCH_IO_H_
#define ENVBENCH_IO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "envbench/image.h"

namespace envbench {

// Malformed or unsupported file content. `offset` is the byte position at
// which the problem was detected.
class ParseError : public Error {
 public:
  // what() reads "[context: ]byte <offset>: <message>".
  ParseError(const std::string& message, std::size_t offset,
             const std::string& context = "");
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

// Largest accepted width or height for any decoder.
constexpr int kMaxImageDimension = 1 << 15;

// PFM: "PF\n<w> <h>\n<scale>\n" followed by 32-bit floats, rows bottom-up; a
// negative scale means little-endian. Grayscale "Pf" files are expanded to
// RGB. The decoder checks finiteness but not the value range, so `domain` is
// only a tag.
Image DecodePfm(std::span<const std::uint8_t> bytes,
                Domain domain = Domain::kLinearHDR);
// Always writes little-endian RGB with scale -1.
std::vector<std::uint8_t> EncodePfm(const Image& image);

// Radiance RGBE ("#?RADIANCE", FORMAT=32-bit_rle_rgbe, "-Y h +X w"), flat or
// new-style run-length encoded scanlines.
Image DecodeRgbe(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeRgbe(const Image& image, bool rle = true);

// Converts one RGBE quadruple (mantissas + shared exponent) to RGB.
void RgbeToFloat(const std::uint8_t rgbe[4], double rgb[3]);
void FloatToRgbe(const double rgb[3], std::uint8_t rgbe[4]);

// 8-bit PNG; values are mapped to [0, 1] without linearization. 16-bit
// files are rejected.
Image DecodePng(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodePng(const Image& image);
// Masks are 8-bit gray PNGs holding 0 / 255; values >= 128 count as set.
BinaryMask DecodeMaskPng(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeMaskPng(const BinaryMask& mask);

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path,
                    std::span<const std::uint8_t> bytes);

// Dispatch on the extension (.pfm, .hdr, .png; case-insensitive).
Image ReadImage(const std::string& path, Domain domain = Domain::kLinearHDR);
void WriteImage(const std::string& path, const Image& image);
BinaryMask ReadMask(const std::string& path);
void WriteMask(const std::string& path, const BinaryMask& mask);

}  // namespace envbench

#endif  // ENVBENCH_IO_H_
