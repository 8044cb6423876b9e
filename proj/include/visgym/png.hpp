#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "visgym/render.hpp"

namespace visgym {

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

inline void put_chunk(std::vector<std::uint8_t>& out, const char type[4], const std::uint8_t* data,
                      std::size_t len) {
  put_u32(out, std::uint32_t(len));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  std::uint32_t crc = ::crc32(0, out.data() + start, uInt(out.size() - start));
  put_u32(out, crc);
}

inline std::uint32_t read_u32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

}  // namespace detail

/// Encode as 8-bit RGB PNG, non-interlaced, filter 0 on every row and a fixed
/// zlib level, so equal canvases always serialize to equal bytes.
inline std::vector<std::uint8_t> encode_png(const Canvas& canvas) {
  using namespace detail;
  if (canvas.empty()) throw std::invalid_argument("encode_png: empty canvas");
  const int w = canvas.width(), h = canvas.height();

  std::vector<std::uint8_t> raw;
  raw.reserve(std::size_t(h) * (1 + std::size_t(w) * 3));
  const auto& px = canvas.raw();
  for (int y = 0; y < h; ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), px.begin() + std::size_t(y) * w * 3, px.begin() + std::size_t(y + 1) * w * 3);
  }

  uLongf bound = ::compressBound(uLong(raw.size()));
  std::vector<std::uint8_t> compressed(bound);
  if (::compress2(compressed.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
    throw std::runtime_error("encode_png: deflate failed");
  compressed.resize(bound);

  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  std::uint8_t ihdr[13];
  ihdr[0] = std::uint8_t(w >> 24); ihdr[1] = std::uint8_t(w >> 16);
  ihdr[2] = std::uint8_t(w >> 8);  ihdr[3] = std::uint8_t(w);
  ihdr[4] = std::uint8_t(h >> 24); ihdr[5] = std::uint8_t(h >> 16);
  ihdr[6] = std::uint8_t(h >> 8);  ihdr[7] = std::uint8_t(h);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // truecolor
  ihdr[10] = 0;  // compression
  ihdr[11] = 0;  // filter method
  ihdr[12] = 0;  // no interlace
  put_chunk(out, "IHDR", ihdr, 13);
  put_chunk(out, "IDAT", compressed.data(), compressed.size());
  put_chunk(out, "IEND", nullptr, 0);
  return out;
}

/// Decode the common 8-bit cases (gray, gray+alpha, palette, RGB, RGBA; no
/// interlace) back to an RGB canvas. Alpha is dropped.
inline Canvas decode_png(const std::uint8_t* data, std::size_t size) {
  using namespace detail;
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (size < 8 || std::memcmp(data, sig, 8) != 0) throw std::runtime_error("decode_png: not a PNG");

  int w = 0, h = 0, depth = 0, color = 0;
  std::vector<std::uint8_t> idat;
  std::vector<std::uint8_t> palette;  // rgb triples
  std::size_t pos = 8;
  while (pos + 8 <= size) {
    std::uint32_t len = read_u32(data + pos);
    if (pos + 12 + len > size) throw std::runtime_error("decode_png: truncated chunk");
    std::string type(reinterpret_cast<const char*>(data + pos + 4), 4);
    const std::uint8_t* body = data + pos + 8;
    if (type == "IHDR") {
      w = int(read_u32(body));
      h = int(read_u32(body + 4));
      depth = body[8];
      color = body[9];
      if (body[12] != 0) throw std::runtime_error("decode_png: interlaced PNG unsupported");
      if (depth != 8) throw std::runtime_error("decode_png: only 8-bit depth supported");
    } else if (type == "PLTE") {
      palette.assign(body, body + len);
    } else if (type == "IDAT") {
      idat.insert(idat.end(), body, body + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (w <= 0 || h <= 0) throw std::runtime_error("decode_png: missing IHDR");

  int channels;
  switch (color) {
    case 0: channels = 1; break;
    case 2: channels = 3; break;
    case 3: channels = 1; break;
    case 4: channels = 2; break;
    case 6: channels = 4; break;
    default: throw std::runtime_error("decode_png: unsupported color type");
  }
  const std::size_t stride = std::size_t(w) * channels;
  std::vector<std::uint8_t> raw(std::size_t(h) * (stride + 1));
  uLongf raw_len = uLongf(raw.size());
  if (::uncompress(raw.data(), &raw_len, idat.data(), uLong(idat.size())) != Z_OK ||
      raw_len != raw.size())
    throw std::runtime_error("decode_png: inflate failed");

  // Undo per-row filters in place.
  std::vector<std::uint8_t> img(std::size_t(h) * stride);
  auto paeth = [](int a, int b, int c) {
    int p = a + b - c, pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    return pb <= pc ? b : c;
  };
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = raw.data() + std::size_t(y) * (stride + 1);
    std::uint8_t filter = src[0];
    const std::uint8_t* row = src + 1;
    std::uint8_t* out = img.data() + std::size_t(y) * stride;
    const std::uint8_t* up = y > 0 ? img.data() + std::size_t(y - 1) * stride : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      int a = i >= std::size_t(channels) ? out[i - channels] : 0;
      int b = up ? up[i] : 0;
      int c = (up && i >= std::size_t(channels)) ? up[i - channels] : 0;
      int v = row[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw std::runtime_error("decode_png: bad filter byte");
      }
      out[i] = std::uint8_t(v);
    }
  }

  Canvas canvas(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* p = img.data() + std::size_t(y) * stride + std::size_t(x) * channels;
      Color col;
      switch (color) {
        case 0: col = {p[0], p[0], p[0]}; break;
        case 2: col = {p[0], p[1], p[2]}; break;
        case 3: {
          std::size_t idx = std::size_t(p[0]) * 3;
          if (idx + 2 >= palette.size()) throw std::runtime_error("decode_png: palette index out of range");
          col = {palette[idx], palette[idx + 1], palette[idx + 2]};
          break;
        }
        case 4: col = {p[0], p[0], p[0]}; break;
        default: col = {p[0], p[1], p[2]}; break;
      }
      canvas.set(x, y, col);
    }
  }
  return canvas;
}

inline Canvas decode_png(const std::vector<std::uint8_t>& bytes) {
  return decode_png(bytes.data(), bytes.size());
}

}  // namespace visgym
