#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <jpeglib.h>

#include "visgym/png.hpp"
#include "visgym/render.hpp"

namespace visgym {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

namespace detail {

struct JpegErrorMgr {
  jpeg_error_mgr base;
  std::string message;
};

inline Canvas decode_jpeg(const std::uint8_t* data, std::size_t size) {
  jpeg_decompress_struct cinfo{};
  jpeg_error_mgr err{};
  cinfo.err = jpeg_std_error(&err);
  err.error_exit = [](j_common_ptr info) {
    char buf[JMSG_LENGTH_MAX];
    (*info->err->format_message)(info, buf);
    throw std::runtime_error(std::string("decode_jpeg: ") + buf);
  };
  jpeg_create_decompress(&cinfo);
  try {
    jpeg_mem_src(&cinfo, const_cast<unsigned char*>(data), static_cast<unsigned long>(size));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    Canvas canvas(int(cinfo.output_width), int(cinfo.output_height));
    std::vector<std::uint8_t> row(std::size_t(cinfo.output_width) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
      int y = int(cinfo.output_scanline);
      JSAMPROW rows[1] = {row.data()};
      jpeg_read_scanlines(&cinfo, rows, 1);
      for (unsigned x = 0; x < cinfo.output_width; ++x)
        canvas.set(int(x), y, {row[x * 3], row[x * 3 + 1], row[x * 3 + 2]});
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return canvas;
  } catch (...) {
    jpeg_destroy_decompress(&cinfo);
    throw;
  }
}

}  // namespace detail

/// Decode a PNG or JPEG file by sniffing the magic bytes.
inline Canvas load_image(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) return detail::decode_jpeg(bytes.data(), bytes.size());
  return decode_png(bytes);
}

inline void save_png(const std::filesystem::path& path, const Canvas& canvas) {
  write_file_bytes(path, encode_png(canvas));
}

/// Center-crop to square then nearest-neighbor scale to side x side.
inline Canvas fit_square(const Canvas& src, int side) {
  int s = std::min(src.width(), src.height());
  int ox = (src.width() - s) / 2, oy = (src.height() - s) / 2;
  Canvas cropped(s, s);
  for (int y = 0; y < s; ++y)
    for (int x = 0; x < s; ++x) cropped.set(x, y, src.get(ox + x, oy + y));
  return s == side ? cropped : scaled_nn(cropped, side, side);
}

}  // namespace visgym
