#include "dspass/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <vector>

#include "dspass/error.hpp"

namespace dspass {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

std::vector<std::vector<png_byte>> read_rows(const std::string& path,
                                             PngReader& r, int& width,
                                             int& height, int& channels,
                                             bool expand_to_rgb) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open PNG file: " + path);
  if (!r.png || !r.info) throw InternalError("libpng allocation failed");
  if (setjmp(png_jmpbuf(r.png))) {
    throw FormatError("corrupt PNG stream in " + path, 0);
  }
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  png_uint_32 w = png_get_image_width(r.png, r.info);
  png_uint_32 h = png_get_image_height(r.png, r.info);
  int bit_depth = png_get_bit_depth(r.png, r.info);
  int color = png_get_color_type(r.png, r.info);

  if (expand_to_rgb) {
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(r.png);
    }
    if (bit_depth == 16) png_set_strip_16(r.png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(r.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(r.png);
    }
  } else {
    if (color != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
      throw InvalidInput("label PNG must be 8-bit single-channel: " + path);
    }
  }
  png_read_update_info(r.png, r.info);

  width = static_cast<int>(w);
  height = static_cast<int>(h);
  channels = png_get_channels(r.png, r.info);

  std::vector<std::vector<png_byte>> rows(height);
  std::vector<png_bytep> row_ptrs(height);
  std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
  for (int y = 0; y < height; ++y) {
    rows[y].resize(rowbytes);
    row_ptrs[y] = rows[y].data();
  }
  png_read_image(r.png, row_ptrs.data());
  png_read_end(r.png, nullptr);
  return rows;
}

void write_rows(const std::string& path, int width, int height, int color_type,
                const std::vector<std::vector<png_byte>>& rows) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot write PNG file: " + path);
  PngWriter w;
  if (!w.png || !w.info) throw InternalError("libpng allocation failed");
  if (setjmp(png_jmpbuf(w.png))) {
    throw IoError("PNG write failure: " + path);
  }
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, width, height, 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y) {
    row_ptrs[y] = const_cast<png_bytep>(rows[y].data());
  }
  png_write_image(w.png, row_ptrs.data());
  png_write_end(w.png, nullptr);
}

}  // namespace

Raster load_rgb_png(const std::string& path) {
  PngReader r;
  int w = 0, h = 0, ch = 0;
  auto rows = read_rows(path, r, w, h, ch, /*expand_to_rgb=*/true);
  if (ch != 3) {
    throw FormatError("PNG did not decode to RGB: " + path, 0);
  }
  Raster out(3, h, w);
  constexpr float kScale = 1.0f / 255.0f;
  for (int y = 0; y < h; ++y) {
    const png_byte* src = rows[y].data();
    for (int x = 0; x < w; ++x) {
      out.at(0, y, x) = src[3 * x + 0] * kScale;
      out.at(1, y, x) = src[3 * x + 1] * kScale;
      out.at(2, y, x) = src[3 * x + 2] * kScale;
    }
  }
  return out;
}

void save_rgb_png(const Raster& img, const std::string& path) {
  if (img.channels() != 3) {
    throw InvalidInput("save_rgb_png expects a 3-channel raster, got " +
                       img.shape_str());
  }
  std::vector<std::vector<png_byte>> rows(img.height());
  for (int y = 0; y < img.height(); ++y) {
    rows[y].resize(static_cast<std::size_t>(img.width()) * 3);
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        float v = std::clamp(img.at(c, y, x), 0.0f, 1.0f);
        rows[y][3 * x + c] = static_cast<png_byte>(v * 255.0f + 0.5f);
      }
    }
  }
  write_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, rows);
}

SegmentationMap load_label_png(const std::string& path) {
  PngReader r;
  int w = 0, h = 0, ch = 0;
  auto rows = read_rows(path, r, w, h, ch, /*expand_to_rgb=*/false);
  SegmentationMap out(h, w);
  for (int y = 0; y < h; ++y) {
    std::copy(rows[y].begin(), rows[y].begin() + w,
              out.storage().begin() + static_cast<std::size_t>(y) * w);
  }
  return out;
}

void save_label_png(const SegmentationMap& seg, const std::string& path) {
  std::vector<std::vector<png_byte>> rows(seg.height());
  for (int y = 0; y < seg.height(); ++y) {
    rows[y].assign(seg.storage().begin() + static_cast<std::size_t>(y) * seg.width(),
                   seg.storage().begin() +
                       static_cast<std::size_t>(y + 1) * seg.width());
  }
  write_rows(path, seg.width(), seg.height(), PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace dspass
