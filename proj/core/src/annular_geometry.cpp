#include "dspass/annular_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dspass/error.hpp"

namespace dspass {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SamplePoint {
  double x, y;
  bool inside;
};

float bilinear_sample(const Raster& img, int c, double sx, double sy) {
  int x0 = static_cast<int>(std::floor(sx));
  int y0 = static_cast<int>(std::floor(sy));
  int x1 = std::min(x0 + 1, img.width() - 1);
  int y1 = std::min(y0 + 1, img.height() - 1);
  float fx = static_cast<float>(sx - x0);
  float fy = static_cast<float>(sy - y0);
  float top = img.at(c, y0, x0) + (img.at(c, y0, x1) - img.at(c, y0, x0)) * fx;
  float bot = img.at(c, y1, x0) + (img.at(c, y1, x1) - img.at(c, y1, x0)) * fx;
  return top + (bot - top) * fy;
}

}  // namespace

int nearest_index(double coord) {
  return static_cast<int>(std::ceil(coord - 0.5));
}

Raster unfold(const Raster& annular, const AnnularCameraModel& model,
              int out_width, int out_height, float fill) {
  model.validate();
  if (out_width < 2 || out_height < 1) {
    throw InvalidInput("unfold output must be at least 2x1");
  }
  if (annular.width() != model.source_width ||
      annular.height() != model.source_height) {
    throw InvalidInput("annular image " + annular.shape_str() +
                       " does not match camera model source " +
                       std::to_string(model.source_width) + "x" +
                       std::to_string(model.source_height));
  }

  // Azimuth is computed from a wrapped fractional column so that an offset
  // of exactly k columns reproduces the unshifted columns bit-for-bit.
  const double alpha = model.azimuth_offset * out_width / kTwoPi;
  std::vector<double> cos_t(out_width), sin_t(out_width);
  for (int j = 0; j < out_width; ++j) {
    double jj = std::fmod(j + alpha, static_cast<double>(out_width));
    if (jj < 0.0) jj += out_width;
    double theta = kTwoPi * jj / out_width;
    cos_t[j] = std::cos(theta);
    sin_t[j] = std::sin(theta);
  }

  std::vector<SamplePoint> pts(static_cast<std::size_t>(out_height) *
                               out_width);
  for (int i = 0; i < out_height; ++i) {
    double v = out_height > 1 ? static_cast<double>(i) / (out_height - 1) : 0.0;
    double r = model.radius_at(v);
    for (int j = 0; j < out_width; ++j) {
      double sx = model.center_x + r * cos_t[j];
      double sy = model.center_y + r * sin_t[j];
      bool inside = sx >= 0.0 && sx <= annular.width() - 1 && sy >= 0.0 &&
                    sy <= annular.height() - 1;
      pts[static_cast<std::size_t>(i) * out_width + j] = {sx, sy, inside};
    }
  }

  Raster out(annular.channels(), out_height, out_width, fill);
  for (int c = 0; c < annular.channels(); ++c) {
    for (int i = 0; i < out_height; ++i) {
      float* dst = out.row(c, i);
      const SamplePoint* prow = pts.data() + static_cast<std::size_t>(i) * out_width;
      for (int j = 0; j < out_width; ++j) {
        if (prow[j].inside) {
          dst[j] = bilinear_sample(annular, c, prow[j].x, prow[j].y);
        }
      }
    }
  }
  return out;
}

namespace {

/// Shared inverse mapping: panorama coordinates for one annular pixel, or
/// inside=false when the pixel lies off the ring.
struct InverseMap {
  const AnnularCameraModel& model;
  int pan_w, pan_h;

  bool project(int x, int y, double& col, double& row) const {
    double dx = x - model.center_x;
    double dy = y - model.center_y;
    double r = std::hypot(dx, dy);
    if (r < model.r_inner || r > model.r_outer) return false;
    double theta = std::atan2(dy, dx) - model.azimuth_offset;
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    col = theta / kTwoPi * pan_w;
    double v = model.v_at_radius(r);
    row = v * (pan_h - 1);
    return true;
  }
};

}  // namespace

Raster fold_back(const Raster& panorama, const AnnularCameraModel& model,
                 ResampleMode mode, float outside) {
  model.validate();
  if (panorama.width() < 2 || panorama.height() < 2) {
    throw InvalidInput("fold_back panorama must be at least 2x2");
  }
  const int w = model.source_width, h = model.source_height;
  const int pw = panorama.width(), ph = panorama.height();
  InverseMap inv{model, pw, ph};
  Raster out(panorama.channels(), h, w, outside);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double col, row;
      if (!inv.project(x, y, col, row)) continue;
      if (mode == ResampleMode::kNearest) {
        int cx = nearest_index(col) % pw;
        if (cx < 0) cx += pw;
        int cy = std::clamp(nearest_index(row), 0, ph - 1);
        for (int c = 0; c < panorama.channels(); ++c) {
          out.at(c, y, x) = panorama.at(c, cy, cx);
        }
      } else {
        int x0 = static_cast<int>(std::floor(col));
        float fx = static_cast<float>(col - x0);
        int cx0 = ((x0 % pw) + pw) % pw;
        int cx1 = (cx0 + 1) % pw;  // columns wrap: the panorama is periodic
        double rr = std::clamp(row, 0.0, static_cast<double>(ph - 1));
        int y0 = static_cast<int>(rr);
        int y1 = std::min(y0 + 1, ph - 1);
        float fy = static_cast<float>(rr - y0);
        for (int c = 0; c < panorama.channels(); ++c) {
          float top = panorama.at(c, y0, cx0) +
                      (panorama.at(c, y0, cx1) - panorama.at(c, y0, cx0)) * fx;
          float bot = panorama.at(c, y1, cx0) +
                      (panorama.at(c, y1, cx1) - panorama.at(c, y1, cx0)) * fx;
          out.at(c, y, x) = top + (bot - top) * fy;
        }
      }
    }
  }
  return out;
}

SegmentationMap fold_back_labels(const SegmentationMap& panorama,
                                 const AnnularCameraModel& model,
                                 ResampleMode mode, std::uint8_t outside) {
  model.validate();
  if (mode != ResampleMode::kNearest) {
    throw InvalidInput(
        "class-id rasters must be folded back with nearest resampling");
  }
  if (panorama.width() < 2 || panorama.height() < 2) {
    throw InvalidInput("fold_back panorama must be at least 2x2");
  }
  const int pw = panorama.width(), ph = panorama.height();
  InverseMap inv{model, pw, ph};
  SegmentationMap out(model.source_height, model.source_width, outside);
  for (int y = 0; y < model.source_height; ++y) {
    for (int x = 0; x < model.source_width; ++x) {
      double col, row;
      if (!inv.project(x, y, col, row)) continue;
      int cx = nearest_index(col) % pw;
      if (cx < 0) cx += pw;
      int cy = std::clamp(nearest_index(row), 0, ph - 1);
      out.at(y, x) = panorama.at(cy, cx);
    }
  }
  return out;
}

}  // namespace dspass
