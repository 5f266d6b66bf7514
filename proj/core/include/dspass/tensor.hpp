#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dspass {

/// Dense rank-3 feature map, channels x height x width, 32-bit floats,
/// contiguous with the width index fastest. The universal currency of the
/// compute core; image rasters use the same layout.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, float fill = 0.0f);

  static Tensor from_data(int channels, int height, int width,
                          std::vector<float> data);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  std::vector<float>& storage() { return data_; }
  const std::vector<float>& storage() const { return data_; }

  float& at(int c, int y, int x) {
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }
  float at(int c, int y, int x) const {
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }

  float* row(int c, int y) {
    return data_.data() + (static_cast<std::size_t>(c) * height_ + y) * width_;
  }
  const float* row(int c, int y) const {
    return data_.data() + (static_cast<std::size_t>(c) * height_ + y) * width_;
  }

  bool same_shape(const Tensor& o) const {
    return channels_ == o.channels_ && height_ == o.height_ &&
           width_ == o.width_;
  }
  std::string shape_str() const;

  /// True iff every entry is finite.
  bool all_finite() const;

  /// Copy of columns [x0, x1).
  Tensor slice_cols(int x0, int x1) const;

  /// Copy of columns taken circularly starting at x0 (may wrap past width).
  Tensor slice_cols_circular(int x0, int count) const;

  /// Columns shifted circularly right by k (k may be negative).
  Tensor shift_cols(int k) const;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

/// Image raster; same storage as a feature map.
using Raster = Tensor;

float max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace dspass
