#pragma once

#include <cstdint>
#include <vector>

#include "dspass/tensor.hpp"

namespace dspass {

/// Class id excluded from scoring and used for pixels outside the annulus.
inline constexpr std::uint8_t kIgnoreId = 255;

/// Per-pixel class-id raster. Ids are nominal: never interpolated.
class SegmentationMap {
 public:
  SegmentationMap() = default;
  SegmentationMap(int height, int width, std::uint8_t fill = kIgnoreId);

  int height() const { return height_; }
  int width() const { return width_; }

  std::uint8_t& at(int y, int x) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t at(int y, int x) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::vector<std::uint8_t>& storage() { return data_; }
  const std::vector<std::uint8_t>& storage() const { return data_; }

  bool operator==(const SegmentationMap& o) const = default;

  /// Columns shifted circularly right by k.
  SegmentationMap shift_cols(int k) const;

  /// Nearest-neighbor resize (ids are not interpolable).
  SegmentationMap resize_nearest(int out_h, int out_w) const;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel argmax over channels; ties resolve to the lower class id.
SegmentationMap argmax_classes(const Tensor& logits);

/// Per-pixel gap between the largest and second-largest logit. Used to mask
/// near-ties when comparing argmax maps across numerically distinct routes.
Tensor top2_gap(const Tensor& logits);

}  // namespace dspass
