#include "dspass/segmentation_map.hpp"

#include <algorithm>

#include "dspass/error.hpp"

namespace dspass {

SegmentationMap::SegmentationMap(int height, int width, std::uint8_t fill)
    : height_(height), width_(width) {
  if (height < 0 || width < 0) {
    throw InvalidInput("segmentation map dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(height) * width, fill);
}

SegmentationMap SegmentationMap::shift_cols(int k) const {
  SegmentationMap out(height_, width_);
  if (width_ == 0) return out;
  int s = ((k % width_) + width_) % width_;
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* src = data_.data() + static_cast<std::size_t>(y) * width_;
    std::uint8_t* dst = out.data_.data() + static_cast<std::size_t>(y) * width_;
    std::copy(src, src + width_ - s, dst + s);
    std::copy(src + width_ - s, src + width_, dst);
  }
  return out;
}

SegmentationMap SegmentationMap::resize_nearest(int out_h, int out_w) const {
  if (out_h <= 0 || out_w <= 0) {
    throw InvalidInput("resize target must be positive");
  }
  SegmentationMap out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    int sy = static_cast<int>((static_cast<long long>(y) * height_) / out_h);
    for (int x = 0; x < out_w; ++x) {
      int sx = static_cast<int>((static_cast<long long>(x) * width_) / out_w);
      out.at(y, x) = at(sy, sx);
    }
  }
  return out;
}

SegmentationMap argmax_classes(const Tensor& logits) {
  if (logits.channels() < 1 || logits.channels() > 255) {
    throw InvalidInput("argmax expects 1..255 class channels, got " +
                       std::to_string(logits.channels()));
  }
  SegmentationMap out(logits.height(), logits.width());
  for (int y = 0; y < logits.height(); ++y) {
    for (int x = 0; x < logits.width(); ++x) {
      int best = 0;
      float bv = logits.at(0, y, x);
      for (int c = 1; c < logits.channels(); ++c) {
        float v = logits.at(c, y, x);
        if (v > bv) {
          bv = v;
          best = c;
        }
      }
      out.at(y, x) = static_cast<std::uint8_t>(best);
    }
  }
  return out;
}

Tensor top2_gap(const Tensor& logits) {
  if (logits.channels() < 2) {
    throw InvalidInput("top2_gap needs at least two class channels");
  }
  Tensor out(1, logits.height(), logits.width());
  for (int y = 0; y < logits.height(); ++y) {
    for (int x = 0; x < logits.width(); ++x) {
      float best = logits.at(0, y, x), second = logits.at(1, y, x);
      if (second > best) std::swap(best, second);
      for (int c = 2; c < logits.channels(); ++c) {
        float v = logits.at(c, y, x);
        if (v > best) {
          second = best;
          best = v;
        } else if (v > second) {
          second = v;
        }
      }
      out.at(0, y, x) = best - second;
    }
  }
  return out;
}

}  // namespace dspass
