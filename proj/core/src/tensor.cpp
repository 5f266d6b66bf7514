#include "dspass/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dspass/error.hpp"

namespace dspass {

Tensor::Tensor(int channels, int height, int width, float fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 0 || height < 0 || width < 0) {
    throw InvalidInput("tensor dimensions must be non-negative, got " +
                       shape_str());
  }
  data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

Tensor Tensor::from_data(int channels, int height, int width,
                         std::vector<float> data) {
  if (data.size() != static_cast<std::size_t>(channels) * height * width) {
    throw InvalidInput("tensor data length " + std::to_string(data.size()) +
                       " does not match shape " + std::to_string(channels) +
                       "x" + std::to_string(height) + "x" +
                       std::to_string(width));
  }
  Tensor t;
  t.channels_ = channels;
  t.height_ = height;
  t.width_ = width;
  t.data_ = std::move(data);
  return t;
}

std::string Tensor::shape_str() const {
  return std::to_string(channels_) + "x" + std::to_string(height_) + "x" +
         std::to_string(width_);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

Tensor Tensor::slice_cols(int x0, int x1) const {
  if (x0 < 0 || x1 > width_ || x0 > x1) {
    throw InvalidInput("column slice [" + std::to_string(x0) + ", " +
                       std::to_string(x1) + ") out of range for width " +
                       std::to_string(width_));
  }
  Tensor out(channels_, height_, x1 - x0);
  for (int c = 0; c < channels_; ++c) {
    for (int y = 0; y < height_; ++y) {
      const float* src = row(c, y) + x0;
      std::copy(src, src + (x1 - x0), out.row(c, y));
    }
  }
  return out;
}

Tensor Tensor::slice_cols_circular(int x0, int count) const {
  if (width_ == 0 || count < 0) {
    throw InvalidInput("circular slice on empty tensor or negative count");
  }
  Tensor out(channels_, height_, count);
  for (int c = 0; c < channels_; ++c) {
    for (int y = 0; y < height_; ++y) {
      const float* src = row(c, y);
      float* dst = out.row(c, y);
      for (int x = 0; x < count; ++x) {
        int sx = (x0 + x) % width_;
        if (sx < 0) sx += width_;
        dst[x] = src[sx];
      }
    }
  }
  return out;
}

Tensor Tensor::shift_cols(int k) const {
  if (width_ == 0) return *this;
  int w = width_;
  int s = ((k % w) + w) % w;
  Tensor out(channels_, height_, w);
  for (int c = 0; c < channels_; ++c) {
    for (int y = 0; y < height_; ++y) {
      const float* src = row(c, y);
      float* dst = out.row(c, y);
      // dst[(x + s) % w] = src[x]
      std::copy(src, src + w - s, dst + s);
      std::copy(src + w - s, src + w, dst);
    }
  }
  return out;
}

float max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw InvalidInput("max_abs_diff shape mismatch: " + a.shape_str() +
                       " vs " + b.shape_str());
  }
  float m = 0.0f;
  const float* pa = a.data();
  const float* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(pa[i] - pb[i]));
  }
  return m;
}

}  // namespace dspass
