#include "dspass/padding.hpp"

#include <algorithm>
#include <string>

#include "dspass/error.hpp"

namespace dspass {

const char* to_string(PadMode m) {
  switch (m) {
    case PadMode::kZero:
      return "zero";
    case PadMode::kRing:
      return "ring";
    case PadMode::kNeighbor:
      return "neighbor";
  }
  return "?";
}

namespace {

void check_buffer(const Tensor& x, const std::optional<Tensor>& buf,
                  int need_cols, const char* side) {
  if (need_cols == 0) return;
  if (!buf.has_value()) {
    throw InvalidInput(std::string("neighbor padding requires a ") + side +
                       " buffer of width >= " + std::to_string(need_cols));
  }
  if (buf->channels() != x.channels() || buf->height() != x.height()) {
    throw InvalidInput(std::string(side) + " buffer shape " +
                       buf->shape_str() + " incompatible with input " +
                       x.shape_str());
  }
  if (buf->width() < need_cols) {
    throw InvalidInput(std::string(side) + " buffer width " +
                       std::to_string(buf->width()) + " < pad amount " +
                       std::to_string(need_cols));
  }
}

}  // namespace

Tensor pad(const Tensor& x, const PaddingSpec& spec) {
  if (spec.pad_left < 0 || spec.pad_right < 0 || spec.pad_top < 0 ||
      spec.pad_bottom < 0) {
    throw InvalidInput("pad amounts must be >= 0");
  }
  const int pl = spec.pad_left, pr = spec.pad_right;
  const int pt = spec.pad_top, pb = spec.pad_bottom;
  if (spec.mode == PadMode::kRing && (pl > x.width() || pr > x.width())) {
    throw InvalidInput("ring pad amount exceeds tensor width " +
                       std::to_string(x.width()));
  }
  if (spec.mode == PadMode::kNeighbor) {
    check_buffer(x, spec.left_buffer, pl, "left");
    check_buffer(x, spec.right_buffer, pr, "right");
  }

  Tensor out(x.channels(), x.height() + pt + pb, x.width() + pl + pr, 0.0f);
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < x.height(); ++y) {
      const float* src = x.row(c, y);
      float* dst = out.row(c, y + pt) + pl;
      std::copy(src, src + x.width(), dst);
      switch (spec.mode) {
        case PadMode::kZero:
          break;
        case PadMode::kRing:
          // Left pads mirror the rightmost columns and vice versa.
          std::copy(src + x.width() - pl, src + x.width(), dst - pl);
          std::copy(src, src + pr, dst + x.width());
          break;
        case PadMode::kNeighbor: {
          if (pl > 0) {
            const float* lb = spec.left_buffer->row(c, y);
            int lw = spec.left_buffer->width();
            std::copy(lb + lw - pl, lb + lw, dst - pl);
          }
          if (pr > 0) {
            const float* rb = spec.right_buffer->row(c, y);
            std::copy(rb, rb + pr, dst + x.width());
          }
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace dspass
