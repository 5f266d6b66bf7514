#pragma once

#include <optional>

#include "dspass/tensor.hpp"

namespace dspass {

/// How horizontal padding columns are sourced. Vertical padding is always
/// zero-fill: the panorama is periodic only along the unfolding direction.
enum class PadMode {
  kZero,      ///< border filled with 0
  kRing,      ///< columns copied from the opposite side of the same tensor
  kNeighbor,  ///< columns supplied by adjacent segments' feature maps
};

const char* to_string(PadMode m);

/// Horizontal padding policy for convolutions and pooling.
struct PaddingSpec {
  PadMode mode = PadMode::kZero;
  int pad_left = 0;
  int pad_right = 0;
  int pad_top = 0;
  int pad_bottom = 0;
  /// Present iff mode == kNeighbor. left_buffer supplies the left padding
  /// (its rightmost pad_left columns), right_buffer the right padding (its
  /// leftmost pad_right columns). Heights and channels must match the input.
  std::optional<Tensor> left_buffer;
  std::optional<Tensor> right_buffer;

  static PaddingSpec zero(int left, int right, int top, int bottom) {
    return {PadMode::kZero, left, right, top, bottom, {}, {}};
  }
  static PaddingSpec ring(int left, int right, int top, int bottom) {
    return {PadMode::kRing, left, right, top, bottom, {}, {}};
  }
  static PaddingSpec neighbor(int left, int right, int top, int bottom,
                              Tensor left_buffer, Tensor right_buffer) {
    return {PadMode::kNeighbor, left,
            right,              top,
            bottom,             std::move(left_buffer),
            std::move(right_buffer)};
  }
};

/// Materializes the padded tensor. Ring mode wraps horizontally; neighbor
/// mode splices the supplied buffers; all modes zero-fill the vertical
/// border. The padded corners above/below neighbor columns are zero.
Tensor pad(const Tensor& x, const PaddingSpec& spec);

}  // namespace dspass
