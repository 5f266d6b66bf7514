#pragma once

#include <optional>
#include <vector>

#include "dspass/padding.hpp"
#include "dspass/tensor.hpp"

namespace dspass {

/// Dense 2-D convolution parameters. Weights are laid out
/// out_channels x in_channels x kernel_h x kernel_w, row-major.
struct ConvParams {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  int stride = 1;
  std::vector<float> weights;
  std::optional<std::vector<float>> bias;

  const float* kernel(int oc, int ic) const {
    return weights.data() +
           (static_cast<std::size_t>(oc) * in_channels + ic) * kernel_h *
               kernel_w;
  }
  void validate() const;
};

/// Direct cross-correlation over the padded input.
///   out_h = (h + pad_top + pad_bottom - kernel_h) / stride + 1
/// and analogously for width. Accumulation order per output element is
/// in-channel, kernel row, kernel column (outer loops: out-channel, row,
/// column), in 32-bit floats, so results are reproducible across runs and
/// thread counts.
Tensor conv2d(const Tensor& x, const ConvParams& p, const PaddingSpec& spec);

}  // namespace dspass
