#pragma once

#include <span>
#include <vector>

#include "dspass/padding.hpp"
#include "dspass/tensor.hpp"

namespace dspass {

/// Inference-time batch normalization:
/// (x - mean_c) / sqrt(var_c + eps) * scale_c + shift_c, per channel.
Tensor batchnorm_inference(const Tensor& x, std::span<const float> scale,
                           std::span<const float> shift,
                           std::span<const float> running_mean,
                           std::span<const float> running_var,
                           float epsilon = 1e-5f);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);

/// Multiplies every spatial position of channel c by weights[c].
Tensor scale_channels(const Tensor& x, std::span<const float> weights);

/// Max pooling over the padded input. Padding values participate in the max.
Tensor maxpool2d(const Tensor& x, int kernel, int stride,
                 const PaddingSpec& spec);

/// Spatial mean per channel.
std::vector<float> global_avg_pool(const Tensor& x);

/// Horizontal boundary handling for bilinear resampling. Vertical handling
/// always clamps; the panorama is periodic only horizontally.
enum class WrapMode { kClamp, kWrap };

/// Bilinear resize with the align-corners=false convention: output sample
/// (i, j) reads input position ((i + 0.5) * h_in / h_out - 0.5,
/// (j + 0.5) * w_in / w_out - 0.5).
Tensor bilinear_upsample(const Tensor& x, int out_h, int out_w,
                         WrapMode horizontal = WrapMode::kClamp);

Tensor concat_channels(const std::vector<Tensor>& parts);
Tensor concat_width(const std::vector<Tensor>& parts);
Tensor elementwise_max(const Tensor& a, const Tensor& b);

/// Dense y = W v + b with W laid out out x in, row-major.
std::vector<float> linear(std::span<const float> v,
                          std::span<const float> weight, int out_dim,
                          int in_dim, std::span<const float> bias);

/// Adaptive average pooling to `bands` vertical bins spanning the full
/// width: out(c, i) = mean over rows [floor(i*h/bands), ceil((i+1)*h/bands))
/// and all columns. Bands never come out empty, also when bands > height.
/// Returned tensor has shape channels x bands x 1.
Tensor pool_bands(const Tensor& x, int bands);

/// Per-channel-per-band row sums over all columns of x, with the same band
/// partition as pool_bands, plus the column count. Summing these across
/// horizontal slices of a wider tensor and dividing by the total count
/// reproduces pool_bands of the wide tensor (up to float reassociation).
struct BandSums {
  int bands = 0;
  int columns = 0;                ///< columns contributing to the sums
  std::vector<float> sums;        ///< channels x bands, row-major
};
BandSums band_partial_sums(const Tensor& x, int bands);

/// Per-channel sums over all spatial positions, plus the position count.
struct ChannelSums {
  long long count = 0;
  std::vector<float> sums;
};
ChannelSums channel_partial_sums(const Tensor& x);

}  // namespace dspass
