#pragma once

#include <string>
#include <vector>

namespace dspass {

/// Where the network splits into the per-segment feature model and the
/// full-width fusion model. The encoder through the attention-recalibrated
/// pyramid-pooling output is the feature model; the decoder is the fusion
/// model.
enum class SplitPoint { kAfterSpp };

/// Architecture hyper-parameters. The layer graph is fixed: 7x7/2 stem conv
/// + 3x3/2 max-pool, four residual stages of two basic blocks, a pyramid
/// pooling module with channel attention, and a constant-width decoder with
/// attention lateral connections, closing with a 1x1 classifier and x4
/// bilinear upsampling. Feature strides are 4/4/8/16/32 for stem and the
/// four stages.
struct NetworkDef {
  int num_classes = 6;
  int input_channels = 3;
  /// Stem width followed by the four residual-stage widths.
  std::vector<int> encoder_stage_channels = {64, 64, 128, 256, 512};
  int decoder_width = 128;
  int se_reduction = 16;
  /// Vertical band counts of the pyramid levels. Each level pools to
  /// bands x 1 (full horizontal extent), so level 1 is the global average.
  std::vector<int> spp_grid_levels = {1, 2, 4, 8};
  SplitPoint split_point = SplitPoint::kAfterSpp;

  void validate() const;

  /// Squeeze bottleneck width for a block over `channels` inputs.
  int se_hidden(int channels) const;

  /// Channel width of each pyramid branch after its 1x1 convolution.
  int spp_branch_channels() const;

  /// Input width of the pyramid fuse convolution.
  int spp_concat_channels() const;
};

/// Geometry of one horizontally padded layer of the feature model, in the
/// order the layers execute. run_adapted exchanges boundary strips at
/// exactly these points; pad_left/pad_right are the structural amounts
/// implied by kernel and stride (output size = input size / stride).
struct PaddedLayerGeom {
  std::string name;
  int kernel = 0;
  int stride = 0;
  int pad_left = 0;
  int pad_right = 0;
  int input_stride = 0;  ///< feature stride of the layer's input
};

/// Padded layers of the feature model for a given definition.
std::vector<PaddedLayerGeom> feature_padded_layers(const NetworkDef& def);

/// Structural horizontal padding for a kernel/stride pair:
/// pad_left = (k-1)/2, pad_right = max(0, k - s - pad_left). With width
/// divisible by the stride this yields output width = input/stride and never
/// reads columns beyond pad_right.
void structural_pads(int kernel, int stride, int& pad_left, int& pad_right);

}  // namespace dspass
