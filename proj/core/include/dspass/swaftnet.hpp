#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dspass/conv.hpp"
#include "dspass/kernels.hpp"
#include "dspass/network_def.hpp"
#include "dspass/tensor.hpp"
#include "dspass/weights.hpp"

namespace dspass {

struct LinearParams {
  int out_dim = 0;
  int in_dim = 0;
  std::vector<float> weight;  ///< out x in, row-major
  std::vector<float> bias;    ///< out
};

/// Squeeze-excite attention: d = sigmoid(fc2 relu(fc1 gap(x))), applied as
/// a per-channel rescaling of x.
struct SqueezeExcite {
  LinearParams fc1;  ///< hidden x channels
  LinearParams fc2;  ///< channels x hidden
};

struct BatchNormParams {
  std::vector<float> scale, shift, running_mean, running_var;
};

struct BasicBlock {
  ConvParams conv1, conv2;
  BatchNormParams bn1, bn2;
  std::optional<ConvParams> shortcut_conv;  ///< 1x1 when shape changes
  std::optional<BatchNormParams> shortcut_bn;
};

struct SppParams {
  std::vector<ConvParams> level_convs;  ///< 1x1 per pyramid level
  ConvParams fuse;                      ///< 1x1 over the concatenation
  SqueezeExcite se;                     ///< channel attention after fusion
};

struct DecoderStage {
  SqueezeExcite se;
  std::optional<ConvParams> proj;  ///< 1x1, present iff widths differ
  ConvParams conv;                 ///< 3x3 blend at decoder width
  BatchNormParams bn;
};

/// Immutable after construction; forward passes are pure.
struct Network {
  NetworkDef def;
  ConvParams stem_conv;
  BatchNormParams stem_bn;
  std::array<std::array<BasicBlock, 2>, 4> stages;
  SppParams spp;
  std::array<DecoderStage, 3> decoder;  ///< laterals from stages 3, 2, 1
  ConvParams head;
};

struct SeededRandom {
  std::uint32_t seed = 0;
};

/// Builds a network with seeded random parameters. Convolution and
/// fully-connected weights and biases draw uniformly from
/// +-sqrt(1/fan_in) using a single documented generator stream in parameter
/// declaration order, so equal seeds give bit-identical tables.
/// Normalization layers start as the identity (scale 1, shift 0, mean 0,
/// var 1).
Network build(const NetworkDef& def, SeededRandom init);

/// Builds a network from a parameter table. Missing entries, shape
/// mismatches and orphan entries raise errors naming the parameter.
Network build(const NetworkDef& def, const NetworkWeights& weights);

NetworkWeights extract_weights(const Network& net);
void save_weights(const Network& net, const std::string& path);
NetworkWeights load_weights(const std::string& path);

std::vector<float> se_descriptor(const SqueezeExcite& se,
                                 std::span<const float> pooled);
Tensor se_block(const Tensor& x, const SqueezeExcite& se);

/// add(project(se_block(encoder_feature)), decoder_feature); project is the
/// identity when the channel counts already match.
Tensor attention_lateral(const Tensor& encoder_feature,
                         const SqueezeExcite& se,
                         const std::optional<ConvParams>& projection,
                         const Tensor& decoder_feature);

/// Pyramid pooling with channel attention over a stride-32 feature map.
/// Each level pools to `bands` vertical bins spanning the full width, runs
/// a 1x1 convolution, and is upsampled back; the concatenation of the input
/// and all levels is fused by a 1x1 convolution and recalibrated by the
/// squeeze-excite block.
Tensor spp_forward(const Tensor& x, const SppParams& spp,
                   const std::vector<int>& levels);

/// Boundary columns of a padded layer's input: `left` holds the leftmost
/// pad_right columns (what the left neighbor needs for its right padding),
/// `right` the rightmost pad_left columns.
struct BoundaryStrips {
  Tensor left;
  Tensor right;
};

struct EncoderOutput {
  std::array<Tensor, 3> stage_features;  ///< strides 4, 8, 16
  Tensor spp_feature;                    ///< stride 32, decoder width
  std::vector<BoundaryStrips> boundary_strips;  ///< per padded layer
};

/// In-flight state of one segment's feature-model evaluation.
struct EncoderState {
  Tensor cur;
  Tensor block_input;
  std::array<Tensor, 3> laterals;
  std::vector<Tensor> spp_parts;
  std::vector<BoundaryStrips> strips;

  EncoderOutput finish() &&;
};

enum class StepSync { kNone, kPad, kBands, kChannels };

/// One lockstep unit of the feature model. Steps with sync kPad consume a
/// padding spec for their first convolution/pooling; kBands and kChannels
/// steps publish a partial reduction and consume the completed total, which
/// is how segment-wise evaluation matches full-width pooling exactly.
struct FeatureStep {
  StepSync sync = StepSync::kNone;
  int pad_index = -1;         ///< index into feature_padded_layers
  PaddedLayerGeom geom;       ///< valid when sync == kPad
  int bands = 0;              ///< valid when sync == kBands
  std::function<BandSums(const EncoderState&)> bands_partial;
  std::function<ChannelSums(const EncoderState&)> channels_partial;
  std::function<void(EncoderState&, const PaddingSpec*, const BandSums*,
                     const ChannelSums*)>
      apply;
};

/// The feature model as an executable step list. Steps capture references
/// into `net`, which must outlive the program.
std::vector<FeatureStep> build_feature_program(const Network& net);

/// Padding spec for a padded feature layer under a self-contained mode
/// (ring wraps the tensor's own columns, zero fills). Vertical padding is
/// zero-filled with the same structural amounts (kernels are square).
PaddingSpec structural_pad_spec(PadMode mode, const PaddedLayerGeom& geom);

/// Supplies neighbor padding buffers per padded layer (left buffer, right
/// buffer) when running a segment with cross-segment padding.
using NeighborBuffers =
    std::function<std::pair<Tensor, Tensor>(int pad_index,
                                            const PaddedLayerGeom& geom)>;

/// Runs the encoder + pyramid module over one segment with the given
/// horizontal padding mode at every padded layer, recording the boundary
/// strips a neighbor would need. Width and height must be divisible by 32.
EncoderOutput feature_forward(const Network& net, const Tensor& segment,
                              PadMode mode,
                              const NeighborBuffers& neighbors = nullptr);

/// Decoder over fused full-width features: three bilinear-x2 steps blended
/// with attention laterals, a 1x1 classifier, and x4 upsampling back to
/// input resolution. Ring mode wraps horizontally in convolutions and
/// upsampling; zero mode zero-pads and clamps.
Tensor fusion_forward(const Network& net, const EncoderOutput& fused,
                      PadMode mode);

}  // namespace dspass
