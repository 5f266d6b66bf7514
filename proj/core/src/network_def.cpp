#include "dspass/network_def.hpp"

#include <algorithm>

#include "dspass/error.hpp"

namespace dspass {

void NetworkDef::validate() const {
  if (num_classes < 1 || num_classes > 255) {
    throw InvalidInput("num_classes must be in 1..255");
  }
  if (input_channels < 1) throw InvalidInput("input_channels must be >= 1");
  if (encoder_stage_channels.size() != 5) {
    throw InvalidInput(
        "encoder_stage_channels must list stem + four stage widths");
  }
  for (int c : encoder_stage_channels) {
    if (c < 1) throw InvalidInput("encoder stage widths must be positive");
  }
  if (decoder_width < 1) throw InvalidInput("decoder_width must be positive");
  if (se_reduction < 1) throw InvalidInput("se_reduction must be positive");
  if (spp_grid_levels.empty()) {
    throw InvalidInput("spp_grid_levels must not be empty");
  }
  for (int g : spp_grid_levels) {
    if (g < 1) throw InvalidInput("spp grid levels must be >= 1");
  }
  if (split_point != SplitPoint::kAfterSpp) {
    throw InvalidInput("only the after-spp split point is supported");
  }
}

int NetworkDef::se_hidden(int channels) const {
  return std::max(channels / se_reduction, 4);
}

int NetworkDef::spp_branch_channels() const {
  return std::max(decoder_width / 4, 1);
}

int NetworkDef::spp_concat_channels() const {
  return encoder_stage_channels[4] +
         static_cast<int>(spp_grid_levels.size()) * spp_branch_channels();
}

void structural_pads(int kernel, int stride, int& pad_left, int& pad_right) {
  pad_left = (kernel - 1) / 2;
  pad_right = std::max(0, kernel - stride - pad_left);
}

std::vector<PaddedLayerGeom> feature_padded_layers(const NetworkDef& def) {
  def.validate();
  std::vector<PaddedLayerGeom> layers;
  auto push = [&layers](const std::string& name, int k, int s,
                        int input_stride) {
    PaddedLayerGeom g;
    g.name = name;
    g.kernel = k;
    g.stride = s;
    g.input_stride = input_stride;
    structural_pads(k, s, g.pad_left, g.pad_right);
    layers.push_back(g);
  };
  push("stem.conv", 7, 2, 1);
  push("stem.pool", 3, 2, 2);
  int stride = 4;
  for (int stage = 1; stage <= 4; ++stage) {
    int first_stride = stage == 1 ? 1 : 2;
    for (int block = 0; block < 2; ++block) {
      std::string base =
          "stage" + std::to_string(stage) + ".block" + std::to_string(block);
      int s1 = block == 0 ? first_stride : 1;
      push(base + ".conv1", 3, s1, stride);
      if (block == 0 && first_stride == 2) stride *= 2;
      push(base + ".conv2", 3, 1, stride);
    }
  }
  return layers;
}

}  // namespace dspass
