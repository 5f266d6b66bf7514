#include "dspass/swaftnet.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

#include "dspass/error.hpp"

namespace dspass {

namespace {

std::uint32_t u32(int v) { return static_cast<std::uint32_t>(v); }

ConvParams make_conv(int out_c, int in_c, int k, int stride, bool with_bias) {
  ConvParams p;
  p.out_channels = out_c;
  p.in_channels = in_c;
  p.kernel_h = k;
  p.kernel_w = k;
  p.stride = stride;
  p.weights.assign(static_cast<std::size_t>(out_c) * in_c * k * k, 0.0f);
  if (with_bias) p.bias = std::vector<float>(out_c, 0.0f);
  return p;
}

LinearParams make_linear(int out_dim, int in_dim) {
  LinearParams l;
  l.out_dim = out_dim;
  l.in_dim = in_dim;
  l.weight.assign(static_cast<std::size_t>(out_dim) * in_dim, 0.0f);
  l.bias.assign(out_dim, 0.0f);
  return l;
}

BatchNormParams make_bn(int ch) {
  BatchNormParams bn;
  bn.scale.assign(ch, 0.0f);
  bn.shift.assign(ch, 0.0f);
  bn.running_mean.assign(ch, 0.0f);
  bn.running_var.assign(ch, 0.0f);
  return bn;
}

Network make_skeleton(const NetworkDef& def) {
  def.validate();
  Network net;
  net.def = def;
  const auto& ch = def.encoder_stage_channels;

  net.stem_conv = make_conv(ch[0], def.input_channels, 7, 2, false);
  net.stem_bn = make_bn(ch[0]);

  int in_c = ch[0];
  for (int s = 0; s < 4; ++s) {
    const int out_c = ch[1 + s];
    const int first_stride = s == 0 ? 1 : 2;
    for (int b = 0; b < 2; ++b) {
      BasicBlock& blk = net.stages[s][b];
      const int bin = b == 0 ? in_c : out_c;
      const int bstride = b == 0 ? first_stride : 1;
      blk.conv1 = make_conv(out_c, bin, 3, bstride, false);
      blk.bn1 = make_bn(out_c);
      blk.conv2 = make_conv(out_c, out_c, 3, 1, false);
      blk.bn2 = make_bn(out_c);
      if (b == 0 && (bin != out_c || bstride != 1)) {
        blk.shortcut_conv = make_conv(out_c, bin, 1, bstride, false);
        blk.shortcut_bn = make_bn(out_c);
      }
    }
    in_c = out_c;
  }

  const int branch = def.spp_branch_channels();
  for (std::size_t li = 0; li < def.spp_grid_levels.size(); ++li) {
    net.spp.level_convs.push_back(make_conv(branch, ch[4], 1, 1, true));
  }
  net.spp.fuse = make_conv(def.decoder_width, def.spp_concat_channels(), 1, 1,
                           true);
  net.spp.se.fc1 = make_linear(def.se_hidden(def.decoder_width),
                               def.decoder_width);
  net.spp.se.fc2 = make_linear(def.decoder_width,
                               def.se_hidden(def.decoder_width));

  // Decoder stage k blends the lateral from encoder stage 3 - k.
  for (int k = 0; k < 3; ++k) {
    const int lat_c = ch[3 - k];
    DecoderStage& d = net.decoder[k];
    d.se.fc1 = make_linear(def.se_hidden(lat_c), lat_c);
    d.se.fc2 = make_linear(lat_c, def.se_hidden(lat_c));
    if (lat_c != def.decoder_width) {
      // Bias-free so a zero lateral is the additive identity.
      d.proj = make_conv(def.decoder_width, lat_c, 1, 1, false);
    }
    d.conv = make_conv(def.decoder_width, def.decoder_width, 3, 1, false);
    d.bn = make_bn(def.decoder_width);
  }
  net.head = make_conv(def.num_classes, def.decoder_width, 1, 1, true);
  return net;
}

enum class ParamKind { kWeight, kBias, kBnScale, kBnShift, kBnMean, kBnVar };

struct ParamRef {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float>* data;
  ParamKind kind;
  int fan_in;
};

void add_conv(std::vector<ParamRef>& out, const std::string& base,
              ConvParams& p) {
  const int fan_in = p.in_channels * p.kernel_h * p.kernel_w;
  out.push_back({base + ".weight",
                 {u32(p.out_channels), u32(p.in_channels), u32(p.kernel_h),
                  u32(p.kernel_w)},
                 &p.weights, ParamKind::kWeight, fan_in});
  if (p.bias) {
    out.push_back({base + ".bias",
                   {u32(p.out_channels)},
                   &*p.bias,
                   ParamKind::kBias,
                   fan_in});
  }
}

void add_bn(std::vector<ParamRef>& out, const std::string& base,
            BatchNormParams& bn) {
  const auto c = u32(static_cast<int>(bn.scale.size()));
  out.push_back({base + ".weight", {c}, &bn.scale, ParamKind::kBnScale, 0});
  out.push_back({base + ".bias", {c}, &bn.shift, ParamKind::kBnShift, 0});
  out.push_back(
      {base + ".running_mean", {c}, &bn.running_mean, ParamKind::kBnMean, 0});
  out.push_back(
      {base + ".running_var", {c}, &bn.running_var, ParamKind::kBnVar, 0});
}

void add_linear(std::vector<ParamRef>& out, const std::string& base,
                LinearParams& l) {
  out.push_back({base + ".weight",
                 {u32(l.out_dim), u32(l.in_dim)},
                 &l.weight,
                 ParamKind::kWeight,
                 l.in_dim});
  out.push_back(
      {base + ".bias", {u32(l.out_dim)}, &l.bias, ParamKind::kBias, l.in_dim});
}

/// Every parameter of the network in declaration order. This single listing
/// drives random init, table validation, and extraction, so the three can
/// never disagree.
std::vector<ParamRef> parameter_schema(Network& net) {
  std::vector<ParamRef> refs;
  add_conv(refs, "stem.conv", net.stem_conv);
  add_bn(refs, "stem.bn", net.stem_bn);
  for (int s = 0; s < 4; ++s) {
    for (int b = 0; b < 2; ++b) {
      BasicBlock& blk = net.stages[s][b];
      std::string base =
          "stage" + std::to_string(s + 1) + ".block" + std::to_string(b);
      add_conv(refs, base + ".conv1", blk.conv1);
      add_bn(refs, base + ".bn1", blk.bn1);
      add_conv(refs, base + ".conv2", blk.conv2);
      add_bn(refs, base + ".bn2", blk.bn2);
      if (blk.shortcut_conv) {
        add_conv(refs, base + ".shortcut.conv", *blk.shortcut_conv);
        add_bn(refs, base + ".shortcut.bn", *blk.shortcut_bn);
      }
    }
  }
  for (std::size_t li = 0; li < net.spp.level_convs.size(); ++li) {
    add_conv(refs, "spp.level" + std::to_string(li) + ".conv",
             net.spp.level_convs[li]);
  }
  add_conv(refs, "spp.fuse.conv", net.spp.fuse);
  add_linear(refs, "spp.se.fc1", net.spp.se.fc1);
  add_linear(refs, "spp.se.fc2", net.spp.se.fc2);
  for (int k = 0; k < 3; ++k) {
    DecoderStage& d = net.decoder[k];
    std::string base = "decoder.up" + std::to_string(k + 1);
    add_linear(refs, base + ".lateral.se.fc1", d.se.fc1);
    add_linear(refs, base + ".lateral.se.fc2", d.se.fc2);
    if (d.proj) add_conv(refs, base + ".lateral.proj", *d.proj);
    add_conv(refs, base + ".conv", d.conv);
    add_bn(refs, base + ".bn", d.bn);
  }
  add_conv(refs, "head.conv", net.head);
  return refs;
}

std::string shape_to_string(const std::vector<std::uint32_t>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace

Network build(const NetworkDef& def, SeededRandom init) {
  Network net = make_skeleton(def);
  std::mt19937 gen(init.seed);
  // Explicit 24-bit mapping to [0,1) keeps the draw sequence independent of
  // the standard library's distribution implementation.
  auto unit = [&gen]() {
    return (gen() >> 8) * (1.0 / 16777216.0);
  };
  for (ParamRef& r : parameter_schema(net)) {
    switch (r.kind) {
      case ParamKind::kWeight:
      case ParamKind::kBias: {
        const double bound = std::sqrt(1.0 / r.fan_in);
        for (float& v : *r.data) {
          v = static_cast<float>((2.0 * unit() - 1.0) * bound);
        }
        break;
      }
      case ParamKind::kBnScale:
      case ParamKind::kBnVar:
        for (float& v : *r.data) v = 1.0f;
        break;
      case ParamKind::kBnShift:
      case ParamKind::kBnMean:
        for (float& v : *r.data) v = 0.0f;
        break;
    }
  }
  return net;
}

Network build(const NetworkDef& def, const NetworkWeights& weights) {
  Network net = make_skeleton(def);
  auto refs = parameter_schema(net);
  std::unordered_set<std::string> known;
  for (ParamRef& r : refs) {
    known.insert(r.name);
    if (!weights.contains(r.name)) {
      throw InvalidInput("weight table is missing parameter '" + r.name + "'");
    }
    const ParamEntry& e = weights.at(r.name);
    if (e.shape != r.shape) {
      throw InvalidInput("parameter '" + r.name + "' has shape " +
                         shape_to_string(e.shape) + ", expected " +
                         shape_to_string(r.shape));
    }
    *r.data = e.data;
  }
  for (const std::string& n : weights.names()) {
    if (!known.count(n)) {
      throw InvalidInput("weight table has unexpected parameter '" + n + "'");
    }
  }
  return net;
}

NetworkWeights extract_weights(const Network& net) {
  // The schema only reads through the pointers here.
  auto refs = parameter_schema(const_cast<Network&>(net));
  NetworkWeights w;
  for (const ParamRef& r : refs) {
    w.add(r.name, r.shape, *r.data);
  }
  return w;
}

void save_weights(const Network& net, const std::string& path) {
  extract_weights(net).save(path);
}

NetworkWeights load_weights(const std::string& path) {
  return NetworkWeights::load(path);
}

std::vector<float> se_descriptor(const SqueezeExcite& se,
                                 std::span<const float> pooled) {
  std::vector<float> h = linear(pooled, se.fc1.weight, se.fc1.out_dim,
                                se.fc1.in_dim, se.fc1.bias);
  for (float& v : h) v = v > 0.0f ? v : 0.0f;
  std::vector<float> d = linear(h, se.fc2.weight, se.fc2.out_dim,
                                se.fc2.in_dim, se.fc2.bias);
  for (float& v : d) v = 1.0f / (1.0f + std::exp(-v));
  return d;
}

Tensor se_block(const Tensor& x, const SqueezeExcite& se) {
  if (se.fc1.in_dim != x.channels() || se.fc2.out_dim != x.channels()) {
    throw InvalidInput("se_block weights sized for " +
                       std::to_string(se.fc1.in_dim) + " channels, input has " +
                       std::to_string(x.channels()));
  }
  std::vector<float> d = se_descriptor(se, global_avg_pool(x));
  return scale_channels(x, d);
}

Tensor attention_lateral(const Tensor& encoder_feature,
                         const SqueezeExcite& se,
                         const std::optional<ConvParams>& projection,
                         const Tensor& decoder_feature) {
  if (encoder_feature.height() != decoder_feature.height() ||
      encoder_feature.width() != decoder_feature.width()) {
    throw InvalidInput("attention lateral spatial mismatch: encoder " +
                       encoder_feature.shape_str() + " vs decoder " +
                       decoder_feature.shape_str());
  }
  Tensor rew = se_block(encoder_feature, se);
  if (projection) {
    rew = conv2d(rew, *projection, PaddingSpec::zero(0, 0, 0, 0));
  }
  return add(rew, decoder_feature);
}

namespace {

Tensor bn_apply(const Tensor& x, const BatchNormParams& bn) {
  return batchnorm_inference(x, bn.scale, bn.shift, bn.running_mean,
                             bn.running_var);
}

/// Band averages from completed sums; the partition is the pool_bands one.
Tensor bands_to_tensor(const BandSums& total, int channels, int height) {
  Tensor pooled(channels, total.bands, 1);
  for (int c = 0; c < channels; ++c) {
    for (int i = 0; i < total.bands; ++i) {
      const int y0 = (i * height) / total.bands;
      const int y1 = ((i + 1) * height + total.bands - 1) / total.bands;
      const float n = static_cast<float>((y1 - y0) * total.columns);
      pooled.at(c, i, 0) =
          total.sums[static_cast<std::size_t>(c) * total.bands + i] / n;
    }
  }
  return pooled;
}

void record_strips(EncoderState& st, const PaddedLayerGeom& g) {
  BoundaryStrips bs;
  const int w = st.cur.width();
  bs.left = st.cur.slice_cols(0, g.pad_right);
  bs.right = st.cur.slice_cols(w - g.pad_left, w);
  st.strips.push_back(std::move(bs));
}

}  // namespace

Tensor spp_forward(const Tensor& x, const SppParams& spp,
                   const std::vector<int>& levels) {
  if (levels.size() != spp.level_convs.size()) {
    throw InvalidInput("spp level count does not match its convolutions");
  }
  std::vector<Tensor> parts;
  parts.reserve(levels.size() + 1);
  parts.push_back(x);
  for (std::size_t li = 0; li < levels.size(); ++li) {
    Tensor pooled = pool_bands(x, levels[li]);
    Tensor b = relu(
        conv2d(pooled, spp.level_convs[li], PaddingSpec::zero(0, 0, 0, 0)));
    parts.push_back(bilinear_upsample(b, x.height(), x.width()));
  }
  Tensor fused = relu(
      conv2d(concat_channels(parts), spp.fuse, PaddingSpec::zero(0, 0, 0, 0)));
  return se_block(fused, spp.se);
}

EncoderOutput EncoderState::finish() && {
  EncoderOutput out;
  out.stage_features = std::move(laterals);
  out.spp_feature = std::move(cur);
  out.boundary_strips = std::move(strips);
  return out;
}

std::vector<FeatureStep> build_feature_program(const Network& net) {
  std::vector<FeatureStep> steps;
  const auto plan = feature_padded_layers(net.def);
  int pad_i = 0;

  auto pad_step = [&steps, &plan, &pad_i]() -> FeatureStep& {
    FeatureStep s;
    s.sync = StepSync::kPad;
    s.pad_index = pad_i;
    s.geom = plan[pad_i];
    ++pad_i;
    steps.push_back(std::move(s));
    return steps.back();
  };

  {
    FeatureStep& s = pad_step();
    const PaddedLayerGeom geom = s.geom;
    s.apply = [&net, geom](EncoderState& st, const PaddingSpec* spec,
                           const BandSums*, const ChannelSums*) {
      record_strips(st, geom);
      st.cur = relu(bn_apply(conv2d(st.cur, net.stem_conv, *spec), net.stem_bn));
    };
  }
  {
    FeatureStep& s = pad_step();
    const PaddedLayerGeom geom = s.geom;
    s.apply = [geom](EncoderState& st, const PaddingSpec* spec,
                     const BandSums*, const ChannelSums*) {
      record_strips(st, geom);
      st.cur = maxpool2d(st.cur, geom.kernel, geom.stride, *spec);
    };
  }

  for (int stage = 0; stage < 4; ++stage) {
    for (int block = 0; block < 2; ++block) {
      const BasicBlock& blk = net.stages[stage][block];
      {
        FeatureStep& s = pad_step();
        const PaddedLayerGeom geom = s.geom;
        s.apply = [&blk, geom](EncoderState& st, const PaddingSpec* spec,
                               const BandSums*, const ChannelSums*) {
          st.block_input = st.cur;
          record_strips(st, geom);
          st.cur = relu(bn_apply(conv2d(st.cur, blk.conv1, *spec), blk.bn1));
        };
      }
      {
        FeatureStep& s = pad_step();
        const PaddedLayerGeom geom = s.geom;
        const bool capture = block == 1 && stage < 3;
        const int lateral_slot = stage;
        s.apply = [&blk, geom, capture, lateral_slot](
                      EncoderState& st, const PaddingSpec* spec,
                      const BandSums*, const ChannelSums*) {
          record_strips(st, geom);
          Tensor t = bn_apply(conv2d(st.cur, blk.conv2, *spec), blk.bn2);
          Tensor sc =
              blk.shortcut_conv
                  ? bn_apply(conv2d(st.block_input, *blk.shortcut_conv,
                                    PaddingSpec::zero(0, 0, 0, 0)),
                             *blk.shortcut_bn)
                  : st.block_input;
          st.cur = relu(add(t, sc));
          if (capture) st.laterals[lateral_slot] = st.cur;
        };
      }
    }
  }

  for (std::size_t li = 0; li < net.def.spp_grid_levels.size(); ++li) {
    FeatureStep s;
    s.sync = StepSync::kBands;
    s.bands = net.def.spp_grid_levels[li];
    const int g = s.bands;
    s.bands_partial = [g](const EncoderState& st) {
      return band_partial_sums(st.cur, g);
    };
    s.apply = [&net, li](EncoderState& st, const PaddingSpec*,
                         const BandSums* total, const ChannelSums*) {
      Tensor pooled = bands_to_tensor(*total, st.cur.channels(),
                                      st.cur.height());
      Tensor b = relu(conv2d(pooled, net.spp.level_convs[li],
                             PaddingSpec::zero(0, 0, 0, 0)));
      st.spp_parts.push_back(
          bilinear_upsample(b, st.cur.height(), st.cur.width()));
    };
    steps.push_back(std::move(s));
  }
  {
    FeatureStep s;
    s.apply = [&net](EncoderState& st, const PaddingSpec*, const BandSums*,
                     const ChannelSums*) {
      std::vector<Tensor> parts;
      parts.reserve(1 + st.spp_parts.size());
      parts.push_back(std::move(st.cur));
      for (Tensor& t : st.spp_parts) parts.push_back(std::move(t));
      st.spp_parts.clear();
      st.cur = relu(conv2d(concat_channels(parts), net.spp.fuse,
                           PaddingSpec::zero(0, 0, 0, 0)));
    };
    steps.push_back(std::move(s));
  }
  {
    FeatureStep s;
    s.sync = StepSync::kChannels;
    s.channels_partial = [](const EncoderState& st) {
      return channel_partial_sums(st.cur);
    };
    s.apply = [&net](EncoderState& st, const PaddingSpec*, const BandSums*,
                     const ChannelSums* total) {
      std::vector<float> pooled(total->sums.size());
      for (std::size_t c = 0; c < pooled.size(); ++c) {
        pooled[c] = total->sums[c] / static_cast<float>(total->count);
      }
      std::vector<float> d = se_descriptor(net.spp.se, pooled);
      st.cur = scale_channels(st.cur, d);
    };
    steps.push_back(std::move(s));
  }
  return steps;
}

PaddingSpec structural_pad_spec(PadMode mode, const PaddedLayerGeom& geom) {
  // Square kernels with equal strides: the vertical structural amounts equal
  // the horizontal ones, and vertical padding is always zero-filled.
  if (mode == PadMode::kZero) {
    return PaddingSpec::zero(geom.pad_left, geom.pad_right, geom.pad_left,
                             geom.pad_right);
  }
  if (mode == PadMode::kRing) {
    return PaddingSpec::ring(geom.pad_left, geom.pad_right, geom.pad_left,
                             geom.pad_right);
  }
  throw InvalidInput("structural_pad_spec handles ring and zero modes only");
}

namespace {

PaddingSpec self_pad_spec(PadMode mode, const PaddedLayerGeom& geom,
                          const NeighborBuffers& neighbors, int pad_index) {
  if (mode == PadMode::kNeighbor) {
    if (!neighbors) {
      throw InvalidInput("neighbor padding requested without buffers for '" +
                         geom.name + "'");
    }
    auto [left, right] = neighbors(pad_index, geom);
    return PaddingSpec::neighbor(geom.pad_left, geom.pad_right, geom.pad_left,
                                 geom.pad_right, std::move(left),
                                 std::move(right));
  }
  return structural_pad_spec(mode, geom);
}

}  // namespace

EncoderOutput feature_forward(const Network& net, const Tensor& segment,
                              PadMode mode, const NeighborBuffers& neighbors) {
  if (segment.width() % 32 != 0 || segment.width() == 0) {
    throw InvalidInput("segment width " + std::to_string(segment.width()) +
                       " must be a positive multiple of 32");
  }
  if (segment.height() % 32 != 0 || segment.height() == 0) {
    throw InvalidInput("segment height " + std::to_string(segment.height()) +
                       " must be a positive multiple of 32");
  }
  if (segment.channels() != net.def.input_channels) {
    throw InvalidInput("segment has " + std::to_string(segment.channels()) +
                       " channels, network expects " +
                       std::to_string(net.def.input_channels));
  }
  auto program = build_feature_program(net);
  EncoderState st;
  st.cur = segment;
  for (const FeatureStep& step : program) {
    switch (step.sync) {
      case StepSync::kNone:
        step.apply(st, nullptr, nullptr, nullptr);
        break;
      case StepSync::kPad: {
        PaddingSpec spec =
            self_pad_spec(mode, step.geom, neighbors, step.pad_index);
        step.apply(st, &spec, nullptr, nullptr);
        break;
      }
      case StepSync::kBands: {
        BandSums partial = step.bands_partial(st);
        step.apply(st, nullptr, &partial, nullptr);
        break;
      }
      case StepSync::kChannels: {
        ChannelSums partial = step.channels_partial(st);
        step.apply(st, nullptr, nullptr, &partial);
        break;
      }
    }
  }
  return std::move(st).finish();
}

Tensor fusion_forward(const Network& net, const EncoderOutput& fused,
                      PadMode mode) {
  if (mode == PadMode::kNeighbor) {
    throw InvalidInput("fusion model runs at full width: use ring or zero");
  }
  const Tensor& spp = fused.spp_feature;
  if (spp.channels() != net.def.decoder_width) {
    throw InvalidInput("fused spp feature has " +
                       std::to_string(spp.channels()) +
                       " channels, expected decoder width " +
                       std::to_string(net.def.decoder_width));
  }
  for (int i = 0; i < 3; ++i) {
    const Tensor& lat = fused.stage_features[i];
    const int scale = 8 >> i;  // stride 4, 8, 16 vs spp stride 32
    if (lat.width() != spp.width() * scale ||
        lat.height() != spp.height() * scale) {
      throw InvalidInput("lateral " + std::to_string(i) + " is " +
                         lat.shape_str() + ", inconsistent with spp " +
                         spp.shape_str());
    }
    if (lat.channels() != net.def.encoder_stage_channels[1 + i]) {
      throw InvalidInput("lateral " + std::to_string(i) +
                         " channel count mismatch");
    }
  }

  const WrapMode wm =
      mode == PadMode::kRing ? WrapMode::kWrap : WrapMode::kClamp;
  Tensor d = spp;
  for (int k = 0; k < 3; ++k) {
    d = bilinear_upsample(d, d.height() * 2, d.width() * 2, wm);
    const Tensor& lat = fused.stage_features[2 - k];
    d = attention_lateral(lat, net.decoder[k].se, net.decoder[k].proj, d);
    PaddingSpec spec = mode == PadMode::kRing ? PaddingSpec::ring(1, 1, 1, 1)
                                              : PaddingSpec::zero(1, 1, 1, 1);
    d = relu(bn_apply(conv2d(d, net.decoder[k].conv, spec), net.decoder[k].bn));
  }
  Tensor logits = conv2d(d, net.head, PaddingSpec::zero(0, 0, 0, 0));
  return bilinear_upsample(logits, logits.height() * 4, logits.width() * 4,
                           wm);
}

}  // namespace dspass
