#include "dspass/adaptation.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <thread>

#include "dspass/error.hpp"
#include "dspass/parallel.hpp"

namespace dspass {

void SegmentPlan::validate(int panorama_width) const {
  if (num_segments < 1) throw InvalidInput("num_segments must be >= 1");
  if (panorama_width <= 0 || panorama_width % num_segments != 0) {
    throw InvalidInput("panorama width " + std::to_string(panorama_width) +
                       " is not divisible by " + std::to_string(num_segments) +
                       " segments");
  }
  const int seg_w = panorama_width / num_segments;
  if (overlap < 0 || overlap >= seg_w) {
    throw InvalidInput("overlap must lie in [0, segment_width)");
  }
  int fed_w = seg_w + 2 * overlap;
  if (resize_to) {
    if (resize_to->first < 32 || resize_to->second < 32) {
      throw InvalidInput("resize_to dimensions must be >= 32");
    }
    fed_w = resize_to->first;
    if (resize_to->second % 32 != 0) {
      throw InvalidInput("resized segment height must be divisible by 32");
    }
  }
  if (fed_w % 32 != 0) {
    throw InvalidInput("segment width fed to the feature model (" +
                       std::to_string(fed_w) + ") must be divisible by 32");
  }
}

ExchangePlan ExchangePlan::from_def(const NetworkDef& def) {
  ExchangePlan plan;
  auto layers = feature_padded_layers(def);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    plan.strips.push_back({layers[i], static_cast<int>(i)});
  }
  for (int g : def.spp_grid_levels) {
    plan.reductions.push_back({ReducePoint::Kind::kBands, g});
  }
  plan.reductions.push_back({ReducePoint::Kind::kChannels, 0});
  return plan;
}

std::vector<Raster> partition(const Raster& panorama, const SegmentPlan& plan) {
  plan.validate(panorama.width());
  const int seg_w = plan.segment_width(panorama.width());
  std::vector<Raster> out;
  out.reserve(plan.num_segments);
  for (int i = 0; i < plan.num_segments; ++i) {
    Raster seg = plan.overlap == 0
                     ? panorama.slice_cols(i * seg_w, (i + 1) * seg_w)
                     : panorama.slice_cols_circular(i * seg_w - plan.overlap,
                                                    seg_w + 2 * plan.overlap);
    if (plan.resize_to) {
      seg = bilinear_upsample(seg, plan.resize_to->second,
                              plan.resize_to->first);
    }
    out.push_back(std::move(seg));
  }
  return out;
}

Raster reassemble(const std::vector<Raster>& segments, const SegmentPlan& plan,
                  int panorama_width) {
  plan.validate(panorama_width);
  if (plan.overlap != 0 || plan.resize_to) {
    throw InvalidInput(
        "reassemble is exact only for overlap 0 without resizing");
  }
  if (static_cast<int>(segments.size()) != plan.num_segments) {
    throw InvalidInput("segment count does not match the plan");
  }
  return concat_width(segments);
}

Tensor full_pass(const Network& net, const Raster& panorama, PadMode mode) {
  if (mode != PadMode::kZero && mode != PadMode::kRing) {
    throw InvalidInput("full_pass supports zero or ring padding");
  }
  EncoderOutput enc = feature_forward(net, panorama, mode);
  return fusion_forward(net, enc, mode);
}

namespace {

BandSums combine_bands(const std::vector<BandSums>& parts) {
  BandSums total = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) {
    total.columns += parts[k].columns;
    for (std::size_t j = 0; j < total.sums.size(); ++j) {
      total.sums[j] += parts[k].sums[j];
    }
  }
  return total;
}

ChannelSums combine_channels(const std::vector<ChannelSums>& parts) {
  ChannelSums total = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) {
    total.count += parts[k].count;
    for (std::size_t j = 0; j < total.sums.size(); ++j) {
      total.sums[j] += parts[k].sums[j];
    }
  }
  return total;
}

struct LockstepShared {
  std::vector<EncoderState> states;
  std::vector<PaddingSpec> pad_specs;
  std::vector<BandSums> band_partials;
  std::vector<ChannelSums> chan_partials;
};

/// Runs the feature program over all segments in layer-lockstep. Each step
/// has a read-only gather phase (padding buffers are copied out of neighbor
/// states, reduction partials published) and a write phase that only touches
/// the worker's own segments; partials combine in segment order, so any
/// worker count produces bit-identical states.
///
/// Callers must validate the plan and panorama before entering: the barrier
/// schedule has no abort path, so worker bodies must not throw.
void run_lockstep(const Network& net, const SegmentPlan& plan,
                  PadMode segment_padding, int core_width,
                  LockstepShared& sh) {
  const auto program = build_feature_program(net);
  const int n = static_cast<int>(sh.states.size());
  sh.pad_specs.resize(n);
  sh.band_partials.resize(n);
  sh.chan_partials.resize(n);

  const int workers = std::max(1, std::min(num_threads(), n));
  std::barrier sync(workers);

  auto gather = [&](const FeatureStep& step, int i) {
    switch (step.sync) {
      case StepSync::kPad: {
        if (segment_padding == PadMode::kNeighbor) {
          const PaddedLayerGeom& g = step.geom;
          const int s = g.input_stride;
          const int core_cols = core_width / s;
          const int off = plan.resize_to ? 0 : (2 * plan.overlap) / s;
          const Tensor& left = sh.states[(i + n - 1) % n].cur;
          const Tensor& right = sh.states[(i + 1) % n].cur;
          sh.pad_specs[i] = PaddingSpec::neighbor(
              g.pad_left, g.pad_right, g.pad_left, g.pad_right,
              left.slice_cols(core_cols - g.pad_left, core_cols),
              right.slice_cols(off, off + g.pad_right));
        } else {
          sh.pad_specs[i] = structural_pad_spec(segment_padding, step.geom);
        }
        break;
      }
      case StepSync::kBands:
        sh.band_partials[i] = step.bands_partial(sh.states[i]);
        break;
      case StepSync::kChannels:
        sh.chan_partials[i] = step.channels_partial(sh.states[i]);
        break;
      case StepSync::kNone:
        break;
    }
  };

  auto worker_main = [&](int begin, int end) {
    WorkerScope scope;
    for (const FeatureStep& step : program) {
      for (int i = begin; i < end; ++i) gather(step, i);
      sync.arrive_and_wait();
      BandSums band_total;
      ChannelSums chan_total;
      if (step.sync == StepSync::kBands) {
        band_total = combine_bands(sh.band_partials);
      } else if (step.sync == StepSync::kChannels) {
        chan_total = combine_channels(sh.chan_partials);
      }
      for (int i = begin; i < end; ++i) {
        switch (step.sync) {
          case StepSync::kNone:
            step.apply(sh.states[i], nullptr, nullptr, nullptr);
            break;
          case StepSync::kPad:
            step.apply(sh.states[i], &sh.pad_specs[i], nullptr, nullptr);
            break;
          case StepSync::kBands:
            step.apply(sh.states[i], nullptr, &band_total, nullptr);
            break;
          case StepSync::kChannels:
            step.apply(sh.states[i], nullptr, nullptr, &chan_total);
            break;
        }
      }
      sync.arrive_and_wait();
    }
  };

  if (workers == 1) {
    worker_main(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = n / workers, rem = n % workers;
  int begin = 0;
  std::vector<std::pair<int, int>> blocks;
  for (int w = 0; w < workers; ++w) {
    int len = chunk + (w < rem ? 1 : 0);
    blocks.emplace_back(begin, begin + len);
    begin += len;
  }
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(worker_main, blocks[w].first, blocks[w].second);
  }
  worker_main(blocks[0].first, blocks[0].second);
  for (auto& t : pool) t.join();
}

/// Scatter per-segment feature maps back onto the panorama grid at one
/// stride; columns covered by two segments (overlap) merge by elementwise
/// max.
Tensor fuse_stride(std::vector<Tensor> parts, const SegmentPlan& plan,
                   int panorama_width, int panorama_height, int stride) {
  const int n = static_cast<int>(parts.size());
  const int seg_w = plan.segment_width(panorama_width);
  const int want_w = (seg_w + 2 * plan.overlap) / stride;
  const int want_h = panorama_height / stride;
  for (Tensor& t : parts) {
    if (t.width() != want_w || t.height() != want_h) {
      // resize_to mode: map features back to the unresized grid
      t = bilinear_upsample(t, want_h, want_w);
    }
  }
  if (plan.overlap == 0) {
    return concat_width(parts);
  }
  const int full_w = panorama_width / stride;
  const int ov = plan.overlap / stride;
  const int c = parts[0].channels();
  Tensor full(c, want_h, full_w);
  std::vector<std::uint8_t> covered(full_w, 0);
  for (int i = 0; i < n; ++i) {
    const Tensor& t = parts[i];
    const int start = i * (seg_w / stride) - ov;
    for (int f = 0; f < t.width(); ++f) {
      int p = ((start + f) % full_w + full_w) % full_w;
      if (covered[p]) {
        for (int ch = 0; ch < c; ++ch) {
          for (int y = 0; y < want_h; ++y) {
            full.at(ch, y, p) = std::max(full.at(ch, y, p), t.at(ch, y, f));
          }
        }
      } else {
        for (int ch = 0; ch < c; ++ch) {
          for (int y = 0; y < want_h; ++y) {
            full.at(ch, y, p) = t.at(ch, y, f);
          }
        }
        covered[p] = 1;
      }
    }
  }
  return full;
}

}  // namespace

AdaptedResult run_adapted_full(const Network& net, const Raster& panorama,
                               const SegmentPlan& plan,
                               PadMode segment_padding) {
  plan.validate(panorama.width());
  if (panorama.channels() != net.def.input_channels) {
    throw InvalidInput("panorama has " + std::to_string(panorama.channels()) +
                       " channels, network expects " +
                       std::to_string(net.def.input_channels));
  }
  if (panorama.height() % 32 != 0 || panorama.width() % 32 != 0) {
    throw InvalidInput("panorama dimensions must be divisible by 32");
  }
  if (plan.overlap % 32 != 0) {
    throw InvalidInput(
        "run_adapted requires overlap divisible by 32 so segment features "
        "align with the panorama grid");
  }
  if (plan.resize_to && plan.overlap != 0 &&
      segment_padding == PadMode::kNeighbor) {
    throw InvalidInput(
        "neighbor padding with resize_to requires overlap 0");
  }

  std::vector<Raster> segments = partition(panorama, plan);
  const int core_width = plan.resize_to ? plan.resize_to->first
                                        : plan.segment_width(panorama.width());

  LockstepShared sh;
  sh.states.resize(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    sh.states[i].cur = std::move(segments[i]);
  }
  run_lockstep(net, plan, segment_padding, core_width, sh);

  std::vector<EncoderOutput> outs;
  outs.reserve(sh.states.size());
  for (EncoderState& st : sh.states) {
    outs.push_back(std::move(st).finish());
  }

  EncoderOutput fused;
  for (int k = 0; k < 3; ++k) {
    std::vector<Tensor> parts;
    parts.reserve(outs.size());
    for (EncoderOutput& o : outs) {
      parts.push_back(std::move(o.stage_features[k]));
    }
    fused.stage_features[k] = fuse_stride(std::move(parts), plan,
                                          panorama.width(), panorama.height(),
                                          4 << k);
  }
  {
    std::vector<Tensor> parts;
    parts.reserve(outs.size());
    for (EncoderOutput& o : outs) parts.push_back(std::move(o.spp_feature));
    fused.spp_feature = fuse_stride(std::move(parts), plan, panorama.width(),
                                    panorama.height(), 32);
  }

  AdaptedResult res;
  res.logits = fusion_forward(net, fused, PadMode::kRing);
  res.segmentation = argmax_classes(res.logits);
  res.exact = !plan.resize_to.has_value();
  return res;
}

SegmentationMap run_adapted(const Network& net, const Raster& panorama,
                            const SegmentPlan& plan, PadMode segment_padding) {
  return run_adapted_full(net, panorama, plan, segment_padding).segmentation;
}

std::vector<float> seam_report(const Tensor& logits_a,
                               const Tensor& logits_b) {
  if (!logits_a.same_shape(logits_b)) {
    throw InvalidInput("seam_report shape mismatch: " + logits_a.shape_str() +
                       " vs " + logits_b.shape_str());
  }
  std::vector<float> profile(logits_a.width(), 0.0f);
  for (int c = 0; c < logits_a.channels(); ++c) {
    for (int y = 0; y < logits_a.height(); ++y) {
      const float* ra = logits_a.row(c, y);
      const float* rb = logits_b.row(c, y);
      for (int x = 0; x < logits_a.width(); ++x) {
        profile[x] = std::max(profile[x], std::fabs(ra[x] - rb[x]));
      }
    }
  }
  return profile;
}

}  // namespace dspass
