#pragma once

#include <optional>
#include <vector>

#include "dspass/segmentation_map.hpp"
#include "dspass/swaftnet.hpp"
#include "dspass/tensor.hpp"

namespace dspass {

/// How the panorama is cut into segments for the per-segment feature models.
struct SegmentPlan {
  int num_segments = 4;
  /// Extra columns taken circularly from each side of every segment.
  int overlap = 0;
  /// Optional per-segment resize (width, height) before the feature model.
  /// Resampling breaks the exact-equivalence property; results are flagged
  /// approximate.
  std::optional<std::pair<int, int>> resize_to;

  /// Validates against a panorama width: num_segments >= 1, width divisible
  /// by num_segments, (resized) segment width divisible by 32, overlap <
  /// segment width.
  void validate(int panorama_width) const;

  int segment_width(int panorama_width) const {
    return panorama_width / num_segments;
  }
};

/// One strip-exchange point: a horizontally padded feature-model layer.
/// Segment i's left padding comes from segment (i-1+N)%N and its right
/// padding from (i+1)%N; the cyclic wrap realizes the ring.
struct ExchangePoint {
  PaddedLayerGeom geom;
  int pad_index = 0;
};

/// One reduction-sync point: a horizontal pooling whose sums must be
/// completed across all segments for segment-wise evaluation to match the
/// full-width computation.
struct ReducePoint {
  enum class Kind { kBands, kChannels } kind = Kind::kBands;
  int bands = 0;  ///< for kBands
};

/// Every synchronization the lockstep schedule performs, derived from the
/// network definition.
struct ExchangePlan {
  std::vector<ExchangePoint> strips;
  std::vector<ReducePoint> reductions;

  static ExchangePlan from_def(const NetworkDef& def);
};

/// Cuts the panorama into num_segments equal parts covering it contiguously,
/// plus `overlap` circular columns on each side, optionally resized.
std::vector<Raster> partition(const Raster& panorama, const SegmentPlan& plan);

/// Reassembles partition() output; exact inverse when overlap is 0 and no
/// resize is configured.
Raster reassemble(const std::vector<Raster>& segments, const SegmentPlan& plan,
                  int panorama_width);

/// End-to-end single-segment inference over the whole panorama: one
/// feature_forward + fusion_forward with the given padding mode. With ring
/// padding this is the reference the adapted path must reproduce.
Tensor full_pass(const Network& net, const Raster& panorama, PadMode mode);

struct AdaptedResult {
  Tensor logits;
  SegmentationMap segmentation;
  /// False when resize_to is active: resampling breaks the exact
  /// segment/full-pass equivalence.
  bool exact = true;
};

/// Segment-wise inference: per-segment feature models advance in lockstep,
/// exchanging boundary strips at every padded layer (mode kNeighbor) or
/// padding self-contained (kZero / kRing ablations), with pooling reductions
/// completed across segments; the fused full-width features then run through
/// the fusion model with ring padding. Segments run on min(num_threads, N)
/// workers; any schedule produces bit-identical results.
AdaptedResult run_adapted_full(const Network& net, const Raster& panorama,
                               const SegmentPlan& plan,
                               PadMode segment_padding = PadMode::kNeighbor);

/// run_adapted_full reduced to the class-id map.
SegmentationMap run_adapted(const Network& net, const Raster& panorama,
                            const SegmentPlan& plan,
                            PadMode segment_padding = PadMode::kNeighbor);

/// Per-column max-abs difference profile between two logit tensors.
std::vector<float> seam_report(const Tensor& logits_a, const Tensor& logits_b);

}  // namespace dspass
