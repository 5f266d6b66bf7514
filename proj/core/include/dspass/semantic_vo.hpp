#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dspass/segmentation_map.hpp"

namespace dspass {

/// A keypoint correspondence between frames A and B in raw annular image
/// coordinates; score is the matcher's confidence, passed through.
struct Match {
  double xa = 0.0, ya = 0.0;
  double xb = 0.0, yb = 0.0;
  double score = 0.0;

  bool operator==(const Match&) const = default;
};

/// Rejection bucket for points falling outside either frame.
inline constexpr int kOutOfFrame = -1;

struct FilterReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t rejected = 0;
  /// Rejections tallied by (label_a, label_b); out-of-bounds matches land in
  /// the (kOutOfFrame, kOutOfFrame) bucket.
  std::map<std::pair<int, int>, std::size_t> rejections;
};

/// Class id at a sub-pixel point: nearest pixel, exact halves toward the
/// lower index. Out-of-bounds points throw.
std::uint8_t label_at(const SegmentationMap& seg, double x, double y);

/// Keeps a match iff both endpoints carry the same non-ignore label in their
/// frames' (folded-back) semantic maps. Out-of-bounds endpoints reject the
/// match into a distinguished bucket rather than aborting. Order preserved.
std::pair<std::vector<Match>, FilterReport> filter_matches(
    const std::vector<Match>& matches, const SegmentationMap& seg_a,
    const SegmentationMap& seg_b, int ignore_id = kIgnoreId);

std::vector<Match> load_matches_json(const std::string& path);
void save_matches_json(const std::vector<Match>& matches,
                       const std::string& path);
void write_filter_report_json(const FilterReport& report,
                              const std::string& path);

}  // namespace dspass
