#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dspass/class_map.hpp"
#include "dspass/segmentation_map.hpp"
#include "dspass/tensor.hpp"

namespace dspass {

/// K x K integer counts; rows index ground truth, columns prediction.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const { return k_; }
  std::uint64_t at(int gt, int pred) const {
    return counts_[static_cast<std::size_t>(gt) * k_ + pred];
  }
  std::uint64_t& at(int gt, int pred) {
    return counts_[static_cast<std::size_t>(gt) * k_ + pred];
  }
  std::uint64_t total() const;
  /// Pixels whose ground truth was valid but whose prediction was the
  /// ignore id (or unmappable); they cannot be stored in the K x K counts.
  std::uint64_t pred_ignored() const { return pred_ignored_; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;

  friend void accumulate_into(ConfusionMatrix& cm, const SegmentationMap& pred,
                              const SegmentationMap& gt, int ignore_id);

 private:
  int k_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t pred_ignored_ = 0;
};

/// Adds one image pair's pixel counts: cm[gt][pred] per pixel with
/// gt != ignore_id. Ignore ground-truth pixels are skipped; out-of-range ids
/// throw.
void accumulate_into(ConfusionMatrix& cm, const SegmentationMap& pred,
                     const SegmentationMap& gt, int ignore_id = kIgnoreId);
ConfusionMatrix accumulate(ConfusionMatrix cm, const SegmentationMap& pred,
                           const SegmentationMap& gt,
                           int ignore_id = kIgnoreId);

/// Intersection over union for class c: diag / (row + col - diag). Empty
/// denominator means the class is undefined and returns nullopt.
std::optional<double> iou(const ConfusionMatrix& cm, int c);

/// Mean IoU over a class subset (all classes when empty). Classes with an
/// undefined IoU are excluded from the mean; throws when nothing remains.
double miou(const ConfusionMatrix& cm, const std::vector<int>& subset = {});

/// Loads an RGB image and its single-channel label raster, applying the
/// class map's evaluation remap to the labels.
std::pair<Raster, SegmentationMap> load_pair(const std::string& image_path,
                                             const std::string& label_path,
                                             const ClassMap& class_map);

/// Colors a class-id map with the class palette; ignore renders black.
Raster render(const SegmentationMap& seg, const ClassMap& class_map);

struct ClassReport {
  int id = 0;
  std::string name;
  std::optional<double> iou;
  std::uint64_t tp = 0, fp = 0, fn = 0;
};

struct EvalReport {
  std::vector<ClassReport> classes;
  std::optional<double> miou;
  std::uint64_t scored_pixels = 0;
  std::uint64_t pred_ignored = 0;
};

EvalReport make_report(const ConfusionMatrix& cm, const ClassMap& class_map);
void write_report_json(const EvalReport& report, const std::string& path);
void write_report_csv(const EvalReport& report, const std::string& path);

}  // namespace dspass
