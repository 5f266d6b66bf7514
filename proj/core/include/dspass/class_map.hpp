#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dspass/segmentation_map.hpp"

namespace dspass {

struct ClassEntry {
  int id = 0;
  std::string name;
  std::array<std::uint8_t, 3> color{0, 0, 0};
  std::optional<int> eval_id;
};

/// Class table with optional training-id to evaluation-id remapping. When
/// any entry carries an eval_id the table is in remap mode: entries without
/// one map to the ignore id. Evaluation ids must be dense 0..K-1.
class ClassMap {
 public:
  explicit ClassMap(std::vector<ClassEntry> entries,
                    int ignore_id = kIgnoreId);

  static ClassMap load_json(const std::string& path);

  int ignore_id() const { return ignore_id_; }
  bool has_remap() const { return has_remap_; }
  /// Number of evaluation classes K.
  int num_eval_classes() const { return num_eval_; }

  const std::vector<ClassEntry>& entries() const { return entries_; }
  const ClassEntry& entry_for_id(int id) const;

  /// Evaluation id for a raw label id: ignore passes through; in remap mode
  /// entries without eval_id produce ignore; unknown ids throw.
  int remap(int id) const;

  /// Applies remap() to every pixel.
  SegmentationMap remap_map(const SegmentationMap& seg) const;

  /// Name/color of evaluation class k (taken from the entry whose id == k).
  const ClassEntry& eval_entry(int k) const;

  /// Entry id matching an RGB color, if the palette is injective.
  std::optional<int> id_for_color(std::uint8_t r, std::uint8_t g,
                                  std::uint8_t b) const;

 private:
  std::vector<ClassEntry> entries_;
  int ignore_id_;
  bool has_remap_ = false;
  int num_eval_ = 0;
  std::vector<int> eval_ids_;  ///< dense 0..K-1
};

}  // namespace dspass
