#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dspass/adaptation.hpp"
#include "dspass/network_def.hpp"
#include "dspass/padding.hpp"

namespace dspass {

/// Inference pipeline configuration (JSON file; CLI flags override fields).
/// weight_path and seed are mutually exclusive.
struct PipelineConfig {
  std::optional<std::string> camera_model_path;
  std::optional<std::string> weight_path;
  std::optional<std::uint32_t> seed;
  NetworkDef network;
  SegmentPlan segments;
  PadMode padding_mode = PadMode::kNeighbor;
  std::optional<std::string> class_map_path;
  std::optional<std::string> output_dir;

  /// Parses the JSON file. Unknown keys are rejected so typos fail loudly.
  static PipelineConfig load_json(const std::string& path);

  /// Checks mutual exclusivity and that referenced files exist.
  void validate() const;
};

PadMode pad_mode_from_string(const std::string& s);

}  // namespace dspass
