#include "dspass/pipeline_config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "dspass/error.hpp"

namespace dspass {

PadMode pad_mode_from_string(const std::string& s) {
  if (s == "zero") return PadMode::kZero;
  if (s == "ring") return PadMode::kRing;
  if (s == "neighbor") return PadMode::kNeighbor;
  throw InvalidInput("unknown padding mode '" + s +
                     "' (expected zero, ring or neighbor)");
}

PipelineConfig PipelineConfig::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config JSON parse failure in " + path + ": " + e.what(),
                      0);
  }

  static const std::set<std::string> known{
      "version",      "camera_model", "weights",    "seed",
      "network",      "num_segments", "overlap",    "padding_mode",
      "resize_to",    "split_point",  "class_map",  "output_dir"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw InvalidInput("unknown config key '" + it.key() + "' in " + path);
    }
  }

  PipelineConfig cfg;
  try {
    if (j.contains("camera_model")) {
      cfg.camera_model_path = j["camera_model"].get<std::string>();
    }
    if (j.contains("weights")) {
      cfg.weight_path = j["weights"].get<std::string>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint32_t>();
    if (j.contains("network")) {
      const auto& n = j["network"];
      static const std::set<std::string> net_keys{
          "num_classes", "decoder_width", "se_reduction", "spp_grid_levels",
          "encoder_stage_channels"};
      for (auto it = n.begin(); it != n.end(); ++it) {
        if (!net_keys.count(it.key())) {
          throw InvalidInput("unknown network key '" + it.key() + "' in " +
                             path);
        }
      }
      if (n.contains("num_classes")) {
        cfg.network.num_classes = n["num_classes"].get<int>();
      }
      if (n.contains("decoder_width")) {
        cfg.network.decoder_width = n["decoder_width"].get<int>();
      }
      if (n.contains("se_reduction")) {
        cfg.network.se_reduction = n["se_reduction"].get<int>();
      }
      if (n.contains("spp_grid_levels")) {
        cfg.network.spp_grid_levels =
            n["spp_grid_levels"].get<std::vector<int>>();
      }
      if (n.contains("encoder_stage_channels")) {
        cfg.network.encoder_stage_channels =
            n["encoder_stage_channels"].get<std::vector<int>>();
      }
    }
    if (j.contains("num_segments")) {
      cfg.segments.num_segments = j["num_segments"].get<int>();
    }
    if (j.contains("overlap")) cfg.segments.overlap = j["overlap"].get<int>();
    if (j.contains("resize_to")) {
      auto arr = j["resize_to"];
      if (!arr.is_array() || arr.size() != 2) {
        throw InvalidInput("resize_to must be [width, height] in " + path);
      }
      cfg.segments.resize_to = {arr[0].get<int>(), arr[1].get<int>()};
    }
    if (j.contains("padding_mode")) {
      cfg.padding_mode = pad_mode_from_string(j["padding_mode"].get<std::string>());
    }
    if (j.contains("split_point")) {
      if (j["split_point"].get<std::string>() != "after_spp") {
        throw InvalidInput("split_point supports only 'after_spp'");
      }
    }
    if (j.contains("class_map")) {
      cfg.class_map_path = j["class_map"].get<std::string>();
    }
    if (j.contains("output_dir")) {
      cfg.output_dir = j["output_dir"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("mistyped config field in " + path + ": " + e.what());
  }
  return cfg;
}

void PipelineConfig::validate() const {
  network.validate();
  if (weight_path && seed) {
    throw InvalidInput("config provides both weights and seed; they are "
                       "mutually exclusive");
  }
  if (!weight_path && !seed) {
    throw InvalidInput("config must provide either weights or seed");
  }
  auto must_exist = [](const std::optional<std::string>& p,
                       const char* what) {
    if (p && !std::filesystem::exists(*p)) {
      throw InvalidInput(std::string(what) + " does not exist: " + *p);
    }
  };
  must_exist(camera_model_path, "camera model file");
  must_exist(weight_path, "weight file");
  must_exist(class_map_path, "class map file");
}

}  // namespace dspass
