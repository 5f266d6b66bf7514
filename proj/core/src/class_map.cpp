#include "dspass/class_map.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "dspass/error.hpp"

namespace dspass {

ClassMap::ClassMap(std::vector<ClassEntry> entries, int ignore_id)
    : entries_(std::move(entries)), ignore_id_(ignore_id) {
  if (entries_.empty()) throw InvalidInput("class map has no entries");
  std::set<int> ids;
  std::set<int> eval_targets;
  for (const ClassEntry& e : entries_) {
    if (e.id < 0 || e.id > 255 || e.id == ignore_id_) {
      throw InvalidInput("class id " + std::to_string(e.id) +
                         " out of range or equal to the ignore id");
    }
    if (!ids.insert(e.id).second) {
      throw InvalidInput("duplicate class id " + std::to_string(e.id));
    }
    if (e.eval_id) {
      has_remap_ = true;
      if (*e.eval_id == ignore_id_) {
        throw InvalidInput("eval_id may not be the ignore id");
      }
      eval_targets.insert(*e.eval_id);
    }
  }
  if (has_remap_) {
    for (int t : eval_targets) {
      if (!ids.count(t)) {
        throw InvalidInput("remap target " + std::to_string(t) +
                           " is not a class id");
      }
    }
    eval_ids_.assign(eval_targets.begin(), eval_targets.end());
  } else {
    eval_ids_.assign(ids.begin(), ids.end());
  }
  num_eval_ = static_cast<int>(eval_ids_.size());
  for (int k = 0; k < num_eval_; ++k) {
    if (eval_ids_[k] != k) {
      throw InvalidInput(
          "evaluation class ids must be dense 0..K-1; found gap at " +
          std::to_string(eval_ids_[k]));
    }
  }
}

ClassMap ClassMap::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open class map file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("class map JSON parse failure in " + path + ": " +
                          e.what(),
                      0);
  }
  if (!j.is_array()) {
    throw InvalidInput("class map file must be a JSON array: " + path);
  }
  std::vector<ClassEntry> entries;
  for (const auto& item : j) {
    ClassEntry e;
    try {
      e.id = item.at("id").get<int>();
      e.name = item.at("name").get<std::string>();
      auto col = item.at("color");
      if (!col.is_array() || col.size() != 3) {
        throw InvalidInput("class '" + e.name + "' color must be [r,g,b]");
      }
      for (int c = 0; c < 3; ++c) {
        e.color[c] = static_cast<std::uint8_t>(col[c].get<int>());
      }
      if (item.contains("eval_id") && !item["eval_id"].is_null()) {
        e.eval_id = item["eval_id"].get<int>();
      }
    } catch (const nlohmann::json::exception& ex) {
      throw InvalidInput("malformed class map entry in " + path + ": " +
                         ex.what());
    }
    entries.push_back(std::move(e));
  }
  return ClassMap(std::move(entries));
}

const ClassEntry& ClassMap::entry_for_id(int id) const {
  for (const ClassEntry& e : entries_) {
    if (e.id == id) return e;
  }
  throw InvalidInput("unknown class id " + std::to_string(id));
}

int ClassMap::remap(int id) const {
  if (id == ignore_id_) return ignore_id_;
  const ClassEntry& e = entry_for_id(id);
  if (!has_remap_) return e.id;
  return e.eval_id.value_or(ignore_id_);
}

SegmentationMap ClassMap::remap_map(const SegmentationMap& seg) const {
  // Dense lookup table; unknown ids fail loudly.
  std::array<int, 256> lut;
  lut.fill(-1);
  lut[ignore_id_] = ignore_id_;
  for (const ClassEntry& e : entries_) {
    lut[e.id] = has_remap_ ? e.eval_id.value_or(ignore_id_) : e.id;
  }
  SegmentationMap out(seg.height(), seg.width());
  for (int y = 0; y < seg.height(); ++y) {
    for (int x = 0; x < seg.width(); ++x) {
      int v = lut[seg.at(y, x)];
      if (v < 0) {
        throw InvalidInput("label raster contains unknown class id " +
                           std::to_string(seg.at(y, x)));
      }
      out.at(y, x) = static_cast<std::uint8_t>(v);
    }
  }
  return out;
}

const ClassEntry& ClassMap::eval_entry(int k) const {
  if (k < 0 || k >= num_eval_) {
    throw InvalidInput("evaluation class index out of range");
  }
  return entry_for_id(eval_ids_[k]);
}

std::optional<int> ClassMap::id_for_color(std::uint8_t r, std::uint8_t g,
                                          std::uint8_t b) const {
  for (const ClassEntry& e : entries_) {
    if (e.color[0] == r && e.color[1] == g && e.color[2] == b) return e.id;
  }
  return std::nullopt;
}

}  // namespace dspass
