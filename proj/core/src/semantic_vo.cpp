#include "dspass/semantic_vo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dspass/annular_geometry.hpp"
#include "dspass/error.hpp"

namespace dspass {

std::uint8_t label_at(const SegmentationMap& seg, double x, double y) {
  if (!(x >= 0.0 && x <= seg.width() - 1 && y >= 0.0 && y <= seg.height() - 1)) {
    throw InvalidInput("point (" + std::to_string(x) + ", " +
                       std::to_string(y) + ") outside the " +
                       std::to_string(seg.width()) + "x" +
                       std::to_string(seg.height()) + " map");
  }
  int ix = std::clamp(nearest_index(x), 0, seg.width() - 1);
  int iy = std::clamp(nearest_index(y), 0, seg.height() - 1);
  return seg.at(iy, ix);
}

std::pair<std::vector<Match>, FilterReport> filter_matches(
    const std::vector<Match>& matches, const SegmentationMap& seg_a,
    const SegmentationMap& seg_b, int ignore_id) {
  std::vector<Match> kept;
  FilterReport rep;
  rep.total = matches.size();
  auto in_bounds = [](const SegmentationMap& s, double x, double y) {
    return x >= 0.0 && x <= s.width() - 1 && y >= 0.0 && y <= s.height() - 1;
  };
  for (const Match& m : matches) {
    if (!in_bounds(seg_a, m.xa, m.ya) || !in_bounds(seg_b, m.xb, m.yb)) {
      ++rep.rejected;
      ++rep.rejections[{kOutOfFrame, kOutOfFrame}];
      continue;
    }
    const int la = label_at(seg_a, m.xa, m.ya);
    const int lb = label_at(seg_b, m.xb, m.yb);
    if (la == lb && la != ignore_id) {
      kept.push_back(m);
    } else {
      ++rep.rejected;
      ++rep.rejections[{la, lb}];
    }
  }
  rep.kept = kept.size();
  return {std::move(kept), rep};
}

std::vector<Match> load_matches_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matches file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("matches JSON parse failure in " + path + ": " +
                          e.what(),
                      0);
  }
  if (!j.is_array()) {
    throw InvalidInput("matches file must be a JSON array: " + path);
  }
  std::vector<Match> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    Match m;
    try {
      m.xa = item.at("xa").get<double>();
      m.ya = item.at("ya").get<double>();
      m.xb = item.at("xb").get<double>();
      m.yb = item.at("yb").get<double>();
      m.score = item.value("score", 0.0);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("malformed match entry in " + path + ": " + e.what());
    }
    out.push_back(m);
  }
  return out;
}

void save_matches_json(const std::vector<Match>& matches,
                       const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const Match& m : matches) {
    j.push_back({{"xa", m.xa},
                 {"ya", m.ya},
                 {"xb", m.xb},
                 {"yb", m.yb},
                 {"score", m.score}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matches file: " + path);
  out << j.dump(2) << "\n";
}

void write_filter_report_json(const FilterReport& report,
                              const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["total"] = report.total;
  j["kept"] = report.kept;
  j["rejected"] = report.rejected;
  j["rejections"] = nlohmann::json::array();
  for (const auto& [pair, count] : report.rejections) {
    const bool oof = pair.first == kOutOfFrame;
    nlohmann::json e{{"count", count}};
    if (oof) {
      e["bucket"] = "out_of_frame";
    } else {
      e["label_a"] = pair.first;
      e["label_b"] = pair.second;
    }
    j["rejections"].push_back(std::move(e));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write filter report: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dspass
