#include "dspass/evaluation.hpp"

#include <fstream>

#include <json.hpp>

#include "dspass/error.hpp"
#include "dspass/png_io.hpp"

namespace dspass {

ConfusionMatrix::ConfusionMatrix(int num_classes) : k_(num_classes) {
  if (num_classes < 1) throw InvalidInput("confusion matrix needs K >= 1");
  counts_.assign(static_cast<std::size_t>(k_) * k_, 0);
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (std::uint64_t v : counts_) t += v;
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  if (o.k_ != k_) throw InvalidInput("confusion matrix size mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
  pred_ignored_ += o.pred_ignored_;
  return *this;
}

void accumulate_into(ConfusionMatrix& cm, const SegmentationMap& pred,
                     const SegmentationMap& gt, int ignore_id) {
  if (pred.height() != gt.height() || pred.width() != gt.width()) {
    throw InvalidInput("prediction and ground truth dimensions differ");
  }
  const int k = cm.k_;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const int g = gt.at(y, x);
      if (g == ignore_id) continue;
      if (g >= k) {
        throw InvalidInput("ground-truth id " + std::to_string(g) +
                           " out of range for K=" + std::to_string(k));
      }
      const int p = pred.at(y, x);
      if (p == ignore_id) {
        ++cm.pred_ignored_;
        continue;
      }
      if (p >= k) {
        throw InvalidInput("prediction id " + std::to_string(p) +
                           " out of range for K=" + std::to_string(k));
      }
      ++cm.at(g, p);
    }
  }
}

ConfusionMatrix accumulate(ConfusionMatrix cm, const SegmentationMap& pred,
                           const SegmentationMap& gt, int ignore_id) {
  accumulate_into(cm, pred, gt, ignore_id);
  return cm;
}

std::optional<double> iou(const ConfusionMatrix& cm, int c) {
  if (c < 0 || c >= cm.num_classes()) {
    throw InvalidInput("class index out of range");
  }
  std::uint64_t row = 0, col = 0;
  for (int j = 0; j < cm.num_classes(); ++j) {
    row += cm.at(c, j);
    col += cm.at(j, c);
  }
  const std::uint64_t diag = cm.at(c, c);
  const std::uint64_t denom = row + col - diag;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(diag) / static_cast<double>(denom);
}

double miou(const ConfusionMatrix& cm, const std::vector<int>& subset) {
  std::vector<int> classes = subset;
  if (classes.empty()) {
    for (int c = 0; c < cm.num_classes(); ++c) classes.push_back(c);
  }
  double sum = 0.0;
  int defined = 0;
  for (int c : classes) {
    if (auto v = iou(cm, c)) {
      sum += *v;
      ++defined;
    }
  }
  if (defined == 0) {
    throw InvalidInput("no scorable classes: every IoU is undefined");
  }
  return sum / defined;
}

std::pair<Raster, SegmentationMap> load_pair(const std::string& image_path,
                                             const std::string& label_path,
                                             const ClassMap& class_map) {
  Raster img = load_rgb_png(image_path);
  SegmentationMap labels = load_label_png(label_path);
  return {std::move(img), class_map.remap_map(labels)};
}

Raster render(const SegmentationMap& seg, const ClassMap& class_map) {
  Raster out(3, seg.height(), seg.width(), 0.0f);
  constexpr float kScale = 1.0f / 255.0f;
  for (int y = 0; y < seg.height(); ++y) {
    for (int x = 0; x < seg.width(); ++x) {
      const int id = seg.at(y, x);
      if (id == class_map.ignore_id()) continue;  // ignore renders black
      const ClassEntry& e = class_map.entry_for_id(id);
      out.at(0, y, x) = e.color[0] * kScale;
      out.at(1, y, x) = e.color[1] * kScale;
      out.at(2, y, x) = e.color[2] * kScale;
    }
  }
  return out;
}

EvalReport make_report(const ConfusionMatrix& cm, const ClassMap& class_map) {
  if (cm.num_classes() != class_map.num_eval_classes()) {
    throw InvalidInput("confusion matrix size does not match the class map");
  }
  EvalReport rep;
  rep.scored_pixels = cm.total();
  rep.pred_ignored = cm.pred_ignored();
  double sum = 0.0;
  int defined = 0;
  for (int c = 0; c < cm.num_classes(); ++c) {
    const ClassEntry& e = class_map.eval_entry(c);
    ClassReport cr;
    cr.id = e.id;
    cr.name = e.name;
    cr.tp = cm.at(c, c);
    std::uint64_t row = 0, col = 0;
    for (int j = 0; j < cm.num_classes(); ++j) {
      row += cm.at(c, j);
      col += cm.at(j, c);
    }
    cr.fn = row - cr.tp;
    cr.fp = col - cr.tp;
    cr.iou = iou(cm, c);
    if (cr.iou) {
      sum += *cr.iou;
      ++defined;
    }
    rep.classes.push_back(std::move(cr));
  }
  if (defined > 0) rep.miou = sum / defined;
  return rep;
}

void write_report_json(const EvalReport& report, const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["miou"] = report.miou ? nlohmann::json(*report.miou) : nlohmann::json();
  j["scored_pixels"] = report.scored_pixels;
  j["pred_ignored"] = report.pred_ignored;
  j["classes"] = nlohmann::json::array();
  for (const ClassReport& c : report.classes) {
    nlohmann::json e{{"id", c.id},
                     {"name", c.name},
                     {"iou", c.iou ? nlohmann::json(*c.iou) : nlohmann::json()},
                     {"tp", c.tp},
                     {"fp", c.fp},
                     {"fn", c.fn}};
    j["classes"].push_back(std::move(e));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  out << j.dump(2) << "\n";
}

void write_report_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  out << "id,name,iou,tp,fp,fn\n";
  for (const ClassReport& c : report.classes) {
    out << c.id << "," << c.name << ",";
    if (c.iou) out << *c.iou;
    out << "," << c.tp << "," << c.fp << "," << c.fn << "\n";
  }
  out << "miou,,";
  if (report.miou) out << *report.miou;
  out << ",,,\n";
}

}  // namespace dspass
