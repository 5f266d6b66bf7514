// Command-line surface of the panoramic segmentation toolkit: unfolding and
// fold-back between annular and panoramic geometry, adapted/end-to-end
// inference, mIoU evaluation, seam diagnostics, and semantic match
// filtering.
//
// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 internal
// invariant violation.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dspass/adaptation.hpp"
#include "dspass/annular_geometry.hpp"
#include "dspass/class_map.hpp"
#include "dspass/error.hpp"
#include "dspass/evaluation.hpp"
#include "dspass/parallel.hpp"
#include "dspass/pipeline_config.hpp"
#include "dspass/png_io.hpp"
#include "dspass/semantic_vo.hpp"
#include "dspass/swaftnet.hpp"

namespace fs = std::filesystem;
using namespace dspass;

namespace {

struct ExitError {
  int code;
  std::string message;
};

template <typename F>
auto config_step(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InternalError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExitError{2, e.what()};
  }
}

template <typename F>
auto data_step(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InternalError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExitError{3, e.what()};
  }
}

struct UnfoldArgs {
  std::string model, in, out;
  int width = 2048, height = 640;
  double fill = 0.0;
};

void run_unfold(const UnfoldArgs& a) {
  AnnularCameraModel model =
      config_step([&] { return AnnularCameraModel::load_json(a.model); });
  data_step([&] {
    Raster img = load_rgb_png(a.in);
    Raster pano =
        unfold(img, model, a.width, a.height, static_cast<float>(a.fill));
    save_rgb_png(pano, a.out);
  });
}

struct FoldArgs {
  std::string model, in, out;
  std::string mode = "bilinear";
  bool labels = false;
  double fill = 0.0;
};

void run_fold(const FoldArgs& a) {
  AnnularCameraModel model =
      config_step([&] { return AnnularCameraModel::load_json(a.model); });
  ResampleMode mode = config_step([&] {
    if (a.mode == "bilinear") return ResampleMode::kBilinear;
    if (a.mode == "nearest") return ResampleMode::kNearest;
    throw InvalidInput("unknown resample mode '" + a.mode + "'");
  });
  data_step([&] {
    if (a.labels) {
      SegmentationMap pano = load_label_png(a.in);
      save_label_png(fold_back_labels(pano, model, mode), a.out);
    } else {
      Raster pano = load_rgb_png(a.in);
      save_rgb_png(fold_back(pano, model, mode, static_cast<float>(a.fill)),
                   a.out);
    }
  });
}

struct InferArgs {
  std::string config, in, out;
  std::string mode = "adapted";
  std::string emit_logits, seam_report_path, render_path;
  // Flag overrides for config fields.
  std::optional<int> num_segments;
  std::optional<int> overlap;
  std::optional<std::string> padding_mode;
  std::optional<std::string> weights;
  std::optional<std::uint32_t> seed;
};

void save_logits(const Tensor& logits, const std::string& path) {
  NetworkWeights container;
  container.add("logits",
                {static_cast<std::uint32_t>(logits.channels()),
                 static_cast<std::uint32_t>(logits.height()),
                 static_cast<std::uint32_t>(logits.width())},
                logits.storage());
  container.save(path);
}

void run_infer(const InferArgs& a) {
  PipelineConfig cfg = config_step([&] {
    PipelineConfig c = PipelineConfig::load_json(a.config);
    if (a.num_segments) c.segments.num_segments = *a.num_segments;
    if (a.overlap) c.segments.overlap = *a.overlap;
    if (a.padding_mode) c.padding_mode = pad_mode_from_string(*a.padding_mode);
    if (a.weights) {
      c.weight_path = *a.weights;
      c.seed.reset();
    }
    if (a.seed) {
      c.seed = *a.seed;
      c.weight_path.reset();
    }
    if (a.mode != "adapted" && a.mode != "full") {
      throw InvalidInput("mode must be 'adapted' or 'full'");
    }
    c.validate();
    return c;
  });
  std::optional<ClassMap> class_map;
  if (!a.render_path.empty()) {
    class_map = config_step([&] {
      if (!cfg.class_map_path) {
        throw InvalidInput("--render requires a class_map in the config");
      }
      return ClassMap::load_json(*cfg.class_map_path);
    });
  }

  Raster pano = data_step([&] { return load_rgb_png(a.in); });
  // Divisibility and plan violations surface before any network compute.
  data_step([&] {
    if (pano.width() % 32 != 0 || pano.height() % 32 != 0) {
      throw InvalidInput("panorama " + pano.shape_str() +
                         " must have dimensions divisible by 32");
    }
    cfg.segments.validate(pano.width());
  });

  Network net = data_step([&] {
    if (cfg.weight_path) {
      return build(cfg.network, load_weights(*cfg.weight_path));
    }
    return build(cfg.network, SeededRandom{*cfg.seed});
  });

  data_step([&] {
    Tensor logits;
    bool exact = true;
    if (a.mode == "adapted") {
      AdaptedResult res =
          run_adapted_full(net, pano, cfg.segments, cfg.padding_mode);
      logits = std::move(res.logits);
      exact = res.exact;
    } else {
      PadMode mode = cfg.padding_mode == PadMode::kZero ? PadMode::kZero
                                                        : PadMode::kRing;
      logits = full_pass(net, pano, mode);
    }
    SegmentationMap seg = argmax_classes(logits);
    save_label_png(seg, a.out);
    if (!a.render_path.empty()) {
      save_rgb_png(render(seg, *class_map), a.render_path);
    }
    if (!a.emit_logits.empty()) save_logits(logits, a.emit_logits);
    if (!a.seam_report_path.empty()) {
      Tensor reference = full_pass(net, pano, PadMode::kRing);
      std::vector<float> profile = seam_report(logits, reference);
      std::size_t peak_col = 0;
      for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile[i] > profile[peak_col]) peak_col = i;
      }
      nlohmann::json j{{"version", 1},
                       {"mode", a.mode},
                       {"exact", exact},
                       {"width", profile.size()},
                       {"peak", profile.empty() ? 0.0f : profile[peak_col]},
                       {"peak_column", peak_col},
                       {"profile", profile}};
      std::ofstream out(a.seam_report_path);
      if (!out) throw IoError("cannot write seam report: " + a.seam_report_path);
      out << j.dump(2) << "\n";
    }
  });
}

struct EvalArgs {
  std::string pred_dir, gt_dir, classes, out;
  std::string csv;
};

void run_eval(const EvalArgs& a) {
  ClassMap class_map =
      config_step([&] { return ClassMap::load_json(a.classes); });
  config_step([&] {
    if (!fs::is_directory(a.pred_dir)) {
      throw InvalidInput("prediction directory does not exist: " + a.pred_dir);
    }
    if (!fs::is_directory(a.gt_dir)) {
      throw InvalidInput("ground-truth directory does not exist: " + a.gt_dir);
    }
  });
  EvalReport report = data_step([&] {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(a.gt_dir)) {
      if (entry.path().extension() == ".png") {
        names.push_back(entry.path().filename().string());
      }
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) {
      throw InvalidInput("no label PNGs in " + a.gt_dir);
    }
    ConfusionMatrix cm(class_map.num_eval_classes());
    for (const std::string& name : names) {
      fs::path pred_path = fs::path(a.pred_dir) / name;
      if (!fs::exists(pred_path)) {
        throw InvalidInput("missing prediction for " + name);
      }
      SegmentationMap gt =
          class_map.remap_map(load_label_png((fs::path(a.gt_dir) / name).string()));
      SegmentationMap pred =
          class_map.remap_map(load_label_png(pred_path.string()));
      if (pred.width() != gt.width() || pred.height() != gt.height()) {
        pred = pred.resize_nearest(gt.height(), gt.width());
      }
      accumulate_into(cm, pred, gt, class_map.ignore_id());
    }
    return make_report(cm, class_map);
  });
  data_step([&] {
    write_report_json(report, a.out);
    if (!a.csv.empty()) write_report_csv(report, a.csv);
  });
  if (report.miou) {
    std::cout << "mIoU: " << *report.miou << "\n";
  } else {
    std::cout << "mIoU: undefined (no scorable classes)\n";
  }
}

struct FilterArgs {
  std::string matches, seg_a, seg_b, out;
  std::string report;
};

void run_filter(const FilterArgs& a) {
  config_step([&] {
    for (const std::string& p : {a.matches, a.seg_a, a.seg_b}) {
      if (!fs::exists(p)) throw InvalidInput("input does not exist: " + p);
    }
  });
  data_step([&] {
    std::vector<Match> matches = load_matches_json(a.matches);
    SegmentationMap seg_a = load_label_png(a.seg_a);
    SegmentationMap seg_b = load_label_png(a.seg_b);
    auto [kept, rep] = filter_matches(matches, seg_a, seg_b);
    save_matches_json(kept, a.out);
    if (!a.report.empty()) write_filter_report_json(rep, a.report);
    std::cout << "kept " << rep.kept << " / " << rep.total << " matches\n";
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Panoramic annular semantic segmentation toolkit"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker thread budget (default 1)")
      ->check(CLI::PositiveNumber);

  UnfoldArgs ua;
  auto* unfold_cmd =
      app.add_subcommand("unfold", "Unfold an annular image into a panorama");
  unfold_cmd->add_option("--model", ua.model, "camera model JSON")->required();
  unfold_cmd->add_option("--in", ua.in, "annular PNG")->required();
  unfold_cmd->add_option("--out", ua.out, "panorama PNG")->required();
  unfold_cmd->add_option("--width", ua.width, "panorama width")->required();
  unfold_cmd->add_option("--height", ua.height, "panorama height")->required();
  unfold_cmd->add_option("--fill", ua.fill, "out-of-bounds fill value");

  FoldArgs fa;
  auto* fold_cmd = app.add_subcommand(
      "fold", "Project a panorama back onto the annular image");
  fold_cmd->add_option("--model", fa.model, "camera model JSON")->required();
  fold_cmd->add_option("--in", fa.in, "panorama PNG")->required();
  fold_cmd->add_option("--out", fa.out, "annular PNG")->required();
  fold_cmd->add_option("--mode", fa.mode, "bilinear|nearest");
  fold_cmd->add_flag("--labels", fa.labels,
                     "treat input as a class-id map (forces nearest)");
  fold_cmd->add_option("--fill", fa.fill, "value outside the ring");

  InferArgs ia;
  auto* infer_cmd =
      app.add_subcommand("infer", "Segment a panorama (adapted or full pass)");
  infer_cmd->add_option("--config", ia.config, "pipeline config JSON")
      ->required();
  infer_cmd->add_option("--in", ia.in, "panorama PNG")->required();
  infer_cmd->add_option("--out", ia.out, "class-id PNG")->required();
  infer_cmd->add_option("--mode", ia.mode, "adapted|full");
  infer_cmd->add_option("--emit-logits", ia.emit_logits,
                        "write raw logits container");
  infer_cmd->add_option("--seam-report", ia.seam_report_path,
                        "write per-column max-abs difference vs the ring "
                        "full pass");
  infer_cmd->add_option("--render", ia.render_path, "write RGB rendering");
  int ns = 0, ov = -1;
  std::string pm, wpath;
  std::int64_t seed_flag = -1;
  infer_cmd->add_option("--segments", ns, "override num_segments");
  infer_cmd->add_option("--overlap", ov, "override overlap");
  infer_cmd->add_option("--padding", pm, "override padding mode");
  infer_cmd->add_option("--weights", wpath, "override weight path");
  infer_cmd->add_option("--seed", seed_flag, "override random-init seed");

  EvalArgs ea;
  auto* eval_cmd =
      app.add_subcommand("eval", "Score predictions against ground truth");
  eval_cmd->add_option("--pred-dir", ea.pred_dir, "prediction PNG directory")
      ->required();
  eval_cmd->add_option("--gt-dir", ea.gt_dir, "ground-truth PNG directory")
      ->required();
  eval_cmd->add_option("--classes", ea.classes, "class map JSON")->required();
  eval_cmd->add_option("--out", ea.out, "report JSON path")->required();
  eval_cmd->add_option("--csv", ea.csv, "optional CSV path");

  FilterArgs fla;
  auto* filter_cmd = app.add_subcommand(
      "filter-matches", "Keep keypoint matches with consistent labels");
  filter_cmd->add_option("--matches", fla.matches, "matches JSON")->required();
  filter_cmd->add_option("--seg-a", fla.seg_a, "frame A label PNG")->required();
  filter_cmd->add_option("--seg-b", fla.seg_b, "frame B label PNG")->required();
  filter_cmd->add_option("--out", fla.out, "kept matches JSON")->required();
  filter_cmd->add_option("--report", fla.report, "filter report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  set_num_threads(threads);
  if (ns > 0) ia.num_segments = ns;
  if (ov >= 0) ia.overlap = ov;
  if (!pm.empty()) ia.padding_mode = pm;
  if (!wpath.empty()) ia.weights = wpath;
  if (seed_flag >= 0) ia.seed = static_cast<std::uint32_t>(seed_flag);

  try {
    if (unfold_cmd->parsed()) run_unfold(ua);
    if (fold_cmd->parsed()) run_fold(fa);
    if (infer_cmd->parsed()) run_infer(ia);
    if (eval_cmd->parsed()) run_eval(ea);
    if (filter_cmd->parsed()) run_filter(fla);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
