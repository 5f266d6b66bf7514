#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "dspass/camera_model.hpp"
#include "dspass/error.hpp"
#include "dspass/pipeline_config.hpp"
#include "dspass/png_io.hpp"
#include "dspass/segmentation_map.hpp"
#include "dspass/weights.hpp"
#include "support/oracles.hpp"

using namespace dspass;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("DSPASS_CLI");
  REQUIRE_MESSAGE(p != nullptr, "DSPASS_CLI must point at the CLI binary");
  return p;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  fs::path out = fs::temp_directory_path() / "dspass_cli_out.txt";
  std::string cmd = cli_path() + " " + args + " > " + out.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  fs::remove(out);
  return {WEXITSTATUS(rc), text};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct Workspace {
  fs::path dir;
  explicit Workspace(const char* name) {
    dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  fs::path operator/(const std::string& f) const { return dir / f; }
};

void write_camera_model(const fs::path& p) {
  AnnularCameraModel m;
  m.center_x = 100.0;
  m.center_y = 100.0;
  m.r_inner = 20.0;
  m.r_outer = 80.0;
  m.source_width = 200;
  m.source_height = 200;
  m.save_json(p.string());
}

void write_config(const fs::path& p, int num_segments, int num_classes,
                  const std::string& extra = "") {
  std::ofstream out(p);
  out << "{\n"
      << "  \"seed\": 42,\n"
      << "  \"num_segments\": " << num_segments << ",\n"
      << "  \"padding_mode\": \"neighbor\",\n"
      << "  \"network\": {\"num_classes\": " << num_classes
      << ", \"decoder_width\": 16, \"se_reduction\": 4,\n"
      << "    \"spp_grid_levels\": [1, 2],\n"
      << "    \"encoder_stage_channels\": [8, 8, 16, 24, 32]}" << extra
      << "\n}\n";
}

void write_class_map(const fs::path& p) {
  nlohmann::json j = nlohmann::json::array();
  const char* names[5] = {"a", "b", "c", "d", "e"};
  for (int i = 0; i < 5; ++i) {
    j.push_back({{"id", i},
                 {"name", names[i]},
                 {"color", {50 * i, 30 * i, 10 + i}}});
  }
  std::ofstream out(p);
  out << j.dump(2);
}

}  // namespace

TEST_CASE("pipeline config parsing and validation") {
  Workspace ws("dspass_cfg_unit");
  write_config(ws / "config.json", 4, 5);
  PipelineConfig cfg = PipelineConfig::load_json((ws / "config.json").string());
  CHECK(cfg.seed == 42u);
  CHECK(cfg.segments.num_segments == 4);
  CHECK(cfg.padding_mode == PadMode::kNeighbor);
  CHECK(cfg.network.num_classes == 5);
  CHECK(cfg.network.encoder_stage_channels ==
        std::vector<int>{8, 8, 16, 24, 32});
  cfg.validate();

  // unknown keys fail loudly
  {
    std::ofstream out(ws / "typo.json");
    out << "{\"seed\": 1, \"num_segmets\": 4}";
  }
  CHECK_THROWS_AS(PipelineConfig::load_json((ws / "typo.json").string()),
                  InvalidInput);

  // seed and weights are mutually exclusive; one is required
  PipelineConfig both = cfg;
  both.weight_path = "/tmp/whatever.dspw";
  CHECK_THROWS_AS(both.validate(), InvalidInput);
  PipelineConfig neither = cfg;
  neither.seed.reset();
  CHECK_THROWS_AS(neither.validate(), InvalidInput);
  PipelineConfig missing_file = cfg;
  missing_file.seed.reset();
  missing_file.weight_path = (ws / "no_such.dspw").string();
  CHECK_THROWS_AS(missing_file.validate(), InvalidInput);

  CHECK(pad_mode_from_string("ring") == PadMode::kRing);
  CHECK(pad_mode_from_string("zero") == PadMode::kZero);
  CHECK_THROWS_AS(pad_mode_from_string("wrap"), InvalidInput);
}

TEST_CASE("unfold: valid inputs write a PNG and exit 0") {
  Workspace ws("dspass_cli_unfold");
  write_camera_model(ws / "model.json");
  std::mt19937 rng(101);
  save_rgb_png(oracle::rand_tensor(rng, 3, 200, 200, 0.0f, 1.0f),
               (ws / "annular.png").string());
  RunResult r = run_cli("unfold --model " + (ws / "model.json").string() +
                        " --in " + (ws / "annular.png").string() + " --out " +
                        (ws / "pano.png").string() + " --width 256 --height 64");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(ws / "pano.png"));
  Raster pano = load_rgb_png((ws / "pano.png").string());
  CHECK(pano.width() == 256);
  CHECK(pano.height() == 64);
}

TEST_CASE("unfold: missing model file exits 2 naming the path") {
  Workspace ws("dspass_cli_missing");
  RunResult r = run_cli("unfold --model " + (ws / "nope.json").string() +
                        " --in x.png --out y.png --width 64 --height 32");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find((ws / "nope.json").string()) != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  RunResult r = run_cli("unfold --model only.json");
  CHECK(r.exit_code == 2);
  RunResult unknown = run_cli("frobnicate");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("unfold then fold round-trips the ring region") {
  Workspace ws("dspass_cli_roundtrip");
  write_camera_model(ws / "model.json");
  // smooth synthetic image
  Raster img(3, 200, 200);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 200; ++y) {
      for (int x = 0; x < 200; ++x) {
        img.at(c, y, x) = 0.5f + 0.3f * std::sin(0.05f * x + c) *
                                      std::cos(0.07f * y);
      }
    }
  }
  save_rgb_png(img, (ws / "annular.png").string());
  RunResult u = run_cli("unfold --model " + (ws / "model.json").string() +
                        " --in " + (ws / "annular.png").string() + " --out " +
                        (ws / "pano.png").string() +
                        " --width 2048 --height 256");
  REQUIRE(u.exit_code == 0);
  RunResult f = run_cli("fold --model " + (ws / "model.json").string() +
                        " --in " + (ws / "pano.png").string() + " --out " +
                        (ws / "back.png").string());
  REQUIRE(f.exit_code == 0);
  Raster back = load_rgb_png((ws / "back.png").string());
  double psnr = oracle::psnr_db(back, img, [](int y, int x) {
    double r = std::hypot(x - 100.0, y - 100.0);
    return r >= 22.0 && r <= 78.0;
  });
  CHECK(psnr >= 30.0);
}

TEST_CASE("infer: adapted matches full within the seam tolerance, runs are deterministic") {
  Workspace ws("dspass_cli_infer");
  write_class_map(ws / "classes.json");
  write_config(ws / "config.json", 4, 5,
               ",\n  \"class_map\": \"" + (ws / "classes.json").string() +
                   "\"");
  std::mt19937 rng(103);
  save_rgb_png(oracle::rand_tensor(rng, 3, 32, 128, 0.0f, 1.0f),
               (ws / "pano.png").string());

  RunResult a = run_cli("infer --config " + (ws / "config.json").string() +
                        " --in " + (ws / "pano.png").string() + " --out " +
                        (ws / "seg_a.png").string() + " --seam-report " +
                        (ws / "seam.json").string() + " --render " +
                        (ws / "render.png").string() + " --emit-logits " +
                        (ws / "logits.dspw").string());
  REQUIRE_MESSAGE(a.exit_code == 0, a.output);
  nlohmann::json seam;
  std::ifstream((ws / "seam.json").string()) >> seam;
  CHECK(seam.at("version") == 1);
  CHECK(seam.at("exact") == true);
  CHECK(seam.at("peak").get<double>() <= 1e-4);

  // the logits container decodes with the expected shape
  NetworkWeights logits = NetworkWeights::load((ws / "logits.dspw").string());
  const ParamEntry& entry = logits.at("logits");
  CHECK(entry.shape == std::vector<std::uint32_t>{5, 32, 128});
  // rendering wrote an RGB image of matching size
  Raster rendered = load_rgb_png((ws / "render.png").string());
  CHECK(rendered.height() == 32);
  CHECK(rendered.width() == 128);

  // byte-identical across runs and thread counts
  RunResult b = run_cli("--threads 4 infer --config " +
                        (ws / "config.json").string() + " --in " +
                        (ws / "pano.png").string() + " --out " +
                        (ws / "seg_b.png").string());
  REQUIRE_MESSAGE(b.exit_code == 0, b.output);
  CHECK(slurp(ws / "seg_a.png") == slurp(ws / "seg_b.png"));

  // a full end-to-end pass with ring padding is the reference itself
  RunResult f = run_cli("infer --config " + (ws / "config.json").string() +
                        " --in " + (ws / "pano.png").string() + " --out " +
                        (ws / "seg_full.png").string() +
                        " --mode full --seam-report " +
                        (ws / "seam_full.json").string());
  REQUIRE_MESSAGE(f.exit_code == 0, f.output);
  nlohmann::json seam_full;
  std::ifstream((ws / "seam_full.json").string()) >> seam_full;
  CHECK(seam_full.at("peak").get<double>() == 0.0);
}

TEST_CASE("infer: divisibility violations are reported before compute") {
  Workspace ws("dspass_cli_badwidth");
  write_config(ws / "config.json", 4, 5);
  std::mt19937 rng(104);
  save_rgb_png(oracle::rand_tensor(rng, 3, 32, 100, 0.0f, 1.0f),
               (ws / "pano.png").string());
  RunResult r = run_cli("infer --config " + (ws / "config.json").string() +
                        " --in " + (ws / "pano.png").string() + " --out " +
                        (ws / "seg.png").string());
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("divisible") != std::string::npos);
}

TEST_CASE("infer: config with both weights and seed exits 2") {
  Workspace ws("dspass_cli_badcfg");
  {
    std::ofstream out(ws / "config.json");
    out << "{\"seed\": 1, \"weights\": \"w.dspw\"}";
  }
  RunResult r = run_cli("infer --config " + (ws / "config.json").string() +
                        " --in x.png --out y.png");
  CHECK(r.exit_code == 2);
}

TEST_CASE("eval: identical directories give mIoU 1.0") {
  Workspace ws("dspass_cli_eval");
  write_class_map(ws / "classes.json");
  fs::create_directories(ws / "pred");
  fs::create_directories(ws / "gt");
  std::mt19937 rng(105);
  for (int i = 0; i < 3; ++i) {
    SegmentationMap m(8, 8);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) m.at(y, x) = static_cast<std::uint8_t>(rng() % 5);
    }
    std::string name = "img" + std::to_string(i) + ".png";
    save_label_png(m, (ws / "pred" / name).string());
    save_label_png(m, (ws / "gt" / name).string());
  }
  RunResult r = run_cli("eval --pred-dir " + (ws / "pred").string() +
                        " --gt-dir " + (ws / "gt").string() + " --classes " +
                        (ws / "classes.json").string() + " --out " +
                        (ws / "report.json").string() + " --csv " +
                        (ws / "report.csv").string());
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  nlohmann::json rep;
  std::ifstream((ws / "report.json").string()) >> rep;
  CHECK(rep.at("miou").get<double>() == doctest::Approx(1.0));
  CHECK(rep.at("classes").size() == 5);
  CHECK(fs::exists(ws / "report.csv"));
}

TEST_CASE("eval: three-pair mini dataset matches a hand oracle") {
  Workspace ws("dspass_cli_eval_hand");
  // two classes
  {
    nlohmann::json j = nlohmann::json::array();
    j.push_back({{"id", 0}, {"name", "bg"}, {"color", {0, 0, 0}}});
    j.push_back({{"id", 1}, {"name", "fg"}, {"color", {255, 255, 255}}});
    std::ofstream out(ws / "classes.json");
    out << j.dump();
  }
  fs::create_directories(ws / "pred");
  fs::create_directories(ws / "gt");
  // pair 1: gt [0,0;1,1], pred [0,1;1,1] -> cm [[1,1],[0,2]]
  // pair 2: all correct zeros (2x2)     -> cm [[4,0],[0,0]]
  // pair 3: gt has ignore row           -> only second row scored
  SegmentationMap gt1(2, 2), pred1(2, 2);
  gt1.at(0, 0) = 0;
  gt1.at(0, 1) = 0;
  gt1.at(1, 0) = 1;
  gt1.at(1, 1) = 1;
  pred1 = gt1;
  pred1.at(0, 1) = 1;
  SegmentationMap gt2(2, 2, 0), pred2(2, 2, 0);
  SegmentationMap gt3(2, 2, kIgnoreId), pred3(2, 2, 1);
  gt3.at(1, 0) = 1;
  gt3.at(1, 1) = 0;
  save_label_png(gt1, (ws / "gt" / "a.png").string());
  save_label_png(pred1, (ws / "pred" / "a.png").string());
  save_label_png(gt2, (ws / "gt" / "b.png").string());
  save_label_png(pred2, (ws / "pred" / "b.png").string());
  save_label_png(gt3, (ws / "gt" / "c.png").string());
  save_label_png(pred3, (ws / "pred" / "c.png").string());
  // totals: cm[0][0]=5, cm[0][1]=2, cm[1][0]=0, cm[1][1]=3
  // iou0 = 5/7, iou1 = 3/5, miou = (5/7+3/5)/2 = 23/35
  RunResult r = run_cli("eval --pred-dir " + (ws / "pred").string() +
                        " --gt-dir " + (ws / "gt").string() + " --classes " +
                        (ws / "classes.json").string() + " --out " +
                        (ws / "report.json").string());
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  nlohmann::json rep;
  std::ifstream((ws / "report.json").string()) >> rep;
  CHECK(rep.at("miou").get<double>() == doctest::Approx(23.0 / 35.0));
}

TEST_CASE("filter-matches CLI keeps consistent matches and writes reports") {
  Workspace ws("dspass_cli_filter");
  SegmentationMap a(8, 8, 1), b(8, 8, 1);
  for (int y = 0; y < 8; ++y) {
    for (int x = 4; x < 8; ++x) b.at(y, x) = 2;
  }
  save_label_png(a, (ws / "a.png").string());
  save_label_png(b, (ws / "b.png").string());
  nlohmann::json matches = nlohmann::json::array();
  matches.push_back({{"xa", 1.0}, {"ya", 1.0}, {"xb", 1.0}, {"yb", 1.0}, {"score", 0.9}});
  matches.push_back({{"xa", 1.0}, {"ya", 1.0}, {"xb", 6.0}, {"yb", 1.0}, {"score", 0.8}});
  {
    std::ofstream out(ws / "matches.json");
    out << matches.dump();
  }
  RunResult r = run_cli("filter-matches --matches " +
                        (ws / "matches.json").string() + " --seg-a " +
                        (ws / "a.png").string() + " --seg-b " +
                        (ws / "b.png").string() + " --out " +
                        (ws / "kept.json").string() + " --report " +
                        (ws / "filter_report.json").string());
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  nlohmann::json kept;
  std::ifstream((ws / "kept.json").string()) >> kept;
  REQUIRE(kept.is_array());
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].at("score").get<double>() == doctest::Approx(0.9));
  nlohmann::json rep;
  std::ifstream((ws / "filter_report.json").string()) >> rep;
  CHECK(rep.at("total") == 2);
  CHECK(rep.at("kept") == 1);

  // kept output feeds back as input (idempotence through the CLI schema)
  RunResult again = run_cli("filter-matches --matches " +
                            (ws / "kept.json").string() + " --seg-a " +
                            (ws / "a.png").string() + " --seg-b " +
                            (ws / "b.png").string() + " --out " +
                            (ws / "kept2.json").string());
  REQUIRE(again.exit_code == 0);
  nlohmann::json kept2;
  std::ifstream((ws / "kept2.json").string()) >> kept2;
  CHECK(kept2 == kept);
}
