// Acceptance suite: runs every top-level requirement at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include "dspass/adaptation.hpp"
#include "dspass/annular_geometry.hpp"
#include "dspass/camera_model.hpp"
#include "dspass/error.hpp"
#include "dspass/evaluation.hpp"
#include "dspass/parallel.hpp"
#include "dspass/png_io.hpp"
#include "dspass/semantic_vo.hpp"
#include "dspass/swaftnet.hpp"
#include "support/oracles.hpp"

using namespace dspass;
namespace fs = std::filesystem;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

Raster random_panorama(std::uint32_t seed, int c, int h, int w) {
  std::mt19937 rng(seed);
  return oracle::rand_tensor(rng, c, h, w, 0.0f, 1.0f);
}

/// Circular distance from column x to the nearest segment boundary.
int boundary_distance(int x, int width, int num_segments) {
  const int seg_w = width / num_segments;
  int best = width;
  for (int b = 0; b < num_segments; ++b) {
    int d = std::abs(x - b * seg_w);
    best = std::min(best, std::min(d, width - d));
  }
  return best;
}

// --- criterion 1: segment equivalence -----------------------------------

void criterion_equivalence(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  NetworkDef def;  // default SwaftNet widths
  def.num_classes = 6;
  Network net = build(def, SeededRandom{42});
  Raster pano = random_panorama(123, 3, 64, 256);
  Tensor full = full_pass(net, pano, PadMode::kRing);
  for (int n : {1, 2, 4}) {
    SegmentPlan plan;
    plan.num_segments = n;
    AdaptedResult res = run_adapted_full(net, pano, plan, PadMode::kNeighbor);
    const float diff = max_abs_diff(res.logits, full);
    if (diff > 1e-4f) {
      c.fail("N=" + std::to_string(n) + " max-abs " + std::to_string(diff));
      continue;
    }
    std::vector<float> profile = seam_report(res.logits, full);
    float boundary_max = 0.0f;
    for (int x = 0; x < pano.width(); ++x) {
      if (boundary_distance(x, pano.width(), n) <= 2) {
        boundary_max = std::max(boundary_max, profile[x]);
      }
    }
    if (boundary_max > 1e-4f) {
      c.fail("N=" + std::to_string(n) + " boundary spike " +
             std::to_string(boundary_max));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::ostringstream os;
  os.precision(3);
  os << "N in {1,2,4} within 1e-4 of the ring full pass, " << secs << " s";
  c.note(os.str());
  if (secs >= 60.0) c.fail("runtime exceeded 60 s");
}

// --- criterion 2: blind-spot ablation ------------------------------------

void criterion_ablation(Check& c) {
  NetworkDef def;
  def.num_classes = 6;
  Network net = build(def, SeededRandom{42});
  Raster pano = random_panorama(123, 3, 64, 256);
  Tensor full = full_pass(net, pano, PadMode::kRing);
  SegmentPlan plan;
  plan.num_segments = 4;
  AdaptedResult ablated = run_adapted_full(net, pano, plan, PadMode::kZero);
  std::vector<float> profile = seam_report(ablated.logits, full);
  float boundary_max = 0.0f;
  std::vector<float> interior;
  for (int x = 0; x < pano.width(); ++x) {
    const int d = boundary_distance(x, pano.width(), plan.num_segments);
    if (d <= 2) boundary_max = std::max(boundary_max, profile[x]);
    if (d >= 8) interior.push_back(profile[x]);
  }
  std::sort(interior.begin(), interior.end());
  const float median = interior[interior.size() / 2];
  std::ostringstream os;
  os.precision(3);
  os << "boundary max " << boundary_max << " vs interior median " << median;
  c.note(os.str());
  if (!(boundary_max >= 10.0f * median) || boundary_max <= 0.0f) {
    c.fail("boundary/interior ratio below 10x");
  }
}

// --- criterion 3: ring-shift equivariance --------------------------------

void criterion_shift(Check& c) {
  NetworkDef def;
  def.num_classes = 6;
  Network net = build(def, SeededRandom{42});
  SegmentPlan plan;
  plan.num_segments = 4;
  long long considered = 0, matched = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Raster pano = random_panorama(1000 + trial, 3, 64, 256);
    AdaptedResult base = run_adapted_full(net, pano, plan);
    Tensor gaps = top2_gap(base.logits);
    for (int shift : {32, 64}) {
      AdaptedResult shifted =
          run_adapted_full(net, pano.shift_cols(shift), plan);
      SegmentationMap expect = base.segmentation.shift_cols(shift);
      Tensor gexp = gaps.shift_cols(shift);
      for (int y = 0; y < expect.height(); ++y) {
        for (int x = 0; x < expect.width(); ++x) {
          if (gexp.at(0, y, x) <= 1e-4f) continue;
          ++considered;
          if (shifted.segmentation.at(y, x) == expect.at(y, x)) ++matched;
        }
      }
    }
  }
  const double frac =
      considered ? static_cast<double>(matched) / considered : 0.0;
  std::ostringstream os;
  os.precision(6);
  os << "agreement " << 100.0 * frac << "% over " << considered << " pixels";
  c.note(os.str());
  if (frac < 0.999) c.fail("below 99.9%");
}

// --- criterion 4: kernel oracle suite -------------------------------------

void criterion_kernels(Check& c) {
  std::mt19937 rng(4242);
  // the hand-computed circular convolution
  {
    Tensor x(1, 1, 4);
    for (int i = 0; i < 4; ++i) x.at(0, 0, i) = static_cast<float>(i + 1);
    ConvParams p;
    p.out_channels = 1;
    p.in_channels = 1;
    p.kernel_h = 1;
    p.kernel_w = 3;
    p.stride = 1;
    p.weights = {1.0f, 1.0f, 1.0f};
    Tensor y = conv2d(x, p, PaddingSpec::ring(1, 1, 0, 0));
    const float want[4] = {7.0f, 6.0f, 9.0f, 8.0f};
    for (int i = 0; i < 4; ++i) {
      if (y.at(0, 0, i) != want[i]) c.fail("ring vector case mismatch");
    }
  }
  int conv_trials = 0;
  while (conv_trials < 100) {
    const int in_c = 1 + static_cast<int>(rng() % 8);
    const int out_c = 1 + static_cast<int>(rng() % 8);
    const int h = 1 + static_cast<int>(rng() % 16);
    const int w = 1 + static_cast<int>(rng() % 16);
    const int k = 1 + 2 * static_cast<int>(rng() % 3);
    const int stride = 1 + static_cast<int>(rng() % 2);
    const int pl = static_cast<int>(rng() % 3), pr = static_cast<int>(rng() % 3);
    const int pt = static_cast<int>(rng() % 3), pb = static_cast<int>(rng() % 3);
    if (h + pt + pb < k || w + pl + pr < k) continue;
    PadMode mode = conv_trials % 2 ? PadMode::kRing : PadMode::kZero;
    if (mode == PadMode::kRing && (pl > w || pr > w)) continue;
    PaddingSpec spec{mode, pl, pr, pt, pb, {}, {}};
    Tensor x = oracle::rand_tensor(rng, in_c, h, w);
    ConvParams p =
        oracle::rand_conv(rng, out_c, in_c, k, stride, conv_trials % 3 == 0);
    if (!oracle::close_rel(conv2d(x, p, spec), oracle::conv2d_oracle(x, p, spec),
                           1e-5f)) {
      c.fail("conv2d oracle mismatch at trial " + std::to_string(conv_trials));
      break;
    }
    ++conv_trials;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int ch = 1 + static_cast<int>(rng() % 8);
    Tensor x = oracle::rand_tensor(rng, ch, 1 + rng() % 16, 1 + rng() % 16);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    std::vector<float> scale(ch), shift(ch), mean(ch), var(ch);
    for (int i = 0; i < ch; ++i) {
      scale[i] = dist(rng);
      shift[i] = dist(rng);
      mean[i] = dist(rng);
      var[i] = 0.05f + std::fabs(dist(rng));
    }
    Tensor got = batchnorm_inference(x, scale, shift, mean, var, 1e-5f);
    Tensor want = oracle::batchnorm_oracle(x, scale, shift, mean, var, 1e-5f);
    if (!oracle::close_rel(got, want, 1e-5f)) {
      c.fail("batchnorm oracle mismatch");
      break;
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int ch = 1 + static_cast<int>(rng() % 8);
    Tensor x = oracle::rand_tensor(rng, ch, 1 + rng() % 16, 1 + rng() % 16);
    const int oh = 1 + static_cast<int>(rng() % 16);
    const int ow = 1 + static_cast<int>(rng() % 16);
    WrapMode wm = trial % 2 ? WrapMode::kWrap : WrapMode::kClamp;
    if (!oracle::close_rel(bilinear_upsample(x, oh, ow, wm),
                           oracle::upsample_oracle(x, oh, ow, wm), 1e-5f)) {
      c.fail("upsample oracle mismatch");
      break;
    }
  }
  int pool_trials = 0;
  while (pool_trials < 100) {
    const int ch = 1 + static_cast<int>(rng() % 8);
    const int h = 2 + static_cast<int>(rng() % 14);
    const int w = 2 + static_cast<int>(rng() % 14);
    const int k = 2 + static_cast<int>(rng() % 3);
    const int stride = 1 + static_cast<int>(rng() % 2);
    const int padv = static_cast<int>(rng() % 2);
    if (h + 2 * padv < k || w + 2 * padv < k) continue;
    PadMode mode = pool_trials % 2 ? PadMode::kRing : PadMode::kZero;
    PaddingSpec spec{mode, padv, padv, padv, padv, {}, {}};
    Tensor x = oracle::rand_tensor(rng, ch, h, w);
    if (max_abs_diff(maxpool2d(x, k, stride, spec),
                     oracle::maxpool2d_oracle(x, k, stride, spec)) > 0.0f) {
      c.fail("maxpool oracle mismatch");
      break;
    }
    ++pool_trials;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int ch = 2 + static_cast<int>(rng() % 7);
    const int hidden = 1 + static_cast<int>(rng() % 4);
    Tensor x = oracle::rand_tensor(rng, ch, 1 + rng() % 16, 1 + rng() % 16);
    SqueezeExcite se = oracle::rand_se(rng, ch, hidden);
    if (!oracle::close_rel(se_block(x, se), oracle::se_block_oracle(x, se),
                           1e-5f)) {
      c.fail("se_block oracle mismatch");
      break;
    }
  }
  c.note("conv2d/batchnorm/upsample/maxpool/se_block, 100 trials each");
}

// --- criterion 5: geometry round trip -------------------------------------

void criterion_geometry(Check& c) {
  AnnularCameraModel m;
  m.center_x = 100.0;
  m.center_y = 100.0;
  m.r_inner = 20.0;
  m.r_outer = 80.0;
  m.source_width = 200;
  m.source_height = 200;

  Raster img(1, 200, 200, 0.0f);
  for (int y = 0; y < 200; ++y) {
    for (int x = 0; x < 200; ++x) {
      double dx = x - m.center_x, dy = y - m.center_y;
      double theta = std::atan2(dy, dx);
      double r = std::hypot(dx, dy);
      img.at(0, y, x) = static_cast<float>(
          0.5 + 0.25 * std::sin(3.0 * theta) * std::cos(r / 12.0) +
          0.2 * std::sin(r / 9.0));
    }
  }
  Raster pano = unfold(img, m, 2048, 256, 0.0f);
  Raster back = fold_back(pano, m, ResampleMode::kBilinear, 0.0f);
  const double psnr = oracle::psnr_db(back, img, [&](int y, int x) {
    double r = std::hypot(x - m.center_x, y - m.center_y);
    return r >= m.r_inner + 2.0 && r <= m.r_outer - 2.0;
  });
  std::ostringstream os;
  os.precision(4);
  os << "round-trip " << psnr << " dB";
  c.note(os.str());
  if (psnr < 30.0) c.fail("PSNR below 30 dB");

  Raster ramp_img(1, 200, 200, 0.0f);
  for (int y = 0; y < 200; ++y) {
    for (int x = 0; x < 200; ++x) {
      double theta = std::atan2(y - m.center_y, x - m.center_x);
      if (theta < 0) theta += kTau;
      ramp_img.at(0, y, x) = static_cast<float>(theta / kTau);
    }
  }
  Raster ramp = unfold(ramp_img, m, 256, 64, 0.0f);
  float worst = 0.0f;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 256; ++j) {
      const float want = static_cast<float>(j) / 256.0f;
      if (want < 0.02f || want > 0.98f) continue;  // wrap column band
      worst = std::max(worst, std::fabs(ramp.at(0, i, j) - want));
    }
  }
  std::ostringstream os2;
  os2.precision(3);
  os2 << "ramp error " << worst;
  c.note(os2.str());
  if (worst > 1e-2f) c.fail("theta ramp deviates beyond 1e-2");
}

// --- criterion 6: evaluation correctness ----------------------------------

void criterion_evaluation(Check& c) {
  ConfusionMatrix cm(2);
  SegmentationMap gt(2, 2), pred(2, 2);
  gt.at(0, 0) = 0;
  gt.at(0, 1) = 0;
  gt.at(1, 0) = 1;
  gt.at(1, 1) = 1;
  pred = gt;
  pred.at(0, 1) = 1;
  accumulate_into(cm, pred, gt);
  if (cm.at(0, 0) != 1 || cm.at(0, 1) != 1 || cm.at(1, 0) != 0 ||
      cm.at(1, 1) != 2) {
    c.fail("hand confusion matrix mismatch");
  }
  if (std::fabs(*iou(cm, 0) - 0.5) > 1e-15) c.fail("IoU_0 != 1/2");
  if (std::fabs(*iou(cm, 1) - 2.0 / 3.0) > 1e-15) c.fail("IoU_1 != 2/3");
  if (std::fabs(miou(cm) - 7.0 / 12.0) > 1e-15) c.fail("mIoU != 7/12");

  std::mt19937 rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<std::pair<SegmentationMap, SegmentationMap>> pairs;
    for (int i = 0; i < 5; ++i) {
      SegmentationMap g(4, 4), p(4, 4);
      for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
          int gg = static_cast<int>(rng() % (k + 1));
          g.at(y, x) = gg == k ? kIgnoreId : gg;
          p.at(y, x) = static_cast<std::uint8_t>(rng() % k);
        }
      }
      pairs.emplace_back(std::move(p), std::move(g));
    }
    ConfusionMatrix forward(k), reversed(k);
    for (const auto& [p, g] : pairs) accumulate_into(forward, p, g);
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      accumulate_into(reversed, it->first, it->second);
    }
    if (!(forward == reversed)) {
      c.fail("order dependence at trial " + std::to_string(trial));
      break;
    }
    // simultaneous permutation leaves the mean unchanged
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ConfusionMatrix permuted(k);
    for (int g = 0; g < k; ++g) {
      for (int p = 0; p < k; ++p) permuted.at(perm[g], perm[p]) = forward.at(g, p);
    }
    bool f_ok = true, p_ok = true;
    double a = 0.0, b = 0.0;
    try {
      a = miou(forward);
    } catch (const InvalidInput&) {
      f_ok = false;
    }
    try {
      b = miou(permuted);
    } catch (const InvalidInput&) {
      p_ok = false;
    }
    if (f_ok != p_ok || (f_ok && std::fabs(a - b) > 1e-12)) {
      c.fail("permutation invariance violated");
      break;
    }
  }
  c.note("hand cases exact, 50 randomized property trials");
}

// --- criterion 7: semantic filter ------------------------------------------

void criterion_filter(Check& c) {
  SegmentationMap a(8, 16), b(8, 16);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 16; ++x) {
      a.at(y, x) = x < 8 ? 1 : 2;
      b.at(y, x) = x < 10 ? 1 : 2;
    }
  }
  std::vector<Match> matches = {
      {2.0, 1.0, 3.0, 1.0, 0.1},   {12.0, 1.0, 13.0, 1.0, 0.2},
      {7.0, 2.0, 11.0, 2.0, 0.3},  {9.0, 2.0, 9.0, 2.0, 0.4},
      {7.6, 3.0, 9.4, 3.0, 0.5},   {7.4, 3.0, 9.6, 3.0, 0.6},
      {0.0, 0.0, 15.0, 7.0, 0.7},  {8.0, 5.0, 10.0, 5.0, 0.8},
      {15.0, 6.0, 14.0, 6.0, 0.9}, {1.0, 7.0, 2.0, 7.0, 1.0},
  };
  auto [kept, rep] = filter_matches(matches, a, b);
  const std::vector<double> want_scores = {0.1, 0.2, 0.8, 0.9, 1.0};
  bool hand_ok = kept.size() == want_scores.size();
  for (std::size_t i = 0; hand_ok && i < kept.size(); ++i) {
    hand_ok = kept[i].score == want_scores[i];
  }
  if (!hand_ok) c.fail("10-match hand oracle mismatch");
  if (rep.kept + rep.rejected != rep.total) c.fail("report counts inconsistent");

  auto [kept2, rep2] = filter_matches(kept, a, b);
  if (!(kept2 == kept) || rep2.rejected != 0) c.fail("idempotence violated");

  std::mt19937 rng(707);
  std::uniform_real_distribution<double> dist(0.0, 15.0);
  std::vector<Match> random_matches;
  for (int i = 0; i < 300; ++i) {
    random_matches.push_back(
        {dist(rng), dist(rng) / 2.0, dist(rng), dist(rng) / 2.0, dist(rng)});
  }
  auto [base_kept, base_rep] = filter_matches(random_matches, a, b);
  for (std::size_t drop = 0; drop < random_matches.size(); drop += 29) {
    std::vector<Match> fewer = random_matches;
    fewer.erase(fewer.begin() + static_cast<long>(drop));
    auto [fk, fr] = filter_matches(fewer, a, b);
    for (const Match& m : fk) {
      if (std::find(base_kept.begin(), base_kept.end(), m) == base_kept.end()) {
        c.fail("monotonicity violated");
        break;
      }
    }
  }

  SegmentationMap ig(8, 16, kIgnoreId);
  auto [ik, ir] = filter_matches(matches, ig, ig);
  if (!ik.empty()) c.fail("ignore-labeled matches were kept");
  c.note("idempotent, monotone, ignore-safe, hand case exact");
}

// --- criterion 8: weight container ----------------------------------------

void criterion_weights(Check& c) {
  NetworkDef def;  // full default SwaftNet parameter set
  def.num_classes = 6;
  Network net = build(def, SeededRandom{42});
  NetworkWeights w = extract_weights(net);
  fs::path p = fs::temp_directory_path() / "dspass_acceptance_weights.dspw";
  w.save(p.string());
  NetworkWeights r = NetworkWeights::load(p.string());
  if (!(r == w)) c.fail("round trip not bit-exact");
  c.note(std::to_string(w.size()) + " parameters, " +
         std::to_string(fs::file_size(p)) + " bytes");

  std::ifstream in(p, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  in.close();
  {
    std::string bad = bytes;
    bad[0] = 'Z';
    std::ofstream out(p, std::ios::binary);
    out.write(bad.data(), static_cast<std::streamsize>(bad.size()));
    out.close();
    try {
      NetworkWeights::load(p.string());
      c.fail("tampered magic accepted");
    } catch (const FormatError& e) {
      if (e.byte_offset() != 0) c.fail("magic error offset wrong");
    }
  }
  {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 3));
    out.close();
    try {
      NetworkWeights::load(p.string());
      c.fail("truncated container accepted");
    } catch (const FormatError&) {
    }
  }
  {
    NetworkWeights partial;
    for (const std::string& n : w.names()) {
      if (n == "decoder.up2.conv.weight") continue;
      const ParamEntry& e = w.at(n);
      partial.add(n, e.shape, e.data);
    }
    partial.save(p.string());
    try {
      build(def, NetworkWeights::load(p.string()));
      c.fail("missing parameter accepted");
    } catch (const InvalidInput& e) {
      if (std::string(e.what()).find("decoder.up2.conv.weight") ==
          std::string::npos) {
        c.fail("missing-parameter error does not name it");
      }
    }
  }
  fs::remove(p);
}

// --- criterion 9: CLI determinism ------------------------------------------

void criterion_determinism(Check& c) {
  const char* cli = std::getenv("DSPASS_CLI");
  if (!cli) {
    c.fail("DSPASS_CLI not set; cannot drive the CLI");
    return;
  }
  fs::path dir = fs::temp_directory_path() / "dspass_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << "{\"seed\": 42, \"num_segments\": 4, \"padding_mode\": "
           "\"neighbor\", \"network\": {\"num_classes\": 6}}";
  }
  save_rgb_png(random_panorama(123, 3, 64, 256), (dir / "pano.png").string());
  auto run = [&](int threads, const std::string& out) {
    std::string cmd = std::string(cli) + " --threads " +
                      std::to_string(threads) + " infer --config " +
                      (dir / "config.json").string() + " --in " +
                      (dir / "pano.png").string() + " --out " +
                      (dir / out).string() + " > " +
                      (dir / "log.txt").string() + " 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  if (run(1, "seg_t1.png") != 0) {
    c.fail("single-thread CLI run failed");
  } else if (run(4, "seg_t4.png") != 0 || run(8, "seg_t8.png") != 0) {
    c.fail("multi-thread CLI run failed");
  } else {
    const std::string t1 = slurp(dir / "seg_t1.png");
    if (t1.empty()) c.fail("empty output PNG");
    if (t1 != slurp(dir / "seg_t4.png") || t1 != slurp(dir / "seg_t8.png")) {
      c.fail("outputs differ across thread counts");
    } else {
      c.note("threads 1/4/8 byte-identical (" + std::to_string(t1.size()) +
             " bytes)");
    }
  }
  fs::remove_all(dir);
}

// --- criterion 10: shape contract ------------------------------------------

void criterion_shapes(Check& c) {
  NetworkDef def;
  def.num_classes = 6;
  Network net = build(def, SeededRandom{42});
  struct Case {
    int h, w;
  } cases[] = {{64, 128}, {96, 256}};
  for (const Case& cs : cases) {
    Raster x = random_panorama(55, 3, cs.h, cs.w);
    Tensor logits = full_pass(net, x, PadMode::kRing);
    if (logits.channels() != def.num_classes || logits.height() != cs.h ||
        logits.width() != cs.w) {
      c.fail("logits " + logits.shape_str() + " for input 3x" +
             std::to_string(cs.h) + "x" + std::to_string(cs.w));
    }
    if (!logits.all_finite()) c.fail("non-finite logits");
  }
  c.note("3x64x128 and 3x96x256 map to num_classes x H x W");
}

}  // namespace

int main() {
  const unsigned hc = std::thread::hardware_concurrency();
  set_num_threads(std::clamp(hc, 1u, 8u));

  struct Criterion {
    int id;
    const char* title;
    std::function<void(Check&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "segment equivalence vs ring full pass", criterion_equivalence},
      {2, "blind-spot ablation spikes at segment boundaries",
       criterion_ablation},
      {3, "ring-shift equivariance of the segmentation", criterion_shift},
      {4, "kernel oracle suite", criterion_kernels},
      {5, "annular geometry round trip", criterion_geometry},
      {6, "evaluation correctness", criterion_evaluation},
      {7, "semantic match filter properties", criterion_filter},
      {8, "weight container round trip and corruption handling",
       criterion_weights},
      {9, "CLI determinism across thread counts", criterion_determinism},
      {10, "network shape contract", criterion_shapes},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    Check check;
    try {
      cr.fn(check);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    if (!check.ok) ++failures;
    std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.id
              << ": " << cr.title;
    if (!check.detail.empty()) std::cout << " — " << check.detail;
    std::cout << std::endl;
  }
  return failures;
}
