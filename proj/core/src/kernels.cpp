#include "dspass/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dspass/error.hpp"
#include "dspass/parallel.hpp"

namespace dspass {

namespace {

void check_param_len(std::size_t got, int channels, const char* name) {
  if (got != static_cast<std::size_t>(channels)) {
    throw InvalidInput(std::string(name) + " length " + std::to_string(got) +
                       " != channel count " + std::to_string(channels));
  }
}

}  // namespace

Tensor batchnorm_inference(const Tensor& x, std::span<const float> scale,
                           std::span<const float> shift,
                           std::span<const float> running_mean,
                           std::span<const float> running_var, float epsilon) {
  const int c = x.channels();
  check_param_len(scale.size(), c, "scale");
  check_param_len(shift.size(), c, "shift");
  check_param_len(running_mean.size(), c, "running_mean");
  check_param_len(running_var.size(), c, "running_var");
  for (int i = 0; i < c; ++i) {
    if (running_var[i] < 0.0f) {
      throw InvalidInput("running_var must be >= 0");
    }
  }
  Tensor out(c, x.height(), x.width());
  const std::size_t plane = static_cast<std::size_t>(x.height()) * x.width();
  for (int ch = 0; ch < c; ++ch) {
    const float inv = 1.0f / std::sqrt(running_var[ch] + epsilon);
    const float a = scale[ch] * inv;
    const float b = shift[ch] - running_mean[ch] * a;
    const float* src = x.data() + ch * plane;
    float* dst = out.data() + ch * plane;
    for (std::size_t i = 0; i < plane; ++i) dst[i] = src[i] * a + b;
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out(x.channels(), x.height(), x.width());
  const float* src = x.data();
  float* dst = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) dst[i] = src[i] > 0.0f ? src[i] : 0.0f;
  return out;
}

Tensor sigmoid(const Tensor& x) {
  Tensor out(x.channels(), x.height(), x.width());
  const float* src = x.data();
  float* dst = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    dst[i] = 1.0f / (1.0f + std::exp(-src[i]));
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw InvalidInput("add shape mismatch: " + a.shape_str() + " vs " +
                       b.shape_str());
  }
  Tensor out(a.channels(), a.height(), a.width());
  const float* pa = a.data();
  const float* pb = b.data();
  float* dst = out.data();
  for (std::size_t i = 0; i < a.size(); ++i) dst[i] = pa[i] + pb[i];
  return out;
}

Tensor scale_channels(const Tensor& x, std::span<const float> weights) {
  check_param_len(weights.size(), x.channels(), "channel weights");
  Tensor out(x.channels(), x.height(), x.width());
  const std::size_t plane = static_cast<std::size_t>(x.height()) * x.width();
  for (int c = 0; c < x.channels(); ++c) {
    const float w = weights[c];
    const float* src = x.data() + c * plane;
    float* dst = out.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) dst[i] = src[i] * w;
  }
  return out;
}

Tensor maxpool2d(const Tensor& x, int kernel, int stride,
                 const PaddingSpec& spec) {
  if (kernel <= 0 || stride <= 0) {
    throw InvalidInput("maxpool kernel and stride must be positive");
  }
  Tensor padded = pad(x, spec);
  const int out_h = (padded.height() - kernel) / stride + 1;
  const int out_w = (padded.width() - kernel) / stride + 1;
  if (padded.height() < kernel || padded.width() < kernel || out_h <= 0 ||
      out_w <= 0) {
    throw InvalidInput("maxpool produces empty output");
  }
  Tensor out(x.channels(), out_h, out_w);
  parallel_for(x.channels(), [&](int c) {
    for (int oy = 0; oy < out_h; ++oy) {
      float* dst = out.row(c, oy);
      for (int ox = 0; ox < out_w; ++ox) {
        float m = padded.at(c, oy * stride, ox * stride);
        for (int ky = 0; ky < kernel; ++ky) {
          const float* src = padded.row(c, oy * stride + ky) + ox * stride;
          for (int kx = 0; kx < kernel; ++kx) m = std::max(m, src[kx]);
        }
        dst[ox] = m;
      }
    }
  });
  return out;
}

ChannelSums channel_partial_sums(const Tensor& x) {
  ChannelSums cs;
  cs.count = static_cast<long long>(x.height()) * x.width();
  cs.sums.resize(x.channels());
  const std::size_t plane = static_cast<std::size_t>(x.height()) * x.width();
  for (int c = 0; c < x.channels(); ++c) {
    const float* src = x.data() + c * plane;
    float acc = 0.0f;
    for (std::size_t i = 0; i < plane; ++i) acc += src[i];
    cs.sums[c] = acc;
  }
  return cs;
}

std::vector<float> global_avg_pool(const Tensor& x) {
  if (x.height() <= 0 || x.width() <= 0) {
    throw InvalidInput("global_avg_pool on empty tensor");
  }
  ChannelSums cs = channel_partial_sums(x);
  std::vector<float> out(x.channels());
  for (int c = 0; c < x.channels(); ++c) {
    out[c] = cs.sums[c] / static_cast<float>(cs.count);
  }
  return out;
}

BandSums band_partial_sums(const Tensor& x, int bands) {
  if (bands <= 0) throw InvalidInput("band count must be positive");
  if (x.height() <= 0 || x.width() <= 0) {
    throw InvalidInput("band pooling on empty tensor");
  }
  BandSums bs;
  bs.bands = bands;
  bs.columns = x.width();
  bs.sums.assign(static_cast<std::size_t>(x.channels()) * bands, 0.0f);
  const int h = x.height();
  for (int c = 0; c < x.channels(); ++c) {
    for (int i = 0; i < bands; ++i) {
      const int y0 = (i * h) / bands;
      const int y1 = ((i + 1) * h + bands - 1) / bands;
      float acc = 0.0f;
      for (int y = y0; y < y1; ++y) {
        const float* src = x.row(c, y);
        for (int xcol = 0; xcol < x.width(); ++xcol) acc += src[xcol];
      }
      bs.sums[static_cast<std::size_t>(c) * bands + i] = acc;
    }
  }
  return bs;
}

Tensor pool_bands(const Tensor& x, int bands) {
  BandSums bs = band_partial_sums(x, bands);
  const int h = x.height();
  Tensor out(x.channels(), bands, 1);
  for (int c = 0; c < x.channels(); ++c) {
    for (int i = 0; i < bands; ++i) {
      const int y0 = (i * h) / bands;
      const int y1 = ((i + 1) * h + bands - 1) / bands;
      const float n = static_cast<float>((y1 - y0) * x.width());
      out.at(c, i, 0) = bs.sums[static_cast<std::size_t>(c) * bands + i] / n;
    }
  }
  return out;
}

Tensor bilinear_upsample(const Tensor& x, int out_h, int out_w,
                         WrapMode horizontal) {
  if (out_h <= 0 || out_w <= 0) {
    throw InvalidInput("upsample target size must be positive");
  }
  if (x.height() <= 0 || x.width() <= 0) {
    throw InvalidInput("upsample of empty tensor");
  }
  const int h = x.height(), w = x.width();
  const double sy_scale = static_cast<double>(h) / out_h;
  const double sx_scale = static_cast<double>(w) / out_w;

  struct Tap {
    int i0, i1;
    float f;
  };
  std::vector<Tap> ys(out_h), xs(out_w);
  for (int oy = 0; oy < out_h; ++oy) {
    double sy = (oy + 0.5) * sy_scale - 0.5;
    if (sy < 0.0) sy = 0.0;  // vertical handling clamps
    int y0 = static_cast<int>(sy);
    if (y0 > h - 1) y0 = h - 1;
    int y1 = std::min(y0 + 1, h - 1);
    ys[oy] = {y0, y1, static_cast<float>(sy - y0)};
  }
  for (int ox = 0; ox < out_w; ++ox) {
    double sx = (ox + 0.5) * sx_scale - 0.5;
    if (horizontal == WrapMode::kClamp) {
      if (sx < 0.0) sx = 0.0;
      int x0 = static_cast<int>(sx);
      if (x0 > w - 1) x0 = w - 1;
      int x1 = std::min(x0 + 1, w - 1);
      xs[ox] = {x0, x1, static_cast<float>(sx - x0)};
    } else {
      int x0 = static_cast<int>(std::floor(sx));
      float f = static_cast<float>(sx - x0);
      int w0 = ((x0 % w) + w) % w;
      int w1 = (w0 + 1) % w;
      xs[ox] = {w0, w1, f};
    }
  }

  Tensor out(x.channels(), out_h, out_w);
  parallel_for(x.channels(), [&](int c) {
    for (int oy = 0; oy < out_h; ++oy) {
      const Tap& ty = ys[oy];
      const float* r0 = x.row(c, ty.i0);
      const float* r1 = x.row(c, ty.i1);
      float* dst = out.row(c, oy);
      for (int ox = 0; ox < out_w; ++ox) {
        const Tap& tx = xs[ox];
        const float top = r0[tx.i0] + (r0[tx.i1] - r0[tx.i0]) * tx.f;
        const float bot = r1[tx.i0] + (r1[tx.i1] - r1[tx.i0]) * tx.f;
        dst[ox] = top + (bot - top) * ty.f;
      }
    }
  });
  return out;
}

Tensor concat_channels(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw InvalidInput("concat_channels of empty list");
  const int h = parts[0].height(), w = parts[0].width();
  int ctot = 0;
  for (const Tensor& t : parts) {
    if (t.height() != h || t.width() != w) {
      throw InvalidInput("concat_channels spatial mismatch: " + t.shape_str());
    }
    ctot += t.channels();
  }
  Tensor out(ctot, h, w);
  float* dst = out.data();
  for (const Tensor& t : parts) {
    std::copy(t.data(), t.data() + t.size(), dst);
    dst += t.size();
  }
  return out;
}

Tensor concat_width(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw InvalidInput("concat_width of empty list");
  const int c = parts[0].channels(), h = parts[0].height();
  int wtot = 0;
  for (const Tensor& t : parts) {
    if (t.channels() != c || t.height() != h) {
      throw InvalidInput("concat_width channel/height mismatch: " +
                         t.shape_str());
    }
    wtot += t.width();
  }
  Tensor out(c, h, wtot);
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      float* dst = out.row(ch, y);
      for (const Tensor& t : parts) {
        std::copy(t.row(ch, y), t.row(ch, y) + t.width(), dst);
        dst += t.width();
      }
    }
  }
  return out;
}

Tensor elementwise_max(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw InvalidInput("elementwise_max shape mismatch: " + a.shape_str() +
                       " vs " + b.shape_str());
  }
  Tensor out(a.channels(), a.height(), a.width());
  const float* pa = a.data();
  const float* pb = b.data();
  float* dst = out.data();
  for (std::size_t i = 0; i < a.size(); ++i) dst[i] = std::max(pa[i], pb[i]);
  return out;
}

std::vector<float> linear(std::span<const float> v,
                          std::span<const float> weight, int out_dim,
                          int in_dim, std::span<const float> bias) {
  if (static_cast<int>(v.size()) != in_dim) {
    throw InvalidInput("linear input length " + std::to_string(v.size()) +
                       " != " + std::to_string(in_dim));
  }
  if (weight.size() != static_cast<std::size_t>(out_dim) * in_dim) {
    throw InvalidInput("linear weight size mismatch");
  }
  if (!bias.empty() && static_cast<int>(bias.size()) != out_dim) {
    throw InvalidInput("linear bias length mismatch");
  }
  std::vector<float> out(out_dim);
  for (int o = 0; o < out_dim; ++o) {
    float acc = bias.empty() ? 0.0f : bias[o];
    const float* wrow = weight.data() + static_cast<std::size_t>(o) * in_dim;
    for (int i = 0; i < in_dim; ++i) acc += wrow[i] * v[i];
    out[o] = acc;
  }
  return out;
}

}  // namespace dspass
