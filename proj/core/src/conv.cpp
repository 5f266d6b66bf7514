#include "dspass/conv.hpp"

#include <string>

#include "dspass/error.hpp"
#include "dspass/parallel.hpp"

namespace dspass {

void ConvParams::validate() const {
  if (out_channels <= 0 || in_channels <= 0 || kernel_h <= 0 || kernel_w <= 0) {
    throw InvalidInput("conv parameters must be positive");
  }
  if (stride <= 0) throw InvalidInput("conv stride must be positive");
  std::size_t expect = static_cast<std::size_t>(out_channels) * in_channels *
                       kernel_h * kernel_w;
  if (weights.size() != expect) {
    throw InvalidInput("conv weight length " + std::to_string(weights.size()) +
                       " != " + std::to_string(expect));
  }
  if (bias && bias->size() != static_cast<std::size_t>(out_channels)) {
    throw InvalidInput("conv bias length " + std::to_string(bias->size()) +
                       " != out_channels " + std::to_string(out_channels));
  }
}

Tensor conv2d(const Tensor& x, const ConvParams& p, const PaddingSpec& spec) {
  p.validate();
  if (x.channels() != p.in_channels) {
    throw InvalidInput("conv2d channel mismatch: input has " +
                       std::to_string(x.channels()) + ", params expect " +
                       std::to_string(p.in_channels));
  }
  Tensor padded = pad(x, spec);
  const int ph = padded.height(), pw = padded.width();
  const int out_h = (ph - p.kernel_h) / p.stride + 1;
  const int out_w = (pw - p.kernel_w) / p.stride + 1;
  if (ph < p.kernel_h || pw < p.kernel_w || out_h <= 0 || out_w <= 0) {
    throw InvalidInput("conv2d produces empty output: padded " +
                       std::to_string(ph) + "x" + std::to_string(pw) +
                       " with kernel " + std::to_string(p.kernel_h) + "x" +
                       std::to_string(p.kernel_w));
  }

  Tensor out(p.out_channels, out_h, out_w);
  parallel_for(p.out_channels, [&](int oc) {
    const float b = p.bias ? (*p.bias)[oc] : 0.0f;
    for (int oy = 0; oy < out_h; ++oy) {
      float* out_row = out.row(oc, oy);
      const int iy0 = oy * p.stride;
      for (int ox = 0; ox < out_w; ++ox) {
        const int ix0 = ox * p.stride;
        float acc = b;
        for (int ic = 0; ic < p.in_channels; ++ic) {
          const float* k = p.kernel(oc, ic);
          for (int ky = 0; ky < p.kernel_h; ++ky) {
            const float* in_row = padded.row(ic, iy0 + ky) + ix0;
            const float* krow = k + ky * p.kernel_w;
            for (int kx = 0; kx < p.kernel_w; ++kx) {
              acc += krow[kx] * in_row[kx];
            }
          }
        }
        out_row[ox] = acc;
      }
    }
  });
  return out;
}

}  // namespace dspass
