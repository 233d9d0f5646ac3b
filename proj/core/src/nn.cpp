// Copyright 2026 The ChromaCycle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chromacycle/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <Eigen/Core>

#include "chromacycle/error.hpp"

namespace chromacycle::nn {
namespace {

using MatR = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapR = Eigen::Map<MatR>;
using CMapR = Eigen::Map<const MatR>;

struct Geometry {
  int channels, height, width, kernel, stride, pad, out_h, out_w;

  std::size_t col_rows() const { return static_cast<std::size_t>(channels) * kernel * kernel; }
  std::size_t col_cols() const { return static_cast<std::size_t>(out_h) * out_w; }
};

// Output positions o with 0 <= o*s - p + k < extent lie in [lo, hi).
void valid_range(int k, const Geometry& g, int extent, int out, int& lo, int& hi) {
  const int off = k - g.pad;
  lo = off >= 0 ? 0 : (-off + g.stride - 1) / g.stride;
  const int last = extent - 1 - off;
  hi = last < 0 ? 0 : std::min(out, last / g.stride + 1);
  lo = std::min(lo, hi);
}

// cols[(c, ky, kx), (oy, ox)] = x[c, oy*s - p + ky, ox*s - p + kx] (zero outside).
void im2col(const float* x, const Geometry& g, float* cols) {
  const std::size_t plane = static_cast<std::size_t>(g.height) * g.width;
  for (int c = 0; c < g.channels; ++c) {
    for (int ky = 0; ky < g.kernel; ++ky) {
      int y_lo, y_hi;
      valid_range(ky, g, g.height, g.out_h, y_lo, y_hi);
      for (int kx = 0; kx < g.kernel; ++kx) {
        int x_lo, x_hi;
        valid_range(kx, g, g.width, g.out_w, x_lo, x_hi);
        float* dst = cols + ((static_cast<std::size_t>(c) * g.kernel + ky) * g.kernel + kx) *
                                g.col_cols();
        std::fill(dst, dst + g.col_cols(), 0.0f);
        for (int oy = y_lo; oy < y_hi; ++oy) {
          const float* src = x + c * plane + static_cast<std::size_t>(oy * g.stride - g.pad + ky) * g.width;
          float* row = dst + static_cast<std::size_t>(oy) * g.out_w;
          const int base = kx - g.pad;
          if (g.stride == 1) {
            std::memcpy(row + x_lo, src + x_lo + base, sizeof(float) * (x_hi - x_lo));
          } else {
            for (int ox = x_lo; ox < x_hi; ++ox) row[ox] = src[ox * g.stride + base];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatters-and-adds columns back into x (x must be zeroed).
void col2im(const float* cols, const Geometry& g, float* x) {
  const std::size_t plane = static_cast<std::size_t>(g.height) * g.width;
  for (int c = 0; c < g.channels; ++c) {
    for (int ky = 0; ky < g.kernel; ++ky) {
      int y_lo, y_hi;
      valid_range(ky, g, g.height, g.out_h, y_lo, y_hi);
      for (int kx = 0; kx < g.kernel; ++kx) {
        int x_lo, x_hi;
        valid_range(kx, g, g.width, g.out_w, x_lo, x_hi);
        const float* src = cols + ((static_cast<std::size_t>(c) * g.kernel + ky) * g.kernel + kx) *
                                      g.col_cols();
        for (int oy = y_lo; oy < y_hi; ++oy) {
          float* dst = x + c * plane + static_cast<std::size_t>(oy * g.stride - g.pad + ky) * g.width;
          const float* row = src + static_cast<std::size_t>(oy) * g.out_w;
          const int base = kx - g.pad;
          for (int ox = x_lo; ox < x_hi; ++ox) dst[ox * g.stride + base] += row[ox];
        }
      }
    }
  }
}

void add_bias(Tensor& y, const Tensor& bias) {
  for (int n = 0; n < y.n(); ++n) {
    for (int c = 0; c < y.c(); ++c) {
      float* p = y.plane(n, c);
      const float b = bias.data()[c];
      for (std::size_t i = 0; i < y.plane_size(); ++i) p[i] += b;
    }
  }
}

void accumulate_bias_grad(const Tensor& grad_out, Tensor& bias_grad) {
  for (int n = 0; n < grad_out.n(); ++n) {
    for (int c = 0; c < grad_out.c(); ++c) {
      const float* p = grad_out.plane(n, c);
      double s = 0.0;
      for (std::size_t i = 0; i < grad_out.plane_size(); ++i) s += p[i];
      bias_grad.data()[c] += static_cast<float>(s);
    }
  }
}

Trace& child(Trace* trace, std::size_t i) { return trace->children[i]; }

}  // namespace

const Tensor& ParameterSet::at(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

Tensor& ParameterSet::at(const std::string& name) {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet out;
  out.fingerprint = fingerprint;
  for (const auto& [name, t] : tensors) out.tensors.emplace(name, Tensor(t.shape()));
  return out;
}

std::size_t ParameterSet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors) n += t.size();
  return n;
}

bool ParameterSet::all_finite() const {
  return std::all_of(tensors.begin(), tensors.end(),
                     [](const auto& kv) { return kv.second.all_finite(); });
}

float ParameterSet::max_abs() const {
  float m = 0.0f;
  for (const auto& [name, t] : tensors) m = std::max(m, t.max_abs());
  return m;
}

// ---------------------------------------------------------------------------

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad)
    : name_(std::move(name)), in_(in_ch), out_(out_ch), k_(kernel), stride_(stride), pad_(pad) {}

void Conv2d::declare(std::vector<ParamDecl>& out) const {
  out.push_back({weight_name(), {out_, in_, k_, k_}, Init::normal_002});
  out.push_back({bias_name(), {1, out_, 1, 1}, Init::zeros});
}

Tensor Conv2d::forward(const ParameterSet& params, const Tensor& x, Trace* trace) const {
  if (x.c() != in_) {
    throw ShapeError(name_ + ": expected " + std::to_string(in_) + " input channels, got " +
                     std::to_string(x.c()));
  }
  const Geometry g{in_, x.h(), x.w(), k_, stride_, pad_,
                   (x.h() + 2 * pad_ - k_) / stride_ + 1, (x.w() + 2 * pad_ - k_) / stride_ + 1};
  if (g.out_h < 1 || g.out_w < 1) throw ShapeError(name_ + ": input too small");
  const Tensor& w = params.at(weight_name());
  Tensor y(x.n(), out_, g.out_h, g.out_w);
  std::vector<float> cols(g.col_rows() * g.col_cols());
  const CMapR wm(w.data(), out_, static_cast<Eigen::Index>(g.col_rows()));
  for (int n = 0; n < x.n(); ++n) {
    im2col(x.plane(n, 0), g, cols.data());
    const CMapR cm(cols.data(), static_cast<Eigen::Index>(g.col_rows()),
                   static_cast<Eigen::Index>(g.col_cols()));
    MapR ym(y.plane(n, 0), out_, static_cast<Eigen::Index>(g.col_cols()));
    ym.noalias() = wm * cm;
  }
  add_bias(y, params.at(bias_name()));
  if (trace) trace->saved = {x};
  return y;
}

Tensor Conv2d::backward(const ParameterSet& params, const Trace& trace, const Tensor& grad_out,
                        ParameterSet& grads) const {
  const Tensor& x = trace.saved.at(0);
  const Geometry g{in_, x.h(), x.w(), k_, stride_, pad_, grad_out.h(), grad_out.w()};
  const Tensor& w = params.at(weight_name());
  Tensor& dw = grads.at(weight_name());
  accumulate_bias_grad(grad_out, grads.at(bias_name()));

  Tensor dx(x.shape());
  std::vector<float> cols(g.col_rows() * g.col_cols());
  std::vector<float> dcols(cols.size());
  const auto rows = static_cast<Eigen::Index>(g.col_rows());
  const auto ncols = static_cast<Eigen::Index>(g.col_cols());
  const CMapR wm(w.data(), out_, rows);
  MapR dwm(dw.data(), out_, rows);
  for (int n = 0; n < x.n(); ++n) {
    im2col(x.plane(n, 0), g, cols.data());
    const CMapR cm(cols.data(), rows, ncols);
    const CMapR gm(grad_out.plane(n, 0), out_, ncols);
    dwm.noalias() += gm * cm.transpose();
    MapR dcm(dcols.data(), rows, ncols);
    dcm.noalias() = wm.transpose() * gm;
    col2im(dcols.data(), g, dx.plane(n, 0));
  }
  return dx;
}

// ---------------------------------------------------------------------------

ConvTranspose2d::ConvTranspose2d(std::string name, int in_ch, int out_ch, int kernel, int stride,
                                 int pad)
    : name_(std::move(name)), in_(in_ch), out_(out_ch), k_(kernel), stride_(stride), pad_(pad) {}

void ConvTranspose2d::declare(std::vector<ParamDecl>& out) const {
  out.push_back({name_ + ".weight", {in_, out_, k_, k_}, Init::normal_002});
  out.push_back({name_ + ".bias", {1, out_, 1, 1}, Init::zeros});
}

Tensor ConvTranspose2d::forward(const ParameterSet& params, const Tensor& x, Trace* trace) const {
  if (x.c() != in_) {
    throw ShapeError(name_ + ": expected " + std::to_string(in_) + " input channels, got " +
                     std::to_string(x.c()));
  }
  const int out_h = (x.h() - 1) * stride_ - 2 * pad_ + k_;
  const int out_w = (x.w() - 1) * stride_ - 2 * pad_ + k_;
  if (out_h < 1 || out_w < 1) throw ShapeError(name_ + ": input too small");
  // Geometry of the forward convolution whose input-gradient this layer is.
  const Geometry g{out_, out_h, out_w, k_, stride_, pad_, x.h(), x.w()};
  const Tensor& w = params.at(name_ + ".weight");
  Tensor y(x.n(), out_, out_h, out_w);
  std::vector<float> cols(g.col_rows() * g.col_cols());
  const auto rows = static_cast<Eigen::Index>(g.col_rows());
  const auto ncols = static_cast<Eigen::Index>(g.col_cols());
  const CMapR wm(w.data(), in_, rows);
  for (int n = 0; n < x.n(); ++n) {
    const CMapR xm(x.plane(n, 0), in_, ncols);
    MapR cm(cols.data(), rows, ncols);
    cm.noalias() = wm.transpose() * xm;
    col2im(cols.data(), g, y.plane(n, 0));
  }
  add_bias(y, params.at(name_ + ".bias"));
  if (trace) trace->saved = {x};
  return y;
}

Tensor ConvTranspose2d::backward(const ParameterSet& params, const Trace& trace,
                                 const Tensor& grad_out, ParameterSet& grads) const {
  const Tensor& x = trace.saved.at(0);
  const Geometry g{out_, grad_out.h(), grad_out.w(), k_, stride_, pad_, x.h(), x.w()};
  const Tensor& w = params.at(name_ + ".weight");
  Tensor& dw = grads.at(name_ + ".weight");
  accumulate_bias_grad(grad_out, grads.at(name_ + ".bias"));

  Tensor dx(x.shape());
  std::vector<float> cols(g.col_rows() * g.col_cols());
  const auto rows = static_cast<Eigen::Index>(g.col_rows());
  const auto ncols = static_cast<Eigen::Index>(g.col_cols());
  const CMapR wm(w.data(), in_, rows);
  MapR dwm(dw.data(), in_, rows);
  for (int n = 0; n < x.n(); ++n) {
    im2col(grad_out.plane(n, 0), g, cols.data());
    const CMapR cm(cols.data(), rows, ncols);
    const CMapR xm(x.plane(n, 0), in_, ncols);
    MapR dxm(dx.plane(n, 0), in_, ncols);
    dxm.noalias() = wm * cm;
    dwm.noalias() += xm * cm.transpose();
  }
  return dx;
}

// ---------------------------------------------------------------------------

Tensor InstanceNorm::forward(const ParameterSet&, const Tensor& x, Trace* trace) const {
  Tensor y(x.shape());
  Tensor inv_std(x.n(), x.c(), 1, 1);
  const std::size_t m = x.plane_size();
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < x.c(); ++c) {
      const float* src = x.plane(n, c);
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) sum += src[i];
      const double mean = sum / static_cast<double>(m);
      double sq = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = src[i] - mean;
        sq += d * d;
      }
      const double inv = 1.0 / std::sqrt(sq / static_cast<double>(m) + eps_);
      float* dst = y.plane(n, c);
      for (std::size_t i = 0; i < m; ++i) dst[i] = static_cast<float>((src[i] - mean) * inv);
      inv_std.at(n, c, 0, 0) = static_cast<float>(inv);
    }
  }
  if (trace) trace->saved = {y, inv_std};
  return y;
}

Tensor InstanceNorm::backward(const ParameterSet&, const Trace& trace, const Tensor& grad_out,
                              ParameterSet&) const {
  const Tensor& y = trace.saved.at(0);
  const Tensor& inv_std = trace.saved.at(1);
  Tensor dx(y.shape());
  const std::size_t m = y.plane_size();
  for (int n = 0; n < y.n(); ++n) {
    for (int c = 0; c < y.c(); ++c) {
      const float* g = grad_out.plane(n, c);
      const float* yp = y.plane(n, c);
      double mean_g = 0.0;
      double mean_gy = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        mean_g += g[i];
        mean_gy += static_cast<double>(g[i]) * yp[i];
      }
      mean_g /= static_cast<double>(m);
      mean_gy /= static_cast<double>(m);
      const double inv = inv_std.at(n, c, 0, 0);
      float* d = dx.plane(n, c);
      for (std::size_t i = 0; i < m; ++i) {
        d[i] = static_cast<float>(inv * (g[i] - mean_g - yp[i] * mean_gy));
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------

Tensor LeakyReLU::forward(const ParameterSet&, const Tensor& x, Trace* trace) const {
  Tensor y(x.shape());
  const float* src = x.data();
  float* dst = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) dst[i] = src[i] > 0.0f ? src[i] : slope_ * src[i];
  if (trace) trace->saved = {x};
  return y;
}

Tensor LeakyReLU::backward(const ParameterSet&, const Trace& trace, const Tensor& grad_out,
                           ParameterSet&) const {
  const Tensor& x = trace.saved.at(0);
  Tensor dx(x.shape());
  const float* src = x.data();
  const float* g = grad_out.data();
  float* d = dx.data();
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = src[i] > 0.0f ? g[i] : slope_ * g[i];
  return dx;
}

Tensor ScaledTanh::forward(const ParameterSet&, const Tensor& x, Trace* trace) const {
  Tensor t(x.shape());
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    t.data()[i] = std::tanh(x.data()[i]);
    y.data()[i] = scale_ * t.data()[i] + shift_;
  }
  if (trace) trace->saved = {std::move(t)};
  return y;
}

Tensor ScaledTanh::backward(const ParameterSet&, const Trace& trace, const Tensor& grad_out,
                            ParameterSet&) const {
  const Tensor& t = trace.saved.at(0);
  Tensor dx(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const float tv = t.data()[i];
    dx.data()[i] = grad_out.data()[i] * scale_ * (1.0f - tv * tv);
  }
  return dx;
}

// ---------------------------------------------------------------------------

Sequential& Sequential::add(LayerPtr layer) {
  layers_.push_back(std::move(layer));
  return *this;
}

Tensor Sequential::forward(const ParameterSet& params, const Tensor& x, Trace* trace) const {
  if (trace) trace->children.assign(layers_.size(), Trace{});
  Tensor h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i]->forward(params, h, trace ? &child(trace, i) : nullptr);
  }
  return h;
}

Tensor Sequential::backward(const ParameterSet& params, const Trace& trace, const Tensor& grad_out,
                            ParameterSet& grads) const {
  if (trace.children.size() != layers_.size()) {
    throw Error("Sequential::backward: trace does not match network");
  }
  Tensor g = grad_out;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    g = layers_[i]->backward(params, trace.children[i], g, grads);
  }
  return g;
}

void Sequential::declare(std::vector<ParamDecl>& out) const {
  for (const auto& l : layers_) l->declare(out);
}

Tensor Residual::forward(const ParameterSet& params, const Tensor& x, Trace* trace) const {
  if (trace) trace->children.assign(1, Trace{});
  Tensor y = body_->forward(params, x, trace ? &child(trace, 0) : nullptr);
  if (y.shape() != x.shape()) throw ShapeError("Residual: body changes shape");
  for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += x.data()[i];
  return y;
}

Tensor Residual::backward(const ParameterSet& params, const Trace& trace, const Tensor& grad_out,
                          ParameterSet& grads) const {
  Tensor g = body_->backward(params, trace.children.at(0), grad_out, grads);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += grad_out.data()[i];
  return g;
}

void Residual::declare(std::vector<ParamDecl>& out) const { body_->declare(out); }

// ---------------------------------------------------------------------------

ParameterSet initialize(const std::vector<ParamDecl>& decls, std::uint64_t seed,
                        std::string fingerprint) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 0.02f);
  ParameterSet params;
  params.fingerprint = std::move(fingerprint);
  for (const auto& d : decls) {
    Tensor t(d.shape);
    if (d.init == Init::normal_002) {
      for (float& v : t.values()) v = normal(rng);
    }
    if (!params.tensors.emplace(d.name, std::move(t)).second) {
      throw ConfigError("duplicate parameter name '" + d.name + "'");
    }
  }
  return params;
}

void check_parameters(const std::vector<ParamDecl>& decls, const ParameterSet& params) {
  if (decls.size() != params.tensors.size()) {
    throw ConfigError("parameter set has " + std::to_string(params.tensors.size()) +
                      " tensors, network declares " + std::to_string(decls.size()));
  }
  for (const auto& d : decls) {
    const Tensor& t = params.at(d.name);
    if (t.shape() != d.shape) throw ConfigError("parameter '" + d.name + "' has wrong shape");
  }
}

}  // namespace chromacycle::nn
