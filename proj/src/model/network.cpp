/*
 * Copyright 2026 The signemo Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "signemo/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signemo/error.hpp"
#include "signemo/kernels/kernels.hpp"
#include "signemo/util/random.hpp"

namespace signemo::model {
namespace {

inline double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct LayerShape {
  std::size_t input;
  std::size_t hidden;
  std::size_t cols() const { return input + hidden; }
};

// Per-step activations kept for backpropagation through time. Only unmasked
// steps are stored, in order.
struct LayerTrace {
  LayerShape shape{};
  std::size_t steps = 0;
  std::vector<double> z;      // steps x (I + H): [x_t; h_{t-1}]
  std::vector<double> gates;  // steps x 4H: i, f, g, o after activation
  std::vector<double> c;      // steps x H
  std::vector<double> tanh_c; // steps x H
  std::vector<double> h;      // steps x H

  void reset(LayerShape s, std::size_t n) {
    shape = s;
    steps = n;
    z.assign(n * s.cols(), 0.0);
    gates.assign(n * 4 * s.hidden, 0.0);
    c.assign(n * s.hidden, 0.0);
    tanh_c.assign(n * s.hidden, 0.0);
    h.assign(n * s.hidden, 0.0);
  }
  const double* h_at(std::size_t t) const { return h.data() + t * shape.hidden; }
};

// One LSTM step. z must already hold [x_t; h_{t-1}].
void lstm_step(const kernels::KernelTable& k, LayerShape s, const double* w, const double* b,
               const double* z, const double* c_prev, double* gates, double* c, double* tanh_c,
               double* h) {
  const std::size_t H = s.hidden;
  k.gemv(w, 4 * H, s.cols(), z, b, gates);
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sigmoid(gates[j]);
    const double f = sigmoid(gates[H + j]);
    const double g = std::tanh(gates[2 * H + j]);
    const double o = sigmoid(gates[3 * H + j]);
    gates[j] = i;
    gates[H + j] = f;
    gates[2 * H + j] = g;
    gates[3 * H + j] = o;
    c[j] = f * c_prev[j] + i * g;
    tanh_c[j] = std::tanh(c[j]);
    h[j] = o * tanh_c[j];
  }
}

// Runs a layer over `steps` inputs (each `input` wide, contiguous) and records
// the trace.
void run_layer(const kernels::KernelTable& k, LayerShape s, std::span<const double> w,
               std::span<const double> b, const double* inputs, std::size_t steps,
               LayerTrace& trace) {
  trace.reset(s, steps);
  const std::vector<double> zeros(s.hidden, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    double* z = trace.z.data() + t * s.cols();
    std::copy_n(inputs + t * s.input, s.input, z);
    const double* h_prev = t ? trace.h.data() + (t - 1) * s.hidden : zeros.data();
    const double* c_prev = t ? trace.c.data() + (t - 1) * s.hidden : zeros.data();
    std::copy_n(h_prev, s.hidden, z + s.input);
    lstm_step(k, s, w.data(), b.data(), z, c_prev, trace.gates.data() + t * 4 * s.hidden,
              trace.c.data() + t * s.hidden, trace.tanh_c.data() + t * s.hidden,
              trace.h.data() + t * s.hidden);
  }
}

// Backpropagation through one layer. dh_ext holds dL/dh_t from above for every
// step (steps x H); dx receives dL/dx_t (steps x I).
void backprop_layer(const kernels::KernelTable& k, const LayerTrace& tr,
                    std::span<const double> w, const std::vector<double>& dh_ext,
                    std::span<double> dw, std::span<double> db, std::vector<double>* dx) {
  const LayerShape s = tr.shape;
  const std::size_t H = s.hidden;
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), da(4 * H), dz(s.cols());
  if (dx) dx->assign(tr.steps * s.input, 0.0);
  for (std::size_t t = tr.steps; t-- > 0;) {
    const double* gates = tr.gates.data() + t * 4 * H;
    const double* tanh_c = tr.tanh_c.data() + t * H;
    const double* c_prev = t ? tr.c.data() + (t - 1) * H : nullptr;
    for (std::size_t j = 0; j < H; ++j) {
      const double i = gates[j], f = gates[H + j], g = gates[2 * H + j], o = gates[3 * H + j];
      const double dh = dh_ext[t * H + j] + dh_next[j];
      const double dc = dc_next[j] + dh * o * (1.0 - tanh_c[j] * tanh_c[j]);
      da[j] = dc * g * i * (1.0 - i);
      da[H + j] = c_prev ? dc * c_prev[j] * f * (1.0 - f) : 0.0;
      da[2 * H + j] = dc * i * (1.0 - g * g);
      da[3 * H + j] = dh * tanh_c[j] * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    const double* z = tr.z.data() + t * s.cols();
    k.ger_acc(dw.data(), 4 * H, s.cols(), da.data(), z);
    k.axpy(1.0, da.data(), db.data(), 4 * H);
    std::fill(dz.begin(), dz.end(), 0.0);
    k.gemv_t_acc(w.data(), 4 * H, s.cols(), da.data(), dz.data());
    if (dx) std::copy_n(dz.data(), s.input, dx->data() + t * s.input);
    std::copy_n(dz.data() + s.input, H, dh_next.data());
  }
}

struct ForwardTrace {
  LayerTrace layer1;
  LayerTrace layer2;
  PerEmotion<double> logits{};
};

void run_forward(const ModelConfig& cfg, const Parameters& p, const InputSequence& in,
                 ForwardTrace& tr) {
  const auto& k = kernels::active();
  std::vector<double> packed;
  packed.reserve(in.valid_frames() * in.dim);
  for (std::size_t t = 0; t < in.frames(); ++t) {
    if (in.mask[t]) packed.insert(packed.end(), in.frame(t), in.frame(t) + in.dim);
  }
  const std::size_t steps = packed.size() / in.dim;
  run_layer(k, {cfg.input_dim, cfg.hidden1}, p.lstm1_w(), p.lstm1_b(), packed.data(), steps,
            tr.layer1);
  run_layer(k, {cfg.hidden1, cfg.hidden2}, p.lstm2_w(), p.lstm2_b(), tr.layer1.h.data(), steps,
            tr.layer2);
  const double* last = tr.layer2.h_at(steps - 1);
  k.gemv(p.head_w().data(), cfg.n_classes, cfg.hidden2, last, p.head_b().data(), tr.logits.data());
}

}  // namespace

std::size_t InputSequence::valid_frames() const {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(),
                                                [](std::uint8_t m) { return m != 0; }));
}

InputSequence InputSequence::dense(std::size_t dim, std::vector<double> values) {
  if (dim == 0 || values.size() % dim != 0) {
    throw ValidationError("input sequence: value count is not a multiple of dim");
  }
  InputSequence s;
  s.dim = dim;
  s.mask.assign(values.size() / dim, 1);
  s.values = std::move(values);
  return s;
}

void InputSequence::pad_to(std::size_t total) {
  if (total <= frames()) return;
  values.resize(total * dim, 0.0);
  mask.resize(total, 0);
}

std::pair<std::size_t, std::size_t> center_truncation(std::size_t n, std::size_t max_len) {
  if (n <= max_len) return {0, n};
  const std::size_t begin = (n - max_len) / 2;
  return {begin, begin + max_len};
}

InputSequence prepare_input(const features::FrameFeatureSequence& seq, const ModelConfig& cfg) {
  if (cfg.input_dim != features::kFusedDim && cfg.input_dim != features::kFaceDim) {
    throw ValidationError("feature dimension mismatch: model expects input_dim " +
                          std::to_string(cfg.input_dim) + ", feature files provide " +
                          std::to_string(features::kFusedDim) + " (or the " +
                          std::to_string(features::kFaceDim) + "-d face slice)");
  }
  if (seq.empty()) throw ValidationError("feature sequence has no frames");
  const auto [begin, end] = center_truncation(seq.size(), cfg.max_seq_len);
  InputSequence in;
  in.dim = cfg.input_dim;
  in.values.reserve((end - begin) * cfg.input_dim);
  for (std::size_t t = begin; t < end; ++t) {
    const auto f = seq.frame(t);
    in.values.insert(in.values.end(), f.begin(), f.begin() + static_cast<std::ptrdiff_t>(cfg.input_dim));
  }
  in.mask.assign(end - begin, 1);
  return in;
}

EmotionDistribution softmax(const PerEmotion<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  EmotionDistribution p{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

Network::Network(ModelConfig config, Parameters params)
    : config_(std::move(config)), params_(std::move(params)) {
  validate(config_);
  if (params_.size() != ParameterLayout(config_).total) {
    throw ValidationError("parameter count " + std::to_string(params_.size()) +
                          " does not match config (" +
                          std::to_string(ParameterLayout(config_).total) + ")");
  }
}

Network Network::initialize(const ModelConfig& config, std::uint64_t seed) {
  validate(config);
  Parameters p(config);
  util::SplitMix64 rng(seed);
  auto fill = [&](std::span<double> v, double bound) {
    for (auto& x : v) x = rng.uniform(-bound, bound);
  };
  const double k1 = 1.0 / std::sqrt(static_cast<double>(config.hidden1));
  const double k2 = 1.0 / std::sqrt(static_cast<double>(config.hidden2));
  fill(p.lstm1_w(), k1);
  fill(p.lstm1_b(), k1);
  fill(p.lstm2_w(), k2);
  fill(p.lstm2_b(), k2);
  fill(p.head_w(), k2);
  std::fill_n(p.lstm1_b().begin() + static_cast<std::ptrdiff_t>(config.hidden1), config.hidden1, 1.0);
  std::fill_n(p.lstm2_b().begin() + static_cast<std::ptrdiff_t>(config.hidden2), config.hidden2, 1.0);
  return Network(config, std::move(p));
}

void Network::check_input(const InputSequence& in) const {
  if (in.dim != config_.input_dim) {
    throw ValidationError("input dimension mismatch: expected " +
                          std::to_string(config_.input_dim) + ", got " + std::to_string(in.dim));
  }
  if (in.values.size() != in.frames() * in.dim) {
    throw ValidationError("input sequence: values and mask disagree on frame count");
  }
  if (in.valid_frames() == 0) throw ValidationError("input sequence has no unmasked frames");
}

PerEmotion<double> Network::logits(const InputSequence& in) const {
  check_input(in);
  ForwardTrace tr;
  run_forward(config_, params_, in, tr);
  return tr.logits;
}

EmotionDistribution Network::forward(const InputSequence& in) const { return softmax(logits(in)); }

double Network::accumulate_gradient(const InputSequence& in, Emotion target, double weight,
                                    Parameters& grad) const {
  check_input(in);
  if (grad.size() != params_.size()) throw ValidationError("gradient buffer has wrong size");
  const auto& k = kernels::active();
  ForwardTrace tr;
  run_forward(config_, params_, in, tr);
  const auto p = softmax(tr.logits);
  const std::size_t y = index_of(target);
  const double loss = -std::log(std::max(p[y], 1e-300));

  PerEmotion<double> dlogits{};
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    dlogits[i] = weight * (p[i] - (i == y ? 1.0 : 0.0));
  }
  const std::size_t steps = tr.layer2.steps;
  const std::size_t H2 = config_.hidden2;
  const double* last = tr.layer2.h_at(steps - 1);
  k.ger_acc(grad.head_w().data(), kNumEmotions, H2, dlogits.data(), last);
  k.axpy(1.0, dlogits.data(), grad.head_b().data(), kNumEmotions);

  std::vector<double> dh2(steps * H2, 0.0);
  k.gemv_t_acc(params_.head_w().data(), kNumEmotions, H2, dlogits.data(),
               dh2.data() + (steps - 1) * H2);
  std::vector<double> dh1;
  backprop_layer(k, tr.layer2, params_.lstm2_w(), dh2, grad.lstm2_w(), grad.lstm2_b(), &dh1);
  backprop_layer(k, tr.layer1, params_.lstm1_w(), dh1, grad.lstm1_w(), grad.lstm1_b(), nullptr);
  return weight * loss;
}

}  // namespace signemo::model
