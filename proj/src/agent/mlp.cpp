// SPDX-License-Identifier: Apache-2.0
#include "orgym/agent/mlp.hpp"

#include <cmath>
#include <random>

#include "orgym/common/error.hpp"

namespace orgym::agent {

Mlp::Mlp(std::vector<int> sizes, std::uint64_t seed) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw Error(ErrorCode::kInvalidValue, "sizes", "need input and output sizes");
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double bound = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < in * out; ++i) params_.push_back(dist(rng));
    params_.insert(params_.end(), static_cast<std::size_t>(out), 0.0);
  }
}

Mlp Mlp::standard(int input, int output, std::uint64_t seed) {
  std::vector<int> sizes{input};
  sizes.insert(sizes.end(), kHiddenLayers, kHiddenUnits);
  sizes.push_back(output);
  return Mlp(std::move(sizes), seed);
}

std::size_t Mlp::output_layer_offset() const {
  std::size_t off = 0;
  for (std::size_t l = 0; l + 2 < sizes_.size(); ++l) {
    off += static_cast<std::size_t>(sizes_[l] * sizes_[l + 1] + sizes_[l + 1]);
  }
  return off;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Tape tape;
  return forward(x, tape);
}

std::vector<double> Mlp::forward(std::span<const double> x, Tape& tape) const {
  if (static_cast<int>(x.size()) != input_dim()) {
    throw Error(ErrorCode::kInvalidValue, "features",
                "expected " + std::to_string(input_dim()) + " inputs, got " + std::to_string(x.size()));
  }
  tape.activations.assign(1, std::vector<double>(x.begin(), x.end()));
  std::size_t off = 0;
  const std::size_t layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const auto& a = tape.activations.back();
    std::vector<double> z(static_cast<std::size_t>(out));
    const double* w = params_.data() + off;
    const double* b = w + in * out;
    for (int o = 0; o < out; ++o) {
      double s = b[o];
      const double* row = w + o * in;
      for (int i = 0; i < in; ++i) s += row[i] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = l + 1 < layers ? std::tanh(s) : s;
    }
    off += static_cast<std::size_t>(in * out + out);
    tape.activations.push_back(std::move(z));
  }
  return tape.activations.back();
}

void Mlp::backward(const Tape& tape, std::span<const double> dout, std::vector<double>& grad) const {
  grad.resize(params_.size(), 0.0);
  const std::size_t layers = sizes_.size() - 1;
  std::vector<std::size_t> offsets(layers);
  std::size_t off = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = off;
    off += static_cast<std::size_t>(sizes_[l] * sizes_[l + 1] + sizes_[l + 1]);
  }
  std::vector<double> delta(dout.begin(), dout.end());  // dL/dz of the current layer
  for (std::size_t l = layers; l-- > 0;) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const auto& a = tape.activations[l];
    const double* w = params_.data() + offsets[l];
    double* gw = grad.data() + offsets[l];
    double* gb = gw + in * out;
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      gb[o] += d;
      double* grow = gw + o * in;
      for (int i = 0; i < in; ++i) grow[i] += d * a[static_cast<std::size_t>(i)];
    }
    if (l == 0) break;
    std::vector<double> prev(static_cast<std::size_t>(in), 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      const double* row = w + o * in;
      for (int i = 0; i < in; ++i) prev[static_cast<std::size_t>(i)] += row[i] * d;
    }
    // previous layer is tanh: da/dz = 1 - a^2
    for (int i = 0; i < in; ++i) {
      const double ai = a[static_cast<std::size_t>(i)];
      prev[static_cast<std::size_t>(i)] *= 1.0 - ai * ai;
    }
    delta = std::move(prev);
  }
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
  if (m_.size() != params.size()) {
    m_.assign(params.size(), 0.0);
    v_.assign(params.size(), 0.0);
  }
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
    v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

}  // namespace orgym::agent
