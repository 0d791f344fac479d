// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace orgym::agent {

inline constexpr int kHiddenLayers = 5;
inline constexpr int kHiddenUnits = 30;

// Dense network with tanh hidden layers and a linear output. Parameters are
// one flat vector: per layer, W (out x in, row-major) then b.
class Mlp {
 public:
  Mlp() = default;
  // sizes = {input, hidden..., output}. Xavier-uniform weights, zero biases.
  Mlp(std::vector<int> sizes, std::uint64_t seed);
  static Mlp standard(int input, int output, std::uint64_t seed);

  struct Tape {
    std::vector<std::vector<double>> activations;  // input, then each layer's output
  };

  std::vector<double> forward(std::span<const double> x) const;
  std::vector<double> forward(std::span<const double> x, Tape& tape) const;
  // Adds dL/dparams to `grad` (sized like params()) given dL/doutput.
  void backward(const Tape& tape, std::span<const double> dout, std::vector<double>& grad) const;

  const std::vector<int>& sizes() const { return sizes_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  // Offset of the last layer's weights in params().
  std::size_t output_layer_offset() const;

 private:
  std::vector<int> sizes_;
  std::vector<double> params_;
};

class Adam {
 public:
  explicit Adam(double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {}
  void step(std::vector<double>& params, const std::vector<double>& grad);
  double lr() const { return lr_; }

 private:
  double lr_, b1_, b2_, eps_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

}  // namespace orgym::agent
