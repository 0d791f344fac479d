// SPDX-License-Identifier: Apache-2.0
// Central finite differences against the analytic gradients of the MLP and
// both PPO losses.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "orgym/agent/ppo.hpp"

namespace orgym::testing {

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

// Max relative error over every parameter of `net` for loss(net).
inline double check_gradient(agent::Mlp& net, const std::function<double(const agent::Mlp&)>& loss,
                             const std::vector<double>& analytic, double eps = 1e-5) {
  double worst = 0.0;
  auto& p = net.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + eps;
    const double up = loss(net);
    p[i] = saved - eps;
    const double down = loss(net);
    p[i] = saved;
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2 * eps)));
  }
  return worst;
}

struct GradReport {
  double mlp = 0.0;
  double surrogate = 0.0;
  double value = 0.0;
  double worst() const { return std::max({mlp, surrogate, value}); }
};

// One random 5x30 net per check; inputs and targets drawn from `seed`.
inline GradReport gradient_check(std::uint64_t seed, int inputs = 6, int actions = 9, int batch = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto vec = [&](int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = normal(rng);
    return v;
  };
  GradReport report;

  // Raw network: L = sum_k c_k * out_k.
  {
    auto net = agent::Mlp::standard(inputs, actions, seed);
    const auto x = vec(inputs);
    const auto c = vec(actions);
    auto loss = [&](const agent::Mlp& n) {
      const auto out = n.forward(x);
      double s = 0.0;
      for (std::size_t k = 0; k < out.size(); ++k) s += c[k] * out[k];
      return s;
    };
    agent::Mlp::Tape tape;
    net.forward(x, tape);
    std::vector<double> grad;
    net.backward(tape, c, grad);
    report.mlp = check_gradient(net, loss, grad);
  }

  // Clipped surrogate with ratios scattered around 1.
  {
    auto actor = agent::Mlp::standard(inputs, actions, seed + 1000);
    std::vector<agent::ActorSample> samples;
    std::uniform_int_distribution<int> pick(0, actions - 1);
    for (int i = 0; i < batch; ++i) {
      agent::ActorSample s;
      s.input = vec(inputs);
      s.action = pick(rng);
      const auto p = agent::softmax(actor.forward(s.input));
      s.old_log_prob = std::log(p[static_cast<std::size_t>(s.action)]) + 0.1 * normal(rng);
      s.advantage = normal(rng);
      samples.push_back(std::move(s));
    }
    std::vector<double> grad;
    agent::clipped_surrogate(actor, samples, 0.2, &grad);
    report.surrogate =
        check_gradient(actor, [&](const agent::Mlp& n) { return agent::clipped_surrogate(n, samples, 0.2, nullptr); },
                       grad);
  }

  // Critic squared error.
  {
    auto critic = agent::Mlp::standard(inputs, 1, seed + 2000);
    std::vector<agent::CriticSample> samples;
    for (int i = 0; i < batch; ++i) samples.push_back(agent::CriticSample{vec(inputs), 3.0 * normal(rng)});
    std::vector<double> grad;
    agent::value_loss(critic, samples, &grad);
    report.value =
        check_gradient(critic, [&](const agent::Mlp& n) { return agent::value_loss(n, samples, nullptr); }, grad);
  }
  return report;
}

}  // namespace orgym::testing
