// SPDX-License-Identifier: Apache-2.0
#include "orgym/agent/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "orgym/common/error.hpp"

namespace orgym::agent {
namespace {

constexpr int kCheckpointVersion = 1;

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json shapes = nlohmann::json::array();
  for (std::size_t l = 0; l + 1 < net.sizes().size(); ++l) shapes.push_back({net.sizes()[l + 1], net.sizes()[l]});
  return {{"shapes", shapes}, {"params", net.params()}};
}

void mlp_from_json(const nlohmann::json& j, Mlp& net) {
  const auto& shapes = j.at("shapes");
  if (shapes.size() + 1 != net.sizes().size()) {
    throw Error(ErrorCode::kSchemaMismatch, "shapes", "layer count differs from the 5x30 layout");
  }
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    if (shapes[l].at(0).get<int>() != net.sizes()[l + 1] || shapes[l].at(1).get<int>() != net.sizes()[l]) {
      throw Error(ErrorCode::kSchemaMismatch, "shapes", "layer " + std::to_string(l) + " shape differs");
    }
  }
  auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != net.params().size() || !all_finite(params)) {
    throw Error(ErrorCode::kSchemaMismatch, "params", "parameter count or values invalid");
  }
  net.params() = std::move(params);
}

}  // namespace

std::vector<double> encode_features(const xapp::FeatureVector& features) {
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double x = features[i];
    out[i] = std::copysign(std::log1p(std::abs(x)), x);
  }
  return out;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += p[i] = std::exp(logits[i] - m);
  for (auto& v : p) v /= sum;
  return p;
}

std::vector<double> discounted_returns(const Trajectory& trajectory, double gamma) {
  std::vector<double> g(trajectory.size());
  double acc = 0.0;
  for (std::size_t i = trajectory.size(); i-- > 0;) {
    if (trajectory[i].episode_end) acc = 0.0;
    acc = trajectory[i].reward + gamma * acc;
    g[i] = acc;
  }
  return g;
}

double clipped_surrogate(const Mlp& actor, const std::vector<ActorSample>& batch, double clip,
                         std::vector<double>* grad) {
  if (grad) grad->resize(actor.params().size(), 0.0);
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;
  Mlp::Tape tape;
  for (const auto& s : batch) {
    const auto logits = actor.forward(s.input, tape);
    const auto p = softmax(logits);
    const auto a = static_cast<std::size_t>(s.action);
    const double ratio = std::exp(std::log(p[a]) - s.old_log_prob);
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    const double s1 = ratio * s.advantage;
    const double s2 = clipped * s.advantage;
    loss -= std::min(s1, s2) / n;
    if (!grad) continue;
    // The clipped branch has zero slope once the ratio leaves the band in
    // the advantage's favoured direction.
    const bool flat = (s.advantage > 0.0 && ratio > 1.0 + clip) || (s.advantage < 0.0 && ratio < 1.0 - clip);
    if (flat || s.advantage == 0.0) continue;
    std::vector<double> dlogits(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      dlogits[k] = -s.advantage * ratio * ((k == a ? 1.0 : 0.0) - p[k]) / n;
    }
    actor.backward(tape, dlogits, *grad);
  }
  return loss;
}

double value_loss(const Mlp& critic, const std::vector<CriticSample>& batch, std::vector<double>* grad) {
  if (grad) grad->resize(critic.params().size(), 0.0);
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;
  Mlp::Tape tape;
  for (const auto& s : batch) {
    const double v = critic.forward(s.input, tape)[0];
    const double e = v - s.target;
    loss += e * e / n;
    if (!grad) continue;
    const double d = 2.0 * e / n;
    critic.backward(tape, std::span<const double>(&d, 1), *grad);
  }
  return loss;
}

PpoAgent::PpoAgent(int feature_dim, int action_count, PpoConfig config)
    : config_(config),
      actor_(Mlp::standard(feature_dim, action_count, config.seed * 2 + 1)),
      critic_(Mlp::standard(feature_dim, 1, config.seed * 2 + 2)),
      actor_opt_(config.lr),
      critic_opt_(config.lr),
      rng_(config.seed) {
  if (feature_dim <= 0 || action_count <= 0) {
    throw Error(ErrorCode::kInvalidValue, "dims", "feature and action counts must be positive");
  }
  // Zero output layer: the initial policy is exactly uniform.
  auto& p = actor_.params();
  std::fill(p.begin() + static_cast<std::ptrdiff_t>(actor_.output_layer_offset()), p.end(), 0.0);
}

std::vector<double> PpoAgent::probabilities(const xapp::FeatureVector& features) const {
  return softmax(actor_.forward(encode_features(features)));
}

double PpoAgent::value(const xapp::FeatureVector& features) const {
  return critic_.forward(encode_features(features))[0];
}

ActResult PpoAgent::act(const xapp::FeatureVector& features, ActMode mode) {
  ActResult r;
  r.probs = probabilities(features);
  if (mode == ActMode::kGreedy) {
    r.action = static_cast<int>(std::max_element(r.probs.begin(), r.probs.end()) - r.probs.begin());
  } else {
    std::discrete_distribution<int> dist(r.probs.begin(), r.probs.end());
    r.action = dist(rng_);
  }
  r.log_prob = std::log(r.probs[static_cast<std::size_t>(r.action)]);
  r.value = value(features);
  return r;
}

UpdateStats PpoAgent::update(const Trajectory& trajectory) {
  if (trajectory.empty() || !trajectory.back().episode_end) {
    throw Error(ErrorCode::kInvalidValue, "trajectory", "needs at least one complete episode");
  }
  const auto returns = discounted_returns(trajectory, config_.gamma);
  std::vector<ActorSample> actor_samples;
  std::vector<CriticSample> critic_samples;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto& t = trajectory[i];
    auto x = encode_features(t.features);
    actor_samples.push_back(ActorSample{x, t.action, t.log_prob, returns[i] - t.value});
    critic_samples.push_back(CriticSample{std::move(x), returns[i]});
    if (!std::isfinite(actor_samples.back().advantage)) {
      throw Error(ErrorCode::kNonFiniteGradient, "advantage", "non-finite advantage at step " + std::to_string(i));
    }
  }

  const Mlp actor_backup = actor_;
  const Mlp critic_backup = critic_;
  const Adam actor_opt_backup = actor_opt_;
  const Adam critic_opt_backup = critic_opt_;
  auto restore = [&] {
    actor_ = actor_backup;
    critic_ = critic_backup;
    actor_opt_ = actor_opt_backup;
    critic_opt_ = critic_opt_backup;
  };

  std::vector<std::size_t> order(trajectory.size());
  std::iota(order.begin(), order.end(), 0);
  const auto mb = static_cast<std::size_t>(std::max(1, config_.minibatch));
  UpdateStats stats;
  for (int epoch = 0; epoch < config_.update_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng_);
    double actor_sum = 0.0;
    double critic_sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += mb) {
      std::vector<ActorSample> ab;
      std::vector<CriticSample> cb;
      for (std::size_t k = start; k < std::min(order.size(), start + mb); ++k) {
        ab.push_back(actor_samples[order[k]]);
        cb.push_back(critic_samples[order[k]]);
      }
      std::vector<double> ga;
      std::vector<double> gc;
      actor_sum += clipped_surrogate(actor_, ab, config_.clip, &ga);
      critic_sum += value_loss(critic_, cb, &gc);
      ++batches;
      if (!all_finite(ga) || !all_finite(gc)) {
        restore();
        throw Error(ErrorCode::kNonFiniteGradient, "gradient", "non-finite gradient in update epoch " +
                                                                   std::to_string(epoch));
      }
      actor_opt_.step(actor_.params(), ga);
      critic_opt_.step(critic_.params(), gc);
    }
    stats.actor_loss = actor_sum / batches;
    stats.critic_loss = critic_sum / batches;
  }
  if (!all_finite(actor_.params()) || !all_finite(critic_.params())) {
    restore();
    throw Error(ErrorCode::kNonFiniteGradient, "params", "update produced non-finite parameters");
  }
  return stats;
}

nlohmann::json PpoAgent::to_json() const {
  return {{"format", "orgym-ppo"},
          {"version", kCheckpointVersion},
          {"feature_dim", feature_dim()},
          {"action_count", action_count()},
          {"config",
           {{"clip", config_.clip},
            {"gamma", config_.gamma},
            {"horizon", config_.horizon},
            {"lr", config_.lr},
            {"update_epochs", config_.update_epochs},
            {"minibatch", config_.minibatch},
            {"seed", config_.seed}}},
          {"actor", mlp_to_json(actor_)},
          {"critic", mlp_to_json(critic_)}};
}

PpoAgent PpoAgent::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "orgym-ppo" || j.at("version").get<int>() != kCheckpointVersion) {
      throw Error(ErrorCode::kSchemaMismatch, "version", "unsupported checkpoint format");
    }
    const auto& c = j.at("config");
    PpoConfig cfg;
    cfg.clip = c.at("clip").get<double>();
    cfg.gamma = c.at("gamma").get<double>();
    cfg.horizon = c.at("horizon").get<int>();
    cfg.lr = c.at("lr").get<double>();
    cfg.update_epochs = c.at("update_epochs").get<int>();
    cfg.minibatch = c.at("minibatch").get<int>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    PpoAgent agent(j.at("feature_dim").get<int>(), j.at("action_count").get<int>(), cfg);
    mlp_from_json(j.at("actor"), agent.actor_);
    mlp_from_json(j.at("critic"), agent.critic_);
    return agent;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, "checkpoint", e.what());
  }
}

void PpoAgent::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, path, "cannot open for writing");
  out << to_json().dump() << '\n';
  if (!out) throw Error(ErrorCode::kIo, path, "write failed");
}

PpoAgent PpoAgent::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, path, "cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, path, e.what());
  }
  return from_json(j);
}

TrainResult train_ppo(PpoAgent& agent, SliceEnv& env, int episodes, std::ostream* log) {
  if (env.action_count() != agent.action_count() || env.feature_dim() != agent.feature_dim()) {
    throw Error(ErrorCode::kInvalidValue, "agent", "agent dimensions do not match the environment");
  }
  TrainResult result;
  if (log) *log << "episode,mean_reward,actor_loss,critic_loss\n";
  for (int ep = 0; ep < episodes; ++ep) {
    Trajectory traj;
    auto features = env.reset();
    double total = 0.0;
    bool done = false;
    while (!done) {
      const auto a = agent.act(features, ActMode::kSample);
      auto s = env.step(a.action);
      done = s.done || static_cast<int>(traj.size()) + 1 >= agent.config().horizon;
      traj.push_back(Transition{features, a.action, s.reward, a.value, a.log_prob, done});
      total += s.reward;
      features = std::move(s.features);
    }
    const auto stats = agent.update(traj);
    const double mean = total / static_cast<double>(traj.size());
    result.episode_rewards.push_back(mean);
    result.updates.push_back(stats);
    if (log) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", ep, mean, stats.actor_loss, stats.critic_loss);
      *log << buf;
    }
  }
  return result;
}

double evaluate_agent(PpoAgent& agent, SliceEnv& env, int episodes, ActMode mode) {
  double total = 0.0;
  int n = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    auto features = env.reset();
    for (bool done = false; !done;) {
      auto s = env.step(agent.act(features, mode).action);
      total += s.reward;
      ++n;
      done = s.done;
      features = std::move(s.features);
    }
  }
  return total / n;
}

double evaluate_random(SliceEnv& env, int episodes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, env.action_count() - 1);
  double total = 0.0;
  int n = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset();
    for (bool done = false; !done;) {
      auto s = env.step(pick(rng));
      total += s.reward;
      ++n;
      done = s.done;
    }
  }
  return total / n;
}

}  // namespace orgym::agent
