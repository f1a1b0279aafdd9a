/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qsci/policy.hpp"

namespace qsci {

struct GrpoConfig {
  double clip = 0.2;
  int updates_per_batch = 30;
  double learning_rate = 5e-6;
  double weight_decay = 0.01;
  double sigma_floor = 1e-8;

  void validate() const {
    if (clip <= 0.0 || clip >= 1.0) throw std::invalid_argument("grpo: clip must be in (0, 1)");
    if (updates_per_batch < 1) throw std::invalid_argument("grpo: updates_per_batch must be >= 1");
  }
};

/// Group-normalized advantages: (r - mean) / std with population statistics.
/// A batch with std below the floor gets all-zero advantages (the update is
/// skipped downstream).
inline std::vector<double> compute_advantages(const std::vector<double> &rewards,
                                              double sigma_floor = 1e-8) {
  const std::size_t m = rewards.size();
  if (m < 2) throw std::invalid_argument("compute_advantages: need at least 2 rewards");
  double mean = 0.0;
  for (const double r : rewards) mean += r;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (const double r : rewards) var += (r - mean) * (r - mean);
  const double sigma = std::sqrt(var / static_cast<double>(m));
  std::vector<double> adv(m, 0.0);
  if (sigma < sigma_floor) return adv;
  for (std::size_t k = 0; k < m; ++k) adv[k] = (rewards[k] - mean) / sigma;
  return adv;
}

/// Clipped-ratio policy loss over a frozen batch:
///   L = -(1/M) sum_m (1/L) sum_t min(rho * A, clip(rho, 1-eps, 1+eps) * A)
/// with rho the importance ratio against the sampling-time log-probs. The
/// gradient follows the computation graph; at clip boundaries the unclipped
/// branch is used. Returns (loss, gradient over the flat parameters).
inline std::pair<double, std::vector<double>> grpo_loss_and_grad(const PolicyParameters &params,
                                                                 const SampledBatch &batch,
                                                                 const GrpoConfig &cfg) {
  cfg.validate();
  if (batch.advantages.size() != static_cast<std::size_t>(batch.m_count))
    throw std::invalid_argument("grpo_loss_and_grad: advantages not set");
  const auto &pcfg = params.config();
  const double penalty = pcfg.repetition_penalty;

  double loss = 0.0;
  std::vector<double> grad(params.size(), 0.0);

  for (int m = 0; m < batch.m_count; ++m) {
    const auto &tokens = batch.tokens[static_cast<std::size_t>(m)];
    const auto &old_lp = batch.old_logprobs[static_cast<std::size_t>(m)];
    const double adv = batch.advantages[static_cast<std::size_t>(m)];

    std::vector<int> full{0};
    full.insert(full.end(), tokens.begin(), tokens.end());
    const auto cache = policy_forward(params, full);

    RowMat dlogits = RowMat::Zero(cache.t_len, pcfg.vocab_size);
    std::vector<char> emitted(static_cast<std::size_t>(pcfg.vocab_size), 0);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      Eigen::VectorXd logits = cache.logits.row(static_cast<Eigen::Index>(t)).transpose();
      Eigen::VectorXd slope;
      detail::adjust_logits(logits, emitted, penalty, &slope);
      detail::log_softmax(logits);
      const int k = tokens[t];
      const double lp = logits(k);
      const double rho = std::exp(lp - old_lp[t]);
      if (!std::isfinite(rho)) throw std::runtime_error("grpo_loss_and_grad: non-finite ratio");

      const double unclipped = rho * adv;
      const double clipped = std::min(std::max(rho, 1.0 - cfg.clip), 1.0 + cfg.clip) * adv;
      const double scale = 1.0 / (static_cast<double>(batch.m_count) * batch.length);
      loss -= scale * std::min(unclipped, clipped);

      if (unclipped <= clipped) {
        // d(-min)/d(logprob) = -rho * adv on the pass-through branch.
        const double dlp = -scale * rho * adv;
        for (Eigen::Index v = 0; v < logits.size(); ++v) {
          const double p = std::isfinite(logits(v)) ? std::exp(logits(v)) : 0.0;
          const double indicator = v == k ? 1.0 : 0.0;
          dlogits(static_cast<Eigen::Index>(t), v) += dlp * (indicator - p) * slope(v);
        }
      }
      emitted[static_cast<std::size_t>(k)] = 1;
    }
    policy_backward(params, cache, dlogits, grad);
  }

  if (!std::isfinite(loss)) throw std::runtime_error("grpo_loss_and_grad: non-finite loss");
  for (const double g : grad)
    if (!std::isfinite(g)) throw std::runtime_error("grpo_loss_and_grad: non-finite gradient");
  return {loss, std::move(grad)};
}

/// AdamW optimizer state over the flat parameter buffer.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
};

/// One decoupled-weight-decay Adam step (beta1 = 0.9, beta2 = 0.999,
/// eps = 1e-8). Decay touches only 2-D weight tensors; normalization gains /
/// biases and all bias vectors are exempt. step_index counts from 1.
inline void adamw_step(PolicyParameters &params, const std::vector<double> &grad, long step_index,
                       const GrpoConfig &cfg, AdamState &state) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  if (grad.size() != params.size()) throw std::invalid_argument("adamw_step: gradient size mismatch");
  if (step_index < 1) throw std::invalid_argument("adamw_step: step_index counts from 1");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw std::invalid_argument("adamw_step: state size mismatch");

  const auto decay = params.decay_mask();
  auto &flat = params.flat();
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_index));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_index));
  for (std::size_t i = 0; i < flat.size(); ++i) {
    state.m[i] = kBeta1 * state.m[i] + (1.0 - kBeta1) * grad[i];
    state.v[i] = kBeta2 * state.v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    flat[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + kEps);
    if (decay[i]) flat[i] -= cfg.learning_rate * cfg.weight_decay * flat[i];
  }
}

// ===================== checkpoint io =====================

namespace detail {

inline void write_u64(std::ostream &out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char *>(b), 8);
}

inline std::uint64_t read_u64(std::istream &in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char *>(b), 8);
  if (!in) throw std::runtime_error("checkpoint: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline void write_f64(std::ostream &out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  write_u64(out, v);
}

inline double read_f64(std::istream &in) {
  const std::uint64_t v = read_u64(in);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

} // namespace detail

/// Checkpoint: versioned header, config, then the flat little-endian doubles.
inline void save_checkpoint(std::ostream &out, const PolicyParameters &params) {
  const auto &cfg = params.config();
  out.write("GQPOLCK1", 8);
  detail::write_u64(out, static_cast<std::uint64_t>(cfg.vocab_size));
  detail::write_u64(out, static_cast<std::uint64_t>(cfg.context_len));
  detail::write_u64(out, static_cast<std::uint64_t>(cfg.d_model));
  detail::write_u64(out, static_cast<std::uint64_t>(cfg.n_heads));
  detail::write_u64(out, static_cast<std::uint64_t>(cfg.n_layers));
  detail::write_u64(out, static_cast<std::uint64_t>(cfg.d_ff));
  detail::write_f64(out, cfg.repetition_penalty);
  detail::write_u64(out, cfg.seed);
  detail::write_u64(out, params.size());
  for (const double d : params.flat()) detail::write_f64(out, d);
}

inline PolicyParameters load_checkpoint(std::istream &in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "GQPOLCK1", 8) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  PolicyConfig cfg;
  cfg.vocab_size = static_cast<int>(detail::read_u64(in));
  cfg.context_len = static_cast<int>(detail::read_u64(in));
  cfg.d_model = static_cast<int>(detail::read_u64(in));
  cfg.n_heads = static_cast<int>(detail::read_u64(in));
  cfg.n_layers = static_cast<int>(detail::read_u64(in));
  cfg.d_ff = static_cast<int>(detail::read_u64(in));
  cfg.repetition_penalty = detail::read_f64(in);
  cfg.seed = detail::read_u64(in);
  PolicyParameters params(cfg);
  const std::uint64_t n = detail::read_u64(in);
  if (n != params.size()) throw std::runtime_error("checkpoint: parameter count mismatch");
  for (auto &d : params.flat()) d = detail::read_f64(in);
  return params;
}

} // namespace qsci
