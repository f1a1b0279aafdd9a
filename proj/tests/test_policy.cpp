/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qsci/grpo.hpp"
#include "qsci/policy.hpp"
#include "qsci/rng.hpp"

using namespace qsci;

namespace {

PolicyConfig tiny_config() {
  PolicyConfig cfg;
  cfg.vocab_size = 6;
  cfg.context_len = 5;
  cfg.d_model = 8;
  cfg.n_heads = 2;
  cfg.n_layers = 1;
  cfg.d_ff = 16;
  cfg.repetition_penalty = 1.2;
  cfg.seed = 99;
  return cfg;
}

SampledBatch make_batch(const PolicyParameters &params, int m_count, int length,
                        std::uint64_t seed) {
  RngStream rng(seed);
  auto batch = sample_sequences(params, m_count, length, params.config().repetition_penalty, rng);
  RngStream reward_rng(seed + 1);
  batch.rewards.resize(static_cast<std::size_t>(m_count));
  for (auto &r : batch.rewards) r = reward_rng.normal();
  batch.advantages = compute_advantages(batch.rewards);
  return batch;
}

} // namespace

TEST(PolicyForward, ZeroParametersGiveUniformDistribution) {
  PolicyParameters params(tiny_config());
  const auto logits = forward_logits(params, {0, 2, 3});
  for (Eigen::Index v = 0; v < logits.size(); ++v) EXPECT_DOUBLE_EQ(logits(v), logits(0));
}

TEST(PolicyForward, SoftmaxIsProbabilityVector) {
  auto params = PolicyParameters::random_init(tiny_config());
  Eigen::VectorXd logits = forward_logits(params, {0, 1, 4, 2});
  const double mx = logits.maxCoeff();
  double z = 0.0;
  for (Eigen::Index v = 0; v < logits.size(); ++v) z += std::exp(logits(v) - mx);
  double total = 0.0;
  for (Eigen::Index v = 0; v < logits.size(); ++v) total += std::exp(logits(v) - mx) / z;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PolicyForward, CausalMasking) {
  auto params = PolicyParameters::random_init(tiny_config());
  const auto a = policy_forward(params, {0, 1, 2, 3});
  const auto b = policy_forward(params, {0, 1, 5, 4}); // positions >= 2 changed
  EXPECT_LT((a.logits.row(0) - b.logits.row(0)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((a.logits.row(1) - b.logits.row(1)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT((a.logits.row(2) - b.logits.row(2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PolicyForward, PrefixValidation) {
  auto params = PolicyParameters::random_init(tiny_config());
  EXPECT_THROW(policy_forward(params, {1, 2}), std::invalid_argument);
  EXPECT_THROW(policy_forward(params, {0, 1, 2, 3, 4, 1}), std::invalid_argument);
  EXPECT_THROW(policy_forward(params, {0, 9}), std::invalid_argument);
}

TEST(PolicyForward, LogitJacobianMatchesFiniteDifferences) {
  auto params = PolicyParameters::random_init(tiny_config());
  const std::vector<int> tokens{0, 2, 1, 4};
  RngStream rng(123);
  const double h = 1e-5;

  for (int probe = 0; probe < 4; ++probe) {
    const int t = static_cast<int>(rng.uniform_int(tokens.size()));
    const int v = static_cast<int>(rng.uniform_int(6));

    const auto cache = policy_forward(params, tokens);
    RowMat dlogits = RowMat::Zero(cache.t_len, 6);
    dlogits(t, v) = 1.0;
    std::vector<double> grad(params.size(), 0.0);
    policy_backward(params, cache, dlogits, grad);

    for (int k = 0; k < 30; ++k) {
      const std::size_t i = rng.uniform_int(params.size());
      const double saved = params.flat()[i];
      params.flat()[i] = saved + h;
      const double up = policy_forward(params, tokens).logits(t, v);
      params.flat()[i] = saved - h;
      const double dn = policy_forward(params, tokens).logits(t, v);
      params.flat()[i] = saved;
      const double fd = (up - dn) / (2.0 * h);
      const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-7});
      EXPECT_LT(std::abs(fd - grad[i]) / denom, 1e-4)
          << "coord " << i << " analytic " << grad[i] << " fd " << fd;
    }
  }
}

TEST(Sampling, DeterministicForFixedSeed) {
  auto params = PolicyParameters::random_init(tiny_config());
  RngStream a(5), b(5);
  const auto ba = sample_sequences(params, 3, 4, 1.2, a);
  const auto bb = sample_sequences(params, 3, 4, 1.2, b);
  EXPECT_EQ(ba.tokens, bb.tokens);
  EXPECT_EQ(ba.old_logprobs, bb.old_logprobs);
}

TEST(Sampling, StoredLogprobsMatchPenalizedDistribution) {
  auto params = PolicyParameters::random_init(tiny_config());
  RngStream rng(6);
  const auto batch = sample_sequences(params, 2, 4, 1.2, rng);
  for (int m = 0; m < 2; ++m) {
    const auto lp = sequence_logprobs(params, batch.tokens[static_cast<std::size_t>(m)], 1.2);
    for (std::size_t t = 0; t < lp.size(); ++t)
      EXPECT_NEAR(lp[t], batch.old_logprobs[static_cast<std::size_t>(m)][t], 1e-12);
  }
}

TEST(Sampling, AutoregressiveConsistency) {
  auto params = PolicyParameters::random_init(tiny_config());
  const std::vector<int> tokens{0, 3, 1};
  const auto cache = policy_forward(params, tokens);
  std::vector<char> emitted(6, 0);
  for (int t = 0; t < cache.t_len; ++t) {
    Eigen::VectorXd logits = cache.logits.row(t).transpose();
    detail::adjust_logits(logits, emitted, 1.2);
    detail::log_softmax(logits);
    double total = 0.0;
    for (Eigen::Index v = 0; v < logits.size(); ++v)
      if (std::isfinite(logits(v))) total += std::exp(logits(v));
    EXPECT_NEAR(total, 1.0, 1e-10);
    if (t + 1 < cache.t_len) emitted[static_cast<std::size_t>(tokens[static_cast<std::size_t>(t + 1)])] = 1;
  }
}

TEST(Sampling, UnitPenaltyIsUnpenalized) {
  auto params = PolicyParameters::random_init(tiny_config());
  RngStream rng(7);
  const auto batch = sample_sequences(params, 2, 4, 1.0, rng);
  // With penalty 1 the stored log-probs must equal the raw masked softmax.
  for (int m = 0; m < 2; ++m) {
    std::vector<int> prefix{0};
    for (std::size_t t = 0; t < batch.tokens[static_cast<std::size_t>(m)].size(); ++t) {
      Eigen::VectorXd logits = forward_logits(params, prefix);
      logits(0) = -std::numeric_limits<double>::infinity();
      detail::log_softmax(logits);
      const int tok = batch.tokens[static_cast<std::size_t>(m)][t];
      EXPECT_NEAR(batch.old_logprobs[static_cast<std::size_t>(m)][t], logits(tok), 1e-12);
      prefix.push_back(tok);
    }
  }
}

TEST(Sampling, SingleTokenVocabularyGivesIdenticalSequences) {
  PolicyConfig cfg = tiny_config();
  cfg.vocab_size = 2; // start + identity only
  auto params = PolicyParameters::random_init(cfg);
  RngStream rng(8);
  const auto batch = sample_sequences(params, 4, 4, 1.2, rng);
  for (const auto &seq : batch.tokens)
    for (const int tok : seq) EXPECT_EQ(tok, 1);
}

TEST(Sampling, RequiresGroupOfAtLeastTwo) {
  auto params = PolicyParameters::random_init(tiny_config());
  RngStream rng(9);
  EXPECT_THROW(sample_sequences(params, 1, 4, 1.2, rng), std::invalid_argument);
}

TEST(Advantages, TwoRewards) {
  const auto adv = compute_advantages({1.0, 3.0});
  ASSERT_EQ(adv.size(), 2u);
  EXPECT_NEAR(adv[0], -1.0, 1e-12);
  EXPECT_NEAR(adv[1], 1.0, 1e-12);
}

TEST(Advantages, EqualRewardsGiveZero) {
  const auto adv = compute_advantages({2.5, 2.5, 2.5});
  for (const double a : adv) EXPECT_DOUBLE_EQ(a, 0.0);
}

TEST(Advantages, AffineInvariance) {
  const std::vector<double> rewards{0.3, -1.2, 2.2, 0.9};
  const auto base = compute_advantages(rewards);
  std::vector<double> shifted, scaled;
  for (const double r : rewards) {
    shifted.push_back(r + 17.5);
    scaled.push_back(3.0 * r - 4.0);
  }
  const auto adv_shift = compute_advantages(shifted);
  const auto adv_scale = compute_advantages(scaled);
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    EXPECT_NEAR(adv_shift[k], base[k], 1e-10);
    EXPECT_NEAR(adv_scale[k], base[k], 1e-10);
  }
  double mean = 0.0, var = 0.0;
  for (const double a : base) mean += a;
  mean /= static_cast<double>(base.size());
  for (const double a : base) var += a * a;
  var /= static_cast<double>(base.size());
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(var, 1.0, 1e-10);
}

TEST(GrpoLoss, ZeroAtSamplingParameters) {
  auto params = PolicyParameters::random_init(tiny_config());
  const auto batch = make_batch(params, 4, 4, 11);
  GrpoConfig cfg;
  const auto [loss, grad] = grpo_loss_and_grad(params, batch, cfg);
  // rho = 1 everywhere, so the loss is -mean(advantages) = 0.
  EXPECT_NEAR(loss, 0.0, 1e-12);
}

TEST(GrpoLoss, ZeroAdvantagesGiveZeroLossAndGradient) {
  auto params = PolicyParameters::random_init(tiny_config());
  auto batch = make_batch(params, 3, 4, 12);
  batch.rewards.assign(3, 1.5);
  batch.advantages = compute_advantages(batch.rewards);
  GrpoConfig cfg;
  const auto [loss, grad] = grpo_loss_and_grad(params, batch, cfg);
  EXPECT_DOUBLE_EQ(loss, 0.0);
  for (const double g : grad) EXPECT_DOUBLE_EQ(g, 0.0);
}

TEST(GrpoLoss, GradientMatchesFiniteDifferences) {
  auto sampling_params = PolicyParameters::random_init(tiny_config());
  const auto batch = make_batch(sampling_params, 4, 4, 13);

  // Evaluate at parameters different from the sampling ones so ratios differ
  // from 1 and both normalization and penalty paths carry gradient.
  auto params = sampling_params;
  RngStream perturb(14);
  for (auto &w : params.flat()) w += 0.02 * perturb.normal();

  GrpoConfig cfg;
  const auto [loss, grad] = grpo_loss_and_grad(params, batch, cfg);
  EXPECT_LT(static_cast<double>(params.size()), 5e3);

  RngStream rng(15);
  const double h = 1e-5;
  for (int k = 0; k < 100; ++k) {
    const std::size_t i = rng.uniform_int(params.size());
    const double saved = params.flat()[i];
    params.flat()[i] = saved + h;
    const double up = grpo_loss_and_grad(params, batch, cfg).first;
    params.flat()[i] = saved - h;
    const double dn = grpo_loss_and_grad(params, batch, cfg).first;
    params.flat()[i] = saved;
    const double fd = (up - dn) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-7});
    EXPECT_LT(std::abs(fd - grad[i]) / denom, 1e-4)
        << "coord " << i << " analytic " << grad[i] << " fd " << fd;
  }
}

TEST(GrpoLoss, ClippedBranchCarriesNoGradient) {
  auto sampling_params = PolicyParameters::random_init(tiny_config());
  const auto batch = make_batch(sampling_params, 4, 4, 16);
  auto params = sampling_params;
  RngStream perturb(17);
  for (auto &w : params.flat()) w += 0.05 * perturb.normal();

  GrpoConfig cfg;
  cfg.clip = 0.01; // force many positions onto the clipped branch
  const auto [loss, grad] = grpo_loss_and_grad(params, batch, cfg);
  RngStream rng(18);
  const double h = 1e-5;
  for (int k = 0; k < 40; ++k) {
    const std::size_t i = rng.uniform_int(params.size());
    const double saved = params.flat()[i];
    params.flat()[i] = saved + h;
    const double up = grpo_loss_and_grad(params, batch, cfg).first;
    params.flat()[i] = saved - h;
    const double dn = grpo_loss_and_grad(params, batch, cfg).first;
    params.flat()[i] = saved;
    const double fd = (up - dn) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-7});
    EXPECT_LT(std::abs(fd - grad[i]) / denom, 1e-4);
  }
}

TEST(GrpoLoss, OneSmallStepDoesNotIncreaseLoss) {
  auto params = PolicyParameters::random_init(tiny_config());
  const auto batch = make_batch(params, 4, 4, 19);
  GrpoConfig cfg;
  cfg.learning_rate = 1e-7;
  const auto [loss_before, grad] = grpo_loss_and_grad(params, batch, cfg);
  AdamState state;
  adamw_step(params, grad, 1, cfg, state);
  const double loss_after = grpo_loss_and_grad(params, batch, cfg).first;
  EXPECT_LE(loss_after, loss_before + 1e-12);
}

TEST(AdamW, NoOpWithZeroGradientAndZeroDecay) {
  auto params = PolicyParameters::random_init(tiny_config());
  const auto before = params.flat();
  GrpoConfig cfg;
  cfg.weight_decay = 0.0;
  AdamState state;
  adamw_step(params, std::vector<double>(params.size(), 0.0), 1, cfg, state);
  EXPECT_EQ(params.flat(), before);
}

TEST(AdamW, PureDecayScalesOnlyWeightTensors) {
  auto params = PolicyParameters::random_init(tiny_config());
  const auto before = params.flat();
  GrpoConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.weight_decay = 0.5;
  AdamState state;
  adamw_step(params, std::vector<double>(params.size(), 0.0), 1, cfg, state);
  const auto mask = params.decay_mask();
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (mask[i])
      EXPECT_NEAR(params.flat()[i], before[i] * (1.0 - cfg.learning_rate * cfg.weight_decay), 1e-15);
    else
      EXPECT_DOUBLE_EQ(params.flat()[i], before[i]);
  }
}

TEST(AdamW, MatchesHandUnrolledRecurrence) {
  auto params = PolicyParameters::random_init(tiny_config());
  GrpoConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.weight_decay = 0.0;
  std::vector<double> grad(params.size(), 0.0);
  const std::size_t i = 10; // inside tok_emb
  grad[i] = 0.25;
  const double w0 = params.flat()[i];

  AdamState state;
  adamw_step(params, grad, 1, cfg, state);
  adamw_step(params, grad, 2, cfg, state);

  // Hand recurrence for a constant gradient g.
  const double g = 0.25, b1 = 0.9, b2 = 0.999, eps = 1e-8, lr = 1e-3;
  double m = 0.0, v = 0.0, w = w0;
  for (int step = 1; step <= 2; ++step) {
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mhat = m / (1 - std::pow(b1, step));
    const double vhat = v / (1 - std::pow(b2, step));
    w -= lr * mhat / (std::sqrt(vhat) + eps);
  }
  EXPECT_NEAR(params.flat()[i], w, 1e-15);
}

TEST(Checkpoint, RoundTrip) {
  auto params = PolicyParameters::random_init(tiny_config());
  std::stringstream ss;
  save_checkpoint(ss, params);
  const auto back = load_checkpoint(ss);
  EXPECT_EQ(back.config().vocab_size, params.config().vocab_size);
  EXPECT_EQ(back.config().context_len, params.config().context_len);
  EXPECT_EQ(back.flat(), params.flat());
}
