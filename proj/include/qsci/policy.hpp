/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsci/rng.hpp"

namespace qsci {

/// Decoder-only Transformer sizing. Vocabulary id 0 is the start token; ids
/// 1..vocab_size-1 are operator-pool tokens. context_len = circuit length + 1.
struct PolicyConfig {
  int vocab_size = 0;
  int context_len = 0;
  int d_model = 128;
  int n_heads = 4;
  int n_layers = 4;
  int d_ff = 512;
  double repetition_penalty = 1.2;
  std::uint64_t seed = 0;

  void validate() const {
    if (vocab_size < 2) throw std::invalid_argument("policy: vocab_size must be >= 2");
    if (context_len < 2) throw std::invalid_argument("policy: context_len must be >= 2");
    if (d_model < 1 || n_heads < 1 || d_model % n_heads != 0)
      throw std::invalid_argument("policy: d_model must be divisible by n_heads");
    if (n_layers < 1 || d_ff < 1) throw std::invalid_argument("policy: bad layer sizes");
    if (repetition_penalty <= 0.0) throw std::invalid_argument("policy: bad repetition penalty");
  }
};

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// All weights in one flat buffer with named 2-D views. Pre-normalization
/// GPT-2-style blocks: LN -> attention -> residual, LN -> GELU MLP ->
/// residual, final LN, linear head. The flat view feeds the optimizer,
/// checkpoints, and finite-difference checks.
class PolicyParameters {
public:
  struct TensorDesc {
    std::string name;
    std::size_t offset = 0;
    int rows = 0;
    int cols = 0;
    bool decay = false; // weight decay applies (2-D weights only)
  };

  explicit PolicyParameters(const PolicyConfig &cfg) : cfg_(cfg) {
    cfg.validate();
    build_layout();
    flat_.assign(total_, 0.0);
  }

  /// GPT-2-style init: N(0, 0.02) weights and embeddings, zero biases, unit
  /// normalization gains. Seeded by cfg.seed.
  static PolicyParameters random_init(const PolicyConfig &cfg) {
    PolicyParameters p(cfg);
    RngStream rng(cfg.seed);
    for (const auto &d : p.layout_) {
      auto view = p.view(d);
      if (d.name.rfind("ln", 0) == 0) {
        const bool gain = d.name.find("_g") != std::string::npos;
        view.setConstant(gain ? 1.0 : 0.0);
        continue;
      }
      if (d.rows == 1 && d.name[0] == 'b') {
        view.setZero();
        continue;
      }
      for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c) view(r, c) = 0.02 * rng.normal();
    }
    return p;
  }

  const PolicyConfig &config() const { return cfg_; }
  std::size_t size() const { return total_; }
  std::vector<double> &flat() { return flat_; }
  const std::vector<double> &flat() const { return flat_; }
  const std::vector<TensorDesc> &layout() const { return layout_; }

  Eigen::Map<RowMat> view(const TensorDesc &d) {
    return Eigen::Map<RowMat>(flat_.data() + d.offset, d.rows, d.cols);
  }
  Eigen::Map<const RowMat> view(const TensorDesc &d) const {
    return Eigen::Map<const RowMat>(flat_.data() + d.offset, d.rows, d.cols);
  }

  /// View into an arbitrary buffer laid out like this parameter set (used for
  /// gradients and optimizer state).
  Eigen::Map<RowMat> view_in(std::vector<double> &buf, const TensorDesc &d) const {
    return Eigen::Map<RowMat>(buf.data() + d.offset, d.rows, d.cols);
  }

  const TensorDesc &desc(const std::string &name) const {
    for (const auto &d : layout_)
      if (d.name == name) return d;
    throw std::invalid_argument("unknown tensor: " + name);
  }

  Eigen::Map<const RowMat> tensor(const std::string &name) const { return view(desc(name)); }
  Eigen::Map<RowMat> tensor(const std::string &name) { return view(desc(name)); }

  /// Per-coordinate weight-decay mask.
  std::vector<char> decay_mask() const {
    std::vector<char> mask(total_, 0);
    for (const auto &d : layout_)
      if (d.decay)
        std::fill(mask.begin() + static_cast<std::ptrdiff_t>(d.offset),
                  mask.begin() + static_cast<std::ptrdiff_t>(d.offset + static_cast<std::size_t>(d.rows) * d.cols),
                  char(1));
    return mask;
  }

private:
  void add(const std::string &name, int rows, int cols, bool decay) {
    layout_.push_back({name, total_, rows, cols, decay});
    total_ += static_cast<std::size_t>(rows) * cols;
  }

  void build_layout() {
    const int d = cfg_.d_model, f = cfg_.d_ff;
    add("tok_emb", cfg_.vocab_size, d, true);
    add("pos_emb", cfg_.context_len, d, true);
    for (int l = 0; l < cfg_.n_layers; ++l) {
      const std::string s = "." + std::to_string(l);
      add("ln1_g" + s, 1, d, false);
      add("ln1_b" + s, 1, d, false);
      add("w_qkv" + s, d, 3 * d, true);
      add("b_qkv" + s, 1, 3 * d, false);
      add("w_ao" + s, d, d, true);
      add("b_ao" + s, 1, d, false);
      add("ln2_g" + s, 1, d, false);
      add("ln2_b" + s, 1, d, false);
      add("w_fc" + s, d, f, true);
      add("b_fc" + s, 1, f, false);
      add("w_pr" + s, f, d, true);
      add("b_pr" + s, 1, d, false);
    }
    add("lnf_g", 1, d, false);
    add("lnf_b", 1, d, false);
    add("w_out", d, cfg_.vocab_size, true);
    add("b_out", 1, cfg_.vocab_size, false);
  }

  PolicyConfig cfg_;
  std::vector<TensorDesc> layout_;
  std::vector<double> flat_;
  std::size_t total_ = 0;
};

namespace detail {

constexpr double kLnEps = 1e-5;

inline double gelu(double u) { return 0.5 * u * (1.0 + std::erf(u * M_SQRT1_2)); }
inline double gelu_grad(double u) {
  return 0.5 * (1.0 + std::erf(u * M_SQRT1_2)) +
         u * std::exp(-0.5 * u * u) * 0.3989422804014326779399;
}

inline void layernorm_forward(const RowMat &x, Eigen::Map<const RowMat> g,
                              Eigen::Map<const RowMat> b, RowMat &xhat, Eigen::VectorXd &istd,
                              RowMat &out) {
  const Eigen::Index t_len = x.rows(), d = x.cols();
  xhat.resize(t_len, d);
  istd.resize(t_len);
  out.resize(t_len, d);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const double mu = x.row(t).mean();
    const double var = (x.row(t).array() - mu).square().mean();
    const double inv = 1.0 / std::sqrt(var + kLnEps);
    istd(t) = inv;
    xhat.row(t) = (x.row(t).array() - mu) * inv;
    out.row(t) = xhat.row(t).cwiseProduct(g.row(0)) + b.row(0);
  }
}

inline void layernorm_backward(const RowMat &dy, const RowMat &xhat, const Eigen::VectorXd &istd,
                               Eigen::Map<const RowMat> g, RowMat &dx,
                               Eigen::Map<RowMat> dg_accum, Eigen::Map<RowMat> db_accum) {
  const Eigen::Index t_len = dy.rows(), d = dy.cols();
  dx.resize(t_len, d);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    dg_accum.row(0) += dy.row(t).cwiseProduct(xhat.row(t));
    db_accum.row(0) += dy.row(t);
    const Eigen::RowVectorXd dxhat = dy.row(t).cwiseProduct(g.row(0));
    const double m1 = dxhat.mean();
    const double m2 = dxhat.cwiseProduct(xhat.row(t)).mean();
    dx.row(t) = istd(t) * (dxhat.array() - m1 - xhat.row(t).array() * m2);
  }
}

} // namespace detail

/// Activations cached by a full forward pass, enough to backpropagate.
struct ForwardCache {
  int t_len = 0;
  std::vector<int> tokens;
  RowMat x_embed;
  struct LayerCache {
    RowMat x_in;
    RowMat ln1_xhat, ln1_out;
    Eigen::VectorXd ln1_istd;
    RowMat qkv;
    std::vector<RowMat> att; // per-head softmax probabilities, t_len x t_len
    RowMat att_concat;
    RowMat x_mid;
    RowMat ln2_xhat, ln2_out;
    Eigen::VectorXd ln2_istd;
    RowMat fc_pre, fc_act;
  };
  std::vector<LayerCache> layers;
  RowMat x_final;
  RowMat lnf_xhat, lnf_out;
  Eigen::VectorXd lnf_istd;
  RowMat logits; // t_len x vocab; row t conditions on tokens[0..t]
};

/// Full causal forward pass over a token sequence (tokens[0] must be the
/// start token 0). Row t of the returned logits depends only on positions
/// <= t.
inline ForwardCache policy_forward(const PolicyParameters &params, const std::vector<int> &tokens) {
  const auto &cfg = params.config();
  const int t_len = static_cast<int>(tokens.size());
  if (t_len < 1 || t_len > cfg.context_len)
    throw std::invalid_argument("policy_forward: prefix length out of range");
  if (tokens[0] != 0) throw std::invalid_argument("policy_forward: prefix must start with token 0");
  for (const int tok : tokens)
    if (tok < 0 || tok >= cfg.vocab_size)
      throw std::invalid_argument("policy_forward: token id out of range");

  const int d = cfg.d_model, n_h = cfg.n_heads, dh = d / n_h;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

  ForwardCache cache;
  cache.t_len = t_len;
  cache.tokens = tokens;

  const auto tok_emb = params.tensor("tok_emb");
  const auto pos_emb = params.tensor("pos_emb");
  cache.x_embed.resize(t_len, d);
  for (int t = 0; t < t_len; ++t)
    cache.x_embed.row(t) = tok_emb.row(tokens[static_cast<std::size_t>(t)]) + pos_emb.row(t);

  RowMat x = cache.x_embed;
  cache.layers.resize(static_cast<std::size_t>(cfg.n_layers));
  for (int l = 0; l < cfg.n_layers; ++l) {
    auto &lc = cache.layers[static_cast<std::size_t>(l)];
    const std::string s = "." + std::to_string(l);
    lc.x_in = x;

    detail::layernorm_forward(lc.x_in, params.tensor("ln1_g" + s), params.tensor("ln1_b" + s),
                              lc.ln1_xhat, lc.ln1_istd, lc.ln1_out);
    lc.qkv = lc.ln1_out * params.tensor("w_qkv" + s);
    lc.qkv.rowwise() += params.tensor("b_qkv" + s).row(0);

    lc.att.resize(static_cast<std::size_t>(n_h));
    lc.att_concat.resize(t_len, d);
    for (int h = 0; h < n_h; ++h) {
      const auto q = lc.qkv.block(0, h * dh, t_len, dh);
      const auto k = lc.qkv.block(0, d + h * dh, t_len, dh);
      const auto v = lc.qkv.block(0, 2 * d + h * dh, t_len, dh);
      RowMat scores = (q * k.transpose()) * inv_sqrt_dh;
      RowMat probs(t_len, t_len);
      probs.setZero();
      for (int t = 0; t < t_len; ++t) {
        const auto row = scores.row(t).head(t + 1);
        const double mx = row.maxCoeff();
        Eigen::RowVectorXd e = (row.array() - mx).exp();
        probs.row(t).head(t + 1) = e / e.sum();
      }
      lc.att[static_cast<std::size_t>(h)] = probs;
      lc.att_concat.block(0, h * dh, t_len, dh) = probs * v;
    }

    RowMat attn_out = lc.att_concat * params.tensor("w_ao" + s);
    attn_out.rowwise() += params.tensor("b_ao" + s).row(0);
    lc.x_mid = lc.x_in + attn_out;

    detail::layernorm_forward(lc.x_mid, params.tensor("ln2_g" + s), params.tensor("ln2_b" + s),
                              lc.ln2_xhat, lc.ln2_istd, lc.ln2_out);
    lc.fc_pre = lc.ln2_out * params.tensor("w_fc" + s);
    lc.fc_pre.rowwise() += params.tensor("b_fc" + s).row(0);
    lc.fc_act = lc.fc_pre.unaryExpr([](double u) { return detail::gelu(u); });
    RowMat proj = lc.fc_act * params.tensor("w_pr" + s);
    proj.rowwise() += params.tensor("b_pr" + s).row(0);
    x = lc.x_mid + proj;
  }

  cache.x_final = x;
  detail::layernorm_forward(cache.x_final, params.tensor("lnf_g"), params.tensor("lnf_b"),
                            cache.lnf_xhat, cache.lnf_istd, cache.lnf_out);
  cache.logits = cache.lnf_out * params.tensor("w_out");
  cache.logits.rowwise() += params.tensor("b_out").row(0);
  return cache;
}

/// Next-token logits for a prefix (last row of the full forward).
inline Eigen::VectorXd forward_logits(const PolicyParameters &params,
                                      const std::vector<int> &prefix) {
  if (static_cast<int>(prefix.size()) >= params.config().context_len + 1)
    throw std::invalid_argument("forward_logits: prefix too long");
  const auto cache = policy_forward(params, prefix);
  return cache.logits.row(cache.t_len - 1).transpose();
}

/// Backpropagate a cotangent on the raw logits grid through the cached
/// forward pass; gradients accumulate into `grad` (laid out like the flat
/// parameter buffer).
inline void policy_backward(const PolicyParameters &params, const ForwardCache &cache,
                            const RowMat &dlogits, std::vector<double> &grad) {
  const auto &cfg = params.config();
  const int t_len = cache.t_len;
  const int d = cfg.d_model, n_h = cfg.n_heads, dh = d / n_h;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
  if (grad.size() != params.size()) grad.assign(params.size(), 0.0);

  auto g = [&](const std::string &name) { return params.view_in(grad, params.desc(name)); };

  // Head.
  g("w_out") += cache.lnf_out.transpose() * dlogits;
  g("b_out") += dlogits.colwise().sum();
  RowMat dlnf_out = dlogits * params.tensor("w_out").transpose();
  RowMat dx;
  detail::layernorm_backward(dlnf_out, cache.lnf_xhat, cache.lnf_istd, params.tensor("lnf_g"), dx,
                             g("lnf_g"), g("lnf_b"));

  for (int l = cfg.n_layers - 1; l >= 0; --l) {
    const auto &lc = cache.layers[static_cast<std::size_t>(l)];
    const std::string s = "." + std::to_string(l);

    // MLP branch.
    RowMat dproj = dx;
    g("w_pr" + s) += lc.fc_act.transpose() * dproj;
    g("b_pr" + s) += dproj.colwise().sum();
    RowMat dfc_act = dproj * params.tensor("w_pr" + s).transpose();
    RowMat dfc_pre =
        dfc_act.cwiseProduct(lc.fc_pre.unaryExpr([](double u) { return detail::gelu_grad(u); }));
    g("w_fc" + s) += lc.ln2_out.transpose() * dfc_pre;
    g("b_fc" + s) += dfc_pre.colwise().sum();
    RowMat dln2_out = dfc_pre * params.tensor("w_fc" + s).transpose();
    RowMat dx_mid_ln;
    detail::layernorm_backward(dln2_out, lc.ln2_xhat, lc.ln2_istd, params.tensor("ln2_g" + s),
                               dx_mid_ln, g("ln2_g" + s), g("ln2_b" + s));
    RowMat dx_mid = dx + dx_mid_ln;

    // Attention branch.
    RowMat dattn_out = dx_mid;
    g("w_ao" + s) += lc.att_concat.transpose() * dattn_out;
    g("b_ao" + s) += dattn_out.colwise().sum();
    RowMat datt_concat = dattn_out * params.tensor("w_ao" + s).transpose();

    RowMat dqkv = RowMat::Zero(t_len, 3 * d);
    for (int h = 0; h < n_h; ++h) {
      const auto q = lc.qkv.block(0, h * dh, t_len, dh);
      const auto k = lc.qkv.block(0, d + h * dh, t_len, dh);
      const auto v = lc.qkv.block(0, 2 * d + h * dh, t_len, dh);
      const auto &probs = lc.att[static_cast<std::size_t>(h)];
      const auto dout = datt_concat.block(0, h * dh, t_len, dh);

      RowMat dprobs = dout * v.transpose();
      RowMat dscores(t_len, t_len);
      dscores.setZero();
      for (int t = 0; t < t_len; ++t) {
        const auto p_row = probs.row(t).head(t + 1);
        const auto dp_row = dprobs.row(t).head(t + 1);
        const double dot = dp_row.cwiseProduct(p_row).sum();
        dscores.row(t).head(t + 1) = (p_row.array() * (dp_row.array() - dot)).matrix();
      }
      dqkv.block(0, 2 * d + h * dh, t_len, dh) += probs.transpose() * dout;
      dqkv.block(0, h * dh, t_len, dh) += (dscores * k) * inv_sqrt_dh;
      dqkv.block(0, d + h * dh, t_len, dh) += (dscores.transpose() * q) * inv_sqrt_dh;
    }

    g("w_qkv" + s) += lc.ln1_out.transpose() * dqkv;
    g("b_qkv" + s) += dqkv.colwise().sum();
    RowMat dln1_out = dqkv * params.tensor("w_qkv" + s).transpose();
    RowMat dx_in_ln;
    detail::layernorm_backward(dln1_out, lc.ln1_xhat, lc.ln1_istd, params.tensor("ln1_g" + s),
                               dx_in_ln, g("ln1_g" + s), g("ln1_b" + s));
    dx = dx_mid + dx_in_ln;
  }

  auto dtok = g("tok_emb");
  auto dpos = g("pos_emb");
  for (int t = 0; t < t_len; ++t) {
    dtok.row(cache.tokens[static_cast<std::size_t>(t)]) += dx.row(t);
    dpos.row(t) += dx.row(t);
  }
}

namespace detail {

/// Generation-time logit transform: the start token is masked out and logits
/// of already-emitted tokens are penalized (positive divided by the penalty,
/// negative multiplied). `slope` receives d(adjusted)/d(raw) per entry.
inline void adjust_logits(Eigen::VectorXd &logits, const std::vector<char> &emitted,
                          double penalty, Eigen::VectorXd *slope = nullptr) {
  if (slope) slope->setOnes(logits.size());
  logits(0) = -std::numeric_limits<double>::infinity();
  if (slope) (*slope)(0) = 0.0;
  if (penalty == 1.0) return;
  for (Eigen::Index v = 1; v < logits.size(); ++v) {
    if (!emitted[static_cast<std::size_t>(v)]) continue;
    if (logits(v) > 0.0) {
      logits(v) /= penalty;
      if (slope) (*slope)(v) = 1.0 / penalty;
    } else {
      logits(v) *= penalty;
      if (slope) (*slope)(v) = penalty;
    }
  }
}

/// In-place log-softmax; returns nothing, ignores -inf entries gracefully.
inline void log_softmax(Eigen::VectorXd &logits) {
  const double mx = logits.maxCoeff();
  double sum = 0.0;
  for (Eigen::Index v = 0; v < logits.size(); ++v)
    if (std::isfinite(logits(v))) sum += std::exp(logits(v) - mx);
  const double lse = mx + std::log(sum);
  logits.array() -= lse;
}

} // namespace detail

/// Group of M sampled sequences with the sampling-time log-probabilities,
/// rewards, and normalized advantages.
struct SampledBatch {
  int m_count = 0;
  int length = 0;
  std::vector<std::vector<int>> tokens;        // vocab ids in [1, vocab)
  std::vector<std::vector<double>> old_logprobs;
  std::vector<double> rewards;
  std::vector<double> advantages;
};

/// Autoregressive sampling of M sequences of length L under the penalized
/// policy distribution. Stored log-probs are those of the distribution
/// actually sampled from, so importance ratios stay well defined across
/// updates.
inline SampledBatch sample_sequences(const PolicyParameters &params, int m_count, int length,
                                     double repetition_penalty, RngStream &rng) {
  const auto &cfg = params.config();
  if (m_count < 2) throw std::invalid_argument("sample_sequences: need at least 2 sequences");
  if (length < 1 || length + 1 > cfg.context_len)
    throw std::invalid_argument("sample_sequences: length must fit the context");

  SampledBatch batch;
  batch.m_count = m_count;
  batch.length = length;
  batch.tokens.resize(static_cast<std::size_t>(m_count));
  batch.old_logprobs.resize(static_cast<std::size_t>(m_count));

  for (int m = 0; m < m_count; ++m) {
    std::vector<int> prefix{0};
    std::vector<char> emitted(static_cast<std::size_t>(cfg.vocab_size), 0);
    for (int t = 0; t < length; ++t) {
      const auto cache = policy_forward(params, prefix);
      Eigen::VectorXd logits = cache.logits.row(cache.t_len - 1).transpose();
      detail::adjust_logits(logits, emitted, repetition_penalty);
      detail::log_softmax(logits);
      const double u = rng.uniform();
      double acc = 0.0;
      int pick = cfg.vocab_size - 1;
      for (int v = 1; v < cfg.vocab_size; ++v) {
        acc += std::exp(logits(v));
        if (u < acc) {
          pick = v;
          break;
        }
      }
      batch.tokens[static_cast<std::size_t>(m)].push_back(pick);
      batch.old_logprobs[static_cast<std::size_t>(m)].push_back(logits(pick));
      emitted[static_cast<std::size_t>(pick)] = 1;
      prefix.push_back(pick);
    }
  }
  return batch;
}

/// Per-position log-probabilities of a realized sequence under the current
/// parameters and the same generation-time transform used while sampling.
inline std::vector<double> sequence_logprobs(const PolicyParameters &params,
                                             const std::vector<int> &tokens,
                                             double repetition_penalty) {
  std::vector<int> full{0};
  full.insert(full.end(), tokens.begin(), tokens.end());
  const auto cache = policy_forward(params, full);
  std::vector<char> emitted(static_cast<std::size_t>(params.config().vocab_size), 0);
  std::vector<double> out;
  out.reserve(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    Eigen::VectorXd logits = cache.logits.row(static_cast<Eigen::Index>(t)).transpose();
    detail::adjust_logits(logits, emitted, repetition_penalty);
    detail::log_softmax(logits);
    out.push_back(logits(tokens[t]));
    emitted[static_cast<std::size_t>(tokens[t])] = 1;
  }
  return out;
}

} // namespace qsci
