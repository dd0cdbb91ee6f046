// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cnen/event_log.hpp"
#include "cnen/rng.hpp"

namespace cnen {

struct ModelDims {
  std::size_t node_dim = 0;
  std::size_t edge_dim = 0;
  std::size_t time_dim = 50;
  std::size_t hidden = 50;
  std::size_t out_dim = 50;
  std::size_t layers = 2;

  std::size_t fused() const { return 5 * hidden; }
  void validate() const;
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

struct Affine {
  RowMatrix weight;  // in x out
  RowMatrix bias;    // 1 x out
};

// Every trainable tensor. Gradients and Adam moments reuse this type.
struct ModelParams {
  ModelDims dims;
  RowMatrix time_freq;  // 1 x d_T
  Affine node_proj;     // d_N -> d
  Affine edge_proj;     // d_E -> d
  Affine time_proj;     // d_T -> d
  Affine cn_long_proj;  // 2 -> d
  Affine cn_short_proj; // 2 -> d
  std::vector<Affine> fusion;  // 5d -> 5d, one per layer
  Affine output;        // 5d -> d_o
  Affine merge;         // 2 d_o -> 1

  static ModelParams zeros(const ModelDims& dims);
  // Glorot-uniform weights, zero biases, geometric time frequencies whose
  // slowest period exceeds `time_span`.
  static ModelParams initialize(const ModelDims& dims, std::uint64_t seed,
                                double time_span);

  // Visits (name, tensor) in a fixed order.
  void for_each(const std::function<void(const std::string&, RowMatrix&)>& fn);
  void for_each(const std::function<void(const std::string&, const RowMatrix&)>& fn) const;
  std::size_t num_scalars() const;
  bool all_finite() const;
  void set_zero();
};

// A stack of `count` padded sequences, `seq_len` rows each. Row r belongs to
// sequence r / seq_len.
struct SequenceBatch {
  std::size_t seq_len = 0;
  std::size_t count = 0;
  RowMatrix node_x;        // rows x d_N
  RowMatrix edge_x;        // rows x d_E
  Eigen::VectorXd delta_t; // rows
  RowMatrix cn_long;       // rows x 2, already scaled
  RowMatrix cn_short;      // rows x 2, already scaled

  void resize(std::size_t n_seq, std::size_t len, const ModelDims& dims);
  std::size_t rows() const { return seq_len * count; }
};

// ---- individual forward operations ----

RowMatrix time_encode(const Eigen::VectorXd& delta_t, const RowMatrix& freq);
RowMatrix project_and_concat(const SequenceBatch& batch, const RowMatrix& time_x,
                             const ModelParams& params);
// Row-wise normalization to zero mean / unit variance, no learned affine.
RowMatrix layer_norm(const RowMatrix& x, double eps = 1e-5);
RowMatrix fusion_forward(const RowMatrix& z, const ModelParams& params,
                         double dropout_p, bool training, Rng* rng);
// Mean over each sequence's rows (padding included), then the output layer.
RowMatrix node_representation(const RowMatrix& fused, std::size_t seq_len,
                              const ModelParams& params);
double link_probability(const Eigen::RowVectorXd& h_u,
                        const Eigen::RowVectorXd& h_v, const ModelParams& params);
// Mean over pairs of -(log p_pos + log(1 - p_neg)), probabilities clamped.
double bce_loss(const Eigen::VectorXd& p_pos, const Eigen::VectorXd& p_neg);

inline constexpr double kProbEps = 1e-7;
inline constexpr double kLayerNormEps = 1e-5;

// ---- full pipeline with exact reverse-mode gradients ----

// Indices into the encoded sequence rows: (u side, v side).
using PairIndex = std::pair<std::size_t, std::size_t>;

struct LinkBatch {
  SequenceBatch sequences;
  std::vector<PairIndex> positive;
  std::vector<PairIndex> negative;  // same length as positive
};

struct ForwardOptions {
  bool training = false;
  double dropout_p = 0.0;
};

struct ForwardResult {
  RowMatrix node_repr;           // count x d_o
  Eigen::VectorXd positive_prob;
  Eigen::VectorXd negative_prob;
  double loss = 0.0;
};

// Recorded intermediates of one forward pass.
struct GradientTape {
  const ModelParams* params = nullptr;
  const LinkBatch* batch = nullptr;
  RowMatrix time_x;
  std::vector<RowMatrix> layer_inputs;  // Z^0 .. Z^{L-1}
  std::vector<RowMatrix> normalized;    // LN outputs per layer
  std::vector<Eigen::VectorXd> inv_std; // per layer, per row
  std::vector<RowMatrix> dropout_mask;  // empty when not training
  RowMatrix pooled;                     // count x 5d
  ForwardResult result;
};

// Encodes every sequence, scores all pairs and computes the loss. When
// `tape` is non-null the intermediates needed by backward() are kept.
ForwardResult forward(const ModelParams& params, const LinkBatch& batch,
                      const ForwardOptions& opts, Rng* rng,
                      GradientTape* tape = nullptr);

// dLoss/dParams for the pass recorded on `tape`. Co-neighbor features and
// sequences are constants.
ModelParams backward(const GradientTape& tape);

}  // namespace cnen
