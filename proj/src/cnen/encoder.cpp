// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/encoder.hpp"

#include <algorithm>
#include <cmath>

namespace cnen {
namespace {

using Eigen::Index;

Index idx(std::size_t n) { return static_cast<Index>(n); }

void glorot(RowMatrix& w, Rng& rng) {
  if (w.size() == 0) return;
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = 0; j < w.cols(); ++j)
      w(i, j) = (2.0 * rng.uniform_real() - 1.0) * limit;
}

Affine zero_affine(std::size_t in, std::size_t out) {
  return {RowMatrix::Zero(idx(in), idx(out)), RowMatrix::Zero(1, idx(out))};
}

// x * W + b, tolerating zero-width inputs.
void affine_into(const RowMatrix& x, const Affine& a,
                 Eigen::Block<RowMatrix> out) {
  if (x.cols() == 0) {
    out.rowwise() = a.bias.row(0);
    return;
  }
  out.noalias() = x * a.weight;
  out.rowwise() += a.bias.row(0);
}

void affine_backward(const RowMatrix& x, const RowMatrix& grad_out, Affine& g) {
  if (x.cols() > 0) g.weight.noalias() += x.transpose() * grad_out;
  g.bias += grad_out.colwise().sum();
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

void layer_norm_rows(const RowMatrix& a, double eps, RowMatrix& out,
                     Eigen::VectorXd& inv_std) {
  const Index d = a.cols();
  out.resize(a.rows(), d);
  inv_std.resize(a.rows());
  for (Index r = 0; r < a.rows(); ++r) {
    const double mean = a.row(r).mean();
    const double var = (a.row(r).array() - mean).square().sum() / static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std(r) = is;
    out.row(r) = (a.row(r).array() - mean) * is;
  }
}

RowMatrix mean_pool(const RowMatrix& z, std::size_t seq_len) {
  const Index count = z.rows() / idx(seq_len);
  RowMatrix pooled(count, z.cols());
  for (Index s = 0; s < count; ++s)
    pooled.row(s) = z.middleRows(s * idx(seq_len), idx(seq_len)).colwise().sum() /
                    static_cast<double>(seq_len);
  return pooled;
}

}  // namespace

void ModelDims::validate() const {
  if (time_dim == 0 || time_dim % 2 != 0)
    throw ConfigError("time encoding dimension must be even and positive");
  if (hidden == 0 || out_dim == 0) throw ConfigError("hidden sizes must be positive");
  if (layers == 0) throw ConfigError("need at least one fusion layer");
}

ModelParams ModelParams::zeros(const ModelDims& dims) {
  dims.validate();
  ModelParams p;
  p.dims = dims;
  p.time_freq = RowMatrix::Zero(1, idx(dims.time_dim));
  p.node_proj = zero_affine(dims.node_dim, dims.hidden);
  p.edge_proj = zero_affine(dims.edge_dim, dims.hidden);
  p.time_proj = zero_affine(dims.time_dim, dims.hidden);
  p.cn_long_proj = zero_affine(2, dims.hidden);
  p.cn_short_proj = zero_affine(2, dims.hidden);
  for (std::size_t l = 0; l < dims.layers; ++l)
    p.fusion.push_back(zero_affine(dims.fused(), dims.fused()));
  p.output = zero_affine(dims.fused(), dims.out_dim);
  p.merge = zero_affine(2 * dims.out_dim, 1);
  return p;
}

ModelParams ModelParams::initialize(const ModelDims& dims, std::uint64_t seed,
                                    double time_span) {
  ModelParams p = zeros(dims);
  Rng rng(derive_seed(seed, 0x1417));
  p.for_each([&](const std::string& name, RowMatrix& t) {
    if (name.ends_with(".weight")) glorot(t, rng);
  });
  // w_i = 10^{-(i-1) alpha / d_T}; the slowest period 2 pi / w_min should be
  // an order of magnitude above the span of the stream.
  const double d = static_cast<double>(dims.time_dim);
  const double span = std::max(time_span, 1.0);
  const double alpha =
      std::max(1.0, d / (d - 1.0 + 1e-12) * (std::log10(span / (2.0 * M_PI)) + 1.0));
  for (std::size_t i = 0; i < dims.time_dim; ++i)
    p.time_freq(0, idx(i)) = std::pow(10.0, -static_cast<double>(i) * alpha / d);
  return p;
}

void ModelParams::for_each(
    const std::function<void(const std::string&, RowMatrix&)>& fn) {
  fn("time.freq", time_freq);
  const auto aff = [&](const std::string& n, Affine& a) {
    fn(n + ".weight", a.weight);
    fn(n + ".bias", a.bias);
  };
  aff("node_proj", node_proj);
  aff("edge_proj", edge_proj);
  aff("time_proj", time_proj);
  aff("cn_long_proj", cn_long_proj);
  aff("cn_short_proj", cn_short_proj);
  for (std::size_t l = 0; l < fusion.size(); ++l)
    aff("fusion." + std::to_string(l), fusion[l]);
  aff("output", output);
  aff("merge", merge);
}

void ModelParams::for_each(
    const std::function<void(const std::string&, const RowMatrix&)>& fn) const {
  const_cast<ModelParams*>(this)->for_each(
      [&](const std::string& n, RowMatrix& t) { fn(n, t); });
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const RowMatrix& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each([&](const std::string&, const RowMatrix& t) { ok = ok && t.allFinite(); });
  return ok;
}

void ModelParams::set_zero() {
  for_each([](const std::string&, RowMatrix& t) { t.setZero(); });
}

void SequenceBatch::resize(std::size_t n_seq, std::size_t len, const ModelDims& dims) {
  seq_len = len;
  count = n_seq;
  const Index r = idx(n_seq * len);
  node_x = RowMatrix::Zero(r, idx(dims.node_dim));
  edge_x = RowMatrix::Zero(r, idx(dims.edge_dim));
  delta_t = Eigen::VectorXd::Zero(r);
  cn_long = RowMatrix::Zero(r, 2);
  cn_short = RowMatrix::Zero(r, 2);
}

RowMatrix time_encode(const Eigen::VectorXd& delta_t, const RowMatrix& freq) {
  const Index dt = freq.cols();
  if (dt == 0 || dt % 2 != 0) throw ConfigError("time encoding dimension must be even");
  const double scale = std::sqrt(1.0 / static_cast<double>(dt));
  RowMatrix out(delta_t.size(), dt);
  for (Index j = 0; j < delta_t.size(); ++j)
    for (Index k = 0; k < dt; ++k) {
      const double arg = delta_t(j) * freq(0, k);
      out(j, k) = scale * ((k % 2 == 0) ? std::cos(arg) : std::sin(arg));
    }
  return out;
}

RowMatrix project_and_concat(const SequenceBatch& b, const RowMatrix& time_x,
                             const ModelParams& p) {
  const Index rows = idx(b.rows());
  const Index d = idx(p.dims.hidden);
  if (b.node_x.rows() != rows || b.edge_x.rows() != rows || time_x.rows() != rows ||
      b.cn_long.rows() != rows || b.cn_short.rows() != rows ||
      b.node_x.cols() != p.node_proj.weight.rows() ||
      b.edge_x.cols() != p.edge_proj.weight.rows() ||
      time_x.cols() != p.time_proj.weight.rows() || b.cn_long.cols() != 2 ||
      b.cn_short.cols() != 2)
    throw ConfigError("feature shapes do not match the model dimensions");
  RowMatrix z(rows, 5 * d);
  affine_into(b.node_x, p.node_proj, z.middleCols(0, d));
  affine_into(b.edge_x, p.edge_proj, z.middleCols(d, d));
  affine_into(time_x, p.time_proj, z.middleCols(2 * d, d));
  affine_into(b.cn_long, p.cn_long_proj, z.middleCols(3 * d, d));
  affine_into(b.cn_short, p.cn_short_proj, z.middleCols(4 * d, d));
  return z;
}

RowMatrix layer_norm(const RowMatrix& x, double eps) {
  RowMatrix out;
  Eigen::VectorXd inv_std;
  layer_norm_rows(x, eps, out, inv_std);
  return out;
}

RowMatrix fusion_forward(const RowMatrix& z, const ModelParams& params,
                         double dropout_p, bool training, Rng* rng) {
  RowMatrix cur = z;
  for (const auto& layer : params.fusion) {
    RowMatrix a = cur * layer.weight;
    a.rowwise() += layer.bias.row(0);
    cur = layer_norm(a, kLayerNormEps);
    if (training && dropout_p > 0.0) {
      const double keep = 1.0 - dropout_p;
      for (Index i = 0; i < cur.size(); ++i)
        cur.data()[i] = rng->uniform_real() < keep ? cur.data()[i] / keep : 0.0;
    }
  }
  return cur;
}

RowMatrix node_representation(const RowMatrix& fused, std::size_t seq_len,
                              const ModelParams& params) {
  RowMatrix h = mean_pool(fused, seq_len) * params.output.weight;
  h.rowwise() += params.output.bias.row(0);
  return h;
}

double link_probability(const Eigen::RowVectorXd& h_u, const Eigen::RowVectorXd& h_v,
                        const ModelParams& params) {
  const Index d = idx(params.dims.out_dim);
  const double logit = h_u.dot(params.merge.weight.col(0).head(d)) +
                       h_v.dot(params.merge.weight.col(0).tail(d)) +
                       params.merge.bias(0, 0);
  return sigmoid(logit);
}

double bce_loss(const Eigen::VectorXd& p_pos, const Eigen::VectorXd& p_neg) {
  if (p_pos.size() != p_neg.size() || p_pos.size() == 0)
    throw ConfigError("bce_loss needs equally sized, non-empty inputs");
  double sum = 0.0;
  for (Index i = 0; i < p_pos.size(); ++i)
    sum -= std::log(clamp_prob(p_pos(i))) + std::log(1.0 - clamp_prob(p_neg(i)));
  return sum / static_cast<double>(p_pos.size());
}

ForwardResult forward(const ModelParams& params, const LinkBatch& batch,
                      const ForwardOptions& opts, Rng* rng, GradientTape* tape) {
  const auto& seqs = batch.sequences;
  if (batch.positive.size() != batch.negative.size())
    throw ConfigError("positive and negative pair counts differ");
  const bool use_dropout = opts.training && opts.dropout_p > 0.0;
  if (use_dropout && rng == nullptr) throw ConfigError("dropout needs an rng");

  RowMatrix time_x = time_encode(seqs.delta_t, params.time_freq);
  RowMatrix cur = project_and_concat(seqs, time_x, params);

  if (tape) {
    tape->params = &params;
    tape->batch = &batch;
    tape->layer_inputs.clear();
    tape->normalized.clear();
    tape->inv_std.clear();
    tape->dropout_mask.clear();
  }
  for (const auto& layer : params.fusion) {
    RowMatrix a(cur.rows(), layer.weight.cols());
    a.noalias() = cur * layer.weight;
    a.rowwise() += layer.bias.row(0);
    RowMatrix y;
    Eigen::VectorXd inv_std;
    layer_norm_rows(a, kLayerNormEps, y, inv_std);
    RowMatrix out = y;
    RowMatrix mask;
    if (use_dropout) {
      const double keep = 1.0 - opts.dropout_p;
      mask.resize(y.rows(), y.cols());
      for (Index i = 0; i < mask.size(); ++i)
        mask.data()[i] = rng->uniform_real() < keep ? 1.0 / keep : 0.0;
      out.array() *= mask.array();
    }
    if (tape) {
      tape->layer_inputs.push_back(std::move(cur));
      tape->normalized.push_back(std::move(y));
      tape->inv_std.push_back(std::move(inv_std));
      tape->dropout_mask.push_back(std::move(mask));
    }
    cur = std::move(out);
  }

  RowMatrix pooled = mean_pool(cur, seqs.seq_len);
  ForwardResult res;
  res.node_repr.noalias() = pooled * params.output.weight;
  res.node_repr.rowwise() += params.output.bias.row(0);

  const auto score = [&](const std::vector<PairIndex>& pairs, Eigen::VectorXd& out) {
    out.resize(idx(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i)
      out(idx(i)) = link_probability(res.node_repr.row(idx(pairs[i].first)),
                                     res.node_repr.row(idx(pairs[i].second)), params);
  };
  score(batch.positive, res.positive_prob);
  score(batch.negative, res.negative_prob);
  res.loss = batch.positive.empty() ? 0.0 : bce_loss(res.positive_prob, res.negative_prob);

  if (tape) {
    tape->time_x = std::move(time_x);
    tape->pooled = std::move(pooled);
    tape->result = res;
  }
  return res;
}

ModelParams backward(const GradientTape& tape) {
  const ModelParams& p = *tape.params;
  const LinkBatch& batch = *tape.batch;
  const auto& seqs = batch.sequences;
  const auto& res = tape.result;
  ModelParams g = ModelParams::zeros(p.dims);
  const Index d_o = idx(p.dims.out_dim);
  const Index d = idx(p.dims.hidden);
  const double inv_b = 1.0 / static_cast<double>(std::max<std::size_t>(batch.positive.size(), 1));

  // Loss -> logits -> merge layer -> node representations.
  RowMatrix grad_h = RowMatrix::Zero(res.node_repr.rows(), d_o);
  const auto through_merge = [&](const PairIndex& pr, double grad_logit) {
    if (grad_logit == 0.0) return;
    const auto hu = res.node_repr.row(idx(pr.first));
    const auto hv = res.node_repr.row(idx(pr.second));
    g.merge.weight.col(0).head(d_o) += grad_logit * hu.transpose();
    g.merge.weight.col(0).tail(d_o) += grad_logit * hv.transpose();
    g.merge.bias(0, 0) += grad_logit;
    grad_h.row(idx(pr.first)) += grad_logit * p.merge.weight.col(0).head(d_o).transpose();
    grad_h.row(idx(pr.second)) += grad_logit * p.merge.weight.col(0).tail(d_o).transpose();
  };
  for (std::size_t i = 0; i < batch.positive.size(); ++i) {
    // d/dz of -log(clamp(sigmoid(z))): zero where the clamp is active.
    const double pp = res.positive_prob(idx(i));
    const double gp = (pp > kProbEps && pp < 1.0 - kProbEps) ? -(1.0 - pp) * inv_b : 0.0;
    through_merge(batch.positive[i], gp);
    const double pn = res.negative_prob(idx(i));
    const double gn = (pn > kProbEps && pn < 1.0 - kProbEps) ? pn * inv_b : 0.0;
    through_merge(batch.negative[i], gn);
  }

  // Output layer and mean pooling.
  g.output.weight.noalias() += tape.pooled.transpose() * grad_h;
  g.output.bias += grad_h.colwise().sum();
  const RowMatrix grad_pooled = grad_h * p.output.weight.transpose();
  const Index len = idx(seqs.seq_len);
  RowMatrix grad_z(idx(seqs.rows()), idx(p.dims.fused()));
  for (Index s = 0; s < grad_pooled.rows(); ++s)
    grad_z.middleRows(s * len, len).rowwise() =
        grad_pooled.row(s) / static_cast<double>(len);

  // Fusion layers, last to first.
  for (std::size_t l = p.fusion.size(); l-- > 0;) {
    if (tape.dropout_mask[l].size() > 0) grad_z.array() *= tape.dropout_mask[l].array();
    const RowMatrix& xhat = tape.normalized[l];
    const Eigen::VectorXd& inv_std = tape.inv_std[l];
    const double width = static_cast<double>(xhat.cols());
    RowMatrix grad_a(grad_z.rows(), grad_z.cols());
    for (Index r = 0; r < grad_z.rows(); ++r) {
      const double mean_g = grad_z.row(r).sum() / width;
      const double mean_gx = grad_z.row(r).dot(xhat.row(r)) / width;
      grad_a.row(r) = inv_std(r) * (grad_z.row(r).array() - mean_g -
                                    xhat.row(r).array() * mean_gx).matrix();
    }
    affine_backward(tape.layer_inputs[l], grad_a, g.fusion[l]);
    grad_z.noalias() = grad_a * p.fusion[l].weight.transpose();
  }

  // Per-feature projections.
  affine_backward(seqs.node_x, grad_z.middleCols(0, d), g.node_proj);
  affine_backward(seqs.edge_x, grad_z.middleCols(d, d), g.edge_proj);
  affine_backward(tape.time_x, grad_z.middleCols(2 * d, d), g.time_proj);
  affine_backward(seqs.cn_long, grad_z.middleCols(3 * d, d), g.cn_long_proj);
  affine_backward(seqs.cn_short, grad_z.middleCols(4 * d, d), g.cn_short_proj);

  // Time encoding frequencies.
  const RowMatrix grad_t = grad_z.middleCols(2 * d, d) * p.time_proj.weight.transpose();
  const Index dt = p.time_freq.cols();
  const double scale = std::sqrt(1.0 / static_cast<double>(dt));
  for (Index j = 0; j < grad_t.rows(); ++j) {
    const double delta = seqs.delta_t(j);
    if (delta == 0.0) continue;
    for (Index k = 0; k < dt; ++k) {
      const double arg = delta * p.time_freq(0, k);
      const double dv = (k % 2 == 0) ? -scale * delta * std::sin(arg)
                                     : scale * delta * std::cos(arg);
      g.time_freq(0, k) += grad_t(j, k) * dv;
    }
  }
  return g;
}

}  // namespace cnen
