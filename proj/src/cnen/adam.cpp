// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/adam.hpp"

#include <cmath>
#include <vector>

namespace cnen {

AdamState::AdamState(const ModelDims& dims, AdamOptions opts)
    : opts_(opts), m_(ModelParams::zeros(dims)), v_(ModelParams::zeros(dims)) {}

void AdamState::step(ModelParams& params, const ModelParams& grads) {
  if (!(params.dims == grads.dims)) throw ConfigError("gradient shape mismatch");
  grads.for_each([](const std::string& name, const RowMatrix& t) {
    if (!t.allFinite())
      throw NumericalError("non-finite gradient in tensor '" + name + "'");
  });

  ++step_;
  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(step_));

  std::vector<RowMatrix*> ps, gs, ms, vs;
  params.for_each([&](const std::string&, RowMatrix& t) { ps.push_back(&t); });
  const_cast<ModelParams&>(grads).for_each(
      [&](const std::string&, RowMatrix& t) { gs.push_back(&t); });
  m_.for_each([&](const std::string&, RowMatrix& t) { ms.push_back(&t); });
  v_.for_each([&](const std::string&, RowMatrix& t) { vs.push_back(&t); });

  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps[i]->array();
    const auto g = gs[i]->array();
    auto m = ms[i]->array();
    auto v = vs[i]->array();
    m = opts_.beta1 * m + (1.0 - opts_.beta1) * g;
    v = opts_.beta2 * v + (1.0 - opts_.beta2) * g.square();
    p -= opts_.lr * (m / bc1) / ((v / bc2).sqrt() + opts_.eps);
  }
  if (!params.all_finite())
    throw NumericalError("parameters became non-finite after step " +
                         std::to_string(step_));
}

}  // namespace cnen
