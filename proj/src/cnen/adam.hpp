// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "cnen/encoder.hpp"

namespace cnen {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Moments are shaped like the parameters.
class AdamState {
 public:
  AdamState(const ModelDims& dims, AdamOptions opts);

  // Throws NumericalError on a non-finite gradient or parameter.
  void step(ModelParams& params, const ModelParams& grads);

  std::int64_t steps() const { return step_; }
  const AdamOptions& options() const { return opts_; }

 private:
  AdamOptions opts_;
  ModelParams m_;
  ModelParams v_;
  std::int64_t step_ = 0;
};

}  // namespace cnen
