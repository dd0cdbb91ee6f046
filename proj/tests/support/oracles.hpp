// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests.

#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cnen/encoder.hpp"

namespace cnen::testing {

// O(n^2): rank of i = 1 + #{j ahead of i} with ties ordered by index.
double naive_average_precision(std::span<const double> scores, std::span<const int> labels);

// O(n^2) pair counting.
double naive_auc(std::span<const double> scores, std::span<const int> labels);

struct GradCheckReport {
  // Per tensor: max over elements of |analytic - numeric| / max(|a|, |n|, floor).
  std::map<std::string, double> max_rel_error;
  double worst = 0.0;
  std::string worst_tensor;
  std::size_t checked = 0;
};

// Central differences on the loss of `forward` for every scalar parameter.
// The rng is re-seeded identically for each evaluation so dropout masks are
// shared between the analytic and numeric passes.
GradCheckReport finite_difference_check(const ModelParams& params, const LinkBatch& batch,
                                        double dropout_p, std::uint64_t rng_seed,
                                        double step = 1e-6, double floor = 1e-7);

}  // namespace cnen::testing
