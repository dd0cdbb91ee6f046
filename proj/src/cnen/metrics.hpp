// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace cnen {

// Mean over positives of the precision at each positive's rank. Ranking is
// by descending score; ties keep input order.
double average_precision(std::span<const double> scores, std::span<const int> labels);

// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 P(tie), via rank sums
// with averaged tie ranks.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

}  // namespace cnen
