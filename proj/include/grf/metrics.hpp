/* Copyright 2026 The grfair Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// metrics.hpp - confusion matrix and F1 for the two-class fairness task.

#ifndef GRF_METRICS_HPP_
#define GRF_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>

#include "grf/core.hpp"

namespace grf {

// Counts with Fair as the reference class: fp_fair is predicted Fair and
// actually Unfair, fn_fair predicted Unfair and actually Fair.
struct ConfusionMatrix {
  std::size_t tp_fair = 0;
  std::size_t fp_fair = 0;
  std::size_t fn_fair = 0;
  std::size_t tn_fair = 0;

  std::size_t total() const noexcept { return tp_fair + fp_fair + fn_fair + tn_fair; }
  double accuracy() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// 2PR / (P + R) for `positive`; 0 when precision and recall are both 0.
// Throws kUndefinedMetric when the matrix holds no actual and no predicted
// positives.
double f1(const ConfusionMatrix& matrix, Label positive = Label::kFair);

// A missing prediction (a failed item) is left out of every cell.
// Throws kLengthMismatch.
ConfusionMatrix confusion(std::span<const std::optional<Label>> predicted,
                          std::span<const Label> actual);

}  // namespace grf

#endif  // GRF_METRICS_HPP_
