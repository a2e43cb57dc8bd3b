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

#include "grf/metrics.hpp"

#include <string>

namespace grf {

namespace {
constexpr std::string_view kModule = "eval";
}

double ConfusionMatrix::accuracy() const {
  if (total() == 0) throw Error(ErrorCode::kUndefinedMetric, kModule, "empty confusion matrix");
  return static_cast<double>(tp_fair + tn_fair) / static_cast<double>(total());
}

double f1(const ConfusionMatrix& m, Label positive) {
  const bool fair = positive == Label::kFair;
  const double tp = static_cast<double>(fair ? m.tp_fair : m.tn_fair);
  const double fp = static_cast<double>(fair ? m.fp_fair : m.fn_fair);
  const double fn = static_cast<double>(fair ? m.fn_fair : m.fp_fair);
  if (tp + fp + fn == 0.0) {
    throw Error(ErrorCode::kUndefinedMetric, kModule,
                "no actual or predicted " + std::string(to_string(positive)) + " items");
  }
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

ConfusionMatrix confusion(std::span<const std::optional<Label>> predicted,
                          std::span<const Label> actual) {
  if (predicted.size() != actual.size()) {
    throw Error(ErrorCode::kLengthMismatch, kModule,
                std::to_string(predicted.size()) + " predictions for " +
                    std::to_string(actual.size()) + " items");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!predicted[i]) continue;
    const bool said_fair = *predicted[i] == Label::kFair;
    if (actual[i] == Label::kFair) {
      ++(said_fair ? m.tp_fair : m.fn_fair);
    } else {
      ++(said_fair ? m.fp_fair : m.tn_fair);
    }
  }
  return m;
}

}  // namespace grf
