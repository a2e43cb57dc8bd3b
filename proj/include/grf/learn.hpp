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

// learn.hpp - logistic regression over axis scores, stratified k-fold
// cross-validation, and PCA diagnostics of the axis-score features.

#ifndef GRF_LEARN_HPP_
#define GRF_LEARN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "grf/core.hpp"
#include "grf/metrics.hpp"
#include "grf/wantvec.hpp"

namespace grf {

inline constexpr std::size_t kNumAxes = 4;

struct FeatureRow {
  AxisScores features;
  Label label = Label::kFair;
  std::string sentence;  // provenance only
};

// Throws kInvalidArgument on a non-finite feature.
void check_finite(const FeatureRow& row);

struct LogRegConfig {
  double learning_rate = 0.1;
  int max_iterations = 10000;
  double tolerance = 1e-8;  // on the gradient norm
  double l2 = 1e-4;
  std::uint64_t seed = 42;
};

struct TrainingMeta {
  int iterations = 0;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
  bool converged = false;
};

// Fair is the positive class: P(Fair) = sigmoid(w . x + b).
struct LogRegModel {
  std::array<double, kNumAxes> weights{};
  double bias = 0.0;
  TrainingMeta meta;

  double probability_fair(const AxisScores& x) const;
  // Fair at P(Fair) >= 0.5.
  Label predict(const AxisScores& x) const;
};

struct LossGradient {
  double loss = 0.0;
  std::array<double, kNumAxes> grad_weights{};
  double grad_bias = 0.0;

  double norm() const;
};

// Mean log-loss plus (l2 / 2) ||w||^2; the bias is not penalized.
LossGradient loss_and_gradient(std::span<const FeatureRow> rows,
                               const std::array<double, kNumAxes>& weights, double bias,
                               double l2);

// Full-batch gradient descent from zero weights; stops once the gradient
// norm drops to the tolerance. Throws kSingleClassData.
LogRegModel train_logreg(std::span<const FeatureRow> rows, const LogRegConfig& config = {});

// Fold index per row. Each class is shuffled (mt19937_64 seeded with
// `seed`) and dealt round-robin, the count carrying over from one class to
// the next, so fold sizes and per-class counts both differ by at most one.
std::vector<int> stratified_folds(std::span<const Label> labels, int k, std::uint64_t seed);

struct FoldResult {
  ConfusionMatrix matrix;
  std::optional<double> f1_fair;
  std::optional<double> f1_unfair;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct CvResult {
  int k = 0;
  std::vector<FoldResult> folds;
  double mean_f1_fair = 0.0;    // over folds where it is defined
  double mean_f1_unfair = 0.0;
};

// Throws kTooFewSamples unless k >= 2 and each class has at least k rows.
CvResult cross_validate(std::span<const FeatureRow> rows, int k = 5,
                        const LogRegConfig& config = {}, int jobs = 1);

struct PcaResult {
  int n_components = 0;
  std::array<double, kNumAxes> mean{};
  std::array<double, kNumAxes> eigenvalues{};  // all four, descending
  std::vector<double> explained_variance_ratios;
  std::vector<std::array<double, kNumAxes>> loadings;  // unit rows
  std::vector<std::vector<double>> transformed;
};

// Eigendecomposition (cyclic Jacobi) of the sample covariance of the
// mean-centred features; no standardization. Each loading row is signed so
// its largest-magnitude entry is positive. Throws kDegenerateCovariance
// when total variance is zero, kTooFewSamples below n_components rows.
PcaResult pca(std::span<const AxisScores> rows, int n_components);
PcaResult pca(std::span<const FeatureRow> rows, int n_components);

// Maps component scores back to feature space (mean added back).
std::vector<AxisScores> inverse_transform(const PcaResult& result,
                                          const std::vector<std::vector<double>>& scores);

// Axes ranked by |first-component loading|. Loadings within kTieTolerance
// share a rank and are listed in `ties`.
struct LoadingReport {
  static constexpr double kTieTolerance = 1e-9;

  struct Entry {
    int axis = 0;  // 1..4
    double loading = 0.0;
    int rank = 0;  // 1 is heaviest
  };
  std::vector<Entry> entries;  // heaviest first
  std::vector<std::pair<int, int>> ties;
};

LoadingReport loading_report(const PcaResult& result);
std::string format_loading_report(const LoadingReport& report);
std::string loading_report_json(const LoadingReport& report);

// sentence, s1, s2, s3, s4, label
std::vector<FeatureRow> read_features(std::istream& in, std::string_view source_name);
std::vector<FeatureRow> load_features(const std::filesystem::path& path);
void write_features(std::span<const FeatureRow> rows, std::ostream& out);

// {"weights": [...], "bias": b, "meta": {...}}
std::string model_json(const LogRegModel& model);
LogRegModel parse_model_json(std::string_view text);

}  // namespace grf

#endif  // GRF_LEARN_HPP_
