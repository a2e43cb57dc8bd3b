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

// wantvec.hpp - want-axis vectors, the summed sentence want vector, and
// cosine-sign classification of agent-verb-patient sentences.

#ifndef GRF_WANTVEC_HPP_
#define GRF_WANTVEC_HPP_

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "grf/core.hpp"
#include "grf/embedding.hpp"
#include "grf/grtemplates.hpp"
#include "grf/svo.hpp"

namespace grf {

struct WantVecConfig {
  // Fair above, Unfair below; an exact tie raises kThresholdTie.
  double threshold = 0.0;
  // Scale each axis vector to unit length before summing. Off by default:
  // the raw differences are summed.
  bool normalize_axes = false;
};

struct WantAxisVector {
  WantAxisKind kind;
  EmbeddingVector vector;
};

// embed(positive) - embed(negative) for the axis pair built on `patient`.
WantAxisVector axis_vector(const EmbeddingBackend& backend, std::string_view patient,
                           WantAxisKind kind);

// Sum of the four axis vectors.
EmbeddingVector swantvec(const EmbeddingBackend& backend, std::string_view patient,
                         const WantVecConfig& config = {});

// Sign rule shared by every cosine-based decision.
Label classify_by_threshold(double score, double threshold);

// cosine(embed(sentence), swantvec(patient)) labelled by sign.
Prediction score_sentence(const EmbeddingBackend& backend, const Sentence& sentence,
                          const WantVecConfig& config = {},
                          const SvoExtractor& extractor = SvoExtractor::builtin());

// Cosine of the sentence against each axis vector separately; s[0] is the
// "require" axis, s[3] the "wish" axis.
struct AxisScores {
  std::array<double, 4> s{};

  double operator[](std::size_t i) const { return s[i]; }
  friend bool operator==(const AxisScores&, const AxisScores&) = default;
};

AxisScores axis_scores(const EmbeddingBackend& backend, const Sentence& sentence,
                       const SvoExtractor& extractor = SvoExtractor::builtin());

// Coordinates of a vector in the orthonormal basis spanned by the axis
// vectors, with residual diagnostics. No decision rule is attached.
struct SubspaceProjection {
  std::vector<double> coefficients;  // one per basis vector
  double projection_norm = 0.0;
  double residual_norm = 0.0;
  double vector_norm = 0.0;
};

inline constexpr double kRankTolerance = 1e-8;

// Modified Gram-Schmidt with one re-orthogonalization pass. A basis vector
// whose remainder falls below kRankTolerance times its own norm raises
// kRankDeficientBasis.
SubspaceProjection project_onto_span(std::span<const EmbeddingVector> basis,
                                     const EmbeddingVector& vector);

SubspaceProjection subspace_project(const EmbeddingBackend& backend,
                                    const Sentence& sentence,
                                    const SvoExtractor& extractor = SvoExtractor::builtin());

}  // namespace grf

#endif  // GRF_WANTVEC_HPP_
