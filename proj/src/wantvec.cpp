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

#include "grf/wantvec.hpp"

#include <cmath>
#include <vector>

namespace grf {

namespace {

constexpr std::string_view kModule = "wantvec";

std::vector<EmbeddingVector> all_axis_vectors(const EmbeddingBackend& backend,
                                              std::string_view patient) {
  std::vector<EmbeddingVector> axes;
  axes.reserve(kAllAxisKinds.size());
  for (WantAxisKind kind : kAllAxisKinds) {
    axes.push_back(axis_vector(backend, patient, kind).vector);
  }
  return axes;
}

}  // namespace

WantAxisVector axis_vector(const EmbeddingBackend& backend, std::string_view patient,
                           WantAxisKind kind) {
  const AxisSentencePair pair = synth_axis_pair(patient, kind);
  return {kind, sub(backend.embed(pair.positive), backend.embed(pair.negative))};
}

EmbeddingVector swantvec(const EmbeddingBackend& backend, std::string_view patient,
                         const WantVecConfig& config) {
  EmbeddingVector sum = EmbeddingVector::zero(backend.dim());
  for (WantAxisKind kind : kAllAxisKinds) {
    EmbeddingVector v = axis_vector(backend, patient, kind).vector;
    sum = add(sum, config.normalize_axes ? normalized(v) : v);
  }
  return sum;
}

Label classify_by_threshold(double score, double threshold) {
  if (score > threshold) return Label::kFair;
  if (score < threshold) return Label::kUnfair;
  throw Error(ErrorCode::kThresholdTie, kModule,
              "score equals the decision threshold " + std::to_string(threshold));
}

Prediction score_sentence(const EmbeddingBackend& backend, const Sentence& sentence,
                          const WantVecConfig& config, const SvoExtractor& extractor) {
  const SVOTriple triple = extractor.extract(sentence);
  const double score =
      cosine(backend.embed(sentence), swantvec(backend, triple.patient, config));
  return Prediction(classify_by_threshold(score, config.threshold), score,
                    Method::kSWantVec);
}

AxisScores axis_scores(const EmbeddingBackend& backend, const Sentence& sentence,
                       const SvoExtractor& extractor) {
  const SVOTriple triple = extractor.extract(sentence);
  const EmbeddingVector v = backend.embed(sentence);
  AxisScores scores;
  for (WantAxisKind kind : kAllAxisKinds) {
    scores.s[axis_index(kind)] = cosine(v, axis_vector(backend, triple.patient, kind).vector);
  }
  return scores;
}

SubspaceProjection project_onto_span(std::span<const EmbeddingVector> basis,
                                     const EmbeddingVector& vector) {
  if (basis.empty()) {
    throw Error(ErrorCode::kRankDeficientBasis, kModule, "empty basis");
  }
  const std::size_t dim = vector.dim();
  std::vector<std::vector<double>> q;
  q.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const EmbeddingVector& b = basis[k];
    if (b.dim() != dim) {
      throw Error(ErrorCode::kDimMismatch, kModule, "basis vector dimension mismatch");
    }
    std::vector<double> w(b.components().begin(), b.components().end());
    const double original = norm(b);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qj : q) {
        double r = 0.0;
        for (std::size_t i = 0; i < dim; ++i) r += qj[i] * w[i];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= r * qj[i];
      }
    }
    double n = 0.0;
    for (double x : w) n += x * x;
    n = std::sqrt(n);
    if (original == 0.0 || n <= kRankTolerance * original) {
      throw Error(ErrorCode::kRankDeficientBasis, kModule,
                  "basis vector " + std::to_string(k + 1) +
                      " is linearly dependent on the previous ones");
    }
    for (double& x : w) x /= n;
    q.push_back(std::move(w));
  }

  SubspaceProjection out;
  out.coefficients.resize(q.size());
  std::vector<double> residual(vector.components().begin(), vector.components().end());
  for (std::size_t k = 0; k < q.size(); ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < dim; ++i) c += q[k][i] * vector[i];
    out.coefficients[k] = c;
    out.projection_norm += c * c;
    for (std::size_t i = 0; i < dim; ++i) residual[i] -= c * q[k][i];
  }
  out.projection_norm = std::sqrt(out.projection_norm);
  double r = 0.0;
  for (double x : residual) r += x * x;
  out.residual_norm = std::sqrt(r);
  out.vector_norm = norm(vector);
  return out;
}

SubspaceProjection subspace_project(const EmbeddingBackend& backend,
                                    const Sentence& sentence,
                                    const SvoExtractor& extractor) {
  const SVOTriple triple = extractor.extract(sentence);
  const std::vector<EmbeddingVector> axes = all_axis_vectors(backend, triple.patient);
  return project_onto_span(axes, backend.embed(sentence));
}

}  // namespace grf
