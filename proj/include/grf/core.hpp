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

// core.hpp - shared domain types, text canonicalization and the error
// taxonomy used by every grfair module.

#ifndef GRF_CORE_HPP_
#define GRF_CORE_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grf {

enum class ErrorCode {
  kEmptyText,
  kNoTransitivePattern,
  kEmptyNoun,
  kNonAlphabeticToken,
  kCacheMiss,
  kBackendUnavailable,
  kDimMismatch,
  kZeroVector,
  kMalformedRecord,
  kDimInconsistency,
  kThresholdTie,
  kRankDeficientBasis,
  kEmptyCandidates,
  kGarbledOutput,
  kUnmappedToken,
  kSingleClassData,
  kTooFewSamples,
  kDegenerateCovariance,
  kMalformedRow,
  kDuplicateSentence,
  kLengthMismatch,
  kUndefinedMetric,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. what() is "<module>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string_view module, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

enum class Label { kFair, kUnfair };

std::string_view to_string(Label label);
// Accepts "fair"/"unfair" in any case.
Label parse_label(std::string_view text);
inline Label flip(Label label) {
  return label == Label::kFair ? Label::kUnfair : Label::kFair;
}

enum class Method { kSWantVec, kAxisFeatures, kMaskedLM };

std::string_view to_string(Method method);

// Trims the ends and collapses internal whitespace runs to one space.
// Throws kEmptyText when nothing but whitespace is present.
std::string canonicalize(std::string_view raw);

// ASCII lower-casing; other bytes pass through untouched.
std::string ascii_lower(std::string_view text);

class Sentence {
 public:
  explicit Sentence(std::string raw);

  const std::string& raw() const noexcept { return raw_; }
  const std::string& canonical() const noexcept { return canonical_; }

  friend bool operator==(const Sentence& a, const Sentence& b) {
    return a.canonical_ == b.canonical_;
  }

 private:
  std::string raw_;
  std::string canonical_;
};

struct SVOTriple {
  std::string agent;
  std::string verb;
  std::string patient;

  friend bool operator==(const SVOTriple&, const SVOTriple&) = default;
};

// A classification outcome. The score range depends on the method: cosine
// in [-1, 1] for kSWantVec, a probability in [0, 1] otherwise.
class Prediction {
 public:
  Prediction(Label label, double score, Method method);

  Label label() const noexcept { return label_; }
  double score() const noexcept { return score_; }
  Method method() const noexcept { return method_; }

 private:
  Label label_;
  double score_;
  Method method_;
};

// Runs body(i) for i in [0, count) on up to `jobs` threads. Indices are
// handed out in contiguous blocks; callers write results by index so the
// output order never depends on scheduling. The first exception thrown by
// any worker is rethrown after all workers join.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace grf

#endif  // GRF_CORE_HPP_
