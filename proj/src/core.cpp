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

#include "grf/core.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace grf {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kNoTransitivePattern: return "NoTransitivePattern";
    case ErrorCode::kEmptyNoun: return "EmptyNoun";
    case ErrorCode::kNonAlphabeticToken: return "NonAlphabeticToken";
    case ErrorCode::kCacheMiss: return "CacheMiss";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDimInconsistency: return "DimInconsistency";
    case ErrorCode::kThresholdTie: return "ThresholdTie";
    case ErrorCode::kRankDeficientBasis: return "RankDeficientBasis";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kGarbledOutput: return "GarbledOutput";
    case ErrorCode::kUnmappedToken: return "UnmappedToken";
    case ErrorCode::kSingleClassData: return "SingleClassData";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kDegenerateCovariance: return "DegenerateCovariance";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDuplicateSentence: return "DuplicateSentence";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kUndefinedMetric: return "UndefinedMetric";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(module) + ": " + message),
      code_(code),
      module_(module) {}

std::string_view to_string(Label label) {
  return label == Label::kFair ? "Fair" : "Unfair";
}

Label parse_label(std::string_view text) {
  const std::string lower = ascii_lower(text);
  if (lower == "fair") return Label::kFair;
  if (lower == "unfair") return Label::kUnfair;
  throw Error(ErrorCode::kInvalidArgument, "core",
              "unknown label '" + std::string(text) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kSWantVec: return "SWantVec";
    case Method::kAxisFeatures: return "AxisFeatures";
    case Method::kMaskedLM: return "MaskedLM";
  }
  return "Unknown";
}

std::string canonicalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyText, "core", "text is empty or whitespace-only");
  }
  return out;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Sentence::Sentence(std::string raw)
    : raw_(std::move(raw)), canonical_(canonicalize(raw_)) {}

Prediction::Prediction(Label label, double score, Method method)
    : label_(label), score_(score), method_(method) {
  const double lo = method == Method::kSWantVec ? -1.0 : 0.0;
  if (!std::isfinite(score) || score < lo || score > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "core",
                "score " + std::to_string(score) + " out of range for method " +
                    std::string(to_string(method)));
  }
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(count, begin + block);
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace grf
