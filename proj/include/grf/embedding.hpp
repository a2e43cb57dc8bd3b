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

// embedding.hpp - embedding vectors, backends and the persistent cache.

#ifndef GRF_EMBEDDING_HPP_
#define GRF_EMBEDDING_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grf/core.hpp"

namespace grf {

// Fixed-dimension real vector. Components are finite and dim() > 0.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<double> components);

  static EmbeddingVector zero(std::size_t dim);

  std::size_t dim() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> components() const noexcept { return components_; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> components_;
};

EmbeddingVector add(const EmbeddingVector& a, const EmbeddingVector& b);
EmbeddingVector sub(const EmbeddingVector& a, const EmbeddingVector& b);
EmbeddingVector scale(const EmbeddingVector& v, double factor);
double dot(const EmbeddingVector& a, const EmbeddingVector& b);
double norm(const EmbeddingVector& v);
// v / ||v||; throws kZeroVector.
EmbeddingVector normalized(const EmbeddingVector& v);

// dot(a, b) / (||a|| ||b||), clamped to [-1, 1].
// Throws kDimMismatch or kZeroVector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Implementations must be safe to call concurrently from several threads.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual const std::string& model_id() const = 0;
  virtual std::size_t dim() const = 0;
  // Deterministic: identical text yields an identical vector.
  virtual EmbeddingVector embed(const Sentence& text) const = 0;
};

// Canonical text -> vector map for one model. Immutable once shared.
class EmbeddingCache {
 public:
  EmbeddingCache(std::string model_id, std::size_t dim, std::string provenance = "");

  const std::string& model_id() const noexcept { return model_id_; }
  std::size_t dim() const noexcept { return dim_; }
  // Free-text note on the corpus the model was trained on.
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return entries_.size(); }

  // Key is canonicalized; throws kDimInconsistency on a dim mismatch.
  void insert(std::string_view text, EmbeddingVector vector);
  const EmbeddingVector* find(std::string_view canonical_text) const;
  bool contains(std::string_view canonical_text) const {
    return find(canonical_text) != nullptr;
  }
  const std::map<std::string, EmbeddingVector, std::less<>>& entries() const noexcept {
    return entries_;
  }

  friend bool operator==(const EmbeddingCache&, const EmbeddingCache&) = default;

 private:
  std::string model_id_;
  std::size_t dim_;
  std::string provenance_;
  std::map<std::string, EmbeddingVector, std::less<>> entries_;
};

// JSON Lines: a header {"model": ..., "dim": ...[, "provenance": ...]} then
// one {"text": ..., "vec": [...]} per entry. Numbers are written in
// shortest round-trip form, so store -> load is bit-exact.
EmbeddingCache read_cache(std::istream& in, std::string_view source_name);
EmbeddingCache load_cache(const std::filesystem::path& path);
void write_cache(const EmbeddingCache& cache, std::ostream& out);
void store_cache(const EmbeddingCache& cache, const std::filesystem::path& path);

// Looks texts up in a cache; absent text raises kCacheMiss.
class CacheBackend : public EmbeddingBackend {
 public:
  explicit CacheBackend(std::shared_ptr<const EmbeddingCache> cache);

  const std::string& model_id() const override { return cache_->model_id(); }
  std::size_t dim() const override { return cache_->dim(); }
  EmbeddingVector embed(const Sentence& text) const override;

  const EmbeddingCache& cache() const noexcept { return *cache_; }

 private:
  std::shared_ptr<const EmbeddingCache> cache_;
};

// Pseudo-random unit vectors keyed by text, for tests and dry runs.
//
// The text is ASCII lower-cased and hashed with 64-bit FNV-1a. The state
// starts at hash ^ (seed * 0x9E3779B97F4A7C15); each component advances it
// by 0x9E3779B97F4A7C15, applies the SplitMix64 finalizer, maps the top 53
// bits to u in [0, 1) and stores 2u - 1. The vector is then scaled to unit
// length.
class SyntheticBackend : public EmbeddingBackend {
 public:
  static constexpr std::size_t kDefaultDim = 512;

  explicit SyntheticBackend(std::uint64_t seed, std::size_t dim = kDefaultDim);

  const std::string& model_id() const override { return model_id_; }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(const Sentence& text) const override;

 private:
  std::uint64_t seed_;
  std::size_t dim_;
  std::string model_id_;
};

}  // namespace grf

#endif  // GRF_EMBEDDING_HPP_
