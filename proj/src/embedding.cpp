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

#include "grf/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include "json.hpp"

namespace grf {

namespace {

constexpr std::string_view kModule = "embedding";
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void check_dims(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimMismatch, kModule,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix_next(std::uint64_t& state) {
  state += kGolden;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

[[noreturn]] void malformed(std::string_view source, int line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord, kModule,
              std::string(source) + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "vector must have dim > 0");
  }
  for (double c : components_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument, kModule, "vector component is not finite");
    }
  }
}

EmbeddingVector EmbeddingVector::zero(std::size_t dim) {
  return EmbeddingVector(std::vector<double>(dim, 0.0));
}

EmbeddingVector add(const EmbeddingVector& a, const EmbeddingVector& b) {
  check_dims(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return EmbeddingVector(std::move(out));
}

EmbeddingVector sub(const EmbeddingVector& a, const EmbeddingVector& b) {
  check_dims(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return EmbeddingVector(std::move(out));
}

EmbeddingVector scale(const EmbeddingVector& v, double factor) {
  std::vector<double> out(v.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] * factor;
  return EmbeddingVector(std::move(out));
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  check_dims(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(const EmbeddingVector& v) { return std::sqrt(dot(v, v)); }

EmbeddingVector normalized(const EmbeddingVector& v) {
  const double n = norm(v);
  if (n == 0.0) throw Error(ErrorCode::kZeroVector, kModule, "cannot normalize a zero vector");
  return scale(v, 1.0 / n);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  check_dims(a, b);
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, kModule, "cosine of a zero vector is undefined");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

EmbeddingCache::EmbeddingCache(std::string model_id, std::size_t dim, std::string provenance)
    : model_id_(std::move(model_id)), dim_(dim), provenance_(std::move(provenance)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, kModule, "cache dim must be > 0");
}

void EmbeddingCache::insert(std::string_view text, EmbeddingVector vector) {
  if (vector.dim() != dim_) {
    throw Error(ErrorCode::kDimInconsistency, kModule,
                "vector of dim " + std::to_string(vector.dim()) + " in a cache of dim " +
                    std::to_string(dim_));
  }
  entries_.insert_or_assign(canonicalize(text), std::move(vector));
}

const EmbeddingVector* EmbeddingCache::find(std::string_view canonical_text) const {
  const auto it = entries_.find(canonical_text);
  return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingCache read_cache(std::istream& in, std::string_view source_name) {
  using nlohmann::json;
  std::string line;
  int line_no = 0;
  std::optional<EmbeddingCache> cache;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && cache) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      malformed(source_name, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) malformed(source_name, line_no, "record is not an object");
    if (!cache) {
      const auto model = record.find("model");
      const auto dim = record.find("dim");
      if (model == record.end() || !model->is_string() || dim == record.end() ||
          !dim->is_number_unsigned() || dim->get<std::size_t>() == 0) {
        malformed(source_name, line_no, "header needs a string 'model' and positive 'dim'");
      }
      std::string provenance;
      if (const auto p = record.find("provenance"); p != record.end() && p->is_string()) {
        provenance = p->get<std::string>();
      }
      cache.emplace(model->get<std::string>(), dim->get<std::size_t>(), provenance);
      continue;
    }
    const auto text = record.find("text");
    const auto vec = record.find("vec");
    if (text == record.end() || !text->is_string() || vec == record.end() ||
        !vec->is_array()) {
      malformed(source_name, line_no, "record needs a string 'text' and an array 'vec'");
    }
    std::vector<double> components;
    components.reserve(vec->size());
    for (const auto& x : *vec) {
      if (!x.is_number()) malformed(source_name, line_no, "non-numeric vector component");
      components.push_back(x.get<double>());
    }
    if (components.size() != cache->dim()) {
      throw Error(ErrorCode::kDimInconsistency, kModule,
                  std::string(source_name) + ":" + std::to_string(line_no) +
                      ": record has dim " + std::to_string(components.size()) +
                      ", header says " + std::to_string(cache->dim()));
    }
    const std::string key = text->get<std::string>();
    if (key.find_first_not_of(" \t\r\n\f\v") == std::string::npos || canonicalize(key) != key) {
      malformed(source_name, line_no, "text is not canonical: '" + key + "'");
    }
    if (cache->contains(key)) malformed(source_name, line_no, "duplicate text '" + key + "'");
    try {
      cache->insert(key, EmbeddingVector(std::move(components)));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDimInconsistency) throw;
      malformed(source_name, line_no, e.what());
    }
  }
  if (!cache) malformed(source_name, line_no + 1, "missing header record");
  return std::move(*cache);
}

EmbeddingCache load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  return read_cache(in, path.string());
}

void write_cache(const EmbeddingCache& cache, std::ostream& out) {
  using nlohmann::json;
  json header = {{"model", cache.model_id()}, {"dim", cache.dim()}};
  if (!cache.provenance().empty()) header["provenance"] = cache.provenance();
  out << header.dump() << '\n';
  for (const auto& [text, vec] : cache.entries()) {
    json record = {{"text", text},
                   {"vec", std::vector<double>(vec.components().begin(),
                                               vec.components().end())}};
    out << record.dump() << '\n';
  }
}

void store_cache(const EmbeddingCache& cache, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, kModule, "cannot write " + tmp.string());
    write_cache(cache, out);
    if (!out.flush()) throw Error(ErrorCode::kIo, kModule, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CacheBackend::CacheBackend(std::shared_ptr<const EmbeddingCache> cache)
    : cache_(std::move(cache)) {
  if (!cache_) throw Error(ErrorCode::kBackendUnavailable, kModule, "no cache loaded");
}

EmbeddingVector CacheBackend::embed(const Sentence& text) const {
  if (const EmbeddingVector* v = cache_->find(text.canonical())) return *v;
  throw Error(ErrorCode::kCacheMiss, kModule,
              "text not in cache '" + cache_->model_id() + "': '" + text.canonical() + "'");
}

SyntheticBackend::SyntheticBackend(std::uint64_t seed, std::size_t dim)
    : seed_(seed), dim_(dim), model_id_("synthetic-seed-" + std::to_string(seed)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, kModule, "dim must be > 0");
}

EmbeddingVector SyntheticBackend::embed(const Sentence& text) const {
  std::uint64_t state = fnv1a64(ascii_lower(text.canonical())) ^ (seed_ * kGolden);
  std::vector<double> components(dim_);
  double sum_sq = 0.0;
  for (double& c : components) {
    const double u = static_cast<double>(splitmix_next(state) >> 11) * 0x1.0p-53;
    c = 2.0 * u - 1.0;
    sum_sq += c * c;
  }
  const double inv = 1.0 / std::sqrt(sum_sq);
  for (double& c : components) c *= inv;
  return EmbeddingVector(std::move(components));
}

}  // namespace grf
