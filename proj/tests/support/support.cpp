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

#include "support/support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "grf/embedding.hpp"
#include "grf/learn.hpp"
#include "grf/wantvec.hpp"

#ifndef GRF_TEST_DATA_DIR
#define GRF_TEST_DATA_DIR "data"
#endif

namespace grf::testing {

std::filesystem::path data_path(const std::string& relative) {
  return std::filesystem::path(GRF_TEST_DATA_DIR) / relative;
}

std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

// --- oracle ----------------------------------------------------------------

std::vector<double> oracle_embed(const std::string& text, unsigned long long seed,
                                 std::size_t dim) {
  // Collapse whitespace and lower-case, as the backend keys texts.
  std::string key;
  std::istringstream words(text);
  std::string w;
  while (words >> w) key += (key.empty() ? "" : " ") + w;
  for (char& c : key) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  const std::uint64_t golden = 0x9E3779B97F4A7C15ull;
  std::uint64_t state = h ^ (seed * golden);
  std::vector<double> v(dim);
  double sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    state += golden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    v[i] = 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    sq += v[i] * v[i];
  }
  const double n = std::sqrt(sq);
  for (double& x : v) x /= n;
  return v;
}

std::vector<OracleScore> oracle_appendix1(unsigned long long seed) {
  const std::size_t dim = 512;
  const char* templates[4][2] = {
      {"the %s would require it", "the %s would despise it"},
      {"the %s was happy by it", "the %s was unhappy by it"},
      {"the %s would demand they did it", "the %s would demand they stopped it"},
      {"the %s would wish it continue", "the %s would wish it stop"},
  };
  const auto rows = read_tsv(data_path("fixtures/svo_gold.tsv"));
  std::vector<OracleScore> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string& sentence = rows[r][0];
    const std::string& patient = rows[r][3];
    std::vector<double> want(dim, 0.0);
    for (auto& pair : templates) {
      char pos[256];
      char neg[256];
      std::snprintf(pos, sizeof pos, pair[0], patient.c_str());
      std::snprintf(neg, sizeof neg, pair[1], patient.c_str());
      const auto a = oracle_embed(pos, seed, dim);
      const auto b = oracle_embed(neg, seed, dim);
      for (std::size_t i = 0; i < dim; ++i) want[i] += a[i] - b[i];
    }
    const auto e = oracle_embed(sentence, seed, dim);
    double d = 0.0;
    double nw = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      d += e[i] * want[i];
      nw += want[i] * want[i];
    }
    const double score = d / std::sqrt(nw);  // e has unit norm
    out.push_back({sentence, score, score > 0.0});
  }
  return out;
}

// --- properties -------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

EmbeddingVector random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return EmbeddingVector(std::move(v));
}

// Serves axis sentences with positive and negative swapped, which negates
// every axis vector.
class SwappedAxes : public EmbeddingBackend {
 public:
  SwappedAxes(const EmbeddingBackend& base, const std::vector<std::string>& patients)
      : base_(base) {
    for (const auto& p : patients) {
      for (WantAxisKind kind : kAllAxisKinds) {
        const auto pair = synth_axis_pair(p, kind);
        swap_[pair.positive.canonical()] = pair.negative.canonical();
        swap_[pair.negative.canonical()] = pair.positive.canonical();
      }
    }
  }
  const std::string& model_id() const override { return base_.model_id(); }
  std::size_t dim() const override { return base_.dim(); }
  EmbeddingVector embed(const Sentence& text) const override {
    const auto it = swap_.find(text.canonical());
    return base_.embed(it == swap_.end() ? text : Sentence(it->second));
  }

 private:
  const EmbeddingBackend& base_;
  std::map<std::string, std::string> swap_;
};

}  // namespace

PropertyResult check_cosine_properties(int pairs) {
  PropertyResult r{"cosine symmetry, scale invariance and bounds", true, ""};
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> dims(2, 64);
  std::uniform_real_distribution<double> scales(1e-3, 1e3);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const std::size_t dim = dims(rng);
    const EmbeddingVector a = random_vector(rng, dim);
    const EmbeddingVector b = random_vector(rng, dim);
    const double ab = cosine(a, b);
    const double ba = cosine(b, a);
    const double scaled = cosine(scale(a, scales(rng)), scale(b, scales(rng)));
    const double self = cosine(a, a);
    const double anti = cosine(a, scale(a, -1.0));
    worst = std::max({worst, std::abs(ab - ba), std::abs(ab - scaled), std::abs(self - 1.0),
                      std::abs(anti + 1.0)});
    if (ab < -1.0 || ab > 1.0) {
      r.ok = false;
      r.detail = "cosine out of bounds: " + fmt(ab);
      return r;
    }
  }
  r.ok = worst <= 1e-12;
  r.detail = std::to_string(pairs) + " pairs, max deviation " + fmt(worst);
  return r;
}

PropertyResult check_swantvec_linearity() {
  PropertyResult r{"S-WantVec equals the sum of its axis vectors", true, ""};
  const SyntheticBackend backend(7, 64);
  for (const char* patient : {"child", "boy", "girl", "sister", "professor", "black man"}) {
    EmbeddingVector sum = EmbeddingVector::zero(backend.dim());
    for (WantAxisKind kind : kAllAxisKinds) sum = add(sum, axis_vector(backend, patient, kind).vector);
    if (!(swantvec(backend, patient) == sum)) {
      r.ok = false;
      r.detail = std::string("mismatch for ") + patient;
      return r;
    }
  }
  r.detail = "6 patients, exact";
  return r;
}

PropertyResult check_label_flip() {
  PropertyResult r{"negated S-WantVec flips every label", true, ""};
  const SyntheticBackend backend(42);
  const auto rows = read_tsv(data_path("fixtures/svo_gold.tsv"));
  std::vector<std::string> patients;
  for (std::size_t i = 1; i < rows.size(); ++i) patients.push_back(rows[i][3]);
  const SwappedAxes swapped(backend, patients);
  int flipped = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Sentence s(rows[i][0]);
    const Prediction p = score_sentence(backend, s);
    const Prediction q = score_sentence(swapped, s);
    if (q.score() != -p.score() || q.label() == p.label()) {
      r.ok = false;
      r.detail = "no flip for '" + rows[i][0] + "'";
      return r;
    }
    // Positive rescaling keeps the decision.
    const EmbeddingVector w = swantvec(backend, rows[i][3]);
    const EmbeddingVector e = backend.embed(s);
    for (double lambda : {1e-3, 0.5, 7.5, 1e4}) {
      if (classify_by_threshold(cosine(e, scale(w, lambda)), 0.0) != p.label()) {
        r.ok = false;
        r.detail = "rescaling changed the label of '" + rows[i][0] + "'";
        return r;
      }
    }
    ++flipped;
  }
  r.detail = std::to_string(flipped) + " sentences flipped; labels scale-invariant";
  return r;
}

PropertyResult check_gradient(int instances) {
  PropertyResult r{"log-loss gradient vs central differences", true, ""};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> feature(-1.0, 1.0);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> sizes(4, 40);
  const double h = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < instances; ++t) {
    std::vector<FeatureRow> rows(static_cast<std::size_t>(sizes(rng)));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (double& x : rows[i].features.s) x = feature(rng);
      rows[i].label = (i % 2 == 0) ? Label::kFair : Label::kUnfair;
    }
    std::array<double, kNumAxes> w{};
    for (double& x : w) x = normal(rng);
    const double b = normal(rng);
    const double l2 = t % 3 == 0 ? 0.0 : (t % 3 == 1 ? 1e-4 : 0.1);
    const LossGradient lg = loss_and_gradient(rows, w, b, l2);
    double diff_sq = 0.0;
    double ref_sq = 0.0;
    for (std::size_t j = 0; j <= kNumAxes; ++j) {
      auto wp = w;
      auto wm = w;
      double bp = b;
      double bm = b;
      if (j < kNumAxes) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double numeric = (loss_and_gradient(rows, wp, bp, l2).loss -
                              loss_and_gradient(rows, wm, bm, l2).loss) /
                             (2.0 * h);
      const double analytic = j < kNumAxes ? lg.grad_weights[j] : lg.grad_bias;
      diff_sq += (numeric - analytic) * (numeric - analytic);
      ref_sq += analytic * analytic;
    }
    const double rel = std::sqrt(diff_sq) / std::max(std::sqrt(ref_sq), 1e-12);
    worst = std::max(worst, rel);
  }
  r.ok = worst <= 1e-5;
  r.detail = std::to_string(instances) + " instances, max relative error " + fmt(worst);
  return r;
}

PropertyResult check_pca_full_rank(int datasets) {
  PropertyResult r{"PCA ratios sum to 1 and reconstruction is exact", true, ""};
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  double worst_sum = 0.0;
  double worst_rec = 0.0;
  for (int t = 0; t < datasets; ++t) {
    double mix[4][4];
    for (auto& row : mix) {
      for (double& x : row) x = normal(rng);
    }
    std::vector<AxisScores> rows(50 + 10 * static_cast<std::size_t>(t));
    for (auto& row : rows) {
      double z[4];
      for (double& x : z) x = normal(rng);
      for (std::size_t j = 0; j < 4; ++j) {
        row.s[j] = 0.3 * (mix[j][0] * z[0] + mix[j][1] * z[1] + mix[j][2] * z[2] + mix[j][3] * z[3]);
      }
    }
    const PcaResult p = pca(std::span<const AxisScores>(rows), 4);
    double sum = 0.0;
    for (std::size_t c = 0; c < p.explained_variance_ratios.size(); ++c) {
      const double ratio = p.explained_variance_ratios[c];
      if (ratio < 0.0 || ratio > 1.0 ||
          (c > 0 && ratio > p.explained_variance_ratios[c - 1])) {
        r.ok = false;
        r.detail = "ratios not a nonincreasing sequence in [0, 1]";
        return r;
      }
      sum += ratio;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    const auto back = inverse_transform(p, p.transformed);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        worst_rec = std::max(worst_rec, std::abs(back[i][j] - rows[i][j]));
      }
    }
  }
  r.ok = worst_sum <= 1e-8 && worst_rec <= 1e-8;
  r.detail = std::to_string(datasets) + " datasets, |sum - 1| " + fmt(worst_sum) +
             ", reconstruction " + fmt(worst_rec);
  return r;
}

PropertyResult check_fold_balance(int trials) {
  PropertyResult r{"stratified folds partition rows with balance within one", true, ""};
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> ks(2, 10);
  std::uniform_int_distribution<int> extra(0, 150);
  for (int t = 0; t < trials; ++t) {
    const int k = ks(rng);
    const int fair = k + extra(rng);
    const int unfair = k + extra(rng);
    std::vector<Label> labels;
    for (int i = 0; i < fair; ++i) labels.push_back(Label::kFair);
    for (int i = 0; i < unfair; ++i) labels.push_back(Label::kUnfair);
    std::shuffle(labels.begin(), labels.end(), rng);
    const auto fold = stratified_folds(labels, k, static_cast<std::uint64_t>(t));
    std::vector<int> size(k, 0);
    std::vector<int> fair_in(k, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (fold[i] < 0 || fold[i] >= k) {
        r.ok = false;
        r.detail = "row outside every fold";
        return r;
      }
      ++size[fold[i]];
      fair_in[fold[i]] += labels[i] == Label::kFair;
    }
    const auto [smin, smax] = std::minmax_element(size.begin(), size.end());
    const auto [fmin, fmax] = std::minmax_element(fair_in.begin(), fair_in.end());
    std::vector<int> unfair_in(k);
    for (int f = 0; f < k; ++f) unfair_in[f] = size[f] - fair_in[f];
    const auto [umin, umax] = std::minmax_element(unfair_in.begin(), unfair_in.end());
    if (*smax - *smin > 1 || *fmax - *fmin > 1 || *umax - *umin > 1) {
      r.ok = false;
      r.detail = "imbalance at trial " + std::to_string(t);
      return r;
    }
  }
  r.detail = std::to_string(trials) + " random label sets";
  return r;
}

std::vector<PropertyResult> run_all_properties() {
  return {check_cosine_properties(), check_swantvec_linearity(), check_label_flip(),
          check_gradient(), check_pca_full_rank(), check_fold_balance()};
}

}  // namespace grf::testing
