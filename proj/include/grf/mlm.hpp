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

// mlm.hpp - golden-rule classification through a masked language model.
//
// A template such as "a man would [MASK] like to be murdered" is filled by
// the model; the top-ranked token is read through a polarity lexicon
// ("not" -> Unfair, "always" -> Fair). Model outputs come from a cache
// written by the offline exporter, so nothing here links a model runtime.

#ifndef GRF_MLM_HPP_
#define GRF_MLM_HPP_

#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grf/core.hpp"
#include "grf/grtemplates.hpp"
#include "grf/svo.hpp"

namespace grf {

struct Candidate {
  std::string token;
  double probability = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Ranked fillers for one template. Non-empty, probabilities in [0, 1] and
// non-increasing.
class MaskPrediction {
 public:
  MaskPrediction(MaskTemplate mask_template, std::vector<Candidate> candidates,
                 std::string source);

  const MaskTemplate& mask_template() const noexcept { return template_; }
  const std::vector<Candidate>& candidates() const noexcept { return candidates_; }
  const Candidate& top() const noexcept { return candidates_.front(); }
  const std::string& source() const noexcept { return source_; }

 private:
  MaskTemplate template_;
  std::vector<Candidate> candidates_;
  std::string source_;
};

class MaskBackend {
 public:
  virtual ~MaskBackend() = default;

  virtual const std::string& model_id() const = 0;
  virtual MaskPrediction predict(const MaskTemplate& mask_template) const = 0;
  // Score of `option` in the mask slot, comparable across options of one
  // template.
  virtual double option_score(const MaskTemplate& mask_template,
                              std::string_view option) const = 0;
};

// Cached model outputs keyed by the template rendered with "[MASK]".
//
// JSON Lines, two record shapes that may share a file:
//   {"template": t, "candidates": [{"token": w, "p": x}, ...], "model": id}
//   {"template": t, "option": w, "score": x}
class MaskCache {
 public:
  struct Entry {
    std::vector<Candidate> candidates;
    std::string model;
  };

  void add_prediction(std::string_view rendered, std::vector<Candidate> candidates,
                      std::string model);
  void add_option_score(std::string_view rendered, std::string option, double score);

  // Appends the records of a stream; a template seen twice raises
  // kMalformedRecord.
  void read(std::istream& in, std::string_view source_name);
  void load_file(const std::filesystem::path& path);
  void write(std::ostream& out) const;

  const Entry* find(std::string_view rendered) const;
  const double* find_score(std::string_view rendered, std::string_view option) const;

  const std::map<std::string, Entry, std::less<>>& predictions() const noexcept {
    return predictions_;
  }
  const std::map<std::pair<std::string, std::string>, double>& option_scores()
      const noexcept {
    return scores_;
  }

 private:
  std::map<std::string, Entry, std::less<>> predictions_;
  std::map<std::pair<std::string, std::string>, double> scores_;
};

class MaskCacheBackend : public MaskBackend {
 public:
  explicit MaskCacheBackend(std::shared_ptr<const MaskCache> cache,
                            std::string model_id = "mask-cache");

  const std::string& model_id() const override { return model_id_; }
  MaskPrediction predict(const MaskTemplate& mask_template) const override;
  double option_score(const MaskTemplate& mask_template,
                      std::string_view option) const override;

 private:
  std::shared_ptr<const MaskCache> cache_;
  std::string model_id_;
};

// Token sets that map a predicted filler to a label.
class PolarityLexicon {
 public:
  // negative {not, never, n't}; positive {always, surely, definitely,
  // probably, really, also, sincerely}
  PolarityLexicon();
  PolarityLexicon(std::set<std::string> negative, std::set<std::string> positive);

  // "NEGATIVE:" and "POSITIVE:" section headers, one token per line.
  static PolarityLexicon read(std::istream& in, std::string_view source_name);
  static PolarityLexicon load_file(const std::filesystem::path& path);

  const std::set<std::string>& negative() const noexcept { return negative_; }
  const std::set<std::string>& positive() const noexcept { return positive_; }

 private:
  void validate() const;

  std::set<std::string> negative_;
  std::set<std::string> positive_;
};

// Reference vocabulary for telling words from garbled output.
class Wordlist {
 public:
  Wordlist() = default;
  explicit Wordlist(std::set<std::string, std::less<>> words) : words_(std::move(words)) {}

  static Wordlist load_file(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

enum class TokenClass { kNegative, kPositive, kUnmapped, kGarbled };

std::string_view to_string(TokenClass c);

// Reads the first word of a (possibly multiword) filler. Non-alphabetic
// tokens are garbled; so are alphabetic tokens outside a non-null wordlist
// unless they belong to the lexicon.
TokenClass classify_token(std::string_view token, const PolarityLexicon& lexicon,
                          const Wordlist* wordlist = nullptr);

// Label of the top-ranked candidate. Throws kGarbledOutput or
// kUnmappedToken.
Label interpret_top(const MaskPrediction& prediction, const PolarityLexicon& lexicon,
                    const Wordlist* wordlist = nullptr);

MaskPrediction predict_mask(const MaskBackend& backend, const MaskTemplate& mask_template);

// The option the backend scores highest; equal scores resolve to the
// lexicographically smallest option, so the answer never depends on order.
std::string constrained_fill(const MaskBackend& backend, const MaskTemplate& mask_template,
                             const std::vector<std::string>& options);

// Offender noun -> the crime that offender commits ("murderer" -> "murder").
using CrimeTable = std::map<std::string, std::string, std::less<>>;

const CrimeTable& default_crime_table();

struct MlmOptions {
  TemplateForm form = TemplateForm::kStandard;
  const PolarityLexicon* lexicon = nullptr;  // default lexicon when null
  const Wordlist* wordlist = nullptr;
  const CrimeTable* crimes = nullptr;        // default_crime_table() when null
  const SvoExtractor* extractor = nullptr;   // built-in rules when null
  const VerbLexicon* verbs = nullptr;        // built-in lexicon when null
};

// Template the sentence maps to: standard form reflects the agent and verb;
// punitive form asks whether the patient (the sanctioned offender) would
// wish their own crime on themselves.
MaskTemplate template_for(const Sentence& sentence, const MlmOptions& options);

// Score is the top candidate's probability. With the punitive form the
// label describes the offender's crime, so Unfair confirms the sanction.
Prediction classify_mlm(const MaskBackend& backend, const Sentence& sentence,
                        const MlmOptions& options = {});

}  // namespace grf

#endif  // GRF_MLM_HPP_
