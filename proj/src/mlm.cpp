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

#include "grf/mlm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace grf {

namespace {

constexpr std::string_view kModule = "mlm";

[[noreturn]] void malformed(std::string_view source, int line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord, kModule,
              std::string(source) + ":" + std::to_string(line_no) + ": " + why);
}

bool is_wordlike(std::string_view token) {
  if (token.empty()) return false;
  bool has_letter = false;
  for (char c : token) {
    const bool letter = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (!letter && c != '\'') return false;
    has_letter |= letter;
  }
  return has_letter;
}

std::string first_word(std::string_view token) {
  std::istringstream in{std::string(token)};
  std::string word;
  in >> word;
  return word;
}

std::string cache_key(std::string_view rendered) {
  return MaskTemplate::parse(rendered).render();
}

}  // namespace

MaskPrediction::MaskPrediction(MaskTemplate mask_template, std::vector<Candidate> candidates,
                               std::string source)
    : template_(std::move(mask_template)),
      candidates_(std::move(candidates)),
      source_(std::move(source)) {
  if (candidates_.empty()) {
    throw Error(ErrorCode::kEmptyCandidates, kModule,
                "no candidates for '" + template_.render() + "'");
  }
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const double p = candidates_[i].probability;
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "candidate probability out of [0, 1]: " + std::to_string(p));
    }
    if (i > 0 && p > candidates_[i - 1].probability) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "candidates must be sorted by probability, descending");
    }
  }
}

void MaskCache::add_prediction(std::string_view rendered, std::vector<Candidate> candidates,
                               std::string model) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.probability > b.probability;
                   });
  predictions_.insert_or_assign(cache_key(rendered),
                                Entry{std::move(candidates), std::move(model)});
}

void MaskCache::add_option_score(std::string_view rendered, std::string option,
                                 double score) {
  scores_[{cache_key(rendered), std::move(option)}] = score;
}

void MaskCache::read(std::istream& in, std::string_view source_name) {
  using nlohmann::json;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      malformed(source_name, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object() || !record.contains("template") ||
        !record["template"].is_string()) {
      malformed(source_name, line_no, "record needs a string 'template'");
    }
    std::string key;
    try {
      key = cache_key(record["template"].get<std::string>());
    } catch (const Error& e) {
      malformed(source_name, line_no, e.what());
    }
    if (record.contains("candidates")) {
      const json& list = record["candidates"];
      if (!list.is_array()) malformed(source_name, line_no, "'candidates' must be an array");
      std::vector<Candidate> candidates;
      for (const json& c : list) {
        if (!c.is_object() || !c.contains("token") || !c["token"].is_string() ||
            !c.contains("p") || !c["p"].is_number()) {
          malformed(source_name, line_no, "candidate needs a string 'token' and numeric 'p'");
        }
        const double p = c["p"].get<double>();
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          malformed(source_name, line_no, "candidate probability out of [0, 1]");
        }
        candidates.push_back({c["token"].get<std::string>(), p});
      }
      std::string model;
      if (record.contains("model") && record["model"].is_string()) {
        model = record["model"].get<std::string>();
      }
      if (predictions_.count(key)) malformed(source_name, line_no, "duplicate template '" + key + "'");
      add_prediction(key, std::move(candidates), std::move(model));
    } else if (record.contains("option")) {
      if (!record["option"].is_string() || !record.contains("score") ||
          !record["score"].is_number()) {
        malformed(source_name, line_no, "score record needs a string 'option' and numeric 'score'");
      }
      std::string option = record["option"].get<std::string>();
      if (scores_.count({key, option})) {
        malformed(source_name, line_no, "duplicate option '" + option + "' for '" + key + "'");
      }
      add_option_score(key, std::move(option), record["score"].get<double>());
    } else {
      malformed(source_name, line_no, "record has neither 'candidates' nor 'option'");
    }
  }
}

void MaskCache::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  read(in, path.string());
}

void MaskCache::write(std::ostream& out) const {
  using nlohmann::json;
  for (const auto& [rendered, entry] : predictions_) {
    json list = json::array();
    for (const auto& c : entry.candidates) list.push_back({{"token", c.token}, {"p", c.probability}});
    out << json{{"template", rendered}, {"candidates", list}, {"model", entry.model}}.dump()
        << '\n';
  }
  for (const auto& [key, score] : scores_) {
    out << json{{"template", key.first}, {"option", key.second}, {"score", score}}.dump()
        << '\n';
  }
}

const MaskCache::Entry* MaskCache::find(std::string_view rendered) const {
  const auto it = predictions_.find(rendered);
  return it == predictions_.end() ? nullptr : &it->second;
}

const double* MaskCache::find_score(std::string_view rendered, std::string_view option) const {
  const auto it = scores_.find({std::string(rendered), std::string(option)});
  return it == scores_.end() ? nullptr : &it->second;
}

MaskCacheBackend::MaskCacheBackend(std::shared_ptr<const MaskCache> cache, std::string model_id)
    : cache_(std::move(cache)), model_id_(std::move(model_id)) {
  if (!cache_) throw Error(ErrorCode::kBackendUnavailable, kModule, "no mask cache loaded");
}

MaskPrediction MaskCacheBackend::predict(const MaskTemplate& mask_template) const {
  const std::string rendered = mask_template.render();
  const MaskCache::Entry* entry = cache_->find(rendered);
  if (entry == nullptr) {
    throw Error(ErrorCode::kCacheMiss, kModule, "template not in mask cache: '" + rendered + "'");
  }
  return MaskPrediction(mask_template, entry->candidates,
                        entry->model.empty() ? model_id_ : entry->model);
}

double MaskCacheBackend::option_score(const MaskTemplate& mask_template,
                                      std::string_view option) const {
  const std::string rendered = mask_template.render();
  const double* score = cache_->find_score(rendered, option);
  if (score == nullptr) {
    throw Error(ErrorCode::kCacheMiss, kModule,
                "no score for option '" + std::string(option) + "' in '" + rendered + "'");
  }
  return *score;
}

PolarityLexicon::PolarityLexicon()
    : negative_{"not", "never", "n't"},
      positive_{"always", "surely", "definitely", "probably", "really", "also", "sincerely"} {}

PolarityLexicon::PolarityLexicon(std::set<std::string> negative, std::set<std::string> positive)
    : negative_(std::move(negative)), positive_(std::move(positive)) {
  validate();
}

void PolarityLexicon::validate() const {
  if (negative_.empty() || positive_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "polarity lexicon needs non-empty NEGATIVE and POSITIVE sets");
  }
  for (const auto& token : negative_) {
    if (positive_.count(token)) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "token '" + token + "' is both negative and positive");
    }
  }
}

PolarityLexicon PolarityLexicon::read(std::istream& in, std::string_view source_name) {
  std::set<std::string> negative;
  std::set<std::string> positive;
  std::set<std::string>* section = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string token = ascii_lower(canonicalize(line));
    if (token == "negative:") {
      section = &negative;
    } else if (token == "positive:") {
      section = &positive;
    } else if (section == nullptr || token.find(' ') != std::string::npos) {
      throw Error(ErrorCode::kMalformedRow, kModule,
                  std::string(source_name) + ":" + std::to_string(line_no) +
                      ": expected a section header or one token per line");
    } else {
      section->insert(token);
    }
  }
  return PolarityLexicon(std::move(negative), std::move(positive));
}

PolarityLexicon PolarityLexicon::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  return read(in, path.string());
}

Wordlist Wordlist::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    words.insert(ascii_lower(line));
  }
  return Wordlist(std::move(words));
}

bool Wordlist::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

std::string_view to_string(TokenClass c) {
  switch (c) {
    case TokenClass::kNegative: return "negative";
    case TokenClass::kPositive: return "positive";
    case TokenClass::kUnmapped: return "unmapped";
    case TokenClass::kGarbled: return "garbled";
  }
  return "unknown";
}

TokenClass classify_token(std::string_view token, const PolarityLexicon& lexicon,
                          const Wordlist* wordlist) {
  const std::string word = ascii_lower(first_word(token));
  if (lexicon.negative().count(word)) return TokenClass::kNegative;
  if (lexicon.positive().count(word)) return TokenClass::kPositive;
  if (!is_wordlike(word)) return TokenClass::kGarbled;
  if (wordlist != nullptr && !wordlist->contains(word)) return TokenClass::kGarbled;
  return TokenClass::kUnmapped;
}

Label interpret_top(const MaskPrediction& prediction, const PolarityLexicon& lexicon,
                    const Wordlist* wordlist) {
  const std::string& token = prediction.top().token;
  switch (classify_token(token, lexicon, wordlist)) {
    case TokenClass::kNegative: return Label::kUnfair;
    case TokenClass::kPositive: return Label::kFair;
    case TokenClass::kGarbled:
      throw Error(ErrorCode::kGarbledOutput, kModule,
                  "garbled top prediction '" + token + "' for '" +
                      prediction.mask_template().render() + "'");
    case TokenClass::kUnmapped:
      break;
  }
  throw Error(ErrorCode::kUnmappedToken, kModule,
              "top prediction '" + token + "' is in neither polarity set");
}

MaskPrediction predict_mask(const MaskBackend& backend, const MaskTemplate& mask_template) {
  return backend.predict(mask_template);
}

std::string constrained_fill(const MaskBackend& backend, const MaskTemplate& mask_template,
                             const std::vector<std::string>& options) {
  if (options.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "constrained fill needs options");
  }
  std::vector<std::string> sorted = options;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "options must be distinct");
  }
  const std::string* best = nullptr;
  double best_score = 0.0;
  for (const auto& option : sorted) {
    const double score = backend.option_score(mask_template, option);
    if (best == nullptr || score > best_score) {
      best = &option;
      best_score = score;
    }
  }
  return *best;
}

const CrimeTable& default_crime_table() {
  static const CrimeTable kTable = {
      {"abuser", "abuse"},         {"arsonist", "burn"},
      {"assassin", "assassinate"}, {"attacker", "attack"},
      {"blackmailer", "blackmail"}, {"bully", "bully"},
      {"burglar", "burgle"},       {"hacker", "hack"},
      {"kidnapper", "kidnap"},     {"killer", "kill"},
      {"murderer", "murder"},      {"poisoner", "poison"},
      {"rapist", "rape"},          {"robber", "rob"},
      {"stalker", "stalk"},        {"thief", "steal from"},
      {"torturer", "torture"},
  };
  return kTable;
}

MaskTemplate template_for(const Sentence& sentence, const MlmOptions& options) {
  const SvoExtractor& extractor =
      options.extractor != nullptr ? *options.extractor : SvoExtractor::builtin();
  const VerbLexicon& verbs = options.verbs != nullptr ? *options.verbs : VerbLexicon::builtin();
  const SVOTriple triple = extractor.extract(sentence);
  switch (options.form) {
    case TemplateForm::kStandard:
      return synth_standard_template(triple.agent, triple.verb, verbs);
    case TemplateForm::kPunitive: {
      const CrimeTable& crimes =
          options.crimes != nullptr ? *options.crimes : default_crime_table();
      const auto it = crimes.find(ascii_lower(triple.patient));
      if (it == crimes.end()) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "no crime verb known for offender '" + triple.patient + "'");
      }
      return synth_punitive_template(triple.patient, it->second, verbs);
    }
    case TemplateForm::kCustom:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, kModule,
              "sentence classification needs the standard or punitive form");
}

Prediction classify_mlm(const MaskBackend& backend, const Sentence& sentence,
                        const MlmOptions& options) {
  static const PolarityLexicon kDefaultLexicon;
  const PolarityLexicon& lexicon = options.lexicon != nullptr ? *options.lexicon : kDefaultLexicon;
  const MaskPrediction prediction = predict_mask(backend, template_for(sentence, options));
  return Prediction(interpret_top(prediction, lexicon, options.wordlist),
                    prediction.top().probability, Method::kMaskedLM);
}

}  // namespace grf
