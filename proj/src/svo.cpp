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

#include "grf/svo.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace grf {

namespace {

constexpr std::string_view kModule = "svo";

using WordSet = std::unordered_set<std::string_view>;

const WordSet kDeterminers = {"the", "a", "an"};
const WordSet kPossessives = {"his", "her", "their", "its", "my", "your", "our"};
const WordSet kPrepositions = {
    "to",     "at",      "with",   "from",    "for",     "of",      "on",
    "in",     "into",    "onto",   "by",      "about",   "against", "over",
    "under",  "upon",    "toward", "towards", "after",   "before",  "behind",
    "beside", "near",    "through", "without", "among",  "between"};
const WordSet kAuxiliaries = {
    "is",  "are",   "was",  "were",   "am",    "be",    "been",  "being",
    "has", "have",  "had",  "would",  "could", "should", "will", "shall",
    "can", "may",   "might", "must",  "do",    "does",  "did",   "not",
    "never"};

constexpr const char* kBuiltinRules[] = {
    "10 DET? AGENT PASTVERB DET|POSS? PATIENT+",
    "20 DET? AGENT+ PASTVERB DET|POSS? PATIENT+",
    "30 DET? AGENT+ PASTVERB DET|POSS? SKIP* PREP DET|POSS? PATIENT+",
    "40 DET? AGENT+ VERB DET|POSS? PATIENT+",
    "50 DET? AGENT+ VERB DET|POSS? SKIP* PREP DET|POSS? PATIENT+",
};

struct Token {
  std::string text;
  std::string lower;
  bool closed = false;  // eligible for the closed classes
};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_trim_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' ||
         c == '"' || c == '\'';
}

std::vector<Token> tokenize(const Sentence& sentence) {
  std::vector<Token> tokens;
  std::istringstream in(sentence.canonical());
  std::string word;
  while (in >> word) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && is_trim_punct(word[b])) ++b;
    while (e > b && is_trim_punct(word[e - 1])) --e;
    if (b == e) continue;
    Token t;
    t.text = word.substr(b, e - b);
    t.lower = ascii_lower(t.text);
    t.closed = tokens.empty() || !is_upper(t.text.front());
    tokens.push_back(std::move(t));
  }
  return tokens;
}

bool in_set(const WordSet& set, const Token& t) {
  return t.closed && set.count(t.lower) > 0;
}

bool is_content(const Token& t) {
  return !(in_set(kDeterminers, t) || in_set(kPossessives, t) ||
           in_set(kPrepositions, t) || in_set(kAuxiliaries, t));
}

bool looks_past(const Token& t, const VerbLexicon& lexicon) {
  if (lexicon.is_known_form(t.lower)) return true;
  return t.lower.size() > 3 && t.lower.compare(t.lower.size() - 2, 2, "ed") == 0;
}

bool matches(const RoleAlternative& alt, const Token& t, const VerbLexicon& lexicon) {
  switch (alt.role) {
    case TokenRole::kDet: return in_set(kDeterminers, t);
    case TokenRole::kPoss: return in_set(kPossessives, t);
    case TokenRole::kPrep: return in_set(kPrepositions, t);
    case TokenRole::kLiteral: return t.lower == alt.literal;
    case TokenRole::kPastVerb: return is_content(t) && looks_past(t, lexicon);
    case TokenRole::kAgent:
    case TokenRole::kVerb:
    case TokenRole::kPatient:
    case TokenRole::kSkip: return is_content(t);
  }
  return false;
}

class Matcher {
 public:
  Matcher(const ExtractionRule& rule, const std::vector<Token>& tokens,
          const VerbLexicon& lexicon)
      : rule_(rule), tokens_(tokens), lexicon_(lexicon), roles_(tokens.size()) {}

  std::optional<SVOTriple> run() {
    if (!step(0, 0)) return std::nullopt;
    SVOTriple triple;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      std::string* slot = nullptr;
      switch (roles_[i]) {
        case TokenRole::kAgent: slot = &triple.agent; break;
        case TokenRole::kVerb:
        case TokenRole::kPastVerb: slot = &triple.verb; break;
        case TokenRole::kPatient: slot = &triple.patient; break;
        default: break;
      }
      if (slot == nullptr) continue;
      if (!slot->empty()) *slot += ' ';
      *slot += tokens_[i].text;
    }
    if (triple.agent.empty() || triple.verb.empty() || triple.patient.empty()) {
      return std::nullopt;
    }
    return triple;
  }

 private:
  std::optional<TokenRole> accept(const PatternElement& el, const Token& t) const {
    for (const auto& alt : el.alternatives) {
      if (matches(alt, t, lexicon_)) return alt.role;
    }
    return std::nullopt;
  }

  bool step(std::size_t el_idx, std::size_t tok_idx) {
    if (el_idx == rule_.pattern.size()) return tok_idx == tokens_.size();
    const PatternElement& el = rule_.pattern[el_idx];
    std::size_t min_count = 1;
    std::size_t max_count = 1;
    switch (el.quantifier) {
      case Quantifier::kOne: break;
      case Quantifier::kOptional: min_count = 0; break;
      case Quantifier::kOneOrMore: max_count = tokens_.size(); break;
      case Quantifier::kZeroOrMore: min_count = 0; max_count = tokens_.size(); break;
    }
    std::size_t consumed = 0;
    while (true) {
      if (consumed >= min_count && step(el_idx + 1, tok_idx + consumed)) return true;
      if (consumed == max_count || tok_idx + consumed >= tokens_.size()) return false;
      const auto role = accept(el, tokens_[tok_idx + consumed]);
      if (!role) return false;
      roles_[tok_idx + consumed] = *role;
      ++consumed;
    }
  }

  const ExtractionRule& rule_;
  const std::vector<Token>& tokens_;
  const VerbLexicon& lexicon_;
  std::vector<TokenRole> roles_;
};

RoleAlternative parse_alternative(std::string_view word, std::string_view line) {
  if (!word.empty() && word.front() == '=') {
    if (word.size() == 1) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "empty literal in rule '" + std::string(line) + "'");
    }
    return {TokenRole::kLiteral, ascii_lower(word.substr(1))};
  }
  static const std::pair<std::string_view, TokenRole> kNames[] = {
      {"DET", TokenRole::kDet},         {"POSS", TokenRole::kPoss},
      {"PREP", TokenRole::kPrep},       {"AGENT", TokenRole::kAgent},
      {"VERB", TokenRole::kVerb},       {"PASTVERB", TokenRole::kPastVerb},
      {"PATIENT", TokenRole::kPatient}, {"SKIP", TokenRole::kSkip}};
  for (const auto& [name, role] : kNames) {
    if (word == name) return {role, ""};
  }
  throw Error(ErrorCode::kInvalidArgument, kModule,
              "unknown role '" + std::string(word) + "' in rule '" +
                  std::string(line) + "'");
}

}  // namespace

ExtractionRule parse_rule(std::string_view line) {
  std::istringstream in{std::string(line)};
  ExtractionRule rule;
  rule.text = canonicalize(line);
  std::string word;
  if (!(in >> word)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "empty rule");
  }
  try {
    std::size_t used = 0;
    rule.priority = std::stoi(word, &used);
    if (used != word.size()) throw std::invalid_argument(word);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "rule must start with an integer priority: '" + rule.text + "'");
  }
  bool has_agent = false, has_verb = false, has_patient = false;
  while (in >> word) {
    PatternElement el;
    const char last = word.back();
    if (last == '?' || last == '+' || last == '*') {
      el.quantifier = last == '?'   ? Quantifier::kOptional
                      : last == '+' ? Quantifier::kOneOrMore
                                    : Quantifier::kZeroOrMore;
      word.pop_back();
    }
    std::string_view rest = word;
    while (true) {
      const auto bar = rest.find('|');
      el.alternatives.push_back(parse_alternative(rest.substr(0, bar), rule.text));
      if (bar == std::string_view::npos) break;
      rest = rest.substr(bar + 1);
    }
    for (const auto& alt : el.alternatives) {
      has_agent |= alt.role == TokenRole::kAgent;
      has_verb |= alt.role == TokenRole::kVerb || alt.role == TokenRole::kPastVerb;
      has_patient |= alt.role == TokenRole::kPatient;
    }
    rule.pattern.push_back(std::move(el));
  }
  if (!has_agent || !has_verb || !has_patient) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "rule must capture AGENT, VERB or PASTVERB, and PATIENT: '" +
                    rule.text + "'");
  }
  return rule;
}

SvoExtractor::SvoExtractor() : lexicon_(&VerbLexicon::builtin()) {
  for (const char* text : kBuiltinRules) rules_.push_back(parse_rule(text));
  sort_rules();
}

SvoExtractor::SvoExtractor(std::vector<ExtractionRule> rules, const VerbLexicon& lexicon)
    : rules_(std::move(rules)), lexicon_(&lexicon) {
  sort_rules();
}

const SvoExtractor& SvoExtractor::builtin() {
  static const SvoExtractor kExtractor;
  return kExtractor;
}

void SvoExtractor::sort_rules() {
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const ExtractionRule& a, const ExtractionRule& b) {
                     return a.priority < b.priority;
                   });
}

void SvoExtractor::add_rules(std::istream& in, std::string_view source_name) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rules_.push_back(parse_rule(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  std::string(source_name) + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  sort_rules();
}

void SvoExtractor::add_rules_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  add_rules(in, path.string());
}

SVOTriple SvoExtractor::extract(const Sentence& sentence) const {
  const std::vector<Token> tokens = tokenize(sentence);
  for (const auto& rule : rules_) {
    if (auto triple = Matcher(rule, tokens, *lexicon_).run()) return *triple;
  }
  throw Error(ErrorCode::kNoTransitivePattern, kModule,
              "no agent-verb-patient pattern matches '" + sentence.canonical() + "'");
}

std::string SvoExtractor::extract_subject(const Sentence& sentence) const {
  const std::vector<Token> tokens = tokenize(sentence);
  std::size_t i = 0;
  if (i < tokens.size() && (in_set(kDeterminers, tokens[i]) ||
                            in_set(kPossessives, tokens[i]))) {
    ++i;
  }
  std::string subject;
  for (; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (!is_content(t)) break;
    if (!subject.empty() && looks_past(t, *lexicon_)) break;
    if (!subject.empty()) subject += ' ';
    subject += t.text;
  }
  if (subject.empty()) {
    throw Error(ErrorCode::kNoTransitivePattern, kModule,
                "no subject noun phrase in '" + sentence.canonical() + "'");
  }
  return subject;
}

SVOTriple extract_svo(const Sentence& sentence) {
  return SvoExtractor::builtin().extract(sentence);
}

}  // namespace grf
