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

// svo.hpp - rule-based agent/verb/patient extraction for simple declarative
// transitive sentences.
//
// A sentence is split on spaces and matched against an ordered table of
// token-role patterns; the lowest priority number that matches the whole
// sentence wins. Sentences that match no rule are rejected, never guessed.
//
// Rule grammar (one rule per line, '#' starts a comment):
//
//   rule     := priority element+
//   element  := alt ('|' alt)* quantifier?
//   alt      := DET | POSS | PREP | AGENT | VERB | PASTVERB | PATIENT | SKIP
//             | '=' word
//   quantifier := '?' | '+' | '*'
//
//   DET       the, a, an
//   POSS      his, her, their, its, my, your, our
//   PREP      a closed list of common prepositions
//   AGENT     content token, captured into the agent phrase
//   PATIENT   content token, captured into the patient phrase
//   VERB      content token, captured as the verb
//   PASTVERB  like VERB but must look like a past form: a known irregular
//             form or an "-ed" ending
//   SKIP      content token, matched and discarded
//   =word     that literal word (case-insensitive)
//
// Content tokens are anything outside the closed classes (determiners,
// possessives, prepositions, copulas, modals and auxiliaries). A capitalized
// token that is not sentence-initial is always a content token, so proper
// nouns are never stripped. Quantified elements match lazily.

#ifndef GRF_SVO_HPP_
#define GRF_SVO_HPP_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "grf/core.hpp"
#include "grf/grtemplates.hpp"

namespace grf {

enum class TokenRole { kDet, kPoss, kPrep, kAgent, kVerb, kPastVerb, kPatient, kSkip, kLiteral };

struct RoleAlternative {
  TokenRole role;
  std::string literal;  // lower-cased word for kLiteral
};

enum class Quantifier { kOne, kOptional, kOneOrMore, kZeroOrMore };

struct PatternElement {
  std::vector<RoleAlternative> alternatives;
  Quantifier quantifier = Quantifier::kOne;
};

struct ExtractionRule {
  int priority = 0;
  std::vector<PatternElement> pattern;
  std::string text;  // the rule as written
};

// Parses one rule line. Throws kInvalidArgument on a grammar error; the
// pattern must capture at least one AGENT, one VERB/PASTVERB and one PATIENT.
ExtractionRule parse_rule(std::string_view line);

class SvoExtractor {
 public:
  // Built-in rule table.
  SvoExtractor();
  explicit SvoExtractor(std::vector<ExtractionRule> rules,
                        const VerbLexicon& lexicon = VerbLexicon::builtin());

  static const SvoExtractor& builtin();

  // Adds rules from a rules file; existing rules keep their priorities.
  void add_rules(std::istream& in, std::string_view source_name);
  void add_rules_file(const std::filesystem::path& path);

  const std::vector<ExtractionRule>& rules() const noexcept { return rules_; }

  // Throws kNoTransitivePattern when no rule matches.
  SVOTriple extract(const Sentence& sentence) const;

  // Leading noun phrase up to the first verb, copula or modal, with a
  // determiner stripped: "the child would wish it stop" -> "child".
  std::string extract_subject(const Sentence& sentence) const;

 private:
  void sort_rules();

  std::vector<ExtractionRule> rules_;
  const VerbLexicon* lexicon_;
};

// Extraction with the built-in rule table.
SVOTriple extract_svo(const Sentence& sentence);

}  // namespace grf

#endif  // GRF_SVO_HPP_
