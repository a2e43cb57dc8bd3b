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

// grtemplates.hpp - synthesis of the want-axis sentence pairs and the
// masked-LM golden-rule templates.
//
// Axis pairs take the PATIENT of a test sentence as subject; mask templates
// reflect the AGENT into the patient role ("the man murdered the police
// officer" -> "a man would [MASK] like to be murdered").

#ifndef GRF_GRTEMPLATES_HPP_
#define GRF_GRTEMPLATES_HPP_

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "grf/core.hpp"

namespace grf {

enum class WantAxisKind { kRequire = 1, kHappy = 2, kDemand = 3, kWish = 4 };

inline constexpr std::array<WantAxisKind, 4> kAllAxisKinds = {
    WantAxisKind::kRequire, WantAxisKind::kHappy, WantAxisKind::kDemand,
    WantAxisKind::kWish};

// Keyword naming the axis ("require", "happy", "demand", "wish").
std::string_view axis_keyword(WantAxisKind kind);
// 1..4, or throws kInvalidArgument.
WantAxisKind axis_kind_from_int(int id);
inline int axis_index(WantAxisKind kind) { return static_cast<int>(kind) - 1; }

struct AxisSentencePair {
  WantAxisKind kind;
  Sentence positive;
  Sentence negative;
};

// "the <patient> would require it" / "the <patient> would despise it" etc.
AxisSentencePair synth_axis_pair(std::string_view patient, WantAxisKind kind);

// Maps any known verb form (base or simple past) to its past participle.
// Anything absent falls through to the orthographic rules in
// past_participle().
class VerbLexicon {
 public:
  VerbLexicon() = default;

  // Irregular verbs plus regular verbs the spelling rules get wrong
  // ("outgas" -> "outgassed", "need" -> "needed").
  static const VerbLexicon& builtin();

  // One "form<TAB>participle" per line; '#' starts a comment. Later entries
  // override earlier ones.
  void load(std::istream& in, std::string_view source_name);
  void load_file(const std::filesystem::path& path);
  void add(std::string form, std::string participle);

  std::optional<std::string> participle_of(std::string_view form) const;
  bool is_participle(std::string_view token) const;
  bool is_known_form(std::string_view token) const;
  std::size_t size() const noexcept { return forms_.size(); }

 private:
  std::unordered_map<std::string, std::string> forms_;
  std::unordered_set<std::string> participles_;
};

// Past participle of a single alphabetic token. Tokens already ending in
// "-ed", or already a lexicon participle, come back unchanged.
std::string past_participle(std::string_view verb,
                            const VerbLexicon& lexicon = VerbLexicon::builtin());

// Inflects the head of a verb phrase and keeps its particles ("listen to" ->
// "listened to"). A phrase headed by a preposition is a non-verbal predicate
// ("on a stroll") and passes through unchanged.
std::string participle_phrase(std::string_view verb_phrase,
                              const VerbLexicon& lexicon = VerbLexicon::builtin());

// "an" before a vowel-initial noun, "a" otherwise.
std::string_view indefinite_article(std::string_view noun);

enum class TemplateForm { kStandard, kPunitive, kCustom };

std::string_view to_string(TemplateForm form);

// A sentence with exactly one mask slot. The slot is held abstractly as the
// split between prefix and suffix; render() spells it with the backend's
// literal.
class MaskTemplate {
 public:
  static constexpr std::string_view kDefaultMask = "[MASK]";

  MaskTemplate(std::string prefix, std::string suffix, std::string subject,
               std::string verb_participle, TemplateForm form);

  // Splits `text` on its single occurrence of `mask_literal`.
  static MaskTemplate parse(std::string_view text,
                            std::string_view mask_literal = kDefaultMask,
                            TemplateForm form = TemplateForm::kCustom);

  std::string render(std::string_view mask_literal = kDefaultMask) const;

  const std::string& prefix() const noexcept { return prefix_; }
  const std::string& suffix() const noexcept { return suffix_; }
  const std::string& subject() const noexcept { return subject_; }
  const std::string& verb_participle() const noexcept { return verb_participle_; }
  TemplateForm form() const noexcept { return form_; }

 private:
  std::string prefix_;
  std::string suffix_;
  std::string subject_;
  std::string verb_participle_;
  TemplateForm form_;
};

// "a <agent> would [MASK] like to be <participle>"
MaskTemplate synth_standard_template(
    std::string_view agent, std::string_view verb,
    const VerbLexicon& lexicon = VerbLexicon::builtin());

// "a <offender> would [MASK] wish to be <participle>"
MaskTemplate synth_punitive_template(
    std::string_view offender, std::string_view verb,
    const VerbLexicon& lexicon = VerbLexicon::builtin());

}  // namespace grf

#endif  // GRF_GRTEMPLATES_HPP_
