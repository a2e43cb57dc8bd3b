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

#include "grf/grtemplates.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace grf {

namespace {

constexpr std::string_view kModule = "grtemplates";

// base, simple past, past participle
struct IrregularVerb {
  const char* base;
  const char* past;
  const char* participle;
};

constexpr IrregularVerb kIrregular[] = {
    {"arise", "arose", "arisen"},       {"awake", "awoke", "awoken"},
    {"bear", "bore", "borne"},          {"beat", "beat", "beaten"},
    {"become", "became", "become"},     {"begin", "began", "begun"},
    {"bend", "bent", "bent"},           {"bet", "bet", "bet"},
    {"bind", "bound", "bound"},         {"bite", "bit", "bitten"},
    {"bleed", "bled", "bled"},          {"blow", "blew", "blown"},
    {"break", "broke", "broken"},       {"breed", "bred", "bred"},
    {"bring", "brought", "brought"},    {"build", "built", "built"},
    {"buy", "bought", "bought"},
    {"catch", "caught", "caught"},      {"choose", "chose", "chosen"},
    {"come", "came", "come"},           {"creep", "crept", "crept"},
    {"cut", "cut", "cut"},              {"deal", "dealt", "dealt"},
    {"dig", "dug", "dug"},              {"do", "did", "done"},
    {"draw", "drew", "drawn"},          {"drink", "drank", "drunk"},
    {"drive", "drove", "driven"},       {"eat", "ate", "eaten"},
    {"fall", "fell", "fallen"},         {"feed", "fed", "fed"},
    {"feel", "felt", "felt"},           {"fight", "fought", "fought"},
    {"find", "found", "found"},         {"flee", "fled", "fled"},
    {"fling", "flung", "flung"},        {"fly", "flew", "flown"},
    {"forbid", "forbade", "forbidden"}, {"forget", "forgot", "forgotten"},
    {"forgive", "forgave", "forgiven"}, {"forsake", "forsook", "forsaken"},
    {"freeze", "froze", "frozen"},      {"get", "got", "got"},
    {"give", "gave", "given"},          {"go", "went", "gone"},
    {"grind", "ground", "ground"},      {"grow", "grew", "grown"},
    {"hang", "hung", "hung"},           {"have", "had", "had"},
    {"hear", "heard", "heard"},         {"hide", "hid", "hidden"},
    {"hit", "hit", "hit"},              {"hold", "held", "held"},
    {"hurt", "hurt", "hurt"},           {"keep", "kept", "kept"},
    {"kneel", "knelt", "knelt"},        {"know", "knew", "known"},
    {"lay", "laid", "laid"},            {"lead", "led", "led"},
    {"leave", "left", "left"},          {"lend", "lent", "lent"},
    {"let", "let", "let"},              {"light", "lit", "lit"},
    {"lose", "lost", "lost"},           {"make", "made", "made"},
    {"mean", "meant", "meant"},         {"meet", "met", "met"},
    {"mislead", "misled", "misled"},    {"mistake", "mistook", "mistaken"},
    {"overcome", "overcame", "overcome"},
    {"overtake", "overtook", "overtaken"},
    {"overthrow", "overthrew", "overthrown"},
    {"pay", "paid", "paid"},            {"put", "put", "put"},
    {"quit", "quit", "quit"},           {"read", "read", "read"},
    {"rid", "rid", "rid"},              {"ride", "rode", "ridden"},
    {"ring", "rang", "rung"},           {"rise", "rose", "risen"},
    {"run", "ran", "run"},              {"say", "said", "said"},
    {"see", "saw", "seen"},             {"seek", "sought", "sought"},
    {"sell", "sold", "sold"},           {"send", "sent", "sent"},
    {"set", "set", "set"},              {"shake", "shook", "shaken"},
    {"shed", "shed", "shed"},           {"shoot", "shot", "shot"},
    {"shut", "shut", "shut"},           {"sing", "sang", "sung"},
    {"sink", "sank", "sunk"},           {"sit", "sat", "sat"},
    {"slay", "slew", "slain"},          {"sleep", "slept", "slept"},
    {"slide", "slid", "slid"},          {"sling", "slung", "slung"},
    {"slit", "slit", "slit"},           {"speak", "spoke", "spoken"},
    {"speed", "sped", "sped"},          {"spend", "spent", "spent"},
    {"spit", "spat", "spat"},           {"split", "split", "split"},
    {"spread", "spread", "spread"},     {"stand", "stood", "stood"},
    {"steal", "stole", "stolen"},       {"stick", "stuck", "stuck"},
    {"sting", "stung", "stung"},        {"stink", "stank", "stunk"},
    {"strike", "struck", "struck"},     {"strive", "strove", "striven"},
    {"swear", "swore", "sworn"},        {"sweep", "swept", "swept"},
    {"swim", "swam", "swum"},           {"swing", "swung", "swung"},
    {"take", "took", "taken"},          {"teach", "taught", "taught"},
    {"tear", "tore", "torn"},           {"tell", "told", "told"},
    {"think", "thought", "thought"},    {"throw", "threw", "thrown"},
    {"thrust", "thrust", "thrust"},     {"tread", "trod", "trodden"},
    {"understand", "understood", "understood"},
    {"undertake", "undertook", "undertaken"},
    {"upset", "upset", "upset"},        {"wake", "woke", "woken"},
    {"wear", "wore", "worn"},           {"weave", "wove", "woven"},
    {"wed", "wed", "wed"},              {"weep", "wept", "wept"},
    {"win", "won", "won"},              {"withdraw", "withdrew", "withdrawn"},
    {"wring", "wrung", "wrung"},        {"write", "wrote", "written"},
};

// Regular verbs the spelling rules would mangle: "-eed" bases that are not
// past forms, stress-final doubling, and "-ic" stems.
constexpr std::pair<const char*, const char*> kRegularExceptions[] = {
    {"need", "needed"},         {"heed", "heeded"},
    {"seed", "seeded"},         {"weed", "weeded"},
    {"proceed", "proceeded"},   {"succeed", "succeeded"},
    {"exceed", "exceeded"},     {"plead", "pleaded"},
    {"burnt", "burnt"},         {"outgas", "outgassed"},
    {"admit", "admitted"},      {"commit", "committed"},
    {"permit", "permitted"},    {"omit", "omitted"},
    {"refer", "referred"},      {"prefer", "preferred"},
    {"occur", "occurred"},      {"control", "controlled"},
    {"patrol", "patrolled"},    {"compel", "compelled"},
    {"expel", "expelled"},      {"rebel", "rebelled"},
    {"regret", "regretted"},    {"equip", "equipped"},
    {"kidnap", "kidnapped"},    {"worship", "worshipped"},
    {"panic", "panicked"},      {"picnic", "picnicked"},
    {"mimic", "mimicked"},      {"traffic", "trafficked"},
};

// Words that head a non-verbal predicate ("be on a stroll").
const std::unordered_set<std::string_view>& predicate_prepositions() {
  static const std::unordered_set<std::string_view> kSet = {
      "on", "in", "at", "by", "with", "under", "over", "among", "beside",
      "near", "inside", "outside", "without", "within", "out", "off"};
  return kSet;
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

int syllable_count(std::string_view word) {
  int count = 0;
  bool in_vowel = false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const bool v = is_vowel(word[i]) || (word[i] == 'y' && i > 0);
    if (v && !in_vowel) ++count;
    in_vowel = v;
  }
  return count;
}

std::string regular_participle(const std::string& w) {
  const std::size_t n = w.size();
  if (ends_with(w, "e")) return w + "d";
  if (n >= 2 && w[n - 1] == 'y' && !is_vowel(w[n - 2])) {
    return w.substr(0, n - 1) + "ied";
  }
  // Monosyllabic consonant-vowel-consonant: double the final consonant.
  if (n >= 3 && !is_vowel(w[n - 1]) && is_vowel(w[n - 2]) &&
      !is_vowel(w[n - 3]) && w[n - 1] != 'w' && w[n - 1] != 'x' &&
      w[n - 1] != 'y' && syllable_count(w) == 1) {
    return w + w[n - 1] + "ed";
  }
  return w + "ed";
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::string require_noun(std::string_view noun) {
  std::string trimmed;
  try {
    trimmed = canonicalize(noun);
  } catch (const Error&) {
    throw Error(ErrorCode::kEmptyNoun, kModule, "noun is empty");
  }
  return trimmed;
}

MaskTemplate synth_would_template(std::string_view subject, std::string_view verb,
                                  std::string_view frame, TemplateForm form,
                                  const VerbLexicon& lexicon) {
  const std::string noun = require_noun(subject);
  const std::string participle = participle_phrase(verb, lexicon);
  std::string prefix = std::string(indefinite_article(noun)) + " " + noun + " would ";
  std::string suffix = " " + std::string(frame) + " " + participle;
  return MaskTemplate(std::move(prefix), std::move(suffix), noun, participle, form);
}

}  // namespace

std::string_view axis_keyword(WantAxisKind kind) {
  switch (kind) {
    case WantAxisKind::kRequire: return "require";
    case WantAxisKind::kHappy: return "happy";
    case WantAxisKind::kDemand: return "demand";
    case WantAxisKind::kWish: return "wish";
  }
  return "";
}

WantAxisKind axis_kind_from_int(int id) {
  if (id < 1 || id > 4) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "axis id must be 1..4, got " + std::to_string(id));
  }
  return static_cast<WantAxisKind>(id);
}

AxisSentencePair synth_axis_pair(std::string_view patient, WantAxisKind kind) {
  const std::string head = "the " + require_noun(patient) + " ";
  switch (kind) {
    case WantAxisKind::kRequire:
      return {kind, Sentence(head + "would require it"),
              Sentence(head + "would despise it")};
    case WantAxisKind::kHappy:
      return {kind, Sentence(head + "was happy by it"),
              Sentence(head + "was unhappy by it")};
    case WantAxisKind::kDemand:
      return {kind, Sentence(head + "would demand they did it"),
              Sentence(head + "would demand they stopped it")};
    case WantAxisKind::kWish:
      return {kind, Sentence(head + "would wish it continue"),
              Sentence(head + "would wish it stop")};
  }
  throw Error(ErrorCode::kInvalidArgument, kModule, "unknown axis kind");
}

const VerbLexicon& VerbLexicon::builtin() {
  static const VerbLexicon kLexicon = [] {
    VerbLexicon lex;
    for (const auto& v : kIrregular) {
      lex.add(v.base, v.participle);
      lex.add(v.past, v.participle);
      lex.add(v.participle, v.participle);
    }
    for (const auto& [form, participle] : kRegularExceptions) {
      lex.add(form, participle);
    }
    return lex;
  }();
  return kLexicon;
}

void VerbLexicon::add(std::string form, std::string participle) {
  participles_.insert(participle);
  forms_[std::move(form)] = std::move(participle);
}

void VerbLexicon::load(std::istream& in, std::string_view source_name) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::kMalformedRow, kModule,
                  std::string(source_name) + ":" + std::to_string(line_no) +
                      ": expected 'form<TAB>participle'");
    }
    std::string form = ascii_lower(canonicalize(line.substr(0, tab)));
    std::string participle = ascii_lower(canonicalize(line.substr(tab + 1)));
    add(std::move(form), std::move(participle));
  }
}

void VerbLexicon::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  }
  load(in, path.string());
}

std::optional<std::string> VerbLexicon::participle_of(std::string_view form) const {
  const auto it = forms_.find(std::string(form));
  if (it == forms_.end()) return std::nullopt;
  return it->second;
}

bool VerbLexicon::is_participle(std::string_view token) const {
  return participles_.count(std::string(token)) > 0;
}

bool VerbLexicon::is_known_form(std::string_view token) const {
  return forms_.count(std::string(token)) > 0;
}

std::string past_participle(std::string_view verb, const VerbLexicon& lexicon) {
  if (verb.empty()) {
    throw Error(ErrorCode::kNonAlphabeticToken, kModule, "verb is empty");
  }
  for (char c : verb) {
    if (!is_alpha(c)) {
      throw Error(ErrorCode::kNonAlphabeticToken, kModule,
                  "verb '" + std::string(verb) + "' is not a single alphabetic token");
    }
  }
  const std::string lower = ascii_lower(verb);
  if (auto p = lexicon.participle_of(lower)) return *p;
  if (lexicon.is_participle(lower)) return lower;
  if (lower.size() > 3 && ends_with(lower, "ed")) return lower;
  return regular_participle(lower);
}

std::string participle_phrase(std::string_view verb_phrase, const VerbLexicon& lexicon) {
  std::vector<std::string> words = split_words(verb_phrase);
  if (words.empty()) {
    throw Error(ErrorCode::kNonAlphabeticToken, kModule, "verb is empty");
  }
  if (!predicate_prepositions().count(ascii_lower(words.front()))) {
    words.front() = past_participle(words.front(), lexicon);
  }
  std::string out = words.front();
  for (std::size_t i = 1; i < words.size(); ++i) out += " " + words[i];
  return out;
}

std::string_view indefinite_article(std::string_view noun) {
  if (!noun.empty()) {
    const char c = static_cast<char>(ascii_lower(noun.substr(0, 1))[0]);
    if (is_vowel(c)) return "an";
  }
  return "a";
}

std::string_view to_string(TemplateForm form) {
  switch (form) {
    case TemplateForm::kStandard: return "Standard";
    case TemplateForm::kPunitive: return "Punitive";
    case TemplateForm::kCustom: return "Custom";
  }
  return "Unknown";
}

MaskTemplate::MaskTemplate(std::string prefix, std::string suffix,
                           std::string subject, std::string verb_participle,
                           TemplateForm form)
    : prefix_(std::move(prefix)),
      suffix_(std::move(suffix)),
      subject_(std::move(subject)),
      verb_participle_(std::move(verb_participle)),
      form_(form) {
  if (prefix_.find(kDefaultMask) != std::string::npos ||
      suffix_.find(kDefaultMask) != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "template must contain exactly one mask slot");
  }
}

MaskTemplate MaskTemplate::parse(std::string_view text, std::string_view mask_literal,
                                 TemplateForm form) {
  if (mask_literal.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "mask literal is empty");
  }
  const std::string canonical = canonicalize(text);
  const auto first = canonical.find(mask_literal);
  if (first == std::string::npos ||
      canonical.find(mask_literal, first + mask_literal.size()) != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "template '" + canonical + "' must contain exactly one '" +
                    std::string(mask_literal) + "'");
  }
  return MaskTemplate(canonical.substr(0, first),
                      canonical.substr(first + mask_literal.size()), "", "", form);
}

std::string MaskTemplate::render(std::string_view mask_literal) const {
  return prefix_ + std::string(mask_literal) + suffix_;
}

MaskTemplate synth_standard_template(std::string_view agent, std::string_view verb,
                                     const VerbLexicon& lexicon) {
  return synth_would_template(agent, verb, "like to be", TemplateForm::kStandard,
                              lexicon);
}

MaskTemplate synth_punitive_template(std::string_view offender, std::string_view verb,
                                     const VerbLexicon& lexicon) {
  return synth_would_template(offender, verb, "wish to be", TemplateForm::kPunitive,
                              lexicon);
}

}  // namespace grf
