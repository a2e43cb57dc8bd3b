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

#include "grf/eval.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace grf {

namespace {

constexpr std::string_view kModule = "eval";

[[noreturn]] void bad_row(std::string_view source, int line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedRow, kModule,
              std::string(source) + ":" + std::to_string(line_no) + ": " + why);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

// Value of "# <key>: N", if the comment is that directive.
std::optional<int> directive(std::string_view comment, std::string_view key) {
  comment.remove_prefix(1);
  while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
  if (comment.substr(0, key.size()) != key) return std::nullopt;
  comment.remove_prefix(key.size());
  if (comment.empty() || comment.front() != ':') return std::nullopt;
  comment.remove_prefix(1);
  while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
  while (!comment.empty() && (comment.back() == ' ' || comment.back() == '\r')) {
    comment.remove_suffix(1);
  }
  int value = 0;
  const auto r = std::from_chars(comment.data(), comment.data() + comment.size(), value);
  if (r.ec != std::errc() || r.ptr != comment.data() + comment.size() || value < 0) {
    return std::nullopt;
  }
  return value;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  return in;
}

void finish(EvalReport& report) {
  std::vector<std::optional<Label>> predicted;
  std::vector<Label> actual;
  for (const ItemResult& item : report.items) {
    predicted.push_back(item.prediction ? std::optional(item.prediction->label()) : std::nullopt);
    actual.push_back(item.actual);
  }
  report.matrix = confusion(predicted, actual);
  try {
    report.f1_fair = f1(report.matrix, Label::kFair);
  } catch (const Error&) {
  }
  try {
    report.f1_unfair = f1(report.matrix, Label::kUnfair);
  } catch (const Error&) {
  }
}

// Runs `fn(i)` for each item, capturing library errors as itemized
// failures instead of aborting the run.
template <typename Fn>
void evaluate_items(EvalReport& report, int jobs, Fn fn) {
  std::vector<std::optional<ItemFailure>> failed(report.items.size());
  parallel_for(report.items.size(), jobs, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const Error& e) {
      failed[i] = ItemFailure{i, report.items[i].text, e.code(), e.what()};
    }
  });
  for (auto& f : failed) {
    if (f) report.failures.push_back(std::move(*f));
  }
  finish(report);
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

LabeledCorpus read_corpus(std::istream& in, std::string_view name) {
  LabeledCorpus corpus{std::string(name), {}};
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "sentence\tlabel") bad_row(name, line_no, "expected header 'sentence<TAB>label'");
      header_seen = true;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 2) bad_row(name, line_no, "expected sentence<TAB>label");
    std::optional<Sentence> sentence;
    Label label;
    try {
      sentence.emplace(fields[0]);
      label = parse_label(fields[1]);
    } catch (const Error& e) {
      bad_row(name, line_no, e.what());
    }
    if (!seen.insert(sentence->canonical()).second) {
      throw Error(ErrorCode::kDuplicateSentence, kModule,
                  std::string(name) + ":" + std::to_string(line_no) + ": duplicate sentence '" +
                      sentence->canonical() + "'");
    }
    corpus.items.push_back({std::move(*sentence), label});
  }
  bool fair = false;
  bool unfair = false;
  for (const auto& item : corpus.items) (item.label == Label::kFair ? fair : unfair) = true;
  if (!fair || !unfair) bad_row(name, line_no, "corpus needs both Fair and Unfair sentences");
  return corpus;
}

LabeledCorpus load_corpus(const std::filesystem::path& path) {
  auto in = open(path);
  LabeledCorpus corpus = read_corpus(in, path.string());
  corpus.name = path.stem().string();
  return corpus;
}

TemplateCorpus read_template_corpus(std::istream& in, std::string_view name,
                                    const PolarityLexicon& lexicon) {
  TemplateCorpus corpus{std::string(name), {}, std::nullopt, std::nullopt};
  std::string line;
  int line_no = 0;
  int expected_line = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto n = directive(line, "expected-errors")) {
        corpus.expected_errors = n;
        expected_line = line_no;
      } else if (auto r = directive(line, "reported-errors")) {
        corpus.reported_errors = r;
      }
      continue;
    }
    if (!header_seen) {
      if (line != "template\tobserved_token\tlabel") {
        bad_row(name, line_no, "expected header 'template<TAB>observed_token<TAB>label'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) bad_row(name, line_no, "expected template<TAB>observed_token<TAB>label");
    try {
      MaskTemplate tmpl = MaskTemplate::parse(fields[0]);
      const std::string token = canonicalize(fields[1]);
      corpus.items.push_back({std::move(tmpl), token, parse_label(fields[2])});
    } catch (const Error& e) {
      bad_row(name, line_no, e.what());
    }
  }
  if (corpus.items.empty()) bad_row(name, line_no, "template corpus is empty");
  if (corpus.expected_errors) {
    const int recorded = recorded_error_count(corpus, lexicon);
    if (recorded != *corpus.expected_errors) {
      bad_row(name, expected_line,
              "expected-errors is " + std::to_string(*corpus.expected_errors) +
                  " but the rows record " + std::to_string(recorded));
    }
  }
  return corpus;
}

TemplateCorpus load_template_corpus(const std::filesystem::path& path,
                                    const PolarityLexicon& lexicon) {
  auto in = open(path);
  TemplateCorpus corpus = read_template_corpus(in, path.string(), lexicon);
  corpus.name = path.stem().string();
  return corpus;
}

int recorded_error_count(const TemplateCorpus& corpus, const PolarityLexicon& lexicon) {
  int errors = 0;
  for (const auto& item : corpus.items) {
    const TokenClass c = classify_token(item.observed_token, lexicon);
    if ((c == TokenClass::kNegative && item.label == Label::kFair) ||
        (c == TokenClass::kPositive && item.label == Label::kUnfair)) {
      ++errors;
    }
  }
  return errors;
}

EvalReport run_wantvec_eval(const EmbeddingBackend& backend, const LabeledCorpus& corpus,
                            const WantVecConfig& config, const SvoExtractor& extractor,
                            int jobs) {
  EvalReport report;
  report.corpus = corpus.name;
  report.model = backend.model_id();
  report.method = Method::kSWantVec;
  for (const auto& item : corpus.items) {
    report.items.push_back({item.sentence.canonical(), item.label, std::nullopt, ""});
  }
  evaluate_items(report, jobs, [&](std::size_t i) {
    report.items[i].prediction =
        score_sentence(backend, corpus.items[i].sentence, config, extractor);
  });
  return report;
}

EvalReport run_mlm_eval(const MaskBackend& backend, const std::vector<TemplateCorpus>& corpora,
                        const MlmEvalOptions& options) {
  static const PolarityLexicon kDefaultLexicon;
  const PolarityLexicon& lexicon = options.lexicon ? *options.lexicon : kDefaultLexicon;
  EvalReport report;
  report.model = backend.model_id();
  report.method = Method::kMaskedLM;
  std::vector<const TemplateItem*> items;
  for (const auto& corpus : corpora) {
    report.corpus += (report.corpus.empty() ? "" : "+") + corpus.name;
    for (const auto& item : corpus.items) {
      items.push_back(&item);
      report.items.push_back({item.mask_template.render(), item.label, std::nullopt, ""});
    }
  }
  evaluate_items(report, options.jobs, [&](std::size_t i) {
    const MaskPrediction prediction = predict_mask(backend, items[i]->mask_template);
    report.items[i].detail = prediction.top().token;
    report.items[i].prediction.emplace(interpret_top(prediction, lexicon, options.wordlist),
                                       prediction.top().probability, Method::kMaskedLM);
  });
  return report;
}

std::string format_report(const EvalReport& report, bool include_items) {
  std::ostringstream out;
  const ConfusionMatrix& m = report.matrix;
  out << "corpus: " << report.corpus << " (" << report.items.size() << " items, "
      << report.failures.size() << " failures)\n";
  out << "model: " << report.model << "  method: " << to_string(report.method) << "\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-18s %12s %14s\n", "", "actual Fair", "actual Unfair");
  out << buf;
  std::snprintf(buf, sizeof buf, "%-18s %12zu %14zu\n", "predicted Fair", m.tp_fair, m.fp_fair);
  out << buf;
  std::snprintf(buf, sizeof buf, "%-18s %12zu %14zu\n", "predicted Unfair", m.fn_fair,
                m.tn_fair);
  out << buf;
  out << "f1 (Fair positive):   " << (report.f1_fair ? fixed(*report.f1_fair) : "undefined")
      << '\n';
  out << "f1 (Unfair positive): " << (report.f1_unfair ? fixed(*report.f1_unfair) : "undefined")
      << '\n';
  if (m.total() > 0) out << "accuracy: " << fixed(m.accuracy()) << '\n';
  if (!report.failures.empty()) {
    out << "failures:\n";
    for (const auto& f : report.failures) {
      out << "  [" << f.index << "] " << to_string(f.code) << ": " << f.message << '\n';
    }
  }
  if (include_items) {
    out << "items:\n";
    for (const auto& item : report.items) {
      out << "  " << to_string(item.actual) << '\t';
      if (item.prediction) {
        out << to_string(item.prediction->label()) << '\t' << fixed(item.prediction->score());
      } else {
        out << "-\t-";
      }
      if (!item.detail.empty()) out << '\t' << item.detail;
      out << '\t' << item.text << '\n';
    }
  }
  return out.str();
}

std::string report_json(const EvalReport& report, bool include_items) {
  using nlohmann::ordered_json;
  const ConfusionMatrix& m = report.matrix;
  ordered_json j;
  j["corpus"] = report.corpus;
  j["model"] = report.model;
  j["method"] = to_string(report.method);
  j["n_items"] = report.items.size();
  j["confusion"] = {{"tp_fair", m.tp_fair},
                    {"fp_fair", m.fp_fair},
                    {"fn_fair", m.fn_fair},
                    {"tn_fair", m.tn_fair}};
  j["f1_fair"] = report.f1_fair ? ordered_json(*report.f1_fair) : ordered_json(nullptr);
  j["f1_unfair"] = report.f1_unfair ? ordered_json(*report.f1_unfair) : ordered_json(nullptr);
  j["accuracy"] = m.total() ? ordered_json(m.accuracy()) : ordered_json(nullptr);
  j["failures"] = ordered_json::array();
  for (const auto& f : report.failures) {
    j["failures"].push_back(
        {{"index", f.index}, {"text", f.text}, {"error", to_string(f.code)}, {"message", f.message}});
  }
  if (include_items) {
    j["items"] = ordered_json::array();
    for (const auto& item : report.items) {
      ordered_json row{{"text", item.text}, {"actual", to_string(item.actual)}};
      row["predicted"] =
          item.prediction ? ordered_json(to_string(item.prediction->label())) : ordered_json(nullptr);
      row["score"] = item.prediction ? ordered_json(item.prediction->score()) : ordered_json(nullptr);
      if (!item.detail.empty()) row["token"] = item.detail;
      j["items"].push_back(std::move(row));
    }
  }
  return j.dump();
}

}  // namespace grf
