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

// eval.hpp - labelled corpora and the evaluation harnesses that turn a
// backend's per-item decisions into a confusion matrix.

#ifndef GRF_EVAL_HPP_
#define GRF_EVAL_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grf/core.hpp"
#include "grf/embedding.hpp"
#include "grf/metrics.hpp"
#include "grf/mlm.hpp"
#include "grf/svo.hpp"
#include "grf/wantvec.hpp"

namespace grf {

struct LabeledItem {
  Sentence sentence;
  Label label;
};

struct LabeledCorpus {
  std::string name;
  std::vector<LabeledItem> items;
};

// Tab-separated "sentence<TAB>label" with a header row; '#' lines are
// comments. Throws kMalformedRow (with the line number), kDuplicateSentence,
// or kMalformedRow when the corpus is empty or holds a single class.
LabeledCorpus read_corpus(std::istream& in, std::string_view name);
LabeledCorpus load_corpus(const std::filesystem::path& path);

struct TemplateItem {
  MaskTemplate mask_template;
  std::string observed_token;  // filler recorded alongside the template
  Label label;
};

// "template<TAB>observed_token<TAB>label". Two directives may precede the
// header:
//   # expected-errors: N   rows whose recorded token contradicts the label
//                          must number exactly N, else kMalformedRow
//   # reported-errors: N   the count claimed at the source; kept for
//                          reporting, never enforced
// Templates may repeat: a random generator can draw the same row twice.
struct TemplateCorpus {
  std::string name;
  std::vector<TemplateItem> items;
  std::optional<int> expected_errors;
  std::optional<int> reported_errors;
};

TemplateCorpus read_template_corpus(std::istream& in, std::string_view name,
                                    const PolarityLexicon& lexicon = {});
TemplateCorpus load_template_corpus(const std::filesystem::path& path,
                                    const PolarityLexicon& lexicon = {});

// Rows whose recorded token maps to the opposite label.
int recorded_error_count(const TemplateCorpus& corpus, const PolarityLexicon& lexicon = {});

struct ItemFailure {
  std::size_t index = 0;
  std::string text;
  ErrorCode code = ErrorCode::kInvalidArgument;
  std::string message;
};

struct ItemResult {
  std::string text;
  Label actual = Label::kFair;
  std::optional<Prediction> prediction;
  std::string detail;  // top token for MLM runs
};

struct EvalReport {
  std::string corpus;
  std::string model;
  Method method = Method::kSWantVec;
  std::vector<ItemResult> items;
  std::vector<ItemFailure> failures;
  ConfusionMatrix matrix;
  std::optional<double> f1_fair;
  std::optional<double> f1_unfair;
};

EvalReport run_wantvec_eval(const EmbeddingBackend& backend, const LabeledCorpus& corpus,
                            const WantVecConfig& config = {},
                            const SvoExtractor& extractor = SvoExtractor::builtin(),
                            int jobs = 1);

struct MlmEvalOptions {
  const PolarityLexicon* lexicon = nullptr;
  const Wordlist* wordlist = nullptr;
  int jobs = 1;
};

// Items of several corpora are evaluated as one list, in order.
EvalReport run_mlm_eval(const MaskBackend& backend, const std::vector<TemplateCorpus>& corpora,
                        const MlmEvalOptions& options = {});

std::string format_report(const EvalReport& report, bool include_items = false);
std::string report_json(const EvalReport& report, bool include_items = false);

}  // namespace grf

#endif  // GRF_EVAL_HPP_
