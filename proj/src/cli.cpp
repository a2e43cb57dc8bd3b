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

#include "grf/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grf/embedding.hpp"
#include "grf/eval.hpp"
#include "grf/grtemplates.hpp"
#include "grf/learn.hpp"
#include "grf/mlm.hpp"
#include "grf/svo.hpp"
#include "grf/wantvec.hpp"
#include "json.hpp"

#ifndef GRF_DEFAULT_DATA_DIR
#define GRF_DEFAULT_DATA_DIR "data"
#endif

namespace grf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

// Options shared by every subcommand plus the resources built from them.
class Context {
 public:
  std::string cache;
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
  std::string mask_cache;
  std::string lexicon;
  std::string wordlist;
  std::string rules;
  std::string verbs;
  double threshold = 0.0;
  bool normalize_axes = false;
  std::string format = "text";
  int jobs = 1;
  std::string data_dir = GRF_DEFAULT_DATA_DIR;

  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  bool json() const { return format == "json"; }
  void emit(const ordered_json& j) const { *out << j.dump() << '\n'; }

  fs::path data(const std::string& relative) const { return fs::path(data_dir) / relative; }

  WantVecConfig wantvec_config() const { return {threshold, normalize_axes}; }

  const VerbLexicon& verb_lexicon() {
    if (verbs.empty()) return VerbLexicon::builtin();
    if (!verbs_) {
      verbs_ = std::make_unique<VerbLexicon>(VerbLexicon::builtin());
      verbs_->load_file(verbs);
    }
    return *verbs_;
  }

  const SvoExtractor& extractor() {
    if (rules.empty() && verbs.empty()) return SvoExtractor::builtin();
    if (!extractor_) {
      extractor_ = std::make_unique<SvoExtractor>(SvoExtractor::builtin().rules(), verb_lexicon());
      if (!rules.empty()) extractor_->add_rules_file(rules);
    }
    return *extractor_;
  }

  const EmbeddingBackend& embedding_backend() {
    if (backend_) return *backend_;
    const bool seeded = seed_option != nullptr && seed_option->count() > 0;
    if (!cache.empty() && seeded) {
      throw UsageError("--cache and --synthetic-seed are mutually exclusive");
    }
    std::string path = cache;
    if (path.empty() && !seeded) {
      if (const char* env = std::getenv("GRF_CACHE"); env != nullptr && *env != '\0') path = env;
    }
    if (!path.empty()) {
      backend_ = std::make_unique<CacheBackend>(
          std::make_shared<const EmbeddingCache>(load_cache(path)));
    } else if (seeded) {
      backend_ = std::make_unique<SyntheticBackend>(seed);
    } else {
      throw UsageError("no embedding backend: pass --cache, --synthetic-seed or set GRF_CACHE");
    }
    return *backend_;
  }

  const MaskBackend& mask_backend(const std::string& fallback = "") {
    if (mask_backend_) return *mask_backend_;
    const std::string path = mask_cache.empty() ? fallback : mask_cache;
    if (path.empty()) throw UsageError("no mask backend: pass --mask-cache");
    auto loaded = std::make_shared<MaskCache>();
    loaded->load_file(path);
    mask_backend_ = std::make_unique<MaskCacheBackend>(std::move(loaded));
    return *mask_backend_;
  }

  const PolarityLexicon& polarity() {
    if (!polarity_) {
      const fs::path shipped = data("lexicon/polarity.txt");
      if (!lexicon.empty()) {
        polarity_ = PolarityLexicon::load_file(lexicon);
      } else if (fs::exists(shipped)) {
        polarity_ = PolarityLexicon::load_file(shipped);
      } else {
        polarity_.emplace();
      }
    }
    return *polarity_;
  }

  const Wordlist* words() {
    if (!words_loaded_) {
      words_loaded_ = true;
      const fs::path shipped = data("lexicon/wordlist_en.txt");
      if (!wordlist.empty()) {
        words_ = Wordlist::load_file(wordlist);
      } else if (fs::exists(shipped)) {
        words_ = Wordlist::load_file(shipped);
      }
    }
    return words_ ? &*words_ : nullptr;
  }

 private:
  std::unique_ptr<VerbLexicon> verbs_;
  std::unique_ptr<SvoExtractor> extractor_;
  std::unique_ptr<EmbeddingBackend> backend_;
  std::unique_ptr<MaskBackend> mask_backend_;
  std::optional<PolarityLexicon> polarity_;
  std::optional<Wordlist> words_;
  bool words_loaded_ = false;
};

// --- features shared by train / cv / pca / features -------------------------

struct RowSource {
  std::string features;
  std::string corpus;
};

std::vector<FeatureRow> feature_rows(Context& ctx, const RowSource& src) {
  if (!src.features.empty()) return load_features(src.features);
  const LabeledCorpus corpus =
      load_corpus(src.corpus.empty() ? ctx.data("corpus/appendix1.tsv") : fs::path(src.corpus));
  const EmbeddingBackend& backend = ctx.embedding_backend();
  const SvoExtractor& extractor = ctx.extractor();
  std::vector<FeatureRow> rows(corpus.items.size());
  parallel_for(rows.size(), ctx.jobs, [&](std::size_t i) {
    const auto& item = corpus.items[i];
    rows[i] = {axis_scores(backend, item.sentence, extractor), item.label,
               item.sentence.canonical()};
  });
  return rows;
}

void add_row_source(CLI::App* cmd, RowSource& src) {
  auto* f = cmd->add_option("--features", src.features, "feature TSV (sentence, s1..s4, label)");
  cmd->add_option("--corpus", src.corpus, "labelled corpus scored with the embedding backend")
      ->excludes(f);
}

void add_logreg_options(CLI::App* cmd, LogRegConfig& config) {
  cmd->add_option("--lr", config.learning_rate, "learning rate")->capture_default_str();
  cmd->add_option("--max-iter", config.max_iterations, "iteration cap")->capture_default_str();
  cmd->add_option("--tol", config.tolerance, "gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--l2", config.l2, "L2 strength")->capture_default_str();
  cmd->add_option("--seed", config.seed, "fold shuffling seed")->capture_default_str();
}

ordered_json matrix_json(const ConfusionMatrix& m) {
  return {{"tp_fair", m.tp_fair}, {"fp_fair", m.fp_fair}, {"fn_fair", m.fn_fair},
          {"tn_fair", m.tn_fair}};
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// --- cache helpers --------------------------------------------------------------

bool looks_like_embedding_cache(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cli", "cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = ordered_json::parse(line, nullptr, false);
    return j.is_object() && j.contains("dim");
  }
  return false;
}

// Texts a sentence corpus needs from an embedding cache: each sentence and
// the eight axis sentences of its patient.
std::set<std::string> closure(Context& ctx, const LabeledCorpus& corpus) {
  std::set<std::string> texts;
  for (const auto& item : corpus.items) {
    texts.insert(item.sentence.canonical());
    try {
      const SVOTriple t = ctx.extractor().extract(item.sentence);
      for (WantAxisKind kind : kAllAxisKinds) {
        const AxisSentencePair pair = synth_axis_pair(t.patient, kind);
        texts.insert(pair.positive.canonical());
        texts.insert(pair.negative.canonical());
      }
    } catch (const Error& e) {
      *ctx.err << "warning: " << e.what() << '\n';
    }
  }
  return texts;
}

std::vector<LabeledCorpus> corpora_or_default(Context& ctx, const std::vector<std::string>& paths) {
  std::vector<LabeledCorpus> out;
  if (paths.empty()) {
    out.push_back(load_corpus(ctx.data("corpus/appendix1.tsv")));
  } else {
    for (const auto& p : paths) out.push_back(load_corpus(p));
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;

  CLI::App app{"Golden-rule fairness scoring of agent-verb-patient sentences.", "grfair"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.add_option("--cache", ctx.cache, "embedding cache (JSONL); GRF_CACHE when unset");
  ctx.seed_option =
      app.add_option("--synthetic-seed", ctx.seed, "use the synthetic embedding backend");
  app.add_option("--mask-cache", ctx.mask_cache, "masked-LM cache (JSONL)");
  app.add_option("--lexicon", ctx.lexicon, "polarity lexicon");
  app.add_option("--wordlist", ctx.wordlist, "reference wordlist for garbled-output checks");
  app.add_option("--rules", ctx.rules, "extra SVO extraction rules");
  app.add_option("--verbs", ctx.verbs, "extra verb forms (form<TAB>participle)");
  app.add_option("--threshold", ctx.threshold, "cosine decision threshold")->capture_default_str();
  app.add_flag("--normalize-axes", ctx.normalize_axes, "unit-normalize axis vectors before summing");
  app.add_option("--format", ctx.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--jobs", ctx.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--data-dir", ctx.data_dir, "directory holding corpus/, lexicon/ and caches/")
      ->envname("GRF_DATA_DIR")
      ->capture_default_str();

  // extract
  std::vector<std::string> extract_args;
  auto* extract = app.add_subcommand("extract", "agent, verb and patient of each sentence");
  extract->add_option("sentence", extract_args)->required();
  extract->callback([&] {
    ordered_json results = ordered_json::array();
    for (const auto& raw : extract_args) {
      const SVOTriple t = ctx.extractor().extract(Sentence(raw));
      if (ctx.json()) {
        results.push_back(
            {{"sentence", raw}, {"agent", t.agent}, {"verb", t.verb}, {"patient", t.patient}});
      } else {
        out << t.agent << '\t' << t.verb << '\t' << t.patient << '\n';
      }
    }
    if (ctx.json()) ctx.emit({{"results", results}});
  });

  // synth
  std::vector<std::string> synth_words;
  int synth_axis = 0;
  std::string synth_form;
  std::string synth_agent;
  std::string synth_verb;
  auto* synth = app.add_subcommand("synth", "want-axis sentence pairs or masked templates");
  synth->add_option("patient", synth_words, "patient noun for the axis pairs");
  synth->add_option("--axis", synth_axis, "one axis (1-4); all four when 0")
      ->check(CLI::Range(0, 4));
  synth->add_option("--form", synth_form, "masked template instead of axis pairs")
      ->check(CLI::IsMember({"standard", "punitive"}));
  synth->add_option("--agent", synth_agent, "template subject (offender for punitive)");
  synth->add_option("--verb", synth_verb, "template verb (the crime for punitive)");
  synth->callback([&] {
    if (!synth_form.empty()) {
      if (synth_agent.empty() || synth_verb.empty()) {
        throw UsageError("--form needs --agent and --verb");
      }
      const MaskTemplate t =
          synth_form == "standard"
              ? synth_standard_template(synth_agent, synth_verb, ctx.verb_lexicon())
              : synth_punitive_template(synth_agent, synth_verb, ctx.verb_lexicon());
      if (ctx.json()) {
        ctx.emit({{"form", synth_form}, {"template", t.render()}});
      } else {
        out << t.render() << '\n';
      }
      return;
    }
    if (synth_words.empty()) throw UsageError("synth needs a patient noun or --form");
    const std::string patient = join(synth_words);
    ordered_json axes = ordered_json::array();
    for (WantAxisKind kind : kAllAxisKinds) {
      if (synth_axis != 0 && static_cast<int>(kind) != synth_axis) continue;
      const AxisSentencePair pair = synth_axis_pair(patient, kind);
      if (ctx.json()) {
        axes.push_back({{"axis", static_cast<int>(kind)},
                        {"keyword", axis_keyword(kind)},
                        {"positive", pair.positive.canonical()},
                        {"negative", pair.negative.canonical()}});
      } else {
        out << 'v' << static_cast<int>(kind) << '\t' << pair.positive.canonical() << '\t'
            << pair.negative.canonical() << '\n';
      }
    }
    if (ctx.json()) ctx.emit({{"patient", patient}, {"axes", axes}});
  });

  // score
  std::vector<std::string> score_args;
  auto* score = app.add_subcommand("score", "S-WantVec label and cosine of each sentence");
  score->add_option("sentence", score_args)->required();
  score->callback([&] {
    const EmbeddingBackend& backend = ctx.embedding_backend();
    ordered_json results = ordered_json::array();
    for (const auto& raw : score_args) {
      const Prediction p =
          score_sentence(backend, Sentence(raw), ctx.wantvec_config(), ctx.extractor());
      if (ctx.json()) {
        results.push_back({{"sentence", raw},
                           {"label", to_string(p.label())},
                           {"score", p.score()},
                           {"method", to_string(p.method())}});
      } else {
        out << to_string(p.label()) << '\t' << fixed(p.score()) << '\t' << raw << '\n';
      }
    }
    if (ctx.json()) ctx.emit({{"model", backend.model_id()}, {"results", results}});
  });

  // axis-scores
  std::vector<std::string> axis_args;
  auto* axis_cmd = app.add_subcommand("axis-scores", "cosine against each want axis");
  axis_cmd->add_option("sentence", axis_args)->required();
  axis_cmd->callback([&] {
    const EmbeddingBackend& backend = ctx.embedding_backend();
    ordered_json results = ordered_json::array();
    if (!ctx.json()) out << "s1\ts2\ts3\ts4\tsentence\n";
    for (const auto& raw : axis_args) {
      const AxisScores s = axis_scores(backend, Sentence(raw), ctx.extractor());
      if (ctx.json()) {
        results.push_back({{"sentence", raw}, {"scores", s.s}});
      } else {
        for (double v : s.s) out << fixed(v) << '\t';
        out << raw << '\n';
      }
    }
    if (ctx.json()) ctx.emit({{"model", backend.model_id()}, {"results", results}});
  });

  // mlm
  std::vector<std::string> mlm_args;
  std::string mlm_form = "standard";
  std::string mlm_template;
  std::vector<std::string> mlm_options;
  auto* mlm = app.add_subcommand("mlm", "golden-rule template classification");
  mlm->add_option("sentence", mlm_args);
  mlm->add_option("--form", mlm_form, "template form")
      ->check(CLI::IsMember({"standard", "punitive"}))
      ->capture_default_str();
  auto* tmpl_opt = mlm->add_option("--template", mlm_template, "a template holding one [MASK]");
  mlm->add_option("--options", mlm_options, "restrict the slot to these fillers")
      ->delimiter(',')
      ->needs(tmpl_opt);
  mlm->callback([&] {
    const MaskBackend& backend = ctx.mask_backend();
    if (!mlm_template.empty()) {
      if (!mlm_args.empty()) throw UsageError("pass either --template or sentences, not both");
      const MaskTemplate t = MaskTemplate::parse(mlm_template);
      if (!mlm_options.empty()) {
        const std::string best = constrained_fill(backend, t, mlm_options);
        if (ctx.json()) {
          ctx.emit({{"template", t.render()}, {"options", mlm_options}, {"choice", best}});
        } else {
          out << best << '\t' << t.render() << '\n';
        }
        return;
      }
      const MaskPrediction p = predict_mask(backend, t);
      const Label label = interpret_top(p, ctx.polarity(), ctx.words());
      if (ctx.json()) {
        ctx.emit({{"template", t.render()},
                  {"token", p.top().token},
                  {"probability", p.top().probability},
                  {"label", to_string(label)}});
      } else {
        out << to_string(label) << '\t' << fixed(p.top().probability) << '\t' << p.top().token
            << '\t' << t.render() << '\n';
      }
      return;
    }
    if (mlm_args.empty()) throw UsageError("mlm needs sentences or --template");
    MlmOptions options;
    options.form = mlm_form == "punitive" ? TemplateForm::kPunitive : TemplateForm::kStandard;
    options.lexicon = &ctx.polarity();
    options.wordlist = ctx.words();
    options.extractor = &ctx.extractor();
    options.verbs = &ctx.verb_lexicon();
    ordered_json results = ordered_json::array();
    for (const auto& raw : mlm_args) {
      const Sentence s(raw);
      const MaskTemplate t = template_for(s, options);
      const MaskPrediction p = predict_mask(backend, t);
      const Label label = interpret_top(p, *options.lexicon, options.wordlist);
      if (ctx.json()) {
        results.push_back({{"sentence", raw},
                           {"template", t.render()},
                           {"token", p.top().token},
                           {"probability", p.top().probability},
                           {"label", to_string(label)}});
      } else {
        out << to_string(label) << '\t' << fixed(p.top().probability) << '\t' << p.top().token
            << '\t' << t.render() << '\n';
      }
    }
    if (ctx.json()) ctx.emit({{"results", results}});
  });

  // features
  RowSource features_src;
  std::string features_out;
  auto* features = app.add_subcommand("features", "export axis-score features as TSV");
  add_row_source(features, features_src);
  features->add_option("--out", features_out, "output file (stdout when unset)");
  features->callback([&] {
    const auto rows = feature_rows(ctx, features_src);
    if (features_out.empty()) {
      write_features(rows, out);
    } else {
      std::ofstream file(features_out);
      if (!file) throw Error(ErrorCode::kIo, "cli", "cannot write " + features_out);
      write_features(rows, file);
    }
  });

  // train
  RowSource train_src;
  LogRegConfig train_config;
  std::string train_out;
  auto* train = app.add_subcommand("train", "logistic regression on axis scores");
  add_row_source(train, train_src);
  add_logreg_options(train, train_config);
  train->add_option("--out", train_out, "write the model JSON here");
  train->callback([&] {
    const auto rows = feature_rows(ctx, train_src);
    const LogRegModel model = train_logreg(rows, train_config);
    const std::string text = model_json(model);
    if (!train_out.empty()) {
      std::ofstream file(train_out);
      if (!file) throw Error(ErrorCode::kIo, "cli", "cannot write " + train_out);
      file << text << '\n';
    }
    std::size_t correct = 0;
    for (const auto& r : rows) correct += model.predict(r.features) == r.label;
    const double accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());
    if (ctx.json()) {
      auto j = ordered_json::parse(text);
      j["training_accuracy"] = accuracy;
      ctx.emit(j);
    } else {
      out << "weights:";
      for (double w : model.weights) out << ' ' << fixed(w);
      out << "\nbias: " << fixed(model.bias) << "\niterations: " << model.meta.iterations
          << (model.meta.converged ? " (converged)" : " (iteration cap)")
          << "\nfinal loss: " << fixed(model.meta.final_loss)
          << "\ntraining accuracy: " << fixed(accuracy, 4) << '\n';
    }
  });

  // cv
  RowSource cv_src;
  LogRegConfig cv_config;
  int cv_folds = 5;
  auto* cv = app.add_subcommand("cv", "stratified k-fold cross-validation");
  add_row_source(cv, cv_src);
  add_logreg_options(cv, cv_config);
  cv->add_option("--folds", cv_folds, "number of folds")->capture_default_str();
  cv->callback([&] {
    const auto rows = feature_rows(ctx, cv_src);
    const CvResult result = cross_validate(rows, cv_folds, cv_config, ctx.jobs);
    if (ctx.json()) {
      ordered_json folds = ordered_json::array();
      for (const auto& f : result.folds) {
        folds.push_back({{"train_size", f.train_size},
                         {"test_size", f.test_size},
                         {"confusion", matrix_json(f.matrix)},
                         {"f1_fair", optional_json(f.f1_fair)},
                         {"f1_unfair", optional_json(f.f1_unfair)}});
      }
      ctx.emit({{"k", result.k},
                {"folds", folds},
                {"mean_f1_fair", result.mean_f1_fair},
                {"mean_f1_unfair", result.mean_f1_unfair}});
      return;
    }
    out << "fold  test  tp  fp  fn  tn  f1_fair  f1_unfair\n";
    for (std::size_t i = 0; i < result.folds.size(); ++i) {
      const auto& f = result.folds[i];
      char buf[128];
      std::snprintf(buf, sizeof buf, "%-5zu %-5zu %-3zu %-3zu %-3zu %-3zu %-8s %s\n", i + 1,
                    f.test_size, f.matrix.tp_fair, f.matrix.fp_fair, f.matrix.fn_fair,
                    f.matrix.tn_fair, f.f1_fair ? fixed(*f.f1_fair, 4).c_str() : "-",
                    f.f1_unfair ? fixed(*f.f1_unfair, 4).c_str() : "-");
      out << buf;
    }
    out << "mean f1 (Fair positive):   " << fixed(result.mean_f1_fair, 4) << '\n'
        << "mean f1 (Unfair positive): " << fixed(result.mean_f1_unfair, 4) << '\n';
  });

  // pca
  RowSource pca_src;
  int pca_components = 2;
  auto* pca_cmd = app.add_subcommand("pca", "principal components of the axis scores");
  add_row_source(pca_cmd, pca_src);
  pca_cmd->add_option("--components", pca_components, "number of components")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  pca_cmd->callback([&] {
    const auto rows = feature_rows(ctx, pca_src);
    const PcaResult result = pca(std::span<const FeatureRow>(rows), pca_components);
    const LoadingReport report = loading_report(result);
    double total = 0.0;
    for (double r : result.explained_variance_ratios) total += r;
    if (ctx.json()) {
      ctx.emit({{"n_components", result.n_components},
                {"explained_variance_ratios", result.explained_variance_ratios},
                {"total_explained", total},
                {"loadings", result.loadings},
                {"loading_report", ordered_json::parse(loading_report_json(report))}});
      return;
    }
    out << "explained variance ratios:";
    for (double r : result.explained_variance_ratios) out << ' ' << fixed(r, 4);
    out << "\ntotal explained: " << fixed(total, 4) << "\nloadings (s1 s2 s3 s4):\n";
    for (std::size_t c = 0; c < result.loadings.size(); ++c) {
      out << "  pc" << c + 1 << ':';
      for (double l : result.loadings[c]) out << ' ' << fixed(l, 4);
      out << '\n';
    }
    out << format_loading_report(report);
  });

  // eval-table2
  std::string t2_corpus;
  bool t2_items = false;
  auto* t2 = app.add_subcommand("eval-table2", "S-WantVec over the labelled sentence corpus");
  t2->add_option("--corpus", t2_corpus, "sentence corpus (appendix1.tsv when unset)");
  t2->add_flag("--items", t2_items, "list every item");
  t2->callback([&] {
    const LabeledCorpus corpus =
        load_corpus(t2_corpus.empty() ? ctx.data("corpus/appendix1.tsv") : fs::path(t2_corpus));
    const EvalReport report = run_wantvec_eval(ctx.embedding_backend(), corpus,
                                               ctx.wantvec_config(), ctx.extractor(), ctx.jobs);
    if (ctx.json()) {
      out << report_json(report, t2_items) << '\n';
    } else {
      out << format_report(report, t2_items);
    }
  });

  // eval-table3
  std::vector<std::string> t3_corpora;
  bool t3_items = false;
  auto* t3 = app.add_subcommand("eval-table3", "golden-rule templates through the mask cache");
  t3->add_option("--corpus", t3_corpora, "template corpora (appendix2.tsv, appendix3.tsv)");
  t3->add_flag("--items", t3_items, "list every item");
  t3->callback([&] {
    std::vector<TemplateCorpus> corpora;
    if (t3_corpora.empty()) {
      t3_corpora = {ctx.data("corpus/appendix2.tsv").string(),
                    ctx.data("corpus/appendix3.tsv").string()};
    }
    for (const auto& p : t3_corpora) corpora.push_back(load_template_corpus(p, ctx.polarity()));
    const MaskBackend& backend =
        ctx.mask_backend(ctx.data("caches/appendix_masks.jsonl").string());
    MlmEvalOptions options;
    options.lexicon = &ctx.polarity();
    options.wordlist = ctx.words();
    options.jobs = ctx.jobs;
    const EvalReport report = run_mlm_eval(backend, corpora, options);
    if (ctx.json()) {
      auto j = ordered_json::parse(report_json(report, t3_items));
      j["corpora"] = ordered_json::array();
      for (const auto& c : corpora) {
        j["corpora"].push_back(
            {{"name", c.name},
             {"recorded_errors", recorded_error_count(c, ctx.polarity())},
             {"reported_errors",
              c.reported_errors ? ordered_json(*c.reported_errors) : ordered_json(nullptr)}});
      }
      ctx.emit(j);
      return;
    }
    out << format_report(report, t3_items);
    for (const auto& c : corpora) {
      out << c.name << ": " << recorded_error_count(c, ctx.polarity()) << " recorded errors";
      if (c.reported_errors) out << " (source reports " << *c.reported_errors << ')';
      out << '\n';
    }
  });

  // cache
  auto* cache_cmd = app.add_subcommand("cache", "inspect and validate cache files");
  cache_cmd->require_subcommand(1);

  std::string inspect_path;
  auto* inspect = cache_cmd->add_subcommand("inspect", "summary of a cache file");
  inspect->add_option("path", inspect_path)->required()->check(CLI::ExistingFile);
  inspect->callback([&] {
    if (looks_like_embedding_cache(inspect_path)) {
      const EmbeddingCache c = load_cache(inspect_path);
      if (ctx.json()) {
        ctx.emit({{"kind", "embedding"},
                  {"model", c.model_id()},
                  {"dim", c.dim()},
                  {"entries", c.size()},
                  {"provenance", c.provenance()}});
      } else {
        out << "kind: embedding\nmodel: " << c.model_id() << "\ndim: " << c.dim()
            << "\nentries: " << c.size() << '\n';
        if (!c.provenance().empty()) out << "provenance: " << c.provenance() << '\n';
      }
      return;
    }
    MaskCache c;
    c.load_file(inspect_path);
    std::set<std::string> models;
    for (const auto& [t, e] : c.predictions()) models.insert(e.model);
    if (ctx.json()) {
      ctx.emit({{"kind", "mask"},
                {"predictions", c.predictions().size()},
                {"option_scores", c.option_scores().size()},
                {"models", models}});
    } else {
      out << "kind: mask\npredictions: " << c.predictions().size()
          << "\noption scores: " << c.option_scores().size() << "\nmodels:";
      for (const auto& m : models) out << ' ' << (m.empty() ? "-" : m);
      out << '\n';
    }
  });

  std::string validate_path;
  std::vector<std::string> validate_corpora;
  auto* validate = cache_cmd->add_subcommand(
      "validate", "parse a cache; with --corpus also check it covers the corpus");
  validate->add_option("path", validate_path)->required()->check(CLI::ExistingFile);
  validate->add_option("--corpus", validate_corpora, "corpora the cache must cover");
  bool validate_ok = true;
  validate->callback([&] {
    std::vector<std::string> missing;
    std::string kind;
    std::size_t entries = 0;
    if (looks_like_embedding_cache(validate_path)) {
      kind = "embedding";
      const EmbeddingCache c = load_cache(validate_path);
      entries = c.size();
      if (!validate_corpora.empty()) {
        for (const auto& corpus : corpora_or_default(ctx, validate_corpora)) {
          for (const auto& t : closure(ctx, corpus)) {
            if (!c.contains(t)) missing.push_back(t);
          }
        }
      }
    } else {
      kind = "mask";
      MaskCache c;
      c.load_file(validate_path);
      entries = c.predictions().size() + c.option_scores().size();
      for (const auto& p : validate_corpora) {
        for (const auto& item : load_template_corpus(p, ctx.polarity()).items) {
          const std::string t = item.mask_template.render();
          if (c.find(t) == nullptr) missing.push_back(t);
        }
      }
    }
    validate_ok = missing.empty();
    if (ctx.json()) {
      ctx.emit({{"path", validate_path},
                {"kind", kind},
                {"entries", entries},
                {"valid", validate_ok},
                {"missing", missing}});
    } else {
      out << validate_path << ": " << kind << " cache, " << entries << " entries, "
          << (validate_ok ? "valid" : "incomplete") << '\n';
      for (const auto& m : missing) out << "missing: " << m << '\n';
    }
  });

  std::vector<std::string> closure_corpora;
  auto* closure_cmd = cache_cmd->add_subcommand(
      "closure", "every text an embedding cache needs for the given corpora");
  closure_cmd->add_option("--corpus", closure_corpora, "sentence corpora (appendix1.tsv)");
  closure_cmd->callback([&] {
    std::set<std::string> texts;
    for (const auto& corpus : corpora_or_default(ctx, closure_corpora)) {
      texts.merge(closure(ctx, corpus));
    }
    for (const auto& t : texts) out << t << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return validate_ok ? kExitOk : kExitData;
}

}  // namespace grf::cli
