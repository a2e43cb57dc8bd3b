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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "grf/learn.hpp"
#include "json.hpp"

namespace grf {

namespace {

constexpr std::string_view kModule = "learn";

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double target(Label label) { return label == Label::kFair ? 1.0 : 0.0; }

double logit(const std::array<double, kNumAxes>& w, double b, const AxisScores& x) {
  double z = b;
  for (std::size_t j = 0; j < kNumAxes; ++j) z += w[j] * x[j];
  return z;
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

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

}  // namespace

void check_finite(const FeatureRow& row) {
  for (double v : row.features.s) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, kModule,
                  "non-finite feature for '" + row.sentence + "'");
    }
  }
}

double LogRegModel::probability_fair(const AxisScores& x) const {
  return sigmoid(logit(weights, bias, x));
}

Label LogRegModel::predict(const AxisScores& x) const {
  return probability_fair(x) >= 0.5 ? Label::kFair : Label::kUnfair;
}

double LossGradient::norm() const {
  double sq = grad_bias * grad_bias;
  for (double g : grad_weights) sq += g * g;
  return std::sqrt(sq);
}

LossGradient loss_and_gradient(std::span<const FeatureRow> rows,
                               const std::array<double, kNumAxes>& weights, double bias,
                               double l2) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, kModule, "no rows");
  LossGradient out;
  for (const FeatureRow& row : rows) {
    const double z = logit(weights, bias, row.features);
    const double y = target(row.label);
    out.loss += softplus(z) - y * z;
    const double residual = sigmoid(z) - y;
    for (std::size_t j = 0; j < kNumAxes; ++j) out.grad_weights[j] += residual * row.features[j];
    out.grad_bias += residual;
  }
  const double n = static_cast<double>(rows.size());
  out.loss /= n;
  out.grad_bias /= n;
  for (std::size_t j = 0; j < kNumAxes; ++j) {
    out.grad_weights[j] = out.grad_weights[j] / n + l2 * weights[j];
    out.loss += 0.5 * l2 * weights[j] * weights[j];
  }
  return out;
}

LogRegModel train_logreg(std::span<const FeatureRow> rows, const LogRegConfig& config) {
  if (config.learning_rate <= 0.0 || config.max_iterations < 0 || config.tolerance < 0.0 ||
      config.l2 < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "invalid training configuration");
  }
  bool has_fair = false;
  bool has_unfair = false;
  for (const FeatureRow& row : rows) {
    check_finite(row);
    (row.label == Label::kFair ? has_fair : has_unfair) = true;
  }
  if (rows.size() < 2 || !has_fair || !has_unfair) {
    throw Error(ErrorCode::kSingleClassData, kModule,
                "training needs at least two rows covering both classes");
  }

  LogRegModel model;
  model.meta.seed = config.seed;
  LossGradient lg = loss_and_gradient(rows, model.weights, model.bias, config.l2);
  int it = 0;
  for (; it < config.max_iterations && lg.norm() > config.tolerance; ++it) {
    for (std::size_t j = 0; j < kNumAxes; ++j) {
      model.weights[j] -= config.learning_rate * lg.grad_weights[j];
    }
    model.bias -= config.learning_rate * lg.grad_bias;
    lg = loss_and_gradient(rows, model.weights, model.bias, config.l2);
  }
  model.meta.iterations = it;
  model.meta.final_loss = lg.loss;
  model.meta.converged = lg.norm() <= config.tolerance;
  return model;
}

std::vector<int> stratified_folds(std::span<const Label> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, kModule, "k must be at least 2");
  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), -1);
  std::size_t dealt = 0;
  for (Label cls : {Label::kFair, Label::kUnfair}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    // Fisher-Yates with an explicit draw so the order is the same on every
    // standard library.
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng() % i]);
    }
    for (std::size_t index : members) fold[index] = static_cast<int>(dealt++ % k);
  }
  return fold;
}

CvResult cross_validate(std::span<const FeatureRow> rows, int k, const LogRegConfig& config,
                        int jobs) {
  std::size_t fair = 0;
  for (const FeatureRow& row : rows) fair += row.label == Label::kFair;
  const std::size_t unfair = rows.size() - fair;
  if (k < 2 || fair < static_cast<std::size_t>(k) || unfair < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewSamples, kModule,
                std::to_string(k) + "-fold cross-validation needs at least " +
                    std::to_string(k) + " rows per class (have " + std::to_string(fair) +
                    " fair, " + std::to_string(unfair) + " unfair)");
  }
  std::vector<Label> labels;
  labels.reserve(rows.size());
  for (const FeatureRow& row : rows) labels.push_back(row.label);
  const std::vector<int> fold = stratified_folds(labels, k, config.seed);

  CvResult result;
  result.k = k;
  result.folds.resize(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), jobs, [&](std::size_t f) {
    std::vector<FeatureRow> train;
    std::vector<std::optional<Label>> predicted;
    std::vector<Label> actual;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (fold[i] == static_cast<int>(f)) {
        held_out.push_back(i);
      } else {
        train.push_back(rows[i]);
      }
    }
    const LogRegModel model = train_logreg(train, config);
    for (std::size_t i : held_out) {
      predicted.push_back(model.predict(rows[i].features));
      actual.push_back(rows[i].label);
    }
    FoldResult& out = result.folds[f];
    out.matrix = confusion(predicted, actual);
    out.train_size = train.size();
    out.test_size = held_out.size();
    try {
      out.f1_fair = f1(out.matrix, Label::kFair);
    } catch (const Error&) {
    }
    try {
      out.f1_unfair = f1(out.matrix, Label::kUnfair);
    } catch (const Error&) {
    }
  });

  double sum_fair = 0.0;
  double sum_unfair = 0.0;
  int n_fair = 0;
  int n_unfair = 0;
  for (const FoldResult& f : result.folds) {
    if (f.f1_fair) sum_fair += *f.f1_fair, ++n_fair;
    if (f.f1_unfair) sum_unfair += *f.f1_unfair, ++n_unfair;
  }
  result.mean_f1_fair = n_fair ? sum_fair / n_fair : 0.0;
  result.mean_f1_unfair = n_unfair ? sum_unfair / n_unfair : 0.0;
  return result;
}

std::vector<FeatureRow> read_features(std::istream& in, std::string_view source_name) {
  std::vector<FeatureRow> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (!header_seen) {
      if (line != "sentence\ts1\ts2\ts3\ts4\tlabel") {
        bad_row(source_name, line_no, "expected header 'sentence s1 s2 s3 s4 label'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 6) bad_row(source_name, line_no, "expected 6 tab-separated fields");
    FeatureRow row;
    row.sentence = fields[0];
    for (std::size_t j = 0; j < kNumAxes; ++j) {
      const std::string& f = fields[j + 1];
      double v = 0.0;
      const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
      if (r.ec != std::errc() || r.ptr != f.data() + f.size() || !std::isfinite(v)) {
        bad_row(source_name, line_no, "bad feature value '" + f + "'");
      }
      row.features.s[j] = v;
    }
    try {
      row.label = parse_label(fields[5]);
    } catch (const Error&) {
      bad_row(source_name, line_no, "bad label '" + fields[5] + "'");
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) bad_row(source_name, line_no, "missing header");
  return rows;
}

std::vector<FeatureRow> load_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kModule, "cannot open " + path.string());
  return read_features(in, path.string());
}

void write_features(std::span<const FeatureRow> rows, std::ostream& out) {
  out << "sentence\ts1\ts2\ts3\ts4\tlabel\n";
  for (const FeatureRow& row : rows) {
    out << row.sentence;
    for (double v : row.features.s) out << '\t' << shortest(v);
    out << '\t' << to_string(row.label) << '\n';
  }
}

std::string model_json(const LogRegModel& model) {
  nlohmann::ordered_json j;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["meta"] = {{"iterations", model.meta.iterations},
               {"final_loss", model.meta.final_loss},
               {"seed", model.meta.seed},
               {"converged", model.meta.converged}};
  return j.dump();
}

LogRegModel parse_model_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    LogRegModel model;
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != kNumAxes) {
      throw Error(ErrorCode::kMalformedRecord, kModule, "model needs exactly 4 weights");
    }
    std::copy(w.begin(), w.end(), model.weights.begin());
    model.bias = j.at("bias").get<double>();
    const auto& meta = j.at("meta");
    model.meta.iterations = meta.at("iterations").get<int>();
    model.meta.final_loss = meta.at("final_loss").get<double>();
    model.meta.seed = meta.at("seed").get<std::uint64_t>();
    model.meta.converged = meta.value("converged", false);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, kModule, std::string("bad model JSON: ") + e.what());
  }
}

}  // namespace grf
