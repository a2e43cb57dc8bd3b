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
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "grf/learn.hpp"
#include "json.hpp"

namespace grf {

namespace {

constexpr std::string_view kModule = "learn";
constexpr std::size_t N = kNumAxes;
using Matrix = std::array<std::array<double, N>, N>;

// Cyclic Jacobi rotations on a symmetric matrix. On return `a` is diagonal
// (the eigenvalues) and column j of `v` is the eigenvector of a[j][j].
void jacobi_eigen(Matrix& a, Matrix& v) {
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) v[i][j] = i == j ? 1.0 : 0.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      scale += a[i][i] * a[i][i];
      for (std::size_t j = i + 1; j < N; ++j) off += a[i][j] * a[i][j];
    }
    if (off <= 1e-30 * scale || off == 0.0) return;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

}  // namespace

PcaResult pca(std::span<const AxisScores> rows, int n_components) {
  if (n_components < 1 || n_components > static_cast<int>(N)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "n_components must be in [1, 4]");
  }
  if (rows.size() < std::max<std::size_t>(2, static_cast<std::size_t>(n_components))) {
    throw Error(ErrorCode::kTooFewSamples, kModule,
                "PCA with " + std::to_string(n_components) + " components needs more rows");
  }
  PcaResult out;
  out.n_components = n_components;
  const double n = static_cast<double>(rows.size());
  for (const AxisScores& r : rows) {
    for (std::size_t j = 0; j < N; ++j) {
      if (!std::isfinite(r[j])) throw Error(ErrorCode::kInvalidArgument, kModule, "non-finite feature");
      out.mean[j] += r[j];
    }
  }
  for (double& m : out.mean) m /= n;

  Matrix cov{};
  for (const AxisScores& r : rows) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        cov[i][j] += (r[i] - out.mean[i]) * (r[j] - out.mean[j]);
      }
    }
  }
  double trace = 0.0;
  double mean_sq = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) cov[i][j] /= n - 1.0;
    trace += cov[i][i];
    mean_sq += out.mean[i] * out.mean[i];
  }
  // Rounding in the mean leaves a residue of order eps^2 * mean^2 on
  // constant data.
  if (!(trace > 1e-24 * std::max(1.0, mean_sq))) {
    throw Error(ErrorCode::kDegenerateCovariance, kModule, "features have zero total variance");
  }

  Matrix vecs{};
  jacobi_eigen(cov, vecs);
  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return cov[x][x] > cov[y][y]; });
  double total = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    out.eigenvalues[c] = std::max(0.0, cov[order[c]][order[c]]);
    total += out.eigenvalues[c];
  }
  for (int c = 0; c < n_components; ++c) {
    out.explained_variance_ratios.push_back(out.eigenvalues[c] / total);
    std::array<double, N> row{};
    std::size_t heaviest = 0;
    for (std::size_t j = 0; j < N; ++j) {
      row[j] = vecs[j][order[c]];
      if (std::abs(row[j]) > std::abs(row[heaviest])) heaviest = j;
    }
    if (row[heaviest] < 0.0) {
      for (double& x : row) x = -x;
    }
    out.loadings.push_back(row);
  }
  for (const AxisScores& r : rows) {
    std::vector<double> scores;
    for (const auto& load : out.loadings) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += (r[j] - out.mean[j]) * load[j];
      scores.push_back(s);
    }
    out.transformed.push_back(std::move(scores));
  }
  return out;
}

PcaResult pca(std::span<const FeatureRow> rows, int n_components) {
  std::vector<AxisScores> features;
  features.reserve(rows.size());
  for (const FeatureRow& r : rows) features.push_back(r.features);
  return pca(std::span<const AxisScores>(features), n_components);
}

std::vector<AxisScores> inverse_transform(const PcaResult& result,
                                          const std::vector<std::vector<double>>& scores) {
  std::vector<AxisScores> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    if (s.size() != result.loadings.size()) {
      throw Error(ErrorCode::kLengthMismatch, kModule, "score row has the wrong width");
    }
    AxisScores x;
    for (std::size_t j = 0; j < N; ++j) {
      x.s[j] = result.mean[j];
      for (std::size_t c = 0; c < s.size(); ++c) x.s[j] += s[c] * result.loadings[c][j];
    }
    out.push_back(x);
  }
  return out;
}

LoadingReport loading_report(const PcaResult& result) {
  if (result.loadings.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "PCA result has no components");
  }
  LoadingReport report;
  for (std::size_t j = 0; j < N; ++j) {
    report.entries.push_back({static_cast<int>(j) + 1, result.loadings[0][j], 0});
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& x, const auto& y) {
                     return std::abs(x.loading) > std::abs(y.loading);
                   });
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    auto& e = report.entries[i];
    const bool tied = i > 0 && std::abs(report.entries[i - 1].loading) - std::abs(e.loading) <=
                                   LoadingReport::kTieTolerance;
    e.rank = tied ? report.entries[i - 1].rank : static_cast<int>(i) + 1;
  }
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    for (std::size_t k = i + 1; k < report.entries.size(); ++k) {
      if (report.entries[i].rank == report.entries[k].rank) {
        report.ties.emplace_back(report.entries[i].axis, report.entries[k].axis);
      }
    }
  }
  return report;
}

std::string format_loading_report(const LoadingReport& report) {
  std::ostringstream out;
  out << "rank  axis  keyword  loading\n";
  char buf[96];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof buf, "%-5d %-5d %-8s %+.6f\n", e.rank, e.axis,
                  std::string(axis_keyword(axis_kind_from_int(e.axis))).c_str(), e.loading);
    out << buf;
  }
  for (const auto& [a, b] : report.ties) out << "tie: axis " << a << " and axis " << b << '\n';
  return out.str();
}

std::string loading_report_json(const LoadingReport& report) {
  nlohmann::ordered_json j;
  j["component"] = 1;
  j["axes"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    j["axes"].push_back({{"axis", e.axis},
                         {"keyword", axis_keyword(axis_kind_from_int(e.axis))},
                         {"loading", e.loading},
                         {"rank", e.rank}});
  }
  j["ties"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : report.ties) j["ties"].push_back({a, b});
  return j.dump();
}

}  // namespace grf
