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

// Test support: fixture reading, the independent synthetic-embedding
// oracle, and the property checks shared by the unit and acceptance
// binaries.

#ifndef GRF_TESTS_SUPPORT_HPP_
#define GRF_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace grf::testing {

std::filesystem::path data_path(const std::string& relative);

// Rows of a tab-separated file, '#' comment lines dropped, header
// included as row 0.
std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path);

// Synthetic-backend scoring written from the algorithm description alone:
// no library code is called.
struct OracleScore {
  std::string sentence;
  double score = 0.0;
  bool fair = false;
};
std::vector<double> oracle_embed(const std::string& text, unsigned long long seed,
                                 std::size_t dim);
// One score per gold-fixture row, using the gold patient.
std::vector<OracleScore> oracle_appendix1(unsigned long long seed);

struct PropertyResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

PropertyResult check_cosine_properties(int pairs = 1000);
PropertyResult check_swantvec_linearity();
PropertyResult check_label_flip();
PropertyResult check_gradient(int instances = 100);
PropertyResult check_pca_full_rank(int datasets = 20);
PropertyResult check_fold_balance(int trials = 200);

std::vector<PropertyResult> run_all_properties();

}  // namespace grf::testing

#endif  // GRF_TESTS_SUPPORT_HPP_
