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

#include <sstream>

#include "doctest.h"
#include "grf/svo.hpp"
#include "support/support.hpp"

using namespace grf;
using grf::testing::data_path;
using grf::testing::read_tsv;

namespace {
SVOTriple x(const char* s) { return extract_svo(Sentence(s)); }
}  // namespace

TEST_SUITE("svo") {
  TEST_CASE("simple transitive sentences") {
    CHECK(x("Jane bullied Paul") == SVOTriple{"Jane", "bullied", "Paul"});
    CHECK(x("the man murdered the child") == SVOTriple{"man", "murdered", "child"});
    CHECK(x("The boy abused his sister") == SVOTriple{"boy", "abused", "sister"});
    CHECK(x("The man hurt the child") == SVOTriple{"man", "hurt", "child"});
    CHECK(x("  The baby   loved the mother ") == SVOTriple{"baby", "loved", "mother"});
  }

  TEST_CASE("prepositional objects") {
    CHECK(x("The cat sat on the mat") == SVOTriple{"cat", "sat", "mat"});
  }

  TEST_CASE("no transitive pattern") {
    try {
      x("Hello there");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoTransitivePattern);
    }
    CHECK_THROWS_AS(x("The the the"), Error);
  }

  TEST_CASE("subject of a synthesized axis sentence") {
    CHECK(SvoExtractor::builtin().extract_subject(Sentence("the child would wish it stop")) ==
          "child");
    CHECK(SvoExtractor::builtin().extract_subject(Sentence("the black man was happy by it")) ==
          "black man");
  }

  TEST_CASE("rule grammar") {
    const ExtractionRule r = parse_rule("15 DET? AGENT =really VERB DET|POSS? PATIENT+");
    CHECK(r.priority == 15);
    REQUIRE(r.pattern.size() == 6);
    CHECK(r.pattern[0].quantifier == Quantifier::kOptional);
    CHECK(r.pattern[2].alternatives[0].role == TokenRole::kLiteral);
    CHECK(r.pattern[2].alternatives[0].literal == "really");
    CHECK(r.pattern[4].alternatives.size() == 2);
    CHECK(r.pattern[5].quantifier == Quantifier::kOneOrMore);
    CHECK_THROWS_AS(parse_rule("DET AGENT VERB PATIENT"), Error);
    CHECK_THROWS_AS(parse_rule("10 DET AGENT PATIENT"), Error);
    CHECK_THROWS_AS(parse_rule("10 AGENT FOO PATIENT"), Error);
  }

  TEST_CASE("extra rules extend the table") {
    SvoExtractor extractor;
    CHECK_THROWS_AS(extractor.extract(Sentence("the boy would never abuse his sister")), Error);
    std::istringstream rules("# modal negation\n5 DET? AGENT+ =would =never VERB DET|POSS? PATIENT+\n");
    extractor.add_rules(rules, "extra");
    CHECK(extractor.extract(Sentence("the boy would never abuse his sister")) ==
          SVOTriple{"boy", "abuse", "sister"});
    CHECK(extractor.rules().front().priority == 5);
    CHECK_THROWS_AS(extractor.add_rules_file("/nonexistent/extra.rules"), Error);
  }

  TEST_CASE("gold fixture agreement") {
    const auto gold = read_tsv(data_path("fixtures/svo_gold.tsv"));
    REQUIRE(gold.size() == 201);
    int agree = 0;
    for (std::size_t i = 1; i < gold.size(); ++i) {
      const SVOTriple want{gold[i][1], gold[i][2], gold[i][3]};
      const SVOTriple got = x(gold[i][0].c_str());
      CHECK_MESSAGE(got == want, gold[i][0]);
      agree += got == want;
      CHECK(x(gold[i][0].c_str()) == got);
    }
    CHECK(agree >= 190);
  }
}
