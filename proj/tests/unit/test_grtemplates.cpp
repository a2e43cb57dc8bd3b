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
#include "grf/grtemplates.hpp"
#include "support/support.hpp"

using namespace grf;
using grf::testing::data_path;
using grf::testing::read_tsv;

TEST_SUITE("grtemplates") {
  TEST_CASE("axis pairs follow the four sentence frames") {
    const auto v1 = synth_axis_pair("child", WantAxisKind::kRequire);
    CHECK(v1.positive.canonical() == "the child would require it");
    CHECK(v1.negative.canonical() == "the child would despise it");
    const auto v2 = synth_axis_pair("child", WantAxisKind::kHappy);
    CHECK(v2.positive.canonical() == "the child was happy by it");
    CHECK(v2.negative.canonical() == "the child was unhappy by it");
    const auto v3 = synth_axis_pair("boy", WantAxisKind::kDemand);
    CHECK(v3.positive.canonical() == "the boy would demand they did it");
    CHECK(v3.negative.canonical() == "the boy would demand they stopped it");
    const auto v4 = synth_axis_pair("girl", WantAxisKind::kWish);
    CHECK(v4.positive.canonical() == "the girl would wish it continue");
    CHECK(v4.negative.canonical() == "the girl would wish it stop");
  }

  TEST_CASE("axis fixture regenerates byte-exactly") {
    const auto rows = read_tsv(data_path("fixtures/axis_golden.tsv"));
    REQUIRE(rows.size() == 13);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto pair = synth_axis_pair(rows[i][0], axis_kind_from_int(std::stoi(rows[i][1])));
      CHECK(pair.positive.canonical() == rows[i][2]);
      CHECK(pair.negative.canonical() == rows[i][3]);
    }
  }

  TEST_CASE("axis helpers") {
    CHECK(axis_keyword(WantAxisKind::kDemand) == "demand");
    CHECK(axis_index(WantAxisKind::kRequire) == 0);
    CHECK(axis_kind_from_int(4) == WantAxisKind::kWish);
    CHECK_THROWS_AS(axis_kind_from_int(5), Error);
    CHECK_THROWS_AS(axis_kind_from_int(0), Error);
  }

  TEST_CASE("empty patient is rejected") {
    try {
      synth_axis_pair("  ", WantAxisKind::kRequire);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyNoun);
    }
  }

  TEST_CASE("past participles") {
    CHECK(past_participle("murder") == "murdered");
    CHECK(past_participle("murdered") == "murdered");
    CHECK(past_participle("beat") == "beaten");
    CHECK(past_participle("forgive") == "forgiven");
    CHECK(past_participle("understand") == "understood");
    CHECK(past_participle("steal") == "stolen");
    CHECK(past_participle("stole") == "stolen");
    CHECK(past_participle("bully") == "bullied");
    CHECK(past_participle("bloody") == "bloodied");
    CHECK(past_participle("play") == "played");
    CHECK(past_participle("slur") == "slurred");
    CHECK(past_participle("hop") == "hopped");
    CHECK(past_participle("fix") == "fixed");
    CHECK(past_participle("bake") == "baked");
    CHECK(past_participle("visit") == "visited");
    CHECK(past_participle("outgas") == "outgassed");
    CHECK(past_participle("admit") == "admitted");
    CHECK(past_participle("burn") == "burned");
    CHECK(past_participle("Hug") == "hugged");
  }

  TEST_CASE("non-alphabetic verbs are rejected") {
    try {
      past_participle("hit2");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNonAlphabeticToken);
    }
    CHECK_THROWS_AS(past_participle(""), Error);
  }

  TEST_CASE("verb phrases keep their particles") {
    CHECK(participle_phrase("listen to") == "listened to");
    CHECK(participle_phrase("brunch with") == "brunched with");
    CHECK(participle_phrase("care for") == "cared for");
    CHECK(participle_phrase("on a stroll") == "on a stroll");
  }

  TEST_CASE("lexicon files extend the built-in table") {
    VerbLexicon lex = VerbLexicon::builtin();
    std::istringstream in("# custom\nyeet\tyote\n");
    lex.load(in, "custom");
    CHECK(past_participle("yeet", lex) == "yote");
    CHECK(past_participle("yeet") == "yeeted");
    std::istringstream bad("onlyonecolumn\n");
    CHECK_THROWS_AS(lex.load(bad, "bad"), Error);
  }

  TEST_CASE("indefinite article") {
    CHECK(indefinite_article("immigrant") == "an");
    CHECK(indefinite_article("coach") == "a");
    CHECK(indefinite_article("Umpire") == "an");
  }

  TEST_CASE("standard and punitive templates") {
    CHECK(synth_standard_template("man", "murder").render() ==
          "a man would [MASK] like to be murdered");
    CHECK(synth_standard_template("immigrant", "help").render() ==
          "an immigrant would [MASK] like to be helped");
    CHECK(synth_punitive_template("murderer", "arrest").render() ==
          "a murderer would [MASK] wish to be arrested");
    const MaskTemplate t = synth_standard_template("girl", "pollute");
    CHECK(t.form() == TemplateForm::kStandard);
    CHECK(t.subject() == "girl");
    CHECK(t.verb_participle() == "polluted");
    CHECK(t.render("<mask>") == "a girl would <mask> like to be polluted");
  }

  TEST_CASE("template parsing needs exactly one mask") {
    const MaskTemplate t = MaskTemplate::parse("Paris  is the <mask> of France", "<mask>");
    CHECK(t.render() == "Paris is the [MASK] of France");
    CHECK(t.form() == TemplateForm::kCustom);
    CHECK_THROWS_AS(MaskTemplate::parse("no slot here"), Error);
    CHECK_THROWS_AS(MaskTemplate::parse("[MASK] and [MASK]"), Error);
  }

  TEST_CASE("appendix templates regenerate from agent and verb") {
    const auto rows = read_tsv(data_path("fixtures/template_golden.tsv"));
    REQUIRE(rows.size() == 201);
    int matched = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const std::string got = synth_standard_template(rows[i][0], rows[i][1]).render();
      CHECK_MESSAGE(got == rows[i][2], rows[i][0], " / ", rows[i][1]);
      matched += got == rows[i][2];
    }
    CHECK(matched == 200);
  }
}
