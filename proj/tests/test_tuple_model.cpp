// Copyright 2026 The oie-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <set>
#include <string>

#include <gtest/gtest.h>

#include "oie/tuple_model.hpp"
#include "oie/unicode.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

namespace oie {
namespace {

Group M(std::initializer_list<const char*> words) {
  TokenSeq t(words.begin(), words.end());
  return Group{t, false};
}
Group O(std::initializer_list<const char*> words) {
  TokenSeq t(words.begin(), words.end());
  return Group{t, true};
}

TEST(SlotTest, MakeSlotMergesAdjacentMandatoryRuns) {
  const auto s = make_slot({M({"a"}), M({"b"}), O({"c"}), M({"d"})});
  ASSERT_EQ(s.groups.size(), 3u);
  EXPECT_EQ(s.groups[0].tokens, (TokenSeq{"a", "b"}));
  EXPECT_EQ(s.optional_count(), 1u);
  EXPECT_EQ(s.mandatory_tokens(), (TokenSeq{"a", "b", "d"}));
  EXPECT_EQ(to_string(s), "a b [c] d");
}

TEST(SlotTest, ExpandTwoOptionalGroups) {
  const auto s = make_slot({O({"the"}), O({"a"}), M({"Prime", "Minister"})});
  const auto v = expand_slot(s);
  const std::set<TokenSeq> got(v.begin(), v.end());
  const std::set<TokenSeq> want = {{"Prime", "Minister"},
                                   {"the", "Prime", "Minister"},
                                   {"a", "Prime", "Minister"},
                                   {"the", "a", "Prime", "Minister"}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(v.size(), 4u);
}

TEST(SlotTest, ExpansionDeduplicatesIdenticalVariants) {
  // Keeping either [x] alone yields the same "x y".
  const auto s = make_slot({O({"x"}), O({"x"}), M({"y"})});
  const auto v = expand_slot(s);
  EXPECT_EQ(v.size(), 3u);  // y, x y, x x y
}

TEST(SlotTest, EmptySlotExpandsToEmptySequence) {
  const auto v = expand_slot(SlotPattern{});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(v[0].empty());
}

TEST(ValidateTest, RejectsBadSlots) {
  EXPECT_THROW(validate(SlotPattern{}, SlotKind::kArg1), ModelError);
  EXPECT_NO_THROW(validate(SlotPattern{}, SlotKind::kArg2));
  EXPECT_THROW(validate(make_slot({O({"a"})}), SlotKind::kRel), ModelError);
  EXPECT_THROW(validate(make_slot({M({"a b"})}), SlotKind::kRel), ModelError);
  EXPECT_THROW(validate(make_slot({M({"x-->y"})}), SlotKind::kRel),
               ModelError);
}

TEST(ValidateTest, OptionalGroupCap) {
  Formulation f;
  f.arg1 = make_slot({M({"a"})});
  f.rel = make_slot({M({"r"})});
  for (std::size_t i = 0; i < kMaxOptionalGroups; ++i) {
    f.arg2.groups.push_back(O({"o"}));
  }
  f.arg2.groups.push_back(M({"m"}));
  EXPECT_NO_THROW(validate(f));
  f.arg2.groups.push_back(O({"p"}));
  EXPECT_THROW(validate(f), ModelError);
}

TEST(ExpandFormulationTest, CartesianProduct) {
  Formulation f{make_slot({M({"He"})}), make_slot({M({"served", "as"})}),
                make_slot({O({"the"}), O({"a"}), M({"Prime", "Minister"})})};
  const auto v = expand_formulation(f);
  EXPECT_EQ(v.size(), 4u);
  for (const auto& t : v) EXPECT_EQ(t.arg1, (TokenSeq{"He"}));
}

TEST(ExpandFormulationTest, AgreesWithJointMaskOracle) {
  testing::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto f = testing::gen_formulation(rng, testing::uniform(rng, 0, 8));
    const auto v = expand_formulation(f);
    const std::set<Triple> distinct(v.begin(), v.end());
    EXPECT_EQ(distinct.size(), v.size()) << to_string(f);
    for (const auto& t : v) {
      EXPECT_TRUE(testing::oracle_formulation_matches(f, t)) << to_string(f);
    }
    // Every variant the oracle can produce must be in the expansion.
    for (int k = 0; k < 5; ++k) {
      const auto t = testing::random_variant(rng, f);
      EXPECT_TRUE(distinct.count(t)) << to_string(f);
    }
  }
}

TEST(LinearizeTest, ConcatenatesSlots) {
  Triple t{{"Alex"}, {"broadcasts", "Music", "on"}, {"a", "website"}};
  EXPECT_EQ(join(linearize(t)), "Alex broadcasts Music on a website");
  Formulation f{make_slot({M({"Alex"})}), make_slot({M({"broadcasts"})}),
                make_slot({O({"a"}), M({"web", "series"})})};
  EXPECT_EQ(to_string(linearize(f)), "Alex broadcasts [a] web series");
}

TEST(ToStringTest, EmptyArg2) {
  Formulation f{make_slot({M({"Carol"})}), make_slot({M({"sings"})}), {}};
  EXPECT_EQ(to_string(f), "Carol --> sings -->");
  EXPECT_EQ(to_string(Triple{{"a"}, {"b"}, {"c"}}), "a | b | c");
}

TEST(PuncTest, StripsAndLowercases) {
  const TokenSeq in = {"``", "My", "Classical", "Way", "''", "Dr.", "Über"};
  EXPECT_EQ(normalize_punc(in),
            (TokenSeq{"my", "classical", "way", "dr", "über"}));
  EXPECT_EQ(unicode::strip_punctuation_lower("`"), "");
  EXPECT_EQ(unicode::strip_punctuation_lower("«X»"), "x");
  EXPECT_EQ(unicode::strip_punctuation_lower("$5"), "5");
}

TEST(PuncTest, IdempotentOnRandomTokens) {
  testing::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::string tok = testing::gen_bytes(rng, 8);
    const auto once = unicode::strip_punctuation_lower(tok);
    EXPECT_EQ(unicode::strip_punctuation_lower(once), once);
  }
}

TEST(PuncTest, InvalidUtf8BecomesReplacementCharacter) {
  EXPECT_EQ(unicode::strip_punctuation_lower("a\xff"), "a\xef\xbf\xbd");
  EXPECT_EQ(unicode::find_invalid_utf8("ok\xc3\xa9"), std::string::npos);
  EXPECT_EQ(unicode::find_invalid_utf8("ok\xc0\xaf"), 2u);  // overlong
  EXPECT_EQ(unicode::find_invalid_utf8("\xed\xa0\x80"), 0u);  // surrogate
}

TEST(TokensTest, SplitAndJoin) {
  EXPECT_EQ(split_tokens("  a\tb  c "), (TokenSeq{"a", "b", "c"}));
  EXPECT_TRUE(split_tokens(" \t").empty());
  EXPECT_EQ(join({"a", "b"}), "a b");
}

}  // namespace
}  // namespace oie
