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


#include <string>

#include <gtest/gtest.h>

#include "oie/annotation_io.hpp"
#include "support/generators.hpp"

namespace oie {
namespace {

std::string fixture(const std::string& name) {
  return read_file(std::string(OIE_FIXTURES_DIR) + "/" + name);
}

// Returns the message of the ParseError thrown by `fn`, or "" if none.
template <typename Fn>
std::string parse_error_of(Fn&& fn, std::size_t* line = nullptr) {
  try {
    fn();
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.what();
  }
  return "";
}

TEST(GoldParseTest, ReadsClustersAndOptionalGroups) {
  const auto gc = parse_gold(
      "# comment\n"
      "sent_id:s1\tHe served .\n"
      "1 --> He --> served as --> [the] [a] Prime Minister\n"
      "1 --> He --> served as [the] --> Prime Minister\n"
      "2 --> Carol --> sings -->\n");
  ASSERT_EQ(gc.sentences.size(), 1u);
  const auto& s = gc.sentences[0];
  EXPECT_EQ(s.sent_id, "s1");
  EXPECT_EQ(s.text, "He served .");
  ASSERT_EQ(s.clusters.size(), 2u);
  EXPECT_EQ(s.clusters[0].formulations.size(), 2u);
  EXPECT_EQ(s.clusters[0].formulations[0].arg2.optional_count(), 2u);
  EXPECT_TRUE(s.clusters[1].formulations[0].arg2.empty());
  EXPECT_EQ(gc.cluster_count(), 2u);
}

TEST(GoldParseTest, HeaderImplicitlyEndsSentence) {
  const auto gc = parse_gold(
      "sent_id:a\n1 --> x --> y --> z\nsent_id:b\n1 --> p --> q --> r\n");
  ASSERT_EQ(gc.sentences.size(), 2u);
  EXPECT_NE(gc.find("b"), nullptr);
  EXPECT_EQ(gc.find("c"), nullptr);
}

TEST(GoldParseTest, CrLfLineEndings) {
  const auto gc = parse_gold("sent_id:a\tt\r\n1 --> x --> y --> z\r\n");
  EXPECT_EQ(gc.sentences[0].text, "t");
  EXPECT_EQ(gc.sentences[0].clusters[0].formulations[0].arg2.groups[0].tokens,
            (TokenSeq{"z"}));
}

struct BadGold {
  const char* text;
  std::size_t line;
  const char* message;
};

class GoldErrorTest : public ::testing::TestWithParam<BadGold> {};

TEST_P(GoldErrorTest, ReportsLineAndReason) {
  std::size_t line = 0;
  const auto msg =
      parse_error_of([&] { parse_gold(GetParam().text); }, &line);
  EXPECT_NE(msg.find(GetParam().message), std::string::npos) << msg;
  EXPECT_EQ(line, GetParam().line);
}

INSTANTIATE_TEST_SUITE_P(
    Malformed, GoldErrorTest,
    ::testing::Values(
        BadGold{"sent_id:a\n1 --> x --> y\n", 2, "malformed slot separators"},
        BadGold{"sent_id:a\n1 --> x --> y --> [z\n", 2, "unbalanced '['"},
        BadGold{"sent_id:a\n1 --> x --> y --> z]\n", 2, "unbalanced ']'"},
        BadGold{"sent_id:a\n1 --> x --> y --> [[z]]\n", 2, "nested '['"},
        BadGold{"sent_id:a\n1 --> x --> y --> [] z\n", 2,
                "empty optional group"},
        BadGold{"sent_id:a\n1 --> [x] --> y --> z\n", 2,
                "no mandatory token"},
        BadGold{"sent_id:a\n2 --> x --> y --> z\n", 2,
                "non-contiguous cluster index"},
        BadGold{"sent_id:a\n1 --> x --> y --> z\n3 --> x --> y --> w\n", 3,
                "non-contiguous cluster index"},
        BadGold{"sent_id:a\n1 --> x --> y --> z\n1 --> x --> y --> z\n", 3,
                "duplicate formulation"},
        BadGold{"1 --> x --> y --> z\n", 1, "outside a sentence block"},
        BadGold{"sent_id:a\n\nsent_id:a\n", 3, "duplicate sent_id"},
        BadGold{"sent_id:\tt\n", 1, "empty sent_id"},
        BadGold{"sent_id:a\n0 --> x --> y --> z\n", 2, "bad cluster index"},
        BadGold{"sent_id:a\n1 --> x\xff --> y --> z\n", 2, "UTF-8"},
        BadGold{"sent_id:a\n1 --> x --> y --> [a] [b] [c] [d] [e] [f] [g] "
                "[h] [i] [j] [k] [l] [m] [n] [o] [p] [q] z\n",
                2, "expansion cap exceeded"}));

TEST(GoldParseTest, DiagnosticNamesFile) {
  try {
    parse_gold("sent_id:a\n1 --> x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.diagnostic("gold.txt").rfind("gold.txt:2: ", 0), 0u);
  }
}

TEST(ExtractionParseTest, FourAndFiveColumns) {
  const auto xs = parse_extractions(
      "s1\tHe\tserved as\tPM\n\ns2\tCarol\tsings\t\t0.25\n", "sys");
  ASSERT_EQ(xs.extractions.size(), 2u);
  EXPECT_EQ(xs.system_name, "sys");
  EXPECT_FALSE(xs.extractions[0].confidence);
  EXPECT_EQ(xs.extractions[0].rel, (TokenSeq{"served", "as"}));
  EXPECT_TRUE(xs.extractions[1].arg2.empty());
  EXPECT_DOUBLE_EQ(*xs.extractions[1].confidence, 0.25);
}

TEST(ExtractionParseTest, Errors) {
  EXPECT_NE(parse_error_of([] { parse_extractions("s\ta\tb\n", "x"); })
                .find("columns"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { parse_extractions("s\t\tb\tc\n", "x"); })
                .find("empty arg1"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { parse_extractions("s\ta\tb\tc\tnan\n", "x"); })
                .find("non-numeric confidence"),
            std::string::npos);
  EXPECT_NE(
      parse_error_of([] { parse_extractions("s\ta-->b\tb\tc\n", "x"); })
          .find("-->"),
      std::string::npos);
}

TEST(MatchAnnotationTest, LabelsValidatedAgainstGold) {
  const auto gold = parse_gold("sent_id:a\n1 --> x --> y --> z\n");
  const auto rows = parse_match_annotations("a\tx\ty\tz\t1\na\tq\ty\tz\t0\n",
                                            &gold);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].gold_cluster, 1);
  EXPECT_NE(parse_error_of([&] {
              parse_match_annotations("a\tx\ty\tz\t2\n", &gold);
            }).find("exceeds"),
            std::string::npos);
  EXPECT_NE(parse_error_of([&] {
              parse_match_annotations("b\tx\ty\tz\t1\n", &gold);
            }).find("unknown sent_id"),
            std::string::npos);
  EXPECT_NE(parse_error_of([&] {
              parse_match_annotations("a\tx\ty\tz\t-1\n", &gold);
            }).find("bad gold cluster"),
            std::string::npos);
}

TEST(ScoreTableTest, MissingCellsAndErrors) {
  const auto t = parse_score_table(fixture("downstream_scores.tsv"));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"ABQA", "C-QA", "KBP"}));
  ASSERT_EQ(t.rows.size(), 7u);
  EXPECT_EQ(t.rows[3], "IMojIE");
  EXPECT_FALSE(t.cells[3][1]);
  EXPECT_DOUBLE_EQ(*t.cells[2][2], 0.396);
  EXPECT_EQ(parse_score_table(serialize_score_table(t)), t);

  EXPECT_NE(parse_error_of([] { parse_score_table("s\ta\tb\nx\t1\n"); })
                .find("ragged"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { parse_score_table("s\ta\nx\tlots\n"); })
                .find("non-numeric"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { parse_score_table("s\ta\ta\n"); })
                .find("duplicate column"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { parse_score_table("s\ta\nx\t1\nx\t2\n"); })
                .find("duplicate row"),
            std::string::npos);
}

TEST(RoundTripTest, FixturesAreFixpoints) {
  for (const char* name : {"worked_gold.txt", "lint_benchie.txt",
                           "lint_fl.txt", "scoring_gold.txt",
                           "abqa_answers.txt"}) {
    const auto once = parse_gold(fixture(name));
    const auto text = serialize_gold(once);
    EXPECT_EQ(parse_gold(text), once) << name;
    EXPECT_EQ(serialize_gold(parse_gold(text)), text) << name;
  }
  for (const char* name : {"worked_extractions.tsv", "scoring_extractions.tsv",
                           "length.tsv"}) {
    const auto once = parse_extractions(fixture(name), "s");
    EXPECT_EQ(parse_extractions(serialize_extractions(once), "s"), once)
        << name;
  }
  const auto labels = parse_match_annotations(fixture("worked_labels.tsv"));
  EXPECT_EQ(parse_match_annotations(serialize_match_annotations(labels)),
            labels);
}

TEST(RoundTripTest, GeneratedCorpora) {
  testing::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto gc = testing::gen_corpus(rng, testing::uniform(rng, 0, 5));
    EXPECT_EQ(parse_gold(serialize_gold(gc)), gc);
    const auto xs = testing::gen_extractions(rng, gc, 4);
    EXPECT_EQ(parse_extractions(serialize_extractions(xs), "sys"), xs);
  }
}

TEST(FuzzTest, ParsersOnlyThrowParseError) {
  testing::Rng rng(5);
  const std::string seed_gold = fixture("worked_gold.txt");
  const std::string seed_ext = fixture("worked_labels.tsv");
  for (int i = 0; i < 3000; ++i) {
    const std::string bytes = i % 2 ? testing::gen_bytes(rng, 200)
                                    : testing::mutate(rng, seed_gold);
    const std::string rows = testing::mutate(rng, seed_ext);
    for (const auto& input : {bytes, rows}) {
      try {
        parse_gold(input);
      } catch (const ParseError&) {
      }
      try {
        parse_extractions(input, "x");
      } catch (const ParseError&) {
      }
      try {
        parse_match_annotations(input);
      } catch (const ParseError&) {
      }
      try {
        parse_score_table(input);
      } catch (const ParseError&) {
      }
    }
  }
}

TEST(IoTest, MissingFileIsIoError) {
  EXPECT_THROW(read_file("/nonexistent/gold.txt"), IoError);
}

}  // namespace
}  // namespace oie
