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


#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oie/annotation_io.hpp"
#include "oie/matcher.hpp"
#include "oie/scorer.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

namespace oie {
namespace {

std::string fixture(const std::string& name) {
  return read_file(std::string(OIE_FIXTURES_DIR) + "/" + name);
}

ScoreReport score(const GoldCorpus& gc, const ExtractionSet& xs,
                  const MatcherConfig& cfg = MatcherConfig::full()) {
  return score_corpus(match_corpus(xs, gc, cfg, 1), gc, xs);
}

TEST(ScoreCorpusTest, HandEnumeratedCorpus) {
  // s1: two duplicates credit cluster 1, one miss. s2: a raw and a
  // punctuation match both credit cluster 1. s3: one miss.
  const auto gc = parse_gold(fixture("scoring_gold.txt"));
  const auto xs = parse_extractions(fixture("scoring_extractions.tsv"), "s");
  const auto r = score(gc, xs);
  EXPECT_EQ(r.matched_extractions, 4u);
  EXPECT_EQ(r.total_extractions, 6u);
  EXPECT_EQ(r.matched_clusters, 2u);
  EXPECT_EQ(r.total_clusters, 4u);
  EXPECT_EQ(r.precision, 2.0 / 3.0);
  EXPECT_EQ(r.recall, 0.5);
  EXPECT_EQ(r.f1, 4.0 / 7.0);
  ASSERT_EQ(r.per_sentence.size(), 3u);
  EXPECT_EQ(r.per_sentence[0].matched_extractions, 2u);
  EXPECT_EQ(r.per_sentence[0].matched_clusters, 1u);
  EXPECT_EQ(r.per_sentence[2].f1(), 0.0);
}

TEST(ScoreCorpusTest, EmptyExtractionsFlagPrecision) {
  const auto gc = parse_gold(fixture("scoring_gold.txt"));
  const auto r = score(gc, ExtractionSet{"none", {}});
  EXPECT_TRUE(r.precision_undefined);
  EXPECT_FALSE(r.recall_undefined);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
}

TEST(ScoreCorpusTest, PerfectSystem) {
  testing::Rng rng(2);
  const auto gc = testing::gen_corpus(rng, 10);
  ExtractionSet xs{"oracle", {}};
  for (const auto& s : gc.sentences) {
    for (const auto& c : s.clusters) {
      const auto t = expand_formulation(c.formulations[0]).front();
      xs.extractions.push_back(Extraction{s.sent_id, t.arg1, t.rel, t.arg2, {}});
    }
  }
  // Each extraction is a variant of some cluster. Generated clusters can
  // share variants, so only precision is guaranteed to be 1 here.
  const auto r = score(gc, xs, MatcherConfig::exact_only());
  EXPECT_EQ(r.precision, 1.0);
  const auto perfect = parse_gold(fixture("scoring_gold.txt"));
  const auto xs2 = parse_extractions(
      "s1\tAlice\tfounded\tAcme\ns1\tAcme\twas founded in\t1990\n"
      "s2\tBob\tlives in\tParis\ns3\tCarol\tsings\t\n",
      "p");
  const auto p = score(perfect, xs2);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(p.recall, 1.0);
  EXPECT_EQ(p.f1, 1.0);
}

TEST(ScoreCorpusTest, OrphansCountAgainstPrecision) {
  const auto gc = parse_gold(fixture("scoring_gold.txt"));
  const auto xs =
      parse_extractions("s1\tAlice\tfounded\tAcme\nzz\ta\tb\tc\n", "s");
  const auto r = score(gc, xs);
  EXPECT_EQ(r.orphan_extractions, 1u);
  EXPECT_EQ(r.precision, 0.5);
}

TEST(ScoreCorpusTest, MisalignedDecisionsRejected) {
  const auto gc = parse_gold(fixture("scoring_gold.txt"));
  const auto xs = parse_extractions(fixture("scoring_extractions.tsv"), "s");
  auto ds = match_corpus(xs, gc, MatcherConfig::full(), 1);
  ds.pop_back();
  EXPECT_THROW(score_corpus(ds, gc, xs), ScoreError);
  ds = match_corpus(xs, gc, MatcherConfig::full(), 1);
  ds[0].matched_cluster = 9;
  EXPECT_THROW(score_corpus(ds, gc, xs), ScoreError);
}

TEST(ScoreCorpusTest, F1MatchesHarmonicMeanOnRandomCorpora) {
  testing::Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const auto gc = testing::gen_corpus(rng, 6);
    const auto xs = testing::gen_extractions(rng, gc, 5);
    const auto r = score(gc, xs);
    EXPECT_LE(r.matched_clusters, r.matched_extractions);
    const double h = r.precision + r.recall == 0
                         ? 0.0
                         : 2 * r.precision * r.recall /
                               (r.precision + r.recall);
    EXPECT_NEAR(r.f1, h, 1e-12);
  }
}

std::vector<MatchDecision> decisions_for(const std::vector<int>& predicted) {
  std::vector<MatchDecision> out;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    MatchDecision d;
    d.extraction_index = i;
    d.sent_id = "s";
    if (predicted[i]) d.matched_cluster = predicted[i];
    out.push_back(d);
  }
  return out;
}

std::vector<MatchAnnotation> labels_for(const std::vector<int>& labels) {
  std::vector<MatchAnnotation> out;
  for (int l : labels) {
    out.push_back(MatchAnnotation{Extraction{"s", {"a"}, {"b"}, {}, {}}, l});
  }
  return out;
}

TEST(EvaluateMatcherTest, ConfusionCategories) {
  const auto r = evaluate_matcher(decisions_for({1, 2, 1, 0, 0}),
                                  labels_for({1, 1, 0, 2, 0}));
  EXPECT_EQ(r.correct_match, 1u);
  EXPECT_EQ(r.wrong_cluster, 1u);
  EXPECT_EQ(r.spurious_match, 1u);
  EXPECT_EQ(r.missed_match, 1u);
  EXPECT_EQ(r.correct_none, 1u);
  EXPECT_EQ(r.precision, 1.0 / 3.0);
  EXPECT_EQ(r.recall, 1.0 / 3.0);
}

TEST(EvaluateMatcherTest, PerfectAgreement) {
  const auto r = evaluate_matcher(decisions_for({1, 0, 3}),
                                  labels_for({1, 0, 3}));
  EXPECT_EQ(r.f1, 1.0);
}

TEST(EvaluateMatcherTest, FlippingLabelsSwapsCategories) {
  testing::Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    std::vector<int> pred, lab;
    for (int k = 0; k < 20; ++k) {
      pred.push_back(static_cast<int>(testing::uniform(rng, 0, 2)));
      lab.push_back(static_cast<int>(testing::uniform(rng, 0, 2)));
    }
    const auto ds = decisions_for(pred);
    const auto a = evaluate_matcher(ds, labels_for(lab));
    // Relabel every matched extraction as none, and every none as matched
    // to whatever the matcher chose (or cluster 1).
    std::vector<int> flipped;
    for (std::size_t k = 0; k < lab.size(); ++k) {
      flipped.push_back(lab[k] ? 0 : (pred[k] ? pred[k] : 1));
    }
    const auto b = evaluate_matcher(ds, labels_for(flipped));
    EXPECT_EQ(b.spurious_match, a.correct_match + a.wrong_cluster);
    EXPECT_EQ(b.correct_none, a.missed_match);
    EXPECT_EQ(b.correct_match, a.spurious_match);
    EXPECT_EQ(b.missed_match, a.correct_none);
    EXPECT_EQ(a.total(), b.total());
  }
}

TEST(EvaluateMatcherTest, Alignment) {
  EXPECT_THROW(evaluate_matcher(decisions_for({1}), labels_for({1, 0})),
               ScoreError);
}

TEST(EvaluateMatcherTest, WorkedLabelsUnderEachConfig) {
  const auto gc = parse_gold(fixture("worked_gold.txt"));
  const auto labels =
      parse_match_annotations(fixture("worked_labels.tsv"), &gc);
  std::vector<Extraction> xs;
  for (const auto& m : labels) xs.push_back(m.extraction);
  const auto em = evaluate_matcher(
      match_corpus(xs, gc, MatcherConfig::exact_only(), 1), labels);
  const auto full = evaluate_matcher(
      match_corpus(xs, gc, MatcherConfig::full(), 1), labels);
  EXPECT_LT(em.recall, 1.0);
  EXPECT_EQ(full.recall, 1.0);
  EXPECT_EQ(full.precision, 1.0);
}

TEST(TokenLevelTest, OverlapCountsSlotwise) {
  const Triple e{{"He"}, {"served", "as"}, {"first", "Prime", "Minister"}};
  const Triple g{{"He"}, {"served", "as"}, {"Prime", "Minister"}};
  const auto o = token_overlap(e, g);
  EXPECT_EQ(o.shared, 5u);
  EXPECT_EQ(o.extraction_tokens, 6u);
  EXPECT_EQ(o.gold_tokens, 5u);
  // Same words in another slot do not count.
  EXPECT_EQ(token_overlap(Triple{{"as"}, {"He"}, {}}, g).shared, 0u);
}

TEST(TokenLevelTest, GreedyAssignmentIsOneToOne) {
  const auto gc = parse_gold(
      "sent_id:s\n1 --> He --> served as --> [the] Prime Minister\n"
      "2 --> He --> became --> [a] founding justice\n");
  const auto xs = parse_extractions(
      "s\tHe\tserved as\tPrime Minister\n"
      "s\tHe\tserved as\tthe Prime Minister\n",
      "x");
  const auto r = token_level_score(xs, gc);
  // Only one extraction may take cluster 1; the other pairs with cluster 2
  // through "He".
  EXPECT_EQ(r.matched_extractions, 2u);
  const double shared = 5 + 1;
  EXPECT_DOUBLE_EQ(r.precision, shared / (5 + 6));
  EXPECT_DOUBLE_EQ(r.recall, shared / (5 + 4));
}

TEST(AbqaTest, OnePointPerAnsweredPassage) {
  const auto answers = parse_gold(fixture("abqa_answers.txt"));
  const auto xs = parse_extractions(fixture("abqa_extractions.tsv"), "x");
  const auto passages = make_abqa_passages(answers, xs);
  EXPECT_EQ(abqa_score(passages, MatcherConfig::full()), 0.5);
  EXPECT_EQ(abqa_score({}, MatcherConfig::full()), 0.0);
}

TEST(PearsonTest, DerivedFourPointValue) {
  const std::vector<double> x = {1, 2, 3, 5};
  const std::vector<double> y = {2, 1, 4, 6};
  // 41 / sqrt(2065), from the raw-sum formula.
  EXPECT_NEAR(pearson(x, y), testing::oracle_pearson(x, y), 1e-12);
  EXPECT_NEAR(pearson(x, y), 41.0 / std::sqrt(2065.0), 1e-12);
}

TEST(PearsonTest, IdentityNegationAffine) {
  testing::Rng rng(47);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x, y, neg, affine;
    const double a = std::uniform_real_distribution<double>(0.1, 10)(rng);
    const double b = std::uniform_real_distribution<double>(-10, 10)(rng);
    for (int k = 0; k < 12; ++k) {
      x.push_back(gauss(rng));
      y.push_back(gauss(rng));
    }
    for (double v : x) {
      neg.push_back(-v);
    }
    for (double v : y) affine.push_back(a * v + b);
    EXPECT_NEAR(pearson(x, x), 1.0, 1e-12);
    EXPECT_NEAR(pearson(x, neg), -1.0, 1e-12);
    EXPECT_NEAR(pearson(x, affine), pearson(x, y), 1e-9);
    EXPECT_NEAR(pearson(x, y), pearson(y, x), 1e-12);
  }
}

TEST(PearsonTest, Errors) {
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1}),
               ScoreError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}),
               ScoreError);
  EXPECT_THROW(pearson(std::vector<double>{0.1, 0.1, 0.1},
                       std::vector<double>{1, 2, 3}),
               ScoreError);
}

TEST(CorrelateTest, DownstreamTableUsesCompleteRows) {
  const auto t = parse_score_table(fixture("downstream_scores.tsv"));
  const auto r = correlate(t, {{0, 2}});
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].n, 6u);  // the system without a KBP score is skipped
  const std::vector<double> abqa = {0.230, 0.180, 0.270, 0.170, 0.170, 0.160};
  const std::vector<double> kbp = {0.149, 0.026, 0.396, 0.064, 0.014, 0.006};
  EXPECT_NEAR(*r.pairs[0].coefficient, testing::oracle_pearson(abqa, kbp),
              1e-12);
}

TEST(CorrelateTest, DegeneratePairsCarryNotes) {
  const auto t = parse_score_table("s\ta\tb\tc\nx\t1\t5\t-\ny\t2\t5\t3\n");
  const auto r = correlate(t, {{0, 1}, {0, 2}, {0, 0}});
  EXPECT_FALSE(r.pairs[0].coefficient);
  EXPECT_EQ(r.pairs[0].note, "constant column");
  EXPECT_EQ(r.pairs[1].note, "fewer than two systems");
  EXPECT_NEAR(*r.pairs[2].coefficient, 1.0, 1e-12);
}

TEST(LengthTest, MeanTokens) {
  const auto xs = parse_extractions(fixture("length.tsv"), "reverb");
  EXPECT_EQ(xs.extractions[0].token_count(), 7u);
  EXPECT_EQ(xs.extractions[1].token_count(), 8u);
  EXPECT_EQ(extraction_length_stats(xs), 7.5);
  EXPECT_THROW(extraction_length_stats(ExtractionSet{}), ScoreError);
}

}  // namespace
}  // namespace oie
