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

// Scoring: corpus precision/recall/F1 from match decisions, evaluation of a
// matcher against human match labels, a token-overlap baseline, answer-based
// QA scoring, Pearson correlation and extraction length statistics.

#ifndef OIE_SCORER_HPP_
#define OIE_SCORER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oie/annotation_io.hpp"
#include "oie/matcher.hpp"
#include "oie/tuple_model.hpp"

namespace oie {

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Harmonic mean of num_p/den_p and num_r/den_r, computed from the counts in a
// single division: 2 np nr / (np dr + nr dp).
inline double f1_from_counts(std::size_t num_p, std::size_t den_p,
                             std::size_t num_r, std::size_t den_r) {
  if (den_p == 0 || den_r == 0) return 0.0;
  const double num = 2.0 * static_cast<double>(num_p) *
                     static_cast<double>(num_r);
  const double den = static_cast<double>(num_p) * static_cast<double>(den_r) +
                     static_cast<double>(num_r) * static_cast<double>(den_p);
  return den == 0.0 ? 0.0 : num / den;
}

inline double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct SentenceScore {
  std::string sent_id;
  std::size_t matched_extractions = 0;
  std::size_t total_extractions = 0;
  std::size_t matched_clusters = 0;
  std::size_t total_clusters = 0;

  double precision() const {
    return ratio(matched_extractions, total_extractions);
  }
  double recall() const { return ratio(matched_clusters, total_clusters); }
  double f1() const {
    return f1_from_counts(matched_extractions, total_extractions,
                          matched_clusters, total_clusters);
  }

  friend bool operator==(const SentenceScore&, const SentenceScore&) = default;
};

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the corresponding denominator is zero; the value is then 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  std::size_t matched_extractions = 0;
  std::size_t total_extractions = 0;
  std::size_t matched_clusters = 0;
  std::size_t total_clusters = 0;
  // Extractions whose sentence is missing from the gold corpus.
  std::size_t orphan_extractions = 0;
  std::vector<SentenceScore> per_sentence;

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

inline void finalize(ScoreReport& r) {
  r.precision_undefined = r.total_extractions == 0;
  r.recall_undefined = r.total_clusters == 0;
  r.precision = ratio(r.matched_extractions, r.total_extractions);
  r.recall = ratio(r.matched_clusters, r.total_clusters);
  r.f1 = f1_from_counts(r.matched_extractions, r.total_extractions,
                        r.matched_clusters, r.total_clusters);
}

// Micro-averaged scores. Precision counts extractions credited to any
// cluster; recall counts distinct (sentence, cluster) pairs credited at least
// once. Decisions must be in extraction order.
inline ScoreReport score_corpus(std::span<const MatchDecision> decisions,
                                const GoldCorpus& gc,
                                std::span<const Extraction> xs) {
  if (decisions.size() != xs.size()) {
    throw ScoreError("decision count " + std::to_string(decisions.size()) +
                     " does not match extraction count " +
                     std::to_string(xs.size()));
  }
  ScoreReport r;
  std::unordered_map<std::string_view, std::size_t> row_of;
  r.per_sentence.reserve(gc.sentences.size());
  for (const auto& s : gc.sentences) {
    row_of.emplace(s.sent_id, r.per_sentence.size());
    r.per_sentence.push_back(SentenceScore{s.sent_id, 0, 0, 0, s.clusters.size()});
    r.total_clusters += s.clusters.size();
  }
  std::set<std::pair<std::size_t, int>> credited;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& d = decisions[i];
    if (d.sent_id != xs[i].sent_id || d.extraction_index != i) {
      throw ScoreError("decision " + std::to_string(i) +
                       " is not aligned with its extraction");
    }
    ++r.total_extractions;
    auto it = row_of.find(xs[i].sent_id);
    if (it == row_of.end()) {
      ++r.orphan_extractions;
      continue;
    }
    auto& row = r.per_sentence[it->second];
    ++row.total_extractions;
    if (!d.matched_cluster) continue;
    if (*d.matched_cluster < 1 ||
        static_cast<std::size_t>(*d.matched_cluster) > row.total_clusters) {
      throw ScoreError("decision " + std::to_string(i) +
                       " credits a cluster outside its sentence");
    }
    ++row.matched_extractions;
    ++r.matched_extractions;
    if (credited.emplace(it->second, *d.matched_cluster).second) {
      ++row.matched_clusters;
      ++r.matched_clusters;
    }
  }
  finalize(r);
  return r;
}

inline ScoreReport score_corpus(std::span<const MatchDecision> decisions,
                                const GoldCorpus& gc, const ExtractionSet& xs) {
  return score_corpus(decisions, gc, std::span<const Extraction>(xs.extractions));
}

// Confusion counts of matcher decisions against human labels.
struct MatchEvalReport {
  std::size_t correct_match = 0;
  std::size_t wrong_cluster = 0;
  std::size_t spurious_match = 0;
  std::size_t missed_match = 0;
  std::size_t correct_none = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  std::size_t total() const {
    return correct_match + wrong_cluster + spurious_match + missed_match +
           correct_none;
  }

  friend bool operator==(const MatchEvalReport&,
                         const MatchEvalReport&) = default;
};

// A wrong-cluster decision counts against both precision and recall.
inline MatchEvalReport evaluate_matcher(
    std::span<const MatchDecision> decisions,
    std::span<const MatchAnnotation> gold) {
  if (decisions.size() != gold.size()) {
    throw ScoreError("alignment failure: " + std::to_string(decisions.size()) +
                     " decisions for " + std::to_string(gold.size()) +
                     " match annotations");
  }
  MatchEvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& d = decisions[i];
    if (d.extraction_index != i || d.sent_id != gold[i].extraction.sent_id) {
      throw ScoreError("alignment failure at annotation " +
                       std::to_string(i + 1));
    }
    const int label = gold[i].gold_cluster;
    if (label == 0) {
      d.matched_cluster ? ++r.spurious_match : ++r.correct_none;
    } else if (!d.matched_cluster) {
      ++r.missed_match;
    } else if (*d.matched_cluster == label) {
      ++r.correct_match;
    } else {
      ++r.wrong_cluster;
    }
  }
  const std::size_t predicted = r.correct_match + r.wrong_cluster +
                                r.spurious_match;
  const std::size_t positives = r.correct_match + r.wrong_cluster +
                                r.missed_match;
  r.precision = ratio(r.correct_match, predicted);
  r.recall = ratio(r.correct_match, positives);
  r.f1 = f1_from_counts(r.correct_match, predicted, r.correct_match, positives);
  return r;
}

// Token overlap between an extraction and a reference triple, counted slot by
// slot as multiset intersections.
struct TokenOverlap {
  std::size_t shared = 0;
  std::size_t extraction_tokens = 0;
  std::size_t gold_tokens = 0;

  double precision() const { return ratio(shared, extraction_tokens); }
  double recall() const { return ratio(shared, gold_tokens); }
  double f1() const {
    return f1_from_counts(shared, extraction_tokens, shared, gold_tokens);
  }
};

inline TokenOverlap token_overlap(const Triple& extraction, const Triple& gold) {
  auto shared = [](const TokenSeq& x, const TokenSeq& y) {
    std::map<std::string_view, std::size_t> counts;
    for (const auto& t : y) ++counts[t];
    std::size_t n = 0;
    for (const auto& t : x) {
      auto it = counts.find(t);
      if (it != counts.end() && it->second > 0) {
        --it->second;
        ++n;
      }
    }
    return n;
  };
  return TokenOverlap{shared(extraction.arg1, gold.arg1) +
                          shared(extraction.rel, gold.rel) +
                          shared(extraction.arg2, gold.arg2),
                      extraction.token_count(), gold.token_count()};
}

// Reference for the token-level baseline: one triple per cluster, taken from
// the first formulation with optional groups dropped.
inline std::vector<Triple> flatten_gold(const SentenceGold& s) {
  std::vector<Triple> out;
  for (const auto& c : s.clusters) {
    const auto& f = c.formulations.front();
    out.push_back(Triple{f.arg1.mandatory_tokens(), f.rel.mandatory_tokens(),
                         f.arg2.mandatory_tokens()});
  }
  return out;
}

// Simplified token-level comparator in the style of earlier benchmarks.
// Within each sentence, extractions and flattened gold triples are paired
// greedily by descending token F1 (ties: lower extraction index, then lower
// cluster); pairs with no shared token are not made. Precision is shared
// tokens over all extraction tokens, recall shared tokens over all gold
// tokens, pooled over the corpus. matched_* count assigned pairs.
inline ScoreReport token_level_score(std::span<const Extraction> xs,
                                     const GoldCorpus& gc) {
  ScoreReport r;
  std::unordered_map<std::string_view, std::vector<std::size_t>> by_sentence;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    by_sentence[xs[i].sent_id].push_back(i);
    r.total_extractions += 1;
  }
  std::size_t shared = 0;
  std::size_t extraction_tokens = 0;
  std::size_t gold_tokens = 0;
  for (const auto& x : xs) extraction_tokens += x.token_count();

  for (const auto& s : gc.sentences) {
    const auto gold = flatten_gold(s);
    SentenceScore row{s.sent_id, 0, 0, 0, gold.size()};
    for (const auto& g : gold) gold_tokens += g.token_count();
    r.total_clusters += gold.size();
    auto it = by_sentence.find(s.sent_id);
    if (it != by_sentence.end()) {
      const auto& members = it->second;
      row.total_extractions = members.size();
      struct Candidate {
        double f1;
        std::size_t ext;
        std::size_t cluster;
        std::size_t shared;
      };
      std::vector<Candidate> candidates;
      for (std::size_t a = 0; a < members.size(); ++a) {
        const Triple t = xs[members[a]].triple();
        for (std::size_t b = 0; b < gold.size(); ++b) {
          const auto o = token_overlap(t, gold[b]);
          if (o.shared > 0) candidates.push_back({o.f1(), a, b, o.shared});
        }
      }
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const Candidate& x, const Candidate& y) {
                         if (x.f1 != y.f1) return x.f1 > y.f1;
                         return std::tie(x.ext, x.cluster) <
                                std::tie(y.ext, y.cluster);
                       });
      std::vector<bool> ext_used(members.size()), gold_used(gold.size());
      for (const auto& c : candidates) {
        if (ext_used[c.ext] || gold_used[c.cluster]) continue;
        ext_used[c.ext] = gold_used[c.cluster] = true;
        shared += c.shared;
        ++row.matched_extractions;
        ++row.matched_clusters;
      }
    }
    r.matched_extractions += row.matched_extractions;
    r.matched_clusters += row.matched_clusters;
    r.per_sentence.push_back(std::move(row));
  }
  r.precision_undefined = extraction_tokens == 0;
  r.recall_undefined = gold_tokens == 0;
  r.precision = ratio(shared, extraction_tokens);
  r.recall = ratio(shared, gold_tokens);
  r.f1 = f1_from_counts(shared, extraction_tokens, shared, gold_tokens);
  return r;
}

inline ScoreReport token_level_score(const ExtractionSet& xs,
                                     const GoldCorpus& gc) {
  return token_level_score(std::span<const Extraction>(xs.extractions), gc);
}

// One passage of the answer-based QA task: the clusters that answer the
// question, and a system's extractions for the passage.
struct AbqaPassage {
  SentenceGold answers;
  std::vector<Extraction> extractions;
};

// Fraction of passages where at least one extraction matches an answer
// cluster. No passages scores 0.
inline double abqa_score(std::span<const AbqaPassage> passages,
                         const MatcherConfig& cfg) {
  if (passages.empty()) return 0.0;
  std::size_t points = 0;
  for (const auto& p : passages) {
    const SentenceIndex index(p.answers);
    for (const auto& e : p.extractions) {
      if (match_extraction(e, index, cfg).matched()) {
        ++points;
        break;
      }
    }
  }
  return ratio(points, passages.size());
}

// Groups a system's extractions under the answer sentences they belong to.
// Extractions for unknown passages are ignored.
inline std::vector<AbqaPassage> make_abqa_passages(const GoldCorpus& answers,
                                                   const ExtractionSet& xs) {
  std::vector<AbqaPassage> out;
  std::unordered_map<std::string_view, std::size_t> pos;
  for (const auto& s : answers.sentences) {
    pos.emplace(s.sent_id, out.size());
    out.push_back(AbqaPassage{s, {}});
  }
  for (const auto& e : xs.extractions) {
    auto it = pos.find(e.sent_id);
    if (it != pos.end()) out[it->second].extractions.push_back(e);
  }
  return out;
}

// Pearson product-moment correlation coefficient.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ScoreError("pearson: length mismatch (" + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw ScoreError("pearson: need at least two points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
  };
  if (constant(x) || constant(y)) {
    throw ScoreError("pearson: constant vector has undefined variance");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(r, -1.0, 1.0);
}

inline double pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  return pearson(std::span<const double>(x), std::span<const double>(y));
}

struct Correlation {
  std::string x;
  std::string y;
  std::size_t n = 0;  // systems with both values present
  std::optional<double> coefficient;
  std::string note;  // why the coefficient is absent
};

struct CorrelationReport {
  std::vector<Correlation> pairs;
};

// Correlates column pairs of a score table over the rows where both cells
// are present. Degenerate pairs carry a note instead of a coefficient.
inline CorrelationReport correlate(
    const ScoreTable& table,
    const std::vector<std::pair<std::size_t, std::size_t>>& selected) {
  CorrelationReport report;
  for (const auto& [a, b] : selected) {
    Correlation c{table.columns.at(a), table.columns.at(b), 0, std::nullopt,
                  {}};
    std::vector<double> x, y;
    for (const auto& row : table.cells) {
      if (row[a] && row[b]) {
        x.push_back(*row[a]);
        y.push_back(*row[b]);
      }
    }
    c.n = x.size();
    if (x.size() < 2) {
      c.note = "fewer than two systems";
    } else if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
               std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
      c.note = "constant column";
    } else {
      c.coefficient = pearson(x, y);
    }
    report.pairs.push_back(std::move(c));
  }
  return report;
}

inline double extraction_length_stats(std::span<const Extraction> xs) {
  if (xs.empty()) throw ScoreError("mean extraction length of an empty set");
  std::size_t total = 0;
  for (const auto& e : xs) total += e.token_count();
  return ratio(total, xs.size());
}

inline double extraction_length_stats(const ExtractionSet& xs) {
  return extraction_length_stats(std::span<const Extraction>(xs.extractions));
}

}  // namespace oie

#endif  // OIE_SCORER_HPP_
