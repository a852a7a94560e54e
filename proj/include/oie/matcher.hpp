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

// The staged matching function. An extraction is compared with the clusters
// of its sentence by exact match (EM), then by alternative formulations
// derived from rewriting pairs (AF), then by level of detail (LoD). Each stage
// is tried on the raw tokens first and, when punctuation matching is enabled,
// again after punctuation removal and lowercasing. The first success wins.

#ifndef OIE_MATCHER_HPP_
#define OIE_MATCHER_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oie/annotation_io.hpp"
#include "oie/parallel.hpp"
#include "oie/tuple_model.hpp"

namespace oie {

struct MatcherConfig {
  bool af_enabled = false;
  bool lod_enabled = false;
  bool punc_enabled = false;

  static MatcherConfig exact_only() { return {}; }
  static MatcherConfig full() { return {true, true, true}; }

  // Accepts exactly em, em+af, em+lod, em+af+lod and em+af+lod+punc.
  static std::optional<MatcherConfig> from_name(std::string_view name) {
    if (name == "em") return MatcherConfig{false, false, false};
    if (name == "em+af") return MatcherConfig{true, false, false};
    if (name == "em+lod") return MatcherConfig{false, true, false};
    if (name == "em+af+lod") return MatcherConfig{true, true, false};
    if (name == "em+af+lod+punc") return MatcherConfig{true, true, true};
    return std::nullopt;
  }

  std::string name() const {
    std::string out = "em";
    if (af_enabled) out += "+af";
    if (lod_enabled) out += "+lod";
    if (punc_enabled) out += "+punc";
    return out;
  }

  friend bool operator==(const MatcherConfig&, const MatcherConfig&) = default;
};

enum class MatchMethod { kNone, kExact, kAlternative, kLevelOfDetail };

inline const char* method_name(MatchMethod m) {
  switch (m) {
    case MatchMethod::kNone:
      return "NONE";
    case MatchMethod::kExact:
      return "EM";
    case MatchMethod::kAlternative:
      return "AF";
    case MatchMethod::kLevelOfDetail:
      return "LOD";
  }
  return "?";
}

enum class PairSource { kIs, kAnd };

inline const char* pair_source_name(PairSource s) {
  return s == PairSource::kIs ? "IS" : "AND";
}

// (a, b) licenses deleting a or b from an extraction argument holding both.
struct RewritingPair {
  TokenSeq a;
  TokenSeq b;
  PairSource source = PairSource::kAnd;
  int source_cluster = 0;

  friend bool operator==(const RewritingPair&, const RewritingPair&) = default;
};

struct MatchDecision {
  std::size_t extraction_index = 0;
  std::string sent_id;
  std::optional<int> matched_cluster;
  MatchMethod method = MatchMethod::kNone;
  bool punc_used = false;
  // Set when the extraction's sentence is absent from the gold corpus.
  bool orphan = false;

  bool matched() const { return matched_cluster.has_value(); }

  friend bool operator==(const MatchDecision&, const MatchDecision&) = default;
};

class MatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace match_detail {

inline constexpr std::size_t kNotFound = static_cast<std::size_t>(-1);

inline bool is_determiner(std::string_view t) {
  return t == "a" || t == "an" || t == "the";
}

inline bool is_connector(std::string_view t) { return t == "and" || t == ","; }

inline bool contains_token(const TokenSeq& seq, std::string_view token) {
  return std::find(seq.begin(), seq.end(), token) != seq.end();
}

inline std::size_t find_run(const TokenSeq& seq, const TokenSeq& run) {
  if (run.empty() || run.size() > seq.size()) return kNotFound;
  auto it = std::search(seq.begin(), seq.end(), run.begin(), run.end());
  return it == seq.end() ? kNotFound
                         : static_cast<std::size_t>(it - seq.begin());
}

// Deletes [xs, xe) from `seq`, where the other pair member occupies [ys, ye).
// Connectors left dangling between the two members go too; when the removed
// member is the later one, determiners directly in front of it are its own
// and are dropped with it.
inline TokenSeq remove_member(const TokenSeq& seq, std::size_t xs,
                              std::size_t xe, std::size_t ys, std::size_t ye) {
  std::size_t from = xs;
  std::size_t to = xe;
  if (xs < ys) {
    while (to < ys && is_connector(seq[to])) ++to;
  } else {
    while (from > ye && is_determiner(seq[from - 1])) --from;
    while (from > ye && is_connector(seq[from - 1])) --from;
  }
  TokenSeq out(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(from));
  out.insert(out.end(), seq.begin() + static_cast<std::ptrdiff_t>(to),
             seq.end());
  return out;
}

}  // namespace match_detail

// True when the relation, once determiners and "also" are dropped, is a single
// form of "to be" (is, was, are, were).
inline bool reduces_to_is(const TokenSeq& rel) {
  const Token* core = nullptr;
  for (const auto& t : rel) {
    if (match_detail::is_determiner(t) || t == "also") continue;
    if (core) return false;
    core = &t;
  }
  return core && (*core == "is" || *core == "was" || *core == "are" ||
                  *core == "were");
}

inline bool reduces_to_is(const SlotPattern& rel) {
  return reduces_to_is(rel.mandatory_tokens());
}

// Harvests rewriting pairs from a gold sentence:
//  - IS from each formulation (A, r, B) whose relation reduces to "is";
//  - IS and AND from concrete triples (E, rel, A), (E, rel, B) of two distinct
//    clusters, IS only when rel reduces to "is".
// Pairs are ordered by source cluster, then a, then b, then source, and are
// unique on (a, b, source).
inline std::vector<RewritingPair> collect_rewriting_pairs(
    const SentenceGold& gold) {
  std::vector<RewritingPair> pairs;
  auto emit = [&](const TokenSeq& a, const TokenSeq& b, PairSource src,
                  int cluster) {
    if (a.empty() || b.empty() || a == b) return;
    pairs.push_back(RewritingPair{a, b, src, cluster});
  };

  // (E, rel) -> (cluster, A), in cluster order.
  std::map<std::pair<TokenSeq, TokenSeq>, std::vector<std::pair<int, TokenSeq>>>
      by_head;
  for (const auto& c : gold.clusters) {
    std::set<Triple> cluster_triples;
    for (const auto& f : c.formulations) {
      const bool is_rel = reduces_to_is(f.rel);
      for (auto& t : expand_formulation(f)) {
        if (is_rel) emit(t.arg1, t.arg2, PairSource::kIs, c.index);
        cluster_triples.insert(std::move(t));
      }
    }
    for (const auto& t : cluster_triples) {
      by_head[{t.arg1, t.rel}].emplace_back(c.index, t.arg2);
    }
  }
  for (const auto& [head, tails] : by_head) {
    const bool is_rel = reduces_to_is(head.second);
    for (std::size_t i = 0; i < tails.size(); ++i) {
      for (std::size_t j = i + 1; j < tails.size(); ++j) {
        if (tails[i].first == tails[j].first) continue;
        emit(tails[i].second, tails[j].second, PairSource::kAnd,
             tails[i].first);
        if (is_rel) {
          emit(tails[i].second, tails[j].second, PairSource::kIs,
               tails[i].first);
        }
      }
    }
  }

  auto key = [](const RewritingPair& p) {
    return std::tie(p.a, p.b, p.source, p.source_cluster);
  };
  std::sort(pairs.begin(), pairs.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const auto& x, const auto& y) {
                            return x.a == y.a && x.b == y.b &&
                                   x.source == y.source;
                          }),
              pairs.end());
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    return std::tie(x.source_cluster, x.a, x.b, x.source) <
           std::tie(y.source_cluster, y.a, y.b, y.source);
  });
  return pairs;
}

inline RewritingPair normalize_punc(const RewritingPair& p) {
  return RewritingPair{normalize_punc(p.a), normalize_punc(p.b), p.source,
                       p.source_cluster};
}

// Deletion variants of `e`: for each applicable pair, in pair order, and each
// argument (arg1, then arg2) containing both members as non-overlapping runs,
// the variant without b followed by the variant without a. IS pairs need a
// relation reducing to "is"; AND pairs need the argument to contain "and".
inline std::vector<Extraction> generate_alternatives(
    const Extraction& e, const std::vector<RewritingPair>& pairs) {
  using match_detail::find_run;
  using match_detail::kNotFound;
  std::vector<Extraction> out;
  std::set<Triple> seen{e.triple()};
  const bool is_rel = reduces_to_is(e.rel);
  for (const auto& p : pairs) {
    if (p.a.empty() || p.b.empty() || p.a == p.b) continue;
    if (p.source == PairSource::kIs && !is_rel) continue;
    for (TokenSeq Extraction::*slot : {&Extraction::arg1, &Extraction::arg2}) {
      const TokenSeq& arg = e.*slot;
      if (p.source == PairSource::kAnd &&
          !match_detail::contains_token(arg, "and")) {
        continue;
      }
      const std::size_t as = find_run(arg, p.a);
      const std::size_t bs = find_run(arg, p.b);
      if (as == kNotFound || bs == kNotFound) continue;
      const std::size_t ae = as + p.a.size();
      const std::size_t be = bs + p.b.size();
      if (as < be && bs < ae) continue;  // overlapping runs
      for (const auto& rewritten :
           {match_detail::remove_member(arg, bs, be, as, ae),
            match_detail::remove_member(arg, as, ae, bs, be)}) {
        Extraction alt = e;
        alt.*slot = rewritten;
        if (alt.arg1.empty()) continue;
        if (seen.insert(alt.triple()).second) out.push_back(std::move(alt));
      }
    }
  }
  return out;
}

// Precomputed expansions of one gold sentence, raw and punctuation-normalized.
class SentenceIndex {
 public:
  explicit SentenceIndex(const SentenceGold& gold)
      : gold_(&gold), pairs_(collect_rewriting_pairs(gold)) {
    for (const auto& p : pairs_) {
      auto n = normalize_punc(p);
      if (!n.a.empty() && !n.b.empty() && n.a != n.b) {
        norm_pairs_.push_back(std::move(n));
      }
    }
    const std::size_t n = gold.clusters.size();
    raw_.resize(n);
    norm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int index = gold.clusters[i].index;
      for (const auto& f : gold.clusters[i].formulations) {
        for (auto& t : expand_formulation(f)) {
          add(norm_, i, index, normalize_punc(t));
          add(raw_, i, index, std::move(t));
        }
      }
    }
  }

  const SentenceGold& gold() const { return *gold_; }
  const std::vector<RewritingPair>& rewriting_pairs() const { return pairs_; }

  // Lowest cluster index holding `t` among its expansions.
  std::optional<int> exact(const Triple& t, bool punc) const {
    const View& v = punc ? norm_ : raw_;
    const Triple key = punc ? normalize_punc(t) : t;
    for (std::size_t i = 0; i < v.clusters.size(); ++i) {
      if (v.clusters[i].triples.count(key)) return gold_->clusters[i].index;
    }
    return std::nullopt;
  }

  std::optional<int> exact(const Extraction& e, bool punc) const {
    return exact(e.triple(), punc);
  }

  // First alternative formulation that exact-matches, with its cluster.
  std::optional<int> alternatives(const Extraction& e, bool punc) const {
    if (e.arg2.empty()) return std::nullopt;
    std::vector<Extraction> alts;
    if (punc) {
      Extraction n = e;
      n.arg1 = normalize_punc(e.arg1);
      n.rel = normalize_punc(e.rel);
      n.arg2 = normalize_punc(e.arg2);
      alts = generate_alternatives(n, norm_pairs_);
    } else {
      alts = generate_alternatives(e, pairs_);
    }
    for (const auto& alt : alts) {
      if (auto c = exact(alt.triple(), punc)) return c;
    }
    return std::nullopt;
  }

  // Lowest cluster C with a variant whose linearization equals that of `t`,
  // provided another cluster has a variant sharing t's relation and one of
  // its arguments slot-for-slot.
  std::optional<int> level_of_detail(const Triple& t, bool punc) const {
    const View& v = punc ? norm_ : raw_;
    const Triple key = punc ? normalize_punc(t) : t;
    if (key.arg2.empty()) return std::nullopt;
    const TokenSeq lin = linearize(key);
    const auto* with_arg1 = find(v.rel_arg1, {key.rel, key.arg1});
    const auto* with_arg2 = find(v.rel_arg2, {key.rel, key.arg2});
    auto supported_elsewhere = [&](int cluster) {
      for (const auto* s : {with_arg1, with_arg2}) {
        if (!s) continue;
        for (int other : *s) {
          if (other != cluster) return true;
        }
      }
      return false;
    };
    for (std::size_t i = 0; i < v.clusters.size(); ++i) {
      const int index = gold_->clusters[i].index;
      if (v.clusters[i].linear.count(lin) && supported_elsewhere(index)) {
        return index;
      }
    }
    return std::nullopt;
  }

  std::optional<int> level_of_detail(const Extraction& e, bool punc) const {
    if (e.arg2.empty()) return std::nullopt;
    return level_of_detail(e.triple(), punc);
  }

 private:
  using SlotKey = std::pair<TokenSeq, TokenSeq>;

  struct ClusterView {
    std::set<Triple> triples;
    std::set<TokenSeq> linear;
  };

  struct View {
    std::vector<ClusterView> clusters;
    std::map<SlotKey, std::set<int>> rel_arg1;
    std::map<SlotKey, std::set<int>> rel_arg2;

    void resize(std::size_t n) { clusters.resize(n); }
  };

  static const std::set<int>* find(const std::map<SlotKey, std::set<int>>& m,
                                   const SlotKey& key) {
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
  }

  static void add(View& v, std::size_t pos, int index, Triple t) {
    v.rel_arg1[{t.rel, t.arg1}].insert(index);
    v.rel_arg2[{t.rel, t.arg2}].insert(index);
    v.clusters[pos].linear.insert(linearize(t));
    v.clusters[pos].triples.insert(std::move(t));
  }

  const SentenceGold* gold_;
  std::vector<RewritingPair> pairs_;
  std::vector<RewritingPair> norm_pairs_;
  View raw_;
  View norm_;
};

inline std::optional<int> exact_match(const Extraction& e,
                                      const SentenceGold& g, bool punc) {
  return SentenceIndex(g).exact(e, punc);
}

inline std::optional<int> af_match(const Extraction& e, const SentenceGold& g,
                                   bool punc) {
  return SentenceIndex(g).alternatives(e, punc);
}

inline std::optional<int> lod_match(const Extraction& e, const SentenceGold& g,
                                    bool punc) {
  return SentenceIndex(g).level_of_detail(e, punc);
}

// Runs the enabled stages in order EM, AF, LoD; within a stage the raw
// attempt precedes the punctuation-normalized one.
inline MatchDecision match_extraction(const Extraction& e,
                                      const SentenceIndex& index,
                                      const MatcherConfig& cfg,
                                      std::size_t extraction_index = 0) {
  if (e.sent_id != index.gold().sent_id) {
    throw MatchError("extraction sent_id '" + e.sent_id +
                     "' does not match gold sentence '" +
                     index.gold().sent_id + "'");
  }
  MatchDecision d;
  d.extraction_index = extraction_index;
  d.sent_id = e.sent_id;

  auto attempt = [&](MatchMethod method, auto&& stage) {
    for (bool punc : {false, true}) {
      if (punc && !cfg.punc_enabled) break;
      if (auto c = stage(punc)) {
        d.matched_cluster = c;
        d.method = method;
        d.punc_used = punc;
        return true;
      }
    }
    return false;
  };

  if (attempt(MatchMethod::kExact,
              [&](bool punc) { return index.exact(e, punc); })) {
    return d;
  }
  if (cfg.af_enabled &&
      attempt(MatchMethod::kAlternative,
              [&](bool punc) { return index.alternatives(e, punc); })) {
    return d;
  }
  if (cfg.lod_enabled &&
      attempt(MatchMethod::kLevelOfDetail,
              [&](bool punc) { return index.level_of_detail(e, punc); })) {
    return d;
  }
  return d;
}

inline MatchDecision match_extraction(const Extraction& e,
                                      const SentenceGold& g,
                                      const MatcherConfig& cfg) {
  return match_extraction(e, SentenceIndex(g), cfg);
}

// One decision per extraction, in input order. Sentences are matched in
// parallel on up to `jobs` threads; the result does not depend on `jobs`.
inline std::vector<MatchDecision> match_corpus(
    const std::vector<Extraction>& xs, const GoldCorpus& gc,
    const MatcherConfig& cfg, std::size_t jobs = 1) {
  std::vector<MatchDecision> out(xs.size());
  std::unordered_map<std::string_view, std::size_t> sentence_of;
  for (std::size_t i = 0; i < gc.sentences.size(); ++i) {
    sentence_of.emplace(gc.sentences[i].sent_id, i);
  }
  // Extraction indices grouped by gold sentence, in first-seen order.
  std::vector<std::size_t> order;
  std::unordered_map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto it = sentence_of.find(xs[i].sent_id);
    if (it == sentence_of.end()) {
      out[i].extraction_index = i;
      out[i].sent_id = xs[i].sent_id;
      out[i].orphan = true;
      continue;
    }
    auto [slot, inserted] = members.try_emplace(it->second);
    if (inserted) order.push_back(it->second);
    slot->second.push_back(i);
  }
  parallel_for(order.size(), jobs, [&](std::size_t k) {
    const std::size_t s = order[k];
    const SentenceIndex index(gc.sentences[s]);
    for (std::size_t i : members.at(s)) {
      out[i] = match_extraction(xs[i], index, cfg, i);
    }
  });
  return out;
}

inline std::vector<MatchDecision> match_corpus(const ExtractionSet& xs,
                                               const GoldCorpus& gc,
                                               const MatcherConfig& cfg,
                                               std::size_t jobs = 1) {
  return match_corpus(xs.extractions, gc, cfg, jobs);
}

}  // namespace oie

#endif  // OIE_MATCHER_HPP_
