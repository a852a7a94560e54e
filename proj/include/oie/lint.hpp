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

// Automatic proxies for annotation problems in gold corpora: the same fact
// annotated in two clusters, one cluster mixing different facts, and clusters
// present in one annotation set but not in another. A finding is a hint for a
// human reviewer, not a verdict.

#ifndef OIE_LINT_HPP_
#define OIE_LINT_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oie/annotation_io.hpp"
#include "oie/parallel.hpp"
#include "oie/tuple_model.hpp"

namespace oie {

enum class FindingKind { kDoubleAnnotation, kDoubleMeaning, kCrossSetMissing };

inline const char* finding_kind_name(FindingKind k) {
  switch (k) {
    case FindingKind::kDoubleAnnotation:
      return "DOUBLE_ANNOTATION";
    case FindingKind::kDoubleMeaning:
      return "DOUBLE_MEANING";
    case FindingKind::kCrossSetMissing:
      return "CROSS_SET_MISSING";
  }
  return "?";
}

enum class Severity { kLow, kMedium, kHigh };

inline const char* severity_name(Severity s) {
  switch (s) {
    case Severity::kLow:
      return "low";
    case Severity::kMedium:
      return "medium";
    case Severity::kHigh:
      return "high";
  }
  return "?";
}

// Strict compares expanded triples slot by slot. Loose compares
// punctuation-normalized linearizations, so it also catches the same words
// split differently across slots.
enum class OverlapMode { kStrict, kLoose, kBoth };

struct Finding {
  FindingKind kind = FindingKind::kDoubleAnnotation;
  Severity severity = Severity::kMedium;
  std::string sent_id;
  std::vector<int> clusters;
  // Serialized formulations that trigger the finding.
  std::vector<std::string> witnesses;
  // The shared triple, linearization or head behind the finding.
  std::string detail;
  // "strict" or "loose" for double annotations.
  std::string mode;
  // For cross-set findings: "a_only" or "b_only".
  std::string direction;

  friend bool operator==(const Finding&, const Finding&) = default;
};

class LintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace lint_detail {

struct ExpandedFormulation {
  const Formulation* source;
  std::set<Triple> triples;
  std::set<TokenSeq> loose;  // normalized linearizations
};

inline std::vector<std::vector<ExpandedFormulation>> expand_sentence(
    const SentenceGold& s) {
  std::vector<std::vector<ExpandedFormulation>> out;
  for (const auto& c : s.clusters) {
    auto& forms = out.emplace_back();
    for (const auto& f : c.formulations) {
      ExpandedFormulation x{&f, {}, {}};
      for (auto& t : expand_formulation(f)) {
        x.loose.insert(normalize_punc(linearize(t)));
        x.triples.insert(std::move(t));
      }
      forms.push_back(std::move(x));
    }
  }
  return out;
}

template <typename T>
const T* first_common(const std::set<T>& a, const std::set<T>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return &*i;
    }
  }
  return nullptr;
}

}  // namespace lint_detail

// One finding per unordered cluster pair whose expansions intersect. With
// kBoth a pair is reported once: strict (high severity) when slot-level
// triples are shared, otherwise loose (low severity).
inline std::vector<Finding> find_double_annotations(
    const SentenceGold& g, OverlapMode mode = OverlapMode::kBoth) {
  using lint_detail::first_common;
  const auto expanded = lint_detail::expand_sentence(g);
  std::vector<Finding> out;
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    for (std::size_t j = i + 1; j < expanded.size(); ++j) {
      auto scan = [&](bool strict) -> std::optional<Finding> {
        for (const auto& fi : expanded[i]) {
          for (const auto& fj : expanded[j]) {
            std::optional<std::string> detail;
            if (strict) {
              if (const auto* t = first_common(fi.triples, fj.triples)) {
                detail = to_string(*t);
              }
            } else if (const auto* l = first_common(fi.loose, fj.loose)) {
              detail = join(*l);
            }
            if (!detail) continue;
            Finding f;
            f.kind = FindingKind::kDoubleAnnotation;
            f.severity = strict ? Severity::kHigh : Severity::kLow;
            f.sent_id = g.sent_id;
            f.clusters = {g.clusters[i].index, g.clusters[j].index};
            f.witnesses = {to_string(*fi.source), to_string(*fj.source)};
            f.detail = std::move(*detail);
            f.mode = strict ? "strict" : "loose";
            return f;
          }
        }
        return std::nullopt;
      };
      std::optional<Finding> f;
      if (mode != OverlapMode::kLoose) f = scan(true);
      if (!f && mode != OverlapMode::kStrict) f = scan(false);
      if (f) out.push_back(std::move(*f));
    }
  }
  return out;
}

// One finding per cluster holding two formulations that share an expanded
// (arg1, rel) but whose arg2 expansions are disjoint. Witnesses are all
// formulations taking part in such a pair, in file order.
inline std::vector<Finding> find_double_meanings(const SentenceGold& g) {
  struct Shape {
    std::set<std::pair<TokenSeq, TokenSeq>> heads;
    std::set<TokenSeq> tails;
  };
  std::vector<Finding> out;
  for (const auto& c : g.clusters) {
    std::vector<Shape> shapes;
    for (const auto& f : c.formulations) {
      Shape s;
      for (auto& t : expand_formulation(f)) {
        s.heads.emplace(std::move(t.arg1), std::move(t.rel));
        s.tails.insert(std::move(t.arg2));
      }
      shapes.push_back(std::move(s));
    }
    std::vector<bool> involved(shapes.size());
    std::string detail;
    for (std::size_t p = 0; p < shapes.size(); ++p) {
      for (std::size_t q = p + 1; q < shapes.size(); ++q) {
        const auto* head =
            lint_detail::first_common(shapes[p].heads, shapes[q].heads);
        if (!head) continue;
        if (lint_detail::first_common(shapes[p].tails, shapes[q].tails)) {
          continue;
        }
        involved[p] = involved[q] = true;
        if (detail.empty()) detail = join(head->first) + " | " + join(head->second);
      }
    }
    if (detail.empty()) continue;
    Finding f;
    f.kind = FindingKind::kDoubleMeaning;
    f.severity = Severity::kMedium;
    f.sent_id = g.sent_id;
    f.clusters = {c.index};
    for (std::size_t p = 0; p < shapes.size(); ++p) {
      if (involved[p]) f.witnesses.push_back(to_string(c.formulations[p]));
    }
    f.detail = std::move(detail);
    out.push_back(std::move(f));
  }
  return out;
}

struct DiffResult {
  std::vector<Finding> findings;
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;
};

namespace lint_detail {

// Clusters of `from` none of whose triples occur anywhere in `to`.
inline void missing_clusters(const SentenceGold& from, const SentenceGold& to,
                             const char* direction,
                             std::vector<Finding>& out) {
  std::set<Triple> target;
  for (const auto& c : to.clusters) {
    for (const auto& f : c.formulations) {
      for (auto& t : expand_formulation(f)) target.insert(std::move(t));
    }
  }
  for (const auto& c : from.clusters) {
    bool found = false;
    for (const auto& f : c.formulations) {
      for (const auto& t : expand_formulation(f)) {
        if (target.count(t)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (found) continue;
    Finding finding;
    finding.kind = FindingKind::kCrossSetMissing;
    finding.severity = Severity::kMedium;
    finding.sent_id = from.sent_id;
    finding.clusters = {c.index};
    for (const auto& f : c.formulations) {
      finding.witnesses.push_back(to_string(f));
    }
    finding.direction = direction;
    out.push_back(std::move(finding));
  }
}

inline void sort_by_sentence(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(),
                   [](const Finding& x, const Finding& y) {
                     return x.sent_id < y.sent_id;
                   });
}

}  // namespace lint_detail

// Aligns sentences by sent_id and reports, in both directions, clusters with
// no expanded triple in common with the other set's sentence.
inline DiffResult diff_annotation_sets(const GoldCorpus& a, const GoldCorpus& b,
                                       std::size_t jobs = 1) {
  DiffResult result;
  std::unordered_map<std::string_view, const SentenceGold*> in_b;
  for (const auto& s : b.sentences) in_b.emplace(s.sent_id, &s);
  std::set<std::string_view> in_a;
  std::vector<std::pair<const SentenceGold*, const SentenceGold*>> aligned;
  for (const auto& s : a.sentences) {
    in_a.insert(s.sent_id);
    auto it = in_b.find(s.sent_id);
    if (it == in_b.end()) {
      result.only_in_a.push_back(s.sent_id);
    } else {
      aligned.emplace_back(&s, it->second);
    }
  }
  for (const auto& s : b.sentences) {
    if (!in_a.count(s.sent_id)) result.only_in_b.push_back(s.sent_id);
  }
  if (aligned.empty() && (!a.sentences.empty() || !b.sentences.empty())) {
    throw LintError("annotation sets share no sent_id");
  }
  std::vector<std::vector<Finding>> parts(aligned.size());
  parallel_for(aligned.size(), jobs, [&](std::size_t i) {
    lint_detail::missing_clusters(*aligned[i].first, *aligned[i].second,
                                  "a_only", parts[i]);
    lint_detail::missing_clusters(*aligned[i].second, *aligned[i].first,
                                  "b_only", parts[i]);
  });
  for (auto& p : parts) {
    for (auto& f : p) result.findings.push_back(std::move(f));
  }
  lint_detail::sort_by_sentence(result.findings);
  return result;
}

// Double-annotation and double-meaning findings for a whole corpus, grouped
// by sentence in sent_id order.
inline std::vector<Finding> lint_corpus(const GoldCorpus& gc,
                                        OverlapMode mode = OverlapMode::kBoth,
                                        std::size_t jobs = 1) {
  std::vector<std::vector<Finding>> parts(gc.sentences.size());
  parallel_for(gc.sentences.size(), jobs, [&](std::size_t i) {
    parts[i] = find_double_annotations(gc.sentences[i], mode);
    for (auto& f : find_double_meanings(gc.sentences[i])) {
      parts[i].push_back(std::move(f));
    }
  });
  std::vector<Finding> out;
  for (auto& p : parts) {
    for (auto& f : p) out.push_back(std::move(f));
  }
  lint_detail::sort_by_sentence(out);
  return out;
}

// Number of distinct sentences with at least one finding, per kind.
inline std::map<FindingKind, std::size_t> sentence_rollup(
    const std::vector<Finding>& findings) {
  std::map<FindingKind, std::set<std::string>> seen;
  for (const auto& f : findings) seen[f.kind].insert(f.sent_id);
  std::map<FindingKind, std::size_t> out;
  for (const auto& [kind, ids] : seen) out[kind] = ids.size();
  return out;
}

}  // namespace oie

#endif  // OIE_LINT_HPP_
