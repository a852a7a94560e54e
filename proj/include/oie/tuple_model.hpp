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

// Core value types shared by every part of the toolkit: tokens, slot patterns
// with optional groups, formulations, fact clusters, gold sentences and system
// extractions, plus the expansion and normalization primitives built on them.

#ifndef OIE_TUPLE_MODEL_HPP_
#define OIE_TUPLE_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oie/unicode.hpp"

namespace oie {

using Token = std::string;
using TokenSeq = std::vector<Token>;

// Raised when a value violates a model invariant.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxOptionalGroups = 16;
inline constexpr std::size_t kMaxTriplesPerFormulation = std::size_t{1} << 16;
inline constexpr std::string_view kSlotSeparator = "-->";

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

inline bool is_valid_token(std::string_view t) {
  if (t.empty()) return false;
  for (char c : t) {
    if (is_space(c)) return false;
  }
  return t.find(kSlotSeparator) == std::string_view::npos;
}

inline TokenSeq split_tokens(std::string_view text) {
  TokenSeq out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(const TokenSeq& tokens, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

// A run of tokens inside a slot, either always present or optional.
struct Group {
  TokenSeq tokens;
  bool optional = false;

  friend bool operator==(const Group&, const Group&) = default;
};

struct SlotPattern {
  std::vector<Group> groups;

  bool empty() const { return groups.empty(); }

  std::size_t optional_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.optional ? 1 : 0;
    return n;
  }

  bool has_mandatory() const {
    for (const auto& g : groups) {
      if (!g.optional) return true;
    }
    return false;
  }

  TokenSeq mandatory_tokens() const {
    TokenSeq out;
    for (const auto& g : groups) {
      if (!g.optional) out.insert(out.end(), g.tokens.begin(), g.tokens.end());
    }
    return out;
  }

  friend bool operator==(const SlotPattern&, const SlotPattern&) = default;
};

enum class SlotKind { kArg1, kRel, kArg2 };

inline const char* slot_name(SlotKind kind) {
  switch (kind) {
    case SlotKind::kArg1:
      return "arg1";
    case SlotKind::kRel:
      return "rel";
    case SlotKind::kArg2:
      return "arg2";
  }
  return "?";
}

// Builds a slot from (tokens, optional) runs, merging adjacent mandatory runs so
// the result has the same shape the gold parser produces.
inline SlotPattern make_slot(std::initializer_list<Group> runs) {
  SlotPattern slot;
  for (const auto& run : runs) {
    if (run.tokens.empty()) continue;
    if (!run.optional && !slot.groups.empty() && !slot.groups.back().optional) {
      auto& last = slot.groups.back().tokens;
      last.insert(last.end(), run.tokens.begin(), run.tokens.end());
    } else {
      slot.groups.push_back(run);
    }
  }
  return slot;
}

inline void validate(const SlotPattern& slot, SlotKind kind) {
  for (const auto& g : slot.groups) {
    if (g.tokens.empty()) {
      throw ModelError(std::string("empty group in ") + slot_name(kind));
    }
    for (const auto& t : g.tokens) {
      if (!is_valid_token(t)) {
        throw ModelError(std::string("invalid token '") + t + "' in " +
                         slot_name(kind));
      }
    }
  }
  if (slot.empty()) {
    if (kind == SlotKind::kArg2) return;
    throw ModelError(std::string("empty ") + slot_name(kind));
  }
  if (!slot.has_mandatory()) {
    throw ModelError(std::string(slot_name(kind)) +
                     " has no mandatory token");
  }
}

// Bracket notation: mandatory tokens as-is, optional groups as "[w1 w2]".
inline std::string to_string(const SlotPattern& slot) {
  std::string out;
  for (const auto& g : slot.groups) {
    if (!out.empty()) out += ' ';
    if (g.optional) out += '[';
    out += join(g.tokens);
    if (g.optional) out += ']';
  }
  return out;
}

struct Triple {
  TokenSeq arg1;
  TokenSeq rel;
  TokenSeq arg2;

  std::size_t token_count() const {
    return arg1.size() + rel.size() + arg2.size();
  }

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline std::string to_string(const Triple& t) {
  return join(t.arg1) + " | " + join(t.rel) + " | " + join(t.arg2);
}

struct Formulation {
  SlotPattern arg1;
  SlotPattern rel;
  SlotPattern arg2;

  std::size_t optional_count() const {
    return arg1.optional_count() + rel.optional_count() +
           arg2.optional_count();
  }

  friend bool operator==(const Formulation&, const Formulation&) = default;
};

inline void validate(const Formulation& f) {
  validate(f.arg1, SlotKind::kArg1);
  validate(f.rel, SlotKind::kRel);
  validate(f.arg2, SlotKind::kArg2);
  if (f.optional_count() > kMaxOptionalGroups) {
    throw ModelError("expansion cap exceeded: " +
                     std::to_string(f.optional_count()) +
                     " optional groups (max " +
                     std::to_string(kMaxOptionalGroups) + ")");
  }
}

// Canonical gold-file form of a formulation, without the cluster index.
inline std::string to_string(const Formulation& f) {
  std::string out = to_string(f.arg1) + " --> " + to_string(f.rel) + " -->";
  if (!f.arg2.empty()) out += " " + to_string(f.arg2);
  return out;
}

// One fact synset. `index` is 1-based within its sentence.
struct Cluster {
  int index = 0;
  std::vector<Formulation> formulations;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct SentenceGold {
  std::string sent_id;
  std::string text;
  std::vector<Cluster> clusters;

  const Cluster* cluster(int index) const {
    if (index < 1 || static_cast<std::size_t>(index) > clusters.size()) {
      return nullptr;
    }
    return &clusters[index - 1];
  }

  friend bool operator==(const SentenceGold&, const SentenceGold&) = default;
};

inline void validate(const SentenceGold& s) {
  for (std::size_t i = 0; i < s.clusters.size(); ++i) {
    const auto& c = s.clusters[i];
    if (c.index != static_cast<int>(i) + 1) {
      throw ModelError("cluster indices must be 1..N contiguous, found " +
                       std::to_string(c.index) + " at position " +
                       std::to_string(i + 1));
    }
    if (c.formulations.empty()) {
      throw ModelError("cluster " + std::to_string(c.index) +
                       " has no formulations");
    }
    std::set<std::string> seen;
    for (const auto& f : c.formulations) {
      validate(f);
      if (!seen.insert(to_string(f)).second) {
        throw ModelError("duplicate formulation in cluster " +
                         std::to_string(c.index) + ": " + to_string(f));
      }
    }
  }
}

// A tuple emitted by a system.
struct Extraction {
  std::string sent_id;
  TokenSeq arg1;
  TokenSeq rel;
  TokenSeq arg2;
  std::optional<double> confidence;

  Triple triple() const { return Triple{arg1, rel, arg2}; }
  std::size_t token_count() const {
    return arg1.size() + rel.size() + arg2.size();
  }

  friend bool operator==(const Extraction&, const Extraction&) = default;
};

inline void validate(const Extraction& e) {
  if (e.arg1.empty()) throw ModelError("extraction has empty arg1");
  if (e.rel.empty()) throw ModelError("extraction has empty rel");
  for (const auto* slot : {&e.arg1, &e.rel, &e.arg2}) {
    for (const auto& t : *slot) {
      if (!is_valid_token(t)) {
        throw ModelError("invalid token '" + t + "' in extraction");
      }
    }
  }
}

// Every token sequence obtained by independently keeping or dropping each
// optional group. Variants are listed in first-seen order of the inclusion
// bitmask (bit i set keeps the i-th optional group), duplicates removed. An
// empty slot yields the single empty sequence.
inline std::vector<TokenSeq> expand_slot(const SlotPattern& slot) {
  std::vector<const Group*> optional;
  for (const auto& g : slot.groups) {
    if (g.optional) optional.push_back(&g);
  }
  if (optional.size() >= 8 * sizeof(std::size_t) - 1) {
    throw ModelError("expansion cap exceeded");
  }
  const std::size_t variants = std::size_t{1} << optional.size();
  std::vector<TokenSeq> out;
  std::set<TokenSeq> seen;
  for (std::size_t mask = 0; mask < variants; ++mask) {
    TokenSeq seq;
    std::size_t bit = 0;
    for (const auto& g : slot.groups) {
      bool keep = true;
      if (g.optional) keep = (mask >> bit++) & 1;
      if (keep) seq.insert(seq.end(), g.tokens.begin(), g.tokens.end());
    }
    if (seen.insert(seq).second) out.push_back(std::move(seq));
  }
  return out;
}

// Cartesian product of the three slot expansions, deduplicated.
inline std::vector<Triple> expand_formulation(const Formulation& f) {
  const auto a1 = expand_slot(f.arg1);
  const auto rel = expand_slot(f.rel);
  const auto a2 = expand_slot(f.arg2);
  if (a1.size() * rel.size() * a2.size() > kMaxTriplesPerFormulation) {
    throw ModelError("expansion cap exceeded: formulation '" + to_string(f) +
                     "' yields more than " +
                     std::to_string(kMaxTriplesPerFormulation) + " triples");
  }
  // Slot variants are already unique, so the product is too.
  std::vector<Triple> out;
  out.reserve(a1.size() * rel.size() * a2.size());
  for (const auto& x : a1) {
    for (const auto& r : rel) {
      for (const auto& y : a2) out.push_back(Triple{x, r, y});
    }
  }
  return out;
}

inline TokenSeq linearize(const Triple& t) {
  TokenSeq out;
  out.reserve(t.token_count());
  out.insert(out.end(), t.arg1.begin(), t.arg1.end());
  out.insert(out.end(), t.rel.begin(), t.rel.end());
  out.insert(out.end(), t.arg2.begin(), t.arg2.end());
  return out;
}

// The three slot patterns laid end to end.
inline SlotPattern linearize(const Formulation& f) {
  SlotPattern out;
  for (const auto* slot : {&f.arg1, &f.rel, &f.arg2}) {
    out.groups.insert(out.groups.end(), slot->groups.begin(),
                      slot->groups.end());
  }
  return out;
}

inline TokenSeq normalize_punc(const TokenSeq& tokens) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto n = unicode::strip_punctuation_lower(t);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

inline Triple normalize_punc(const Triple& t) {
  return Triple{normalize_punc(t.arg1), normalize_punc(t.rel),
                normalize_punc(t.arg2)};
}

}  // namespace oie

#endif  // OIE_TUPLE_MODEL_HPP_
