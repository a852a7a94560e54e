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

// Readers and writers for the four on-disk formats: gold annotations,
// system extractions, match annotations and system score tables.
//
// Gold format, one sentence per block:
//
//   # comment (column 0 only)
//   sent_id:<id>\t<sentence text>
//   <cluster> --> <arg1> --> <rel> --> <arg2>
//   ...
//   <blank line>
//
// Optional groups are written "[w1 w2]". An empty arg2 is written as a line
// ending in " -->". Every parser either returns a value or throws ParseError
// carrying a 1-based line and column.

#ifndef OIE_ANNOTATION_IO_HPP_
#define OIE_ANNOTATION_IO_HPP_

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "oie/tuple_model.hpp"

namespace oie {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

  // "file:line: message"
  std::string diagnostic(std::string_view file) const {
    return std::string(file) + ":" + std::to_string(line_) + ": " + message_;
  }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error writing '" + path + "'");
}

struct GoldCorpus {
  std::vector<SentenceGold> sentences;

  const SentenceGold* find(std::string_view sent_id) const {
    for (const auto& s : sentences) {
      if (s.sent_id == sent_id) return &s;
    }
    return nullptr;
  }

  std::size_t cluster_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.clusters.size();
    return n;
  }

  friend bool operator==(const GoldCorpus&, const GoldCorpus&) = default;
};

struct ExtractionSet {
  std::string system_name;
  std::vector<Extraction> extractions;

  friend bool operator==(const ExtractionSet&, const ExtractionSet&) = default;
};

// A human label: the cluster an extraction should be credited to, 0 for none.
struct MatchAnnotation {
  Extraction extraction;
  int gold_cluster = 0;

  friend bool operator==(const MatchAnnotation&,
                         const MatchAnnotation&) = default;
};

// Systems x metrics. Missing cells ("-" in the file) are std::nullopt.
struct ScoreTable {
  std::string corner = "system";
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<std::optional<double>>> cells;

  std::optional<std::size_t> column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;
};

namespace io_detail {

struct Line {
  std::size_t number;
  std::string_view text;
};

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, line});
    start = end + 1;
  }
  return lines;
}

inline void check_utf8(const Line& line) {
  const auto bad = unicode::find_invalid_utf8(line.text);
  if (bad != std::string_view::npos) {
    throw ParseError(line.number, bad + 1, "invalid UTF-8");
  }
}

inline bool is_blank(std::string_view s) {
  for (char c : s) {
    if (!is_space(c)) return false;
  }
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s,
                                           std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + sep.size();
  }
}

inline std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Parses one bracket-notation slot. `column` is the 1-based column of the
// field's first character, used for diagnostics.
inline SlotPattern parse_slot(std::string_view field, SlotKind kind,
                              std::size_t line, std::size_t column) {
  SlotPattern slot;
  Group group;
  bool in_group = false;
  std::string token;
  auto flush_token = [&] {
    if (token.empty()) return;
    if (in_group) {
      group.tokens.push_back(std::move(token));
    } else if (!slot.groups.empty() && !slot.groups.back().optional) {
      slot.groups.back().tokens.push_back(std::move(token));
    } else {
      slot.groups.push_back(Group{{std::move(token)}, false});
    }
    token.clear();
  };
  for (std::size_t i = 0; i < field.size(); ++i) {
    const char c = field[i];
    if (is_space(c)) {
      flush_token();
    } else if (c == '[') {
      if (in_group) throw ParseError(line, column + i, "nested '['");
      flush_token();
      in_group = true;
      group = Group{{}, true};
    } else if (c == ']') {
      if (!in_group) throw ParseError(line, column + i, "unbalanced ']'");
      flush_token();
      if (group.tokens.empty()) {
        throw ParseError(line, column + i, "empty optional group");
      }
      slot.groups.push_back(std::move(group));
      group = Group{};
      in_group = false;
    } else {
      token += c;
    }
  }
  if (in_group) {
    throw ParseError(line, column + field.size(), "unbalanced '['");
  }
  flush_token();
  try {
    validate(slot, kind);
  } catch (const ModelError& e) {
    throw ParseError(line, column, e.what());
  }
  return slot;
}

}  // namespace io_detail

inline GoldCorpus parse_gold(std::string_view text) {
  using namespace io_detail;
  GoldCorpus corpus;
  std::optional<SentenceGold> current;
  std::map<std::string, std::size_t, std::less<>> seen_ids;

  auto finish = [&] {
    if (current) corpus.sentences.push_back(std::move(*current));
    current.reset();
  };

  for (const auto& line : split_lines(text)) {
    check_utf8(line);
    const auto s = line.text;
    if (!s.empty() && s.front() == '#') continue;
    if (is_blank(s)) {
      finish();
      continue;
    }
    constexpr std::string_view kHeader = "sent_id:";
    if (s.substr(0, kHeader.size()) == kHeader) {
      finish();
      const auto rest = s.substr(kHeader.size());
      const auto tab = rest.find('\t');
      const auto id = rest.substr(0, tab);
      if (id.empty()) {
        throw ParseError(line.number, kHeader.size() + 1, "empty sent_id");
      }
      for (std::size_t i = 0; i < id.size(); ++i) {
        if (is_space(id[i])) {
          throw ParseError(line.number, kHeader.size() + i + 1,
                           "whitespace in sent_id");
        }
      }
      if (auto [it, inserted] = seen_ids.emplace(std::string(id), line.number);
          !inserted) {
        throw ParseError(line.number, kHeader.size() + 1,
                         "duplicate sent_id '" + std::string(id) +
                             "' (first seen on line " +
                             std::to_string(it->second) + ")");
      }
      current = SentenceGold{};
      current->sent_id = std::string(id);
      if (tab != std::string_view::npos) {
        current->text = std::string(rest.substr(tab + 1));
      }
      continue;
    }
    if (!current) {
      throw ParseError(line.number, 1,
                       "cluster line outside a sentence block");
    }

    // A line ending in " -->" carries an empty arg2.
    std::string padded(s);
    {
      auto r = s;
      while (!r.empty() && is_space(r.back())) r.remove_suffix(1);
      if (r.size() >= 4 && r.substr(r.size() - 4) == " -->") {
        padded = std::string(r) + ' ';
      }
    }
    const auto fields = split(padded, " --> ");
    if (fields.size() != 4) {
      throw ParseError(line.number, 1,
                       "malformed slot separators: expected 3 ' --> ' "
                       "separators, found " +
                           std::to_string(fields.size() - 1));
    }
    std::vector<std::size_t> columns;
    for (const auto& f : fields) {
      columns.push_back(static_cast<std::size_t>(f.data() - padded.data()) + 1);
    }
    const auto idx = parse_int(fields[0]);
    if (!idx || *idx < 1 || *idx > 1'000'000) {
      throw ParseError(line.number, 1,
                       "bad cluster index '" + std::string(trim(fields[0])) +
                           "'");
    }
    Formulation f;
    f.arg1 = parse_slot(fields[1], SlotKind::kArg1, line.number, columns[1]);
    f.rel = parse_slot(fields[2], SlotKind::kRel, line.number, columns[2]);
    f.arg2 = parse_slot(fields[3], SlotKind::kArg2, line.number, columns[3]);
    if (f.optional_count() > kMaxOptionalGroups) {
      throw ParseError(line.number, 1,
                       "expansion cap exceeded: " +
                           std::to_string(f.optional_count()) +
                           " optional groups (max " +
                           std::to_string(kMaxOptionalGroups) + ")");
    }

    auto& clusters = current->clusters;
    const int last = clusters.empty() ? 0 : clusters.back().index;
    if (*idx == last + 1) {
      clusters.push_back(Cluster{static_cast<int>(*idx), {}});
    } else if (*idx != last) {
      throw ParseError(line.number, 1,
                       "non-contiguous cluster index " +
                           std::to_string(*idx) + " (expected " +
                           (last ? std::to_string(last) + " or " : "") +
                           std::to_string(last + 1) + ")");
    }
    auto& forms = clusters.back().formulations;
    for (const auto& g : forms) {
      if (g == f) {
        throw ParseError(line.number, 1,
                         "duplicate formulation in cluster " +
                             std::to_string(*idx));
      }
    }
    forms.push_back(std::move(f));
  }
  finish();
  return corpus;
}

inline std::string serialize_gold(const GoldCorpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& s = corpus.sentences[i];
    if (i) out += '\n';
    out += "sent_id:" + s.sent_id + "\t" + s.text + "\n";
    for (const auto& c : s.clusters) {
      for (const auto& f : c.formulations) {
        out += std::to_string(c.index) + " --> " + to_string(f) + "\n";
      }
    }
  }
  return out;
}

namespace io_detail {

// Shared by extraction and match-annotation rows. `cols` holds the four
// extraction fields, optionally followed by confidence.
inline Extraction parse_extraction_fields(
    const std::vector<std::string_view>& cols, std::size_t count,
    const Line& line, std::string_view base) {
  auto col_of = [&](std::size_t i) {
    return static_cast<std::size_t>(cols[i].data() - base.data()) + 1;
  };
  Extraction e;
  e.sent_id = std::string(trim(cols[0]));
  if (e.sent_id.empty()) throw ParseError(line.number, 1, "empty sent_id");
  for (char c : e.sent_id) {
    if (is_space(c)) throw ParseError(line.number, 1, "whitespace in sent_id");
  }
  e.arg1 = split_tokens(cols[1]);
  e.rel = split_tokens(cols[2]);
  e.arg2 = split_tokens(cols[3]);
  if (e.arg1.empty()) throw ParseError(line.number, col_of(1), "empty arg1");
  if (e.rel.empty()) throw ParseError(line.number, col_of(2), "empty rel");
  for (std::size_t slot = 1; slot <= 3; ++slot) {
    for (const auto& t : split_tokens(cols[slot])) {
      if (!is_valid_token(t)) {
        throw ParseError(line.number, col_of(slot),
                         "token contains '-->': '" + t + "'");
      }
    }
  }
  if (count == 5) {
    const auto conf = parse_real(cols[4]);
    if (!conf) {
      throw ParseError(line.number, col_of(4),
                       "non-numeric confidence '" + std::string(cols[4]) +
                           "'");
    }
    e.confidence = *conf;
  }
  return e;
}

inline std::string extraction_fields(const Extraction& e) {
  std::string out = e.sent_id + "\t" + join(e.arg1) + "\t" + join(e.rel) +
                    "\t" + join(e.arg2);
  if (e.confidence) out += "\t" + format_real(*e.confidence);
  return out;
}

}  // namespace io_detail

// `<sent_id>\t<arg1>\t<rel>\t<arg2>[\t<confidence>]`, one extraction per line.
// Blank lines are skipped.
inline ExtractionSet parse_extractions(std::string_view text,
                                       std::string system_name = {}) {
  using namespace io_detail;
  ExtractionSet set;
  set.system_name = std::move(system_name);
  for (const auto& line : split_lines(text)) {
    check_utf8(line);
    if (line.text.empty()) continue;
    const auto cols = split(line.text, "\t");
    if (cols.size() != 4 && cols.size() != 5) {
      throw ParseError(line.number, 1,
                       "expected 4 or 5 tab-separated columns, found " +
                           std::to_string(cols.size()));
    }
    set.extractions.push_back(
        parse_extraction_fields(cols, cols.size(), line, line.text));
  }
  return set;
}

inline std::string serialize_extractions(const ExtractionSet& set) {
  std::string out;
  for (const auto& e : set.extractions) {
    out += io_detail::extraction_fields(e) + "\n";
  }
  return out;
}

// Extraction columns followed by the gold cluster index (0 = no match). When
// `gold` is given, every row is checked against it.
inline std::vector<MatchAnnotation> parse_match_annotations(
    std::string_view text, const GoldCorpus* gold = nullptr) {
  using namespace io_detail;
  std::unordered_map<std::string_view, const SentenceGold*> by_id;
  if (gold) {
    for (const auto& s : gold->sentences) by_id.emplace(s.sent_id, &s);
  }
  std::vector<MatchAnnotation> out;
  for (const auto& line : split_lines(text)) {
    check_utf8(line);
    if (line.text.empty()) continue;
    const auto cols = split(line.text, "\t");
    if (cols.size() != 5 && cols.size() != 6) {
      throw ParseError(line.number, 1,
                       "expected 5 or 6 tab-separated columns, found " +
                           std::to_string(cols.size()));
    }
    MatchAnnotation m;
    m.extraction =
        parse_extraction_fields(cols, cols.size() - 1, line, line.text);
    const auto label_col =
        static_cast<std::size_t>(cols.back().data() - line.text.data()) + 1;
    const auto label = parse_int(cols.back());
    if (!label || *label > 1'000'000) {
      throw ParseError(line.number, label_col,
                       "bad gold cluster '" + std::string(cols.back()) + "'");
    }
    m.gold_cluster = static_cast<int>(*label);
    if (gold) {
      auto it = by_id.find(m.extraction.sent_id);
      if (it == by_id.end()) {
        throw ParseError(line.number, 1,
                         "unknown sent_id '" + m.extraction.sent_id + "'");
      }
      if (static_cast<std::size_t>(m.gold_cluster) >
          it->second->clusters.size()) {
        throw ParseError(line.number, label_col,
                         "gold cluster " + std::to_string(m.gold_cluster) +
                             " exceeds the " +
                             std::to_string(it->second->clusters.size()) +
                             " clusters of sentence '" +
                             m.extraction.sent_id + "'");
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

inline std::string serialize_match_annotations(
    const std::vector<MatchAnnotation>& rows) {
  std::string out;
  for (const auto& m : rows) {
    out += io_detail::extraction_fields(m.extraction) + "\t" +
           std::to_string(m.gold_cluster) + "\n";
  }
  return out;
}

// Header row `<corner>\t<col1>\t...`, then `<system>\t<v1>\t...`. A cell
// holding "-" is missing.
inline ScoreTable parse_score_table(std::string_view text) {
  using namespace io_detail;
  ScoreTable table;
  bool have_header = false;
  for (const auto& line : split_lines(text)) {
    check_utf8(line);
    if (is_blank(line.text)) continue;
    const auto cols = split(line.text, "\t");
    auto col_of = [&](std::size_t i) {
      return static_cast<std::size_t>(cols[i].data() - line.text.data()) + 1;
    };
    if (!have_header) {
      if (cols.size() < 2) {
        throw ParseError(line.number, 1,
                         "header needs a label column and at least one "
                         "metric column");
      }
      table.corner = std::string(trim(cols[0]));
      for (std::size_t i = 1; i < cols.size(); ++i) {
        std::string name(trim(cols[i]));
        if (name.empty()) {
          throw ParseError(line.number, col_of(i), "empty column name");
        }
        if (table.column_index(name)) {
          throw ParseError(line.number, col_of(i),
                           "duplicate column '" + name + "'");
        }
        table.columns.push_back(std::move(name));
      }
      have_header = true;
      continue;
    }
    if (cols.size() != table.columns.size() + 1) {
      throw ParseError(line.number, 1,
                       "ragged row: expected " +
                           std::to_string(table.columns.size() + 1) +
                           " columns, found " + std::to_string(cols.size()));
    }
    std::string label(trim(cols[0]));
    if (label.empty()) throw ParseError(line.number, 1, "empty row label");
    for (const auto& r : table.rows) {
      if (r == label) {
        throw ParseError(line.number, 1, "duplicate row '" + label + "'");
      }
    }
    std::vector<std::optional<double>> row;
    for (std::size_t i = 1; i < cols.size(); ++i) {
      if (trim(cols[i]) == "-") {
        row.push_back(std::nullopt);
        continue;
      }
      const auto v = parse_real(cols[i]);
      if (!v) {
        throw ParseError(line.number, col_of(i),
                         "non-numeric cell '" + std::string(cols[i]) + "'");
      }
      row.push_back(*v);
    }
    table.rows.push_back(std::move(label));
    table.cells.push_back(std::move(row));
  }
  return table;
}

inline std::string serialize_score_table(const ScoreTable& table) {
  if (table.columns.empty()) return {};
  std::string out = table.corner;
  for (const auto& c : table.columns) out += "\t" + c;
  out += "\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += table.rows[r];
    for (const auto& cell : table.cells[r]) {
      out += "\t" + (cell ? io_detail::format_real(*cell) : std::string("-"));
    }
    out += "\n";
  }
  return out;
}

}  // namespace oie

#endif  // OIE_ANNOTATION_IO_HPP_
