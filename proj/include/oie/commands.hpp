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

// Batch commands behind the oie_eval CLI. Each run_* function reads its
// inputs, writes one report and returns the process exit status:
// 0 success, 1 I/O error, 2 format error, 3 precondition violation.

#ifndef OIE_COMMANDS_HPP_
#define OIE_COMMANDS_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "oie/annotation_io.hpp"
#include "oie/lint.hpp"
#include "oie/matcher.hpp"
#include "oie/report.hpp"
#include "oie/scorer.hpp"

namespace oie {

enum ExitStatus : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitFormat = 2,
  kExitPrecondition = 3,
};

enum class OutputFormat { kText, kJson };

// A ParseError tied to the file it came from.
class FileFormatError : public std::runtime_error {
 public:
  FileFormatError(const std::string& path, const ParseError& e)
      : std::runtime_error(e.diagnostic(path)) {}
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace cmd_detail {

struct Loaded {
  std::string path;
  std::string text;
};

inline Loaded load(const std::string& path) { return {path, read_file(path)}; }

template <typename Fn>
auto parse_or_throw(const Loaded& in, Fn&& parse) {
  try {
    return parse(in.text);
  } catch (const ParseError& e) {
    throw FileFormatError(in.path, e);
  }
}

inline InputDigest digest(const std::string& role, const Loaded& in) {
  return {role, in.path, sha256_hex(in.text)};
}

inline std::string system_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

inline int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FileFormatError& e) {
    err << e.what() << "\n";
    return kExitFormat;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

inline void emit(const std::string& content, const std::string& output,
                 std::ostream& out) {
  if (output.empty()) {
    out << content;
  } else {
    write_file(output, content);
  }
}

inline std::string render(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace cmd_detail

struct ScoreOptions {
  std::string gold;
  std::vector<std::string> extractions;
  MatcherConfig matcher = MatcherConfig::full();
  OutputFormat format = OutputFormat::kText;
  std::string output;
  // Optional TSV of per-extraction decisions.
  std::string decisions;
  // Extractions with a confidence below this are dropped; unset keeps all.
  std::optional<double> min_confidence;
  bool per_sentence = false;
  std::size_t jobs = 1;
};

inline int run_score(const ScoreOptions& opt, std::ostream& out,
                     std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    const auto gold_in = load(opt.gold);
    std::vector<Loaded> ext_in;
    for (const auto& p : opt.extractions) ext_in.push_back(load(p));
    const auto gold = parse_or_throw(gold_in, [](auto t) { return parse_gold(t); });

    RunManifest manifest;
    manifest.command = "score";
    manifest.matcher = opt.matcher;
    manifest.inputs.push_back(digest("gold", gold_in));

    ordered_json systems = ordered_json::array();
    TextTable summary({"system", "precision", "recall", "f1",
                       "matched_extractions", "total_extractions",
                       "matched_clusters", "total_clusters", "orphans"});
    std::string details;
    std::string decision_rows;
    for (const auto& in : ext_in) {
      manifest.inputs.push_back(digest("extractions", in));
      auto xs = parse_or_throw(in, [&](auto t) {
        return parse_extractions(t, system_name(in.path));
      });
      if (opt.min_confidence) {
        std::erase_if(xs.extractions, [&](const Extraction& e) {
          return e.confidence && *e.confidence < *opt.min_confidence;
        });
      }
      const auto decisions = match_corpus(xs, gold, opt.matcher, opt.jobs);
      const auto report = score_corpus(decisions, gold, xs);

      std::map<std::string, std::size_t> methods{
          {"EM", 0}, {"AF", 0}, {"LOD", 0}, {"NONE", 0}, {"punc_used", 0}};
      std::size_t orphans = 0;
      for (std::size_t i = 0; i < decisions.size(); ++i) {
        const auto& d = decisions[i];
        ++methods[method_name(d.method)];
        if (d.punc_used) ++methods["punc_used"];
        if (d.orphan) ++orphans;
        const auto& e = xs.extractions[i];
        decision_rows += xs.system_name + "\t" + e.sent_id + "\t" +
                         join(e.arg1) + "\t" + join(e.rel) + "\t" +
                         join(e.arg2) + "\t" + method_name(d.method) + "\t" +
                         std::to_string(d.matched_cluster.value_or(0)) + "\t" +
                         (d.punc_used ? "punc" : "raw") + "\n";
      }
      if (orphans) {
        err << "warning: " << in.path << ": " << orphans
            << " extraction(s) reference sentences missing from the gold "
               "corpus\n";
      }

      ordered_json j;
      j["system"] = xs.system_name;
      j.update(to_json(report, true));
      j["methods"] = methods;
      systems.push_back(std::move(j));

      summary.add({xs.system_name,
                   report.precision_undefined ? "undefined"
                                              : fixed4(report.precision),
                   report.recall_undefined ? "undefined" : fixed4(report.recall),
                   fixed4(report.f1), std::to_string(report.matched_extractions),
                   std::to_string(report.total_extractions),
                   std::to_string(report.matched_clusters),
                   std::to_string(report.total_clusters),
                   std::to_string(report.orphan_extractions)});
      if (opt.per_sentence) {
        TextTable rows({"sent_id", "precision", "recall", "f1",
                        "matched_extractions", "total_extractions",
                        "matched_clusters", "total_clusters"});
        for (const auto& s : report.per_sentence) {
          rows.add({s.sent_id, fixed4(s.precision()), fixed4(s.recall()),
                    fixed4(s.f1()), std::to_string(s.matched_extractions),
                    std::to_string(s.total_extractions),
                    std::to_string(s.matched_clusters),
                    std::to_string(s.total_clusters)});
        }
        details += "\n## " + xs.system_name + "\n" + rows.render();
      }
    }

    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["systems"] = std::move(systems);
      content = render(j);
    } else {
      content = render_manifest_text(manifest) + summary.render() + details;
    }
    if (!opt.decisions.empty()) write_file(opt.decisions, decision_rows);
    emit(content, opt.output, out);
  });
}

struct MatchEvalOptions {
  std::string gold;
  std::string annotations;
  // Several configs produce one row each.
  std::vector<MatcherConfig> matchers = {MatcherConfig::full()};
  OutputFormat format = OutputFormat::kText;
  std::string output;
  std::size_t jobs = 1;
};

inline int run_match_eval(const MatchEvalOptions& opt, std::ostream& out,
                          std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    const auto gold_in = load(opt.gold);
    const auto ann_in = load(opt.annotations);
    const auto gold = parse_or_throw(gold_in, [](auto t) { return parse_gold(t); });
    const auto labels = parse_or_throw(
        ann_in, [&](auto t) { return parse_match_annotations(t, &gold); });
    std::vector<Extraction> xs;
    for (const auto& m : labels) xs.push_back(m.extraction);

    RunManifest manifest;
    manifest.command = "match-eval";
    if (opt.matchers.size() == 1) manifest.matcher = opt.matchers.front();
    manifest.inputs = {digest("gold", gold_in), digest("annotations", ann_in)};

    ordered_json rows = ordered_json::array();
    TextTable table({"matcher", "precision", "recall", "f1", "correct_match",
                     "wrong_cluster", "spurious_match", "missed_match",
                     "correct_none"});
    for (const auto& cfg : opt.matchers) {
      const auto decisions = match_corpus(xs, gold, cfg, opt.jobs);
      const auto r = evaluate_matcher(decisions, labels);
      ordered_json j{{"matcher", cfg.name()}};
      j.update(to_json(r));
      rows.push_back(std::move(j));
      table.add({cfg.name(), fixed4(r.precision), fixed4(r.recall),
                 fixed4(r.f1), std::to_string(r.correct_match),
                 std::to_string(r.wrong_cluster),
                 std::to_string(r.spurious_match),
                 std::to_string(r.missed_match),
                 std::to_string(r.correct_none)});
    }
    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["results"] = std::move(rows);
      content = render(j);
    } else {
      content = render_manifest_text(manifest) + table.render();
    }
    emit(content, opt.output, out);
  });
}

struct LintOptions {
  std::string gold;
  std::string other;  // optional second annotation set
  OverlapMode mode = OverlapMode::kBoth;
  OutputFormat format = OutputFormat::kText;
  std::string output;
  std::size_t jobs = 1;
};

inline int run_lint(const LintOptions& opt, std::ostream& out,
                    std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    const auto a_in = load(opt.gold);
    std::optional<Loaded> b_in;
    if (!opt.other.empty()) b_in = load(opt.other);
    const auto a = parse_or_throw(a_in, [](auto t) { return parse_gold(t); });
    std::optional<GoldCorpus> b;
    if (b_in) b = parse_or_throw(*b_in, [](auto t) { return parse_gold(t); });

    RunManifest manifest;
    manifest.command = "lint";
    manifest.inputs.push_back(digest("gold", a_in));
    if (b_in) manifest.inputs.push_back(digest("other", *b_in));

    std::vector<Finding> findings = lint_corpus(a, opt.mode, opt.jobs);
    std::optional<DiffResult> diff;
    if (b) {
      diff = diff_annotation_sets(a, *b, opt.jobs);
      for (const auto& id : diff->only_in_a) {
        err << "warning: sentence '" << id << "' only in " << opt.gold << "\n";
      }
      for (const auto& id : diff->only_in_b) {
        err << "warning: sentence '" << id << "' only in " << opt.other
            << "\n";
      }
      for (const auto& f : diff->findings) findings.push_back(f);
    }
    const auto rollup = sentence_rollup(findings);

    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["findings"] = ordered_json::array();
      for (const auto& f : findings) j["findings"].push_back(to_json(f));
      ordered_json counts;
      for (auto kind : {FindingKind::kDoubleAnnotation,
                        FindingKind::kDoubleMeaning,
                        FindingKind::kCrossSetMissing}) {
        auto it = rollup.find(kind);
        counts[finding_kind_name(kind)] = it == rollup.end() ? 0 : it->second;
      }
      j["sentence_counts"] = std::move(counts);
      if (diff) {
        j["only_in_gold"] = diff->only_in_a;
        j["only_in_other"] = diff->only_in_b;
      }
      content = render(j);
    } else {
      content = render_manifest_text(manifest);
      for (auto kind : {FindingKind::kDoubleAnnotation,
                        FindingKind::kDoubleMeaning,
                        FindingKind::kCrossSetMissing}) {
        if (kind == FindingKind::kCrossSetMissing && !diff) continue;
        auto it = rollup.find(kind);
        content += "\n== " + std::string(finding_kind_name(kind)) + " (" +
                   std::to_string(it == rollup.end() ? 0 : it->second) +
                   " sentences)\n";
        for (const auto& f : findings) {
          if (f.kind != kind) continue;
          content += f.sent_id + " clusters";
          for (int c : f.clusters) content += " " + std::to_string(c);
          content += " [" + std::string(severity_name(f.severity));
          if (!f.mode.empty()) content += ", " + f.mode;
          if (!f.direction.empty()) content += ", " + f.direction;
          content += "]";
          if (!f.detail.empty()) content += ": " + f.detail;
          content += "\n";
          for (const auto& w : f.witnesses) content += "    " + w + "\n";
        }
      }
    }
    emit(content, opt.output, out);
  });
}

struct CorrelateOptions {
  std::string scores;
  // "X:Y" column pairs.
  std::vector<std::string> pairs;
  // Correlate every other column against this one.
  std::string target;
  OutputFormat format = OutputFormat::kText;
  std::string output;
};

inline int run_correlate(const CorrelateOptions& opt, std::ostream& out,
                         std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    const auto in = load(opt.scores);
    const auto table =
        parse_or_throw(in, [](auto t) { return parse_score_table(t); });
    if (table.rows.size() < 2) {
      throw PreconditionError("score table needs at least two systems");
    }
    auto column = [&](const std::string& name) {
      auto c = table.column_index(name);
      if (!c) throw PreconditionError("unknown column '" + name + "'");
      return *c;
    };
    std::vector<std::pair<std::size_t, std::size_t>> selected;
    for (const auto& p : opt.pairs) {
      const auto colon = p.find(':');
      if (colon == std::string::npos) {
        throw PreconditionError("column pair '" + p + "' is not X:Y");
      }
      selected.emplace_back(column(p.substr(0, colon)),
                            column(p.substr(colon + 1)));
    }
    if (!opt.target.empty()) {
      const auto t = column(opt.target);
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c != t) selected.emplace_back(c, t);
      }
    }
    if (opt.pairs.empty() && opt.target.empty()) {
      for (std::size_t a = 0; a < table.columns.size(); ++a) {
        for (std::size_t b = a + 1; b < table.columns.size(); ++b) {
          selected.emplace_back(a, b);
        }
      }
    }
    const auto report = correlate(table, selected);
    for (const auto& c : report.pairs) {
      if (!c.coefficient) {
        err << "warning: " << c.x << " vs " << c.y << ": " << c.note << "\n";
      }
    }

    RunManifest manifest;
    manifest.command = "correlate";
    manifest.inputs.push_back(digest("scores", in));
    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["correlations"] = ordered_json::array();
      for (const auto& c : report.pairs) j["correlations"].push_back(to_json(c));
      content = render(j);
    } else {
      TextTable t({"x", "y", "n", "pearson"});
      for (const auto& c : report.pairs) {
        t.add({c.x, c.y, std::to_string(c.n),
               c.coefficient ? fixed4(*c.coefficient) : "- (" + c.note + ")"});
      }
      content = render_manifest_text(manifest) + t.render();
    }
    emit(content, opt.output, out);
  });
}

struct BaselineOptions {
  std::string gold;
  std::vector<std::string> extractions;
  OutputFormat format = OutputFormat::kText;
  std::string output;
};

// Token-overlap scores, for comparison with the synset matcher.
inline int run_baseline(const BaselineOptions& opt, std::ostream& out,
                        std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    const auto gold_in = load(opt.gold);
    std::vector<Loaded> ext_in;
    for (const auto& p : opt.extractions) ext_in.push_back(load(p));
    const auto gold = parse_or_throw(gold_in, [](auto t) { return parse_gold(t); });
    RunManifest manifest;
    manifest.command = "baseline";
    manifest.inputs.push_back(digest("gold", gold_in));
    ordered_json systems = ordered_json::array();
    TextTable table({"system", "token_precision", "token_recall", "token_f1",
                     "assigned_pairs"});
    for (const auto& in : ext_in) {
      manifest.inputs.push_back(digest("extractions", in));
      const auto xs = parse_or_throw(in, [&](auto t) {
        return parse_extractions(t, system_name(in.path));
      });
      const auto r = token_level_score(xs, gold);
      ordered_json j{{"system", xs.system_name}};
      j.update(to_json(r, false));
      systems.push_back(std::move(j));
      table.add({xs.system_name, fixed4(r.precision), fixed4(r.recall),
                 fixed4(r.f1), std::to_string(r.matched_extractions)});
    }
    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["systems"] = std::move(systems);
      content = render(j);
    } else {
      content = render_manifest_text(manifest) + table.render();
    }
    emit(content, opt.output, out);
  });
}

struct AbqaOptions {
  std::string answers;
  std::vector<std::string> extractions;
  MatcherConfig matcher = MatcherConfig::full();
  OutputFormat format = OutputFormat::kText;
  std::string output;
};

inline int run_abqa(const AbqaOptions& opt, std::ostream& out,
                    std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    const auto ans_in = load(opt.answers);
    std::vector<Loaded> ext_in;
    for (const auto& p : opt.extractions) ext_in.push_back(load(p));
    const auto answers =
        parse_or_throw(ans_in, [](auto t) { return parse_gold(t); });
    RunManifest manifest;
    manifest.command = "abqa";
    manifest.matcher = opt.matcher;
    manifest.inputs.push_back(digest("answers", ans_in));
    ordered_json systems = ordered_json::array();
    TextTable table({"system", "abqa", "passages"});
    for (const auto& in : ext_in) {
      manifest.inputs.push_back(digest("extractions", in));
      const auto xs = parse_or_throw(in, [&](auto t) {
        return parse_extractions(t, system_name(in.path));
      });
      const auto passages = make_abqa_passages(answers, xs);
      const double score = abqa_score(passages, opt.matcher);
      systems.push_back({{"system", xs.system_name},
                         {"abqa", score},
                         {"passages", passages.size()}});
      table.add({xs.system_name, fixed4(score),
                 std::to_string(passages.size())});
    }
    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["systems"] = std::move(systems);
      content = render(j);
    } else {
      content = render_manifest_text(manifest) + table.render();
    }
    emit(content, opt.output, out);
  });
}

struct LengthOptions {
  std::vector<std::string> extractions;
  OutputFormat format = OutputFormat::kText;
  std::string output;
};

inline int run_length(const LengthOptions& opt, std::ostream& out,
                      std::ostream& err) {
  using namespace cmd_detail;
  return guarded(err, [&] {
    std::vector<Loaded> ext_in;
    for (const auto& p : opt.extractions) ext_in.push_back(load(p));
    RunManifest manifest;
    manifest.command = "length";
    ordered_json systems = ordered_json::array();
    TextTable table({"system", "mean_tokens", "extractions"});
    for (const auto& in : ext_in) {
      manifest.inputs.push_back(digest("extractions", in));
      const auto xs = parse_or_throw(in, [&](auto t) {
        return parse_extractions(t, system_name(in.path));
      });
      const double mean = extraction_length_stats(xs);
      systems.push_back({{"system", xs.system_name},
                         {"mean_tokens", mean},
                         {"extractions", xs.extractions.size()}});
      table.add({xs.system_name, fixed4(mean),
                 std::to_string(xs.extractions.size())});
    }
    std::string content;
    if (opt.format == OutputFormat::kJson) {
      ordered_json j;
      j["manifest"] = to_json(manifest);
      j["systems"] = std::move(systems);
      content = render(j);
    } else {
      content = render_manifest_text(manifest) + table.render();
    }
    emit(content, opt.output, out);
  });
}

}  // namespace oie

#endif  // OIE_COMMANDS_HPP_
