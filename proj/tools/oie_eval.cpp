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

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oie/commands.hpp"

namespace {

std::size_t default_jobs() {
  if (const char* env = std::getenv("OIE_EVAL_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

const std::map<std::string, oie::OutputFormat> kFormats = {
    {"text", oie::OutputFormat::kText}, {"json", oie::OutputFormat::kJson}};

const std::vector<std::string> kMatcherNames = {
    "em", "em+af", "em+lod", "em+af+lod", "em+af+lod+punc"};

void add_format(CLI::App* app, oie::OutputFormat& fmt, std::string& output) {
  app->add_option("--format", fmt, "text or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  app->add_option("-o,--output", output, "write the report here, not stdout");
}

void add_jobs(CLI::App* app, std::size_t& jobs) {
  app->add_option("-j,--jobs", jobs, "worker threads; default OIE_EVAL_JOBS")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open IE benchmark evaluation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(oie::kToolkitVersion));

  const std::size_t jobs = default_jobs();

  oie::ScoreOptions score;
  score.jobs = jobs;
  std::string score_matcher = "em+af+lod+punc";
  auto* score_cmd = app.add_subcommand("score", "score systems against gold");
  score_cmd->add_option("-g,--gold", score.gold, "gold fact synsets")
      ->required();
  score_cmd->add_option("-e,--extractions", score.extractions,
                        "system extraction TSV, repeatable")
      ->required();
  score_cmd->add_option("-m,--matcher", score_matcher)
      ->check(CLI::IsMember(kMatcherNames));
  score_cmd->add_option("--decisions", score.decisions,
                        "write per-extraction decisions TSV");
  score_cmd->add_option("--min-confidence", score.min_confidence,
                        "drop extractions below this confidence");
  score_cmd->add_flag("--per-sentence", score.per_sentence,
                      "add per-sentence tables to text output");
  add_format(score_cmd, score.format, score.output);
  add_jobs(score_cmd, score.jobs);

  oie::MatchEvalOptions eval;
  eval.jobs = jobs;
  std::vector<std::string> eval_matchers;
  auto* eval_cmd = app.add_subcommand(
      "match-eval", "evaluate the matcher against human match labels");
  eval_cmd->add_option("-g,--gold", eval.gold)->required();
  eval_cmd->add_option("-a,--annotations", eval.annotations,
                       "labelled extractions TSV")
      ->required();
  eval_cmd->add_option("-m,--matcher", eval_matchers,
                       "repeatable; 'all' runs every config")
      ->check(CLI::IsMember([] {
        auto names = kMatcherNames;
        names.push_back("all");
        return names;
      }()));
  add_format(eval_cmd, eval.format, eval.output);
  add_jobs(eval_cmd, eval.jobs);

  oie::LintOptions lint;
  lint.jobs = jobs;
  auto* lint_cmd = app.add_subcommand("lint", "annotation quality proxies");
  lint_cmd->add_option("-g,--gold", lint.gold)->required();
  lint_cmd->add_option("--other", lint.other,
                       "second annotation of the same sentences");
  lint_cmd->add_option("--mode", lint.mode, "strict, loose or both")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, oie::OverlapMode>{
              {"strict", oie::OverlapMode::kStrict},
              {"loose", oie::OverlapMode::kLoose},
              {"both", oie::OverlapMode::kBoth}},
          CLI::ignore_case));
  add_format(lint_cmd, lint.format, lint.output);
  add_jobs(lint_cmd, lint.jobs);

  oie::CorrelateOptions corr;
  auto* corr_cmd =
      app.add_subcommand("correlate", "Pearson correlation of score columns");
  corr_cmd->add_option("-s,--scores", corr.scores, "score table TSV")
      ->required();
  corr_cmd->add_option("--pair", corr.pairs, "X:Y, repeatable");
  corr_cmd->add_option("--target", corr.target,
                       "correlate every column against this one");
  add_format(corr_cmd, corr.format, corr.output);

  oie::BaselineOptions base;
  auto* base_cmd =
      app.add_subcommand("baseline", "token-overlap comparison scorer");
  base_cmd->add_option("-g,--gold", base.gold)->required();
  base_cmd->add_option("-e,--extractions", base.extractions)->required();
  add_format(base_cmd, base.format, base.output);

  oie::AbqaOptions abqa;
  std::string abqa_matcher = "em+af+lod+punc";
  auto* abqa_cmd = app.add_subcommand("abqa", "answer-based QA score");
  abqa_cmd->add_option("--answers", abqa.answers,
                       "answer clusters per passage, gold format")
      ->required();
  abqa_cmd->add_option("-e,--extractions", abqa.extractions)->required();
  abqa_cmd->add_option("-m,--matcher", abqa_matcher)
      ->check(CLI::IsMember(kMatcherNames));
  add_format(abqa_cmd, abqa.format, abqa.output);

  oie::LengthOptions length;
  auto* length_cmd =
      app.add_subcommand("length", "mean extraction length in tokens");
  length_cmd->add_option("-e,--extractions", length.extractions)->required();
  add_format(length_cmd, length.format, length.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : oie::kExitPrecondition;
  }

  if (score_cmd->parsed()) {
    score.matcher = *oie::MatcherConfig::from_name(score_matcher);
    return oie::run_score(score, std::cout, std::cerr);
  }
  if (eval_cmd->parsed()) {
    if (!eval_matchers.empty()) {
      eval.matchers.clear();
      for (const auto& m : eval_matchers) {
        if (m == "all") {
          for (const auto& n : kMatcherNames) {
            eval.matchers.push_back(*oie::MatcherConfig::from_name(n));
          }
        } else {
          eval.matchers.push_back(*oie::MatcherConfig::from_name(m));
        }
      }
    }
    return oie::run_match_eval(eval, std::cout, std::cerr);
  }
  if (lint_cmd->parsed()) return oie::run_lint(lint, std::cout, std::cerr);
  if (corr_cmd->parsed()) return oie::run_correlate(corr, std::cout, std::cerr);
  if (base_cmd->parsed()) return oie::run_baseline(base, std::cout, std::cerr);
  if (abqa_cmd->parsed()) {
    abqa.matcher = *oie::MatcherConfig::from_name(abqa_matcher);
    return oie::run_abqa(abqa, std::cout, std::cerr);
  }
  return oie::run_length(length, std::cout, std::cerr);
}
