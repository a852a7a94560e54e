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

// Run manifests and the JSON / aligned-text renderings of every report.

#ifndef OIE_REPORT_HPP_
#define OIE_REPORT_HPP_

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "oie/lint.hpp"
#include "oie/matcher.hpp"
#include "oie/scorer.hpp"

namespace oie {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                  nullptr)) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

// UTC ISO-8601. SOURCE_DATE_EPOCH, when set, replaces the clock.
inline std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<InputDigest> inputs;
  std::optional<MatcherConfig> matcher;
  std::string version = std::string(kToolkitVersion);
  std::string timestamp = utc_timestamp();
};

using nlohmann::ordered_json;

inline ordered_json to_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["inputs"] = ordered_json::array();
  for (const auto& in : m.inputs) {
    j["inputs"].push_back(
        {{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  }
  j["matcher"] = m.matcher ? ordered_json(m.matcher->name()) : ordered_json();
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  return j;
}

// Both precision fields are 0 when undefined; the flags say so explicitly.
inline ordered_json to_json(const ScoreReport& r, bool per_sentence = true) {
  ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["precision_undefined"] = r.precision_undefined;
  j["recall_undefined"] = r.recall_undefined;
  j["matched_extractions"] = r.matched_extractions;
  j["total_extractions"] = r.total_extractions;
  j["matched_clusters"] = r.matched_clusters;
  j["total_clusters"] = r.total_clusters;
  j["orphan_extractions"] = r.orphan_extractions;
  if (per_sentence) {
    j["per_sentence"] = ordered_json::array();
    for (const auto& s : r.per_sentence) {
      j["per_sentence"].push_back({{"sent_id", s.sent_id},
                                   {"precision", s.precision()},
                                   {"recall", s.recall()},
                                   {"f1", s.f1()},
                                   {"matched_extractions", s.matched_extractions},
                                   {"total_extractions", s.total_extractions},
                                   {"matched_clusters", s.matched_clusters},
                                   {"total_clusters", s.total_clusters}});
    }
  }
  return j;
}

inline ordered_json to_json(const MatchEvalReport& r) {
  return ordered_json{{"precision", r.precision},
                      {"recall", r.recall},
                      {"f1", r.f1},
                      {"correct_match", r.correct_match},
                      {"wrong_cluster", r.wrong_cluster},
                      {"spurious_match", r.spurious_match},
                      {"missed_match", r.missed_match},
                      {"correct_none", r.correct_none},
                      {"pairs", r.total()}};
}

inline ordered_json to_json(const Finding& f) {
  ordered_json j;
  j["kind"] = finding_kind_name(f.kind);
  j["severity"] = severity_name(f.severity);
  j["sent_id"] = f.sent_id;
  j["clusters"] = f.clusters;
  j["witnesses"] = f.witnesses;
  if (!f.detail.empty()) j["detail"] = f.detail;
  if (!f.mode.empty()) j["mode"] = f.mode;
  if (!f.direction.empty()) j["direction"] = f.direction;
  return j;
}

inline ordered_json to_json(const Correlation& c) {
  ordered_json j;
  j["x"] = c.x;
  j["y"] = c.y;
  j["n"] = c.n;
  if (c.coefficient) j["coefficient"] = *c.coefficient;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

// Plain-text table with left-aligned columns separated by two spaces.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
  }

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) {
        width[i] = std::max(width[i], r[i].size());
      }
    }
    std::string out;
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
      }
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline std::string render_manifest_text(const RunManifest& m) {
  std::string out = "# oie-eval " + m.version + " " + m.command + "\n";
  if (m.matcher) out += "# matcher: " + m.matcher->name() + "\n";
  for (const auto& in : m.inputs) {
    out += "# " + in.role + ": " + in.path + " sha256:" + in.sha256 + "\n";
  }
  out += "# timestamp: " + m.timestamp + "\n";
  return out;
}

}  // namespace oie

#endif  // OIE_REPORT_HPP_
