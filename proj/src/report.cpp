// Copyright 2026 The cd-engine Authors
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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cdengine/error.hpp"
#include "cdengine/eval.hpp"

namespace cdengine {
namespace {

using nlohmann::json;

constexpr std::array<RevisionClass, 4> kRevisions{RevisionClass::UnchangedCorrect, RevisionClass::UnchangedWrong,
                                                  RevisionClass::ReviseCorrect, RevisionClass::ReviseWrong};
constexpr std::array<AnswerClass, 3> kAnswers{AnswerClass::Yes, AnswerClass::No, AnswerClass::Other};

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json histogram_json(const Histogram& h) { return json{{"lo", h.lo()}, {"hi", h.hi()}, {"counts", h.counts()}}; }

json histograms_json(const DistributionHistograms& h) {
  return json{{"entropy", histogram_json(h.entropy)},
              {"confidence", histogram_json(h.confidence)},
              {"pdd", histogram_json(h.pdd)}};
}

void histogram_rows(std::ostringstream& out, const std::string& scope, const std::string& name,
                    const DistributionHistograms& h) {
  const std::pair<const char*, const Histogram*> metrics[] = {
      {"entropy", &h.entropy}, {"confidence", &h.confidence}, {"pdd", &h.pdd}};
  for (const auto& [metric, hist] : metrics) {
    const auto& counts = hist->counts();
    const double width = (hist->hi() - hist->lo()) / static_cast<double>(counts.size());
    for (std::size_t b = 0; b < counts.size(); ++b) {
      out << scope << ',' << name << ',' << metric << ',' << b << ',' << fixed6(hist->lo() + width * b) << ','
          << fixed6(hist->lo() + width * (b + 1)) << ',' << counts[b] << '\n';
    }
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json j;
  j["items"] = report.item_count;
  j["vocab_size"] = report.vocab_size;
  j["columns"] = report.columns;
  j["overall_aggregation"] = "plain mean of column accuracies";
  j["methods"] = json::array();
  for (const auto& m : report.methods) {
    json mj;
    mj["name"] = m.name;
    mj["label"] = m.label;
    for (const auto& [tag, t] : m.per_task) {
      mj["per_task"][tag] = {{"correct", t.correct}, {"total", t.total}, {"accuracy", t.accuracy()}};
    }
    for (const auto& [col, t] : m.per_column) {
      mj["per_column"][col] = {{"correct", t.correct}, {"total", t.total}, {"accuracy", t.accuracy()}};
    }
    mj["overall"] = m.overall;
    mj["micro_accuracy"] = m.micro_accuracy;
    for (auto rc : kRevisions) mj["revisions"][std::string(to_string(rc))] = m.revisions[static_cast<std::size_t>(rc)];
    for (auto ac : kAnswers) mj["tendency"][std::string(to_string(ac))] = m.tendency[static_cast<std::size_t>(ac)];
    mj["revise_correct"] = m.revise_correct;
    mj["histograms"] = histograms_json(m.histograms);
    j["methods"].push_back(std::move(mj));
  }
  j["overlap"] = {{"methods", report.overlap_methods}, {"matrix", report.overlap}};
  j["variant_histograms"] = json::object();
  for (const auto& [tag, h] : report.variant_histograms) {
    j["variant_histograms"][std::string(kind_name(tag))] = histograms_json(h);
  }
  return j;
}

std::string table_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "method";
  for (const auto& c : report.columns) out << ',' << c;
  out << ",All\n";
  for (const auto& m : report.methods) {
    out << m.label;
    for (const auto& c : report.columns) {
      out << ',';
      if (const auto it = m.per_column.find(c); it != m.per_column.end()) out << fixed3(it->second.accuracy());
    }
    out << ',' << fixed3(m.overall) << '\n';
  }
  return out.str();
}

std::string revisions_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "method";
  for (auto rc : kRevisions) out << ',' << to_string(rc);
  out << '\n';
  for (const auto& m : report.methods) {
    out << m.name;
    for (auto rc : kRevisions) out << ',' << m.revisions[static_cast<std::size_t>(rc)];
    out << '\n';
  }
  return out.str();
}

std::string tendency_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "method";
  for (auto ac : kAnswers) out << ',' << to_string(ac);
  out << '\n';
  for (const auto& m : report.methods) {
    out << m.name;
    for (auto ac : kAnswers) out << ',' << m.tendency[static_cast<std::size_t>(ac)];
    out << '\n';
  }
  return out.str();
}

std::string overlap_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "method";
  for (const auto& name : report.overlap_methods) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < report.overlap.size(); ++i) {
    out << report.overlap_methods[i];
    for (double v : report.overlap[i]) out << ',' << fixed6(v);
    out << '\n';
  }
  return out.str();
}

std::string histograms_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "scope,name,metric,bin,lo,hi,count\n";
  for (const auto& m : report.methods) histogram_rows(out, "method", m.name, m.histograms);
  for (const auto& [tag, h] : report.variant_histograms) histogram_rows(out, "variant", std::string(kind_name(tag)), h);
  return out.str();
}

void write_report(const std::filesystem::path& dir, const EvalReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_text(dir / "table.csv", table_csv(report));
  write_text(dir / "revisions.csv", revisions_csv(report));
  write_text(dir / "tendency.csv", tendency_csv(report));
  write_text(dir / "overlap.csv", overlap_csv(report));
  write_text(dir / "histograms.csv", histograms_csv(report));
}

}  // namespace cdengine
