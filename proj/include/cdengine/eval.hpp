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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdengine/dataset.hpp"
#include "cdengine/methods.hpp"
#include "cdengine/metrics.hpp"
#include "cdengine/provider.hpp"

namespace cdengine {

struct Tally {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
  bool operator==(const Tally&) const = default;
};

struct DistributionHistograms {
  Histogram entropy;
  Histogram confidence;
  Histogram pdd;

  bool operator==(const DistributionHistograms&) const = default;
};

struct MethodReport {
  std::string name;
  std::string label;
  std::map<std::string, Tally> per_task;
  /// Keyed by report column (P-R, P-P, P-A, MME, or an unrecognized tag).
  std::map<std::string, Tally> per_column;
  /// Plain mean of the column accuracies.
  double overall = 0.0;
  /// correct / total over every item.
  double micro_accuracy = 0.0;
  /// Indexed by RevisionClass.
  std::array<std::uint64_t, 4> revisions{};
  /// Indexed by AnswerClass.
  std::array<std::uint64_t, 3> tendency{};
  std::set<std::string> revise_correct;
  /// Entropy and confidence of the calibrated distribution, and its
  /// Hellinger distance from the original distribution.
  DistributionHistograms histograms;
};

struct EvalReport {
  std::size_t item_count = 0;
  std::size_t vocab_size = 0;
  std::vector<std::string> columns;
  std::vector<MethodReport> methods;
  /// Non-baseline method names, and the Jaccard overlap of their
  /// revise-correct sets.
  std::vector<std::string> overlap_methods;
  std::vector<std::vector<double>> overlap;
  /// Per variant kind: entropy and confidence of the variant's distribution
  /// and its Hellinger distance from the original.
  std::map<VariantTag, DistributionHistograms> variant_histograms;
};

struct EvalOptions {
  /// Worker threads; 0 means hardware concurrency.
  std::size_t threads = 1;
  std::size_t histogram_bins = 50;
};

/// Evaluates every item under every method. The Original baseline is always
/// included as the first row. Results do not depend on the thread count.
EvalReport run_eval(const std::vector<QAItem>& items, const LogitProvider& provider,
                    const std::vector<Method>& methods, const EvalOptions& options = {});

/// Symmetric Jaccard matrix with unit diagonal.
std::vector<std::vector<double>> overlap_matrix(const std::vector<std::set<std::string>>& sets);

/// Thread count from CD_ENGINE_THREADS, falling back to hardware concurrency.
std::size_t default_thread_count();

nlohmann::json report_to_json(const EvalReport& report);
std::string table_csv(const EvalReport& report);
std::string revisions_csv(const EvalReport& report);
std::string tendency_csv(const EvalReport& report);
std::string overlap_csv(const EvalReport& report);
std::string histograms_csv(const EvalReport& report);

/// Writes report.json, table.csv, revisions.csv, tendency.csv, overlap.csv
/// and histograms.csv into `dir`, creating it if needed.
void write_report(const std::filesystem::path& dir, const EvalReport& report);

}  // namespace cdengine
