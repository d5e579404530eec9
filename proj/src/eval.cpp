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

#include "cdengine/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>

#include "cdengine/calibrate.hpp"
#include "cdengine/error.hpp"

namespace cdengine {
namespace {

struct MethodOutcome {
  AnswerClass answer = AnswerClass::Other;
  double entropy = 0.0;
  double confidence = 0.0;
  double pdd = 0.0;
};

struct VariantOutcome {
  VariantTag tag;
  double entropy = 0.0;
  double confidence = 0.0;
  double pdd = 0.0;
};

struct ItemOutcome {
  std::size_t vocab_size = 0;
  std::vector<MethodOutcome> methods;
  std::vector<VariantOutcome> variants;
};

ItemOutcome evaluate_item(const QAItem& item, const LogitProvider& provider, const std::vector<Method>& methods) {
  const LogitVector original = provider.logits(item.sample_id, OriginalVariant{});
  const Distribution p_original = softmax(original);
  const AnswerTokenMap answers = provider.answer_tokens(item.sample_id);

  ItemOutcome out;
  out.vocab_size = original.vocab_size();

  // Fetch each distinct variant once per item.
  std::vector<std::pair<std::string, LogitVector>> cache;
  auto fetch = [&](const VariantKind& v) -> const LogitVector& {
    const std::string key = variant_key(v);
    for (const auto& [k, logits] : cache) {
      if (k == key) return logits;
    }
    cache.emplace_back(key, provider.logits(item.sample_id, v));
    const auto& logits = cache.back().second;
    if (logits.vocab_size() != original.vocab_size()) {
      throw Error(ErrorCode::ShapeMismatch, "sample " + item.sample_id + ": " + key + " vocab differs from original");
    }
    const Distribution p = softmax(logits);
    out.variants.push_back({tag_of(v), p.entropy(), p.confidence(), hellinger(p_original, p)});
    return logits;
  };

  out.methods.reserve(methods.size());
  for (const auto& method : methods) {
    if (method.baseline) {
      out.methods.push_back({classify_answer(p_original, answers), p_original.entropy(), p_original.confidence(), 0.0});
      continue;
    }
    CalibrationInput input{original, {}, method.config};
    for (const auto& v : method.variants) input.variants.emplace_back(v, fetch(v));
    const CalibrationOutput result = calibrate(input);
    const Distribution& d = result.distribution;
    out.methods.push_back({classify_answer(d, answers), d.entropy(), d.confidence(), hellinger(p_original, d)});
  }
  return out;
}

DistributionHistograms make_histograms(std::size_t vocab_size, std::size_t bins) {
  return {Histogram(0.0, std::log(static_cast<double>(std::max<std::size_t>(vocab_size, 2))), bins),
          Histogram(0.0, 1.0, bins), Histogram(0.0, 1.0, bins)};
}

}  // namespace

std::size_t default_thread_count() {
  if (const char* env = std::getenv("CD_ENGINE_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<double>> overlap_matrix(const std::vector<std::set<std::string>>& sets) {
  const std::size_t n = sets.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i][j] = m[j][i] = jaccard(sets[i], sets[j]);
    }
  }
  return m;
}

EvalReport run_eval(const std::vector<QAItem>& items, const LogitProvider& provider,
                    const std::vector<Method>& requested, const EvalOptions& options) {
  if (items.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no items");
  for (const auto& item : items) {
    if (item.gold == AnswerClass::Other) throw Error(ErrorCode::InvalidGold, "item " + item.sample_id);
  }

  std::vector<Method> methods;
  const auto baseline = std::find_if(requested.begin(), requested.end(), [](const Method& m) { return m.baseline; });
  methods.push_back(baseline != requested.end() ? *baseline : *method_preset("original"));
  for (const auto& m : requested) {
    if (!m.baseline) {
      m.config.validate();
      methods.push_back(m);
    }
  }

  std::vector<std::optional<ItemOutcome>> outcomes(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
      try {
        outcomes[i] = evaluate_item(items[i], provider, methods);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(options.threads == 0 ? default_thread_count() : options.threads, 1, items.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Aggregate serially in item order so the report is schedule-invariant.
  EvalReport report;
  report.item_count = items.size();
  for (const auto& o : outcomes) report.vocab_size = std::max(report.vocab_size, o->vocab_size);

  std::set<std::string> extra_columns;
  for (const auto& item : items) {
    const std::string col = table_column(item.task_tag);
    if (col != "P-R" && col != "P-P" && col != "P-A" && col != "MME") extra_columns.insert(col);
  }
  report.columns = {"P-R", "P-P", "P-A", "MME"};
  report.columns.insert(report.columns.end(), extra_columns.begin(), extra_columns.end());

  for (const auto& m : methods) {
    MethodReport mr{m.name, m.label, {}, {}, 0.0, 0.0, {}, {}, {}, make_histograms(report.vocab_size, options.histogram_bins)};
    report.methods.push_back(std::move(mr));
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const auto& outcome = *outcomes[i];
    const AnswerClass original_answer = outcome.methods.front().answer;
    const std::string column = table_column(item.task_tag);
    for (std::size_t k = 0; k < methods.size(); ++k) {
      const auto& mo = outcome.methods[k];
      auto& mr = report.methods[k];
      const bool correct = mo.answer == item.gold;
      auto& task = mr.per_task[item.task_tag];
      auto& col = mr.per_column[column];
      ++task.total;
      ++col.total;
      if (correct) {
        ++task.correct;
        ++col.correct;
      }
      const RevisionClass rc = classify_revision(original_answer, mo.answer, item.gold);
      ++mr.revisions[static_cast<std::size_t>(rc)];
      ++mr.tendency[static_cast<std::size_t>(mo.answer)];
      if (rc == RevisionClass::ReviseCorrect) mr.revise_correct.insert(item.sample_id);
      mr.histograms.entropy.add(mo.entropy);
      mr.histograms.confidence.add(mo.confidence);
      mr.histograms.pdd.add(mo.pdd);
    }
    for (const auto& vo : outcome.variants) {
      auto it = report.variant_histograms.find(vo.tag);
      if (it == report.variant_histograms.end()) {
        it = report.variant_histograms.emplace(vo.tag, make_histograms(report.vocab_size, options.histogram_bins)).first;
      }
      it->second.entropy.add(vo.entropy);
      it->second.confidence.add(vo.confidence);
      it->second.pdd.add(vo.pdd);
    }
  }

  for (auto& mr : report.methods) {
    std::uint64_t correct = 0;
    double column_sum = 0.0;
    std::size_t column_count = 0;
    for (const auto& c : report.columns) {
      const auto it = mr.per_column.find(c);
      if (it == mr.per_column.end()) continue;
      correct += it->second.correct;
      column_sum += it->second.accuracy();
      ++column_count;
    }
    mr.micro_accuracy = static_cast<double>(correct) / static_cast<double>(items.size());
    mr.overall = column_sum / static_cast<double>(column_count);
  }

  std::vector<std::set<std::string>> sets;
  for (const auto& mr : report.methods) {
    if (mr.name == methods.front().name) continue;
    report.overlap_methods.push_back(mr.name);
    sets.push_back(mr.revise_correct);
  }
  if (sets.size() >= 2) report.overlap = overlap_matrix(sets);
  return report;
}

}  // namespace cdengine
