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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "cdengine/calibrate.hpp"
#include "cdengine/dataset.hpp"
#include "cdengine/error.hpp"
#include "cdengine/eval.hpp"
#include "cdengine/image_io.hpp"
#include "cdengine/methods.hpp"
#include "cdengine/perturb.hpp"
#include "cdengine/provider.hpp"
#include "cdengine/record_io.hpp"

namespace cdengine::cli {
namespace {

constexpr const char* kVersion = "cd-engine 0.1.0";

// Writes to `path`, or to `fallback` when path is "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  fn(file);
}

VariantKind variant_by_short_name(const std::string& name, const MethodOptions& opts) {
  if (name == "noise") return opts.noise;
  if (name == "downsample") return opts.downsample;
  if (name == "noimage") return NoImageVariant{};
  if (name == "edited") return opts.edited;
  throw Error(ErrorCode::InvalidArgument, "unknown variant '" + name + "'");
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct PerturbArgs {
  std::string input;
  std::string output;
  std::string kind = "noise";
  std::size_t steps = 500;
  std::size_t schedule_steps = NoiseSchedule::kDefaultSteps;
  int ratio = 32;
  std::uint64_t seed = 0;
  std::string kernel = "bilinear";
};

int run_perturb(const PerturbArgs& a, std::ostream& out) {
  if (a.kind == "blank") {
    out << variant_to_json(NoImageVariant{}).dump() << '\n';
    return kExitOk;
  }
  if (a.input.empty() || a.output.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--input and --output are required for --kind " + a.kind);
  }
  const ImageTensor image = load_image(a.input);
  ImageTensor result = image;
  if (a.kind == "noise") {
    result = diffuse(image, a.steps, NoiseSchedule::linear(a.schedule_steps), a.seed);
  } else {
    result = downsample(image, a.ratio, a.kernel == "nearest" ? ResizeKernel::Nearest : ResizeKernel::Bilinear);
  }
  save_image(a.output, result);
  return kExitOk;
}

struct CalibrateArgs {
  std::string records;
  std::string out = "-";
  std::string fusion = "single";
  std::string variant = "noise";
  std::string variants = "noise,noimage,downsample,edited";
  MethodOptions method;
};

int run_calibrate(const CalibrateArgs& a, std::ostream& out) {
  CalibrationConfig cfg;
  cfg.alpha = a.method.alpha;
  cfg.beta = a.method.beta;
  cfg.normalize_naive = a.method.normalize_naive;
  cfg.weight_scale = a.method.weight_scale;
  std::vector<VariantKind> variants;
  if (a.fusion == "single") {
    cfg.fusion = FusionMode::Single;
    variants.push_back(variant_by_short_name(a.variant, a.method));
  } else {
    cfg.fusion = a.fusion == "naive" ? FusionMode::Naive : FusionMode::Weighted;
    if (cfg.fusion == FusionMode::Weighted) cfg.metric = *parse_weight_metric(a.fusion);
    for (const auto& name : split_list(a.variants)) variants.push_back(variant_by_short_name(name, a.method));
  }
  cfg.validate();

  const ReplayProvider provider = ReplayProvider::from_file(a.records);
  // Compute everything before writing so a failing sample leaves no partial file.
  std::vector<std::string> lines;
  for (const auto& sample_id : provider.sample_ids()) {
    CalibrationInput input{provider.logits(sample_id, OriginalVariant{}), {}, cfg};
    for (const auto& v : variants) input.variants.emplace_back(v, provider.logits(sample_id, v));
    const CalibrationOutput result = calibrate(input);

    std::vector<TokenId> order(result.distribution.size());
    std::iota(order.begin(), order.end(), TokenId{0});
    const std::size_t top = std::min<std::size_t>(10, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](TokenId x, TokenId y) {
                        const double px = result.distribution[x];
                        const double py = result.distribution[y];
                        return px > py || (px == py && x < y);
                      });
    nlohmann::json top10 = nlohmann::json::array();
    for (std::size_t i = 0; i < top; ++i) top10.push_back({order[i], result.distribution[order[i]]});

    nlohmann::json j;
    j["sample_id"] = sample_id;
    j["argmax"] = result.distribution.argmax();
    j["top10"] = std::move(top10);
    j["weights"] = result.weights_used;
    j["survivor_count"] = result.survivors.size();
    lines.push_back(j.dump());
  }
  with_output(a.out, out, [&](std::ostream& os) {
    for (const auto& line : lines) os << line << '\n';
  });
  return kExitOk;
}

struct EvalArgs {
  std::string dataset;
  std::string records;
  bool mock = false;
  std::string mock_config;
  std::uint64_t seed = 0;
  std::string methods;
  std::string out_dir = "eval-out";
  std::size_t threads = 0;
  MethodOptions method;
};

int run_eval_command(const EvalArgs& a, std::ostream& out) {
  if (a.mock == !a.records.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --records or --mock");
  }
  std::string method_list = a.methods;
  if (method_list.empty()) {
    for (const auto& name : table_methods()) method_list += (method_list.empty() ? "" : ",") + name;
  }
  const auto methods = parse_methods(method_list, a.method);
  for (const auto& m : methods) m.config.validate();

  const auto items = load_dataset(a.dataset);
  std::unique_ptr<LogitProvider> provider;
  if (a.mock) {
    provider = std::make_unique<MockProvider>(
        a.mock_config.empty() ? MockScenario::defaults() : MockScenario::load(a.mock_config), a.seed);
  } else {
    provider = std::make_unique<ReplayProvider>(ReplayProvider::from_file(a.records));
  }
  EvalOptions options;
  options.threads = a.threads == 0 ? default_thread_count() : a.threads;
  const EvalReport report = run_eval(items, *provider, methods, options);
  write_report(a.out_dir, report);
  out << table_csv(report);
  return kExitOk;
}

int run_inspect(const std::string& path, std::ostream& out) {
  const RecordFile file = read_records(path);
  std::set<std::string> samples;
  std::set<std::size_t> vocabs;
  std::map<std::string, std::size_t> kinds;
  std::size_t sparse = 0;
  for (const auto& r : file.records) {
    samples.insert(r.sample_id);
    vocabs.insert(r.logits.vocab_size());
    ++kinds[std::string(kind_name(tag_of(r.variant)))];
    if (!r.logits.is_dense()) ++sparse;
  }
  out << "records: " << file.records.size() << '\n';
  out << "samples: " << samples.size() << '\n';
  out << "vocab_size:";
  if (vocabs.empty()) out << " none";
  for (auto v : vocabs) out << ' ' << v;
  out << '\n';
  out << "sparse_records: " << sparse << '\n';
  out << "header: " << (file.header ? "yes" : "no") << '\n';
  out << "variant_kinds:\n";
  for (const auto& [kind, count] : kinds) out << "  " << kind << ": " << count << '\n';
  return kExitOk;
}

void add_method_options(CLI::App* cmd, MethodOptions& m) {
  cmd->add_option("--alpha", m.alpha, "Contrast strength")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--beta", m.beta, "Plausibility threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--normalize-naive", m.normalize_naive, "Naive fusion subtracts alpha/k per variant");
  cmd->add_option("--weight-scale", m.weight_scale, "Multiplier on weighted-fusion weights")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--noise-steps", m.noise.steps, "Diffusion steps N of the noise variant")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ratio", m.downsample.ratio, "Downsample ratio r of the downsample variant")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cfg-text", m.edited.cfg_text, "Text guidance of the edited variant")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visual contrastive decoding engine: perturb images, calibrate logits, evaluate Yes/No QA."};
  app.name("cd-engine");
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.require_subcommand(1);

  PerturbArgs perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "Generate a visually changed image");
  perturb_cmd->add_option("--input", perturb.input, "Input image (.png or raw float)");
  perturb_cmd->add_option("--output", perturb.output, "Output image (.png or raw float)");
  perturb_cmd->add_option("--kind", perturb.kind, "Perturbation kind")
      ->capture_default_str()
      ->check(CLI::IsMember({"noise", "downsample", "blank"}));
  perturb_cmd->add_option("--steps", perturb.steps, "Diffusion steps N")->capture_default_str();
  perturb_cmd->add_option("--schedule-steps", perturb.schedule_steps, "Schedule length T")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  perturb_cmd->add_option("--ratio", perturb.ratio, "Downsample ratio r")->capture_default_str()->check(CLI::PositiveNumber);
  perturb_cmd->add_option("--seed", perturb.seed, "Noise seed")->capture_default_str();
  perturb_cmd->add_option("--kernel", perturb.kernel, "Resize kernel")
      ->capture_default_str()
      ->check(CLI::IsMember({"bilinear", "nearest"}));

  CalibrateArgs calib;
  auto* calib_cmd = app.add_subcommand("calibrate", "Calibrate every sample of a record file");
  calib_cmd->add_option("--records", calib.records, "Record file (JSON lines)")->required();
  calib_cmd->add_option("--fusion", calib.fusion, "Fusion mode")
      ->capture_default_str()
      ->check(CLI::IsMember({"single", "naive", "entropy", "confidence", "unconfidence", "pdd"}));
  calib_cmd->add_option("--variant", calib.variant, "Variant for --fusion single")
      ->capture_default_str()
      ->check(CLI::IsMember({"noise", "downsample", "noimage", "edited"}));
  calib_cmd->add_option("--variants", calib.variants, "Comma list of variants to fuse")->capture_default_str();
  calib_cmd->add_option("--out", calib.out, "Output JSON lines, - for stdout")->capture_default_str();
  add_method_options(calib_cmd, calib.method);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Run the Yes/No benchmark harness");
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset (JSON lines)")->required();
  auto* records_opt = eval_cmd->add_option("--records", eval.records, "Replay logits from a record file");
  auto* mock_opt = eval_cmd->add_flag("--mock", eval.mock, "Use the seeded mock provider");
  records_opt->excludes(mock_opt);
  eval_cmd->add_option("--mock-config", eval.mock_config, "Mock scenario JSON")->needs(mock_opt);
  eval_cmd->add_option("--seed", eval.seed, "Mock seed")->capture_default_str();
  eval_cmd->add_option("--methods", eval.methods, "Comma list of methods (default: table rows)");
  eval_cmd->add_option("--out-dir", eval.out_dir, "Report directory")->capture_default_str();
  eval_cmd->add_option("--threads", eval.threads, "Worker threads (default: CD_ENGINE_THREADS or all cores)");
  add_method_options(eval_cmd, eval.method);

  std::string import_input;
  std::string import_out = "-";
  std::string pope_split = "random";
  std::string mme_subtask;
  auto* import_cmd = app.add_subcommand("import", "Convert published benchmark files to dataset JSON lines");
  import_cmd->require_subcommand(1);
  auto* pope_cmd = import_cmd->add_subcommand("pope", "POPE question file");
  pope_cmd->add_option("--input", import_input, "POPE JSON lines")->required();
  pope_cmd->add_option("--split", pope_split, "POPE split")
      ->capture_default_str()
      ->check(CLI::IsMember({"random", "popular", "adversarial"}));
  pope_cmd->add_option("--out", import_out, "Dataset output, - for stdout")->capture_default_str();
  auto* mme_cmd = import_cmd->add_subcommand("mme", "MME subtask answer sheet");
  mme_cmd->add_option("--input", import_input, "Tab-separated image, question, answer")->required();
  mme_cmd->add_option("--subtask", mme_subtask, "MME subtask name")->required();
  mme_cmd->add_option("--out", import_out, "Dataset output, - for stdout")->capture_default_str();

  std::string inspect_records;
  auto* inspect_cmd = app.add_subcommand("inspect", "Validate and summarize a record file");
  inspect_cmd->add_option("--records", inspect_records, "Record file (JSON lines)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*perturb_cmd) return run_perturb(perturb, out);
    if (*calib_cmd) return run_calibrate(calib, out);
    if (*eval_cmd) return run_eval_command(eval, out);
    if (*inspect_cmd) return run_inspect(inspect_records, out);
    if (*import_cmd) {
      std::ifstream in(import_input);
      if (!in) throw Error(ErrorCode::IoError, "cannot open " + import_input);
      const auto items = *pope_cmd ? import_pope(in, pope_split) : import_mme(in, mme_subtask);
      with_output(import_out, out, [&](std::ostream& os) { write_dataset(os, items); });
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_data_error(e.code()) ? kExitData : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace cdengine::cli
