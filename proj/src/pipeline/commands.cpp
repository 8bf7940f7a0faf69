// Copyright 2026 The grmcurate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grmcurate/pipeline/commands.hpp"

#include <ctime>
#include <fstream>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "grmcurate/core/dataset.hpp"
#include "grmcurate/core/errors.hpp"
#include "grmcurate/core/jsonl.hpp"
#include "grmcurate/core/parallel.hpp"
#include "grmcurate/rlgate/rlgate.hpp"
#include "grmcurate/rstar/rstar.hpp"

namespace grmcurate::pipeline {

namespace fs = std::filesystem;

namespace {

std::string stage_name(Stage s) { return std::string(to_string(s)); }

fs::path partial_path(const fs::path& out) {
  auto p = out;
  p += ".partial";
  return p;
}

std::string report_timestamp(const PipelineConfig& cfg) {
  if (cfg.report_timestamp) return *cfg.report_timestamp;
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0')
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool excessive(std::size_t failed, std::size_t attempted) {
  return attempted > 0 &&
         static_cast<double>(failed) > kMaxErroredFraction * static_cast<double>(attempted);
}

/// Canonical lines of groups already on disk, keyed by example id.
std::unordered_map<std::string, std::string> completed_groups(
    const fs::path& out, const std::unordered_set<std::string>& wanted) {
  std::unordered_map<std::string, std::string> done;
  auto absorb = [&](const fs::path& p, ErrorPolicy policy) {
    if (!fs::exists(p)) return;
    RecordReader<GenerationGroup> reader(p, policy);
    while (auto g = reader.next()) {
      if (wanted.contains(g->example_id()))
        done.insert_or_assign(g->example_id(), canonical_json(Codec<GenerationGroup>::encode(*g)));
    }
    for (const auto& e : reader.skipped())
      spdlog::warn("{}:{}: dropping unreadable progress line", p.string(), e.line);
  };
  absorb(out, ErrorPolicy::FailFast);
  // A crash can leave a torn final line in the progress log.
  absorb(partial_path(out), ErrorPolicy::SkipAndLog);
  return done;
}

std::vector<GenerationGroup> load_groups(const PipelineConfig& cfg, Stage stage) {
  const auto path = cfg.generations_path(stage);
  if (!fs::exists(path))
    throw IoError("no generations for stage '" + stage_name(stage) + "' at " + path.string() +
                  " (run `generate --stage " + stage_name(stage) + "` first)");
  return read_records<GenerationGroup>(path);
}

evalbench::RunMetadata eval_metadata(const PipelineConfig& cfg) {
  const ModelEndpoint& ep = cfg.endpoint(Stage::Eval);
  return {ep.base_url, ep.model_name, cfg.tmpl.fingerprint(), cfg.sampling_for(Stage::Eval),
          cfg.flags.swap_positions, report_timestamp(cfg)};
}

std::vector<PreferenceExample> eval_examples(const PipelineConfig& cfg, bool best_of_n) {
  if (!best_of_n) return load_dataset(cfg.eval_dataset);
  std::vector<PreferenceExample> out;
  for (const auto& inst : evalbench::load_best_of_n(cfg.eval_dataset)) {
    auto pairs = evalbench::expand_best_of_n(inst);
    out.insert(out.end(), std::make_move_iterator(pairs.begin()),
               std::make_move_iterator(pairs.end()));
  }
  return out;
}

}  // namespace

GenerationRecord make_record(const std::string& example_id, std::size_t sample_index,
                             const client::Completion& completion,
                             const client::PromptTemplate& tmpl,
                             const judge::VerdictExtractor& extractor, Label label) {
  GenerationRecord::Fields f;
  f.example_id = example_id;
  f.sample_index = sample_index;
  f.full_text = completion.text;
  try {
    auto seg = client::segment(completion, tmpl);
    f.verdict = extractor.extract(seg.answer_text).choice;
    f.reasoning_text = std::move(seg.reasoning_text);
    f.reasoning_probs = std::move(seg.reasoning_probs);
    f.answer_text = std::move(seg.answer_text);
    f.answer_probs = std::move(seg.answer_probs);
  } catch (const SegmentationError& e) {
    spdlog::debug("example '{}' sample {}: {}", example_id, sample_index, e.what());
    f.verdict = VerdictChoice::Unparseable;
  }
  f.correct = matches(f.verdict, label);
  return GenerationRecord(std::move(f));
}

CommandResult cmd_generate(const PipelineConfig& cfg, Stage stage) {
  const ModelEndpoint& ep = cfg.endpoint(stage);
  const client::SamplingConfig sampling = cfg.sampling_for(stage);
  const judge::VerdictExtractor extractor(cfg.tmpl.answer_pattern(), cfg.match_policy);
  const auto examples = load_dataset(cfg.dataset_for(stage));

  fs::create_directories(cfg.out_dir);
  const fs::path out = cfg.generations_path(stage);
  const fs::path partial = partial_path(out);

  std::unordered_set<std::string> ids;
  for (const auto& ex : examples) ids.insert(ex.id());
  auto lines = completed_groups(out, ids);
  const std::size_t resumed = lines.size();

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < examples.size(); ++i)
    if (!lines.contains(examples[i].id())) pending.push_back(i);

  const std::string tag = "generate[" + stage_name(stage) + "]";
  if (pending.empty() && !fs::exists(partial) && fs::exists(out))
    return {ExitCode::Ok, fmt::format("{}: {} groups already complete, nothing to do", tag,
                                      examples.size())};

  std::size_t failed = 0;
  std::size_t fresh = 0;
  std::optional<CommandResult> abort;
  if (!pending.empty()) {
    client::CompletionClient client(ep);
    JsonlAppender progress(partial);
    std::mutex mu;
    parallel_for(pending.size(), static_cast<std::size_t>(ep.max_in_flight), [&](std::size_t k) {
      {
        std::lock_guard lock(mu);
        if (abort) return;
      }
      const PreferenceExample& ex = examples[pending[k]];
      try {
        const auto completions =
            client.sample_generations(client::render_prompt(cfg.tmpl, ex), sampling);
        std::vector<GenerationRecord> records;
        records.reserve(completions.size());
        for (std::size_t i = 0; i < completions.size(); ++i)
          records.push_back(make_record(ex.id(), i, completions[i], cfg.tmpl, extractor, ex.label()));
        const json encoded = Codec<GenerationGroup>::encode(GenerationGroup(ex.id(), std::move(records)));
        std::lock_guard lock(mu);
        progress.write(encoded);
        lines.insert_or_assign(ex.id(), canonical_json(encoded));
        ++fresh;
      } catch (const TransportError& e) {
        std::lock_guard lock(mu);
        if (e.unreachable()) {
          if (!abort)
            abort = CommandResult{ExitCode::EndpointUnreachable,
                                  tag + ": endpoint unreachable: " + e.what()};
          return;
        }
        spdlog::error("{}: example '{}': {}", tag, ex.id(), e.what());
        ++failed;
        if (cfg.flags.fail_fast && !abort)
          abort = CommandResult{ExitCode::ExcessiveErrors,
                                tag + ": aborted on first failure (--fail-fast): " + e.what()};
      } catch (const ConfigError& e) {
        std::lock_guard lock(mu);
        if (!abort) abort = CommandResult{ExitCode::ConfigInvalid, tag + ": " + e.what()};
      }
    });
  }
  if (abort) {
    abort->summary += fmt::format(" ({} groups kept in {})", fresh, partial.string());
    return *abort;
  }

  AtomicJsonlWriter writer(out);
  for (const auto& ex : examples)
    if (auto it = lines.find(ex.id()); it != lines.end()) writer.write_line(it->second);
  const std::size_t written = writer.commit();
  std::error_code ec;
  fs::remove(partial, ec);

  CommandResult result;
  result.code = excessive(failed, pending.size()) ? ExitCode::ExcessiveErrors : ExitCode::Ok;
  result.summary = fmt::format("{}: {} groups written ({} new, {} resumed), {} failed", tag,
                               written, fresh, resumed, failed);
  return result;
}

CommandResult cmd_score_select(const PipelineConfig& cfg) {
  const Stage stage = cfg.score_select_stage;
  const auto examples = load_dataset(cfg.dataset_for(stage));
  const auto groups = load_groups(cfg, stage);
  const auto build = rstar::build_sft_dataset(examples, groups, cfg.tmpl);
  fs::create_directories(cfg.out_dir);
  const auto summary = rstar::write_sft_dataset(build, cfg.sft_path(), cfg.sft_rejects_path());
  return {ExitCode::Ok, fmt::format("score-select[{}]: {} groups -> {} SFT records, {} rejects",
                                    stage_name(stage), groups.size(), summary.records,
                                    summary.rejects)};
}

CommandResult cmd_rl_export(const PipelineConfig& cfg, Stage stage) {
  const auto examples = load_dataset(cfg.dataset_for(stage));
  const auto groups = load_groups(cfg, stage);
  const auto exp = rlgate::export_rl_batch(examples, groups, cfg.tmpl);
  fs::create_directories(cfg.out_dir);
  rlgate::write_rl_export(exp, cfg.rl_export_path(stage), cfg.rl_skips_path(stage));
  return {ExitCode::Ok,
          fmt::format("rl-export[{}]: {} groups: Update={} SkipAllCorrect={} SkipAllIncorrect={}",
                      stage_name(stage), exp.stats.total(), exp.stats.update,
                      exp.stats.skip_all_correct, exp.stats.skip_all_incorrect)};
}

CommandResult cmd_mine_hard(const PipelineConfig& cfg) {
  const Stage stage = cfg.mine_hard_stage;
  const auto examples = load_dataset(cfg.dataset_for(stage));
  const auto groups = load_groups(cfg, stage);
  const auto hard = rlgate::mine_hard_cases(
      examples, groups, {cfg.rl_group_size, cfg.flags.exclude_all_incorrect});
  fs::create_directories(cfg.out_dir);
  AtomicJsonlWriter writer(cfg.hard_path());
  for (const auto& hc : hard) writer.write(rlgate::to_json(hc));
  writer.commit();
  std::size_t all_incorrect = 0;
  for (const auto& hc : hard)
    if (hc.correct_count == 0) ++all_incorrect;
  return {ExitCode::Ok,
          fmt::format("mine-hard[{}]: {} hard of {} groups ({} all-incorrect included, N={})",
                      stage_name(stage), hard.size(), groups.size(), all_incorrect,
                      cfg.rl_group_size)};
}

CommandResult cmd_eval(const PipelineConfig& cfg, bool best_of_n) {
  const ModelEndpoint& ep = cfg.endpoint(Stage::Eval);
  const auto examples = eval_examples(cfg, best_of_n);
  fs::create_directories(cfg.out_dir);

  using Key = std::pair<std::string, bool>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::string>{}(k.first) * 2 + (k.second ? 1 : 0);
    }
  };
  std::unordered_map<Key, evalbench::EvalOutcome, KeyHash> reuse;
  if (fs::exists(cfg.eval_outcomes_path())) {
    for (auto& o : read_records<evalbench::EvalOutcome>(cfg.eval_outcomes_path()))
      if (!o.errored()) reuse.insert_or_assign(Key{o.example_id, o.position_swapped}, std::move(o));
  }

  const std::size_t per_example = cfg.flags.swap_positions ? 2 : 1;
  std::vector<evalbench::EvalOutcome> outcomes(examples.size() * per_example);
  std::vector<std::size_t> pending;
  for (std::size_t slot = 0; slot < outcomes.size(); ++slot) {
    const auto& ex = examples[slot / per_example];
    auto it = reuse.find(Key{ex.id(), slot % per_example == 1});
    if (it != reuse.end())
      outcomes[slot] = it->second;
    else
      pending.push_back(slot);
  }

  if (!pending.empty()) {
    client::CompletionClient client(ep);
    const judge::VerdictExtractor extractor(cfg.tmpl.answer_pattern(), cfg.match_policy);
    const auto sampling = cfg.sampling_for(Stage::Eval);
    parallel_for(pending.size(), static_cast<std::size_t>(ep.max_in_flight), [&](std::size_t k) {
      const std::size_t slot = pending[k];
      const auto& ex = examples[slot / per_example];
      const bool swapped = slot % per_example == 1;
      outcomes[slot] = evalbench::judge_example(client, swapped ? ex.swapped() : ex, cfg.tmpl,
                                                extractor, sampling, swapped);
    });
    bool all_unreachable = true;
    for (auto slot : pending) {
      const auto& o = outcomes[slot];
      if (!o.errored() || o.error->rfind("unreachable", 0) != 0) {
        all_unreachable = false;
        break;
      }
    }
    if (all_unreachable)
      return {ExitCode::EndpointUnreachable,
              "eval: endpoint unreachable at " + ep.base_url + "; nothing written"};
  }

  const bool fresh_outputs = !pending.empty() || !fs::exists(cfg.report_json_path()) ||
                             !fs::exists(cfg.report_md_path());
  if (!pending.empty() || !fs::exists(cfg.eval_outcomes_path()))
    write_records<evalbench::EvalOutcome>(cfg.eval_outcomes_path(), outcomes);

  const auto scored = best_of_n ? evalbench::collapse_best_of_n(outcomes) : outcomes;
  evalbench::BenchmarkReport report;
  try {
    report = evalbench::aggregate(scored, eval_metadata(cfg));
  } catch (const EmptyRunError& e) {
    return {ExitCode::EmptyRun, std::string("eval: empty run: ") + e.what()};
  }
  if (fresh_outputs) {
    write_text_atomic(cfg.report_json_path(),
                      evalbench::render_report(report, evalbench::ReportFormat::Json));
    write_text_atomic(cfg.report_md_path(),
                      evalbench::render_report(report, evalbench::ReportFormat::MarkdownTable));
  }

  CommandResult result;
  result.code = excessive(report.errored, report.attempted) ? ExitCode::ExcessiveErrors
                                                            : ExitCode::Ok;
  result.summary = fmt::format(
      "eval: macro {:.2f}, micro {:.2f}, position consistency {}, {} requests ({} new, {} errored)",
      report.macro_average * 100.0, report.micro_average * 100.0,
      report.position_consistency ? fmt::format("{:.2f}", *report.position_consistency * 100.0)
                                  : std::string("n/a"),
      report.attempted, pending.size(), report.errored);
  return result;
}

CommandResult cmd_report(const PipelineConfig& cfg, evalbench::ReportFormat format,
                         std::string& rendered) {
  if (!fs::exists(cfg.eval_outcomes_path()))
    throw IoError("no evaluation outcomes at " + cfg.eval_outcomes_path().string() +
                  " (run `eval` first)");
  const auto outcomes = read_records<evalbench::EvalOutcome>(cfg.eval_outcomes_path());
  evalbench::RunMetadata metadata;
  if (fs::exists(cfg.report_json_path())) {
    std::ifstream in(cfg.report_json_path());
    metadata = Codec<evalbench::BenchmarkReport>::decode(json::parse(in)).run_metadata;
  } else {
    metadata = eval_metadata(cfg);
  }
  bool best_of_n = false;
  for (const auto& o : outcomes)
    if (o.example_id.find("::") != std::string::npos) best_of_n = true;
  evalbench::BenchmarkReport report;
  try {
    report = evalbench::aggregate(best_of_n ? evalbench::collapse_best_of_n(outcomes) : outcomes,
                                  std::move(metadata));
  } catch (const EmptyRunError& e) {
    return {ExitCode::EmptyRun, std::string("report: empty run: ") + e.what()};
  }
  rendered = evalbench::render_report(report, format);
  return {excessive(report.errored, report.attempted) ? ExitCode::ExcessiveErrors : ExitCode::Ok,
          fmt::format("report: macro {:.2f} over {} categories", report.macro_average * 100.0,
                      report.per_category.size())};
}

}  // namespace grmcurate::pipeline
