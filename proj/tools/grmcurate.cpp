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

// grmcurate: curate judge rationales and evaluate pairwise judges.
//
//   grmcurate --config run.cfg generate --stage zero
//   grmcurate --config run.cfg score-select
//   grmcurate --config run.cfg rl-export --stage zero
//   grmcurate --config run.cfg mine-hard
//   grmcurate --config run.cfg eval
//   grmcurate --config run.cfg report --format markdown

#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "grmcurate/core/errors.hpp"
#include "grmcurate/kernels/kernels.hpp"
#include "grmcurate/pipeline/commands.hpp"

namespace gp = grmcurate::pipeline;

int main(int argc, char** argv) {
  // Logs go to stderr; stdout carries summaries and rendered reports.
  spdlog::set_default_logger(spdlog::stderr_color_mt("grmcurate"));

  CLI::App app{"Rationale curation and pairwise judge evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool fail_fast = false;
  std::optional<std::int64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "Pipeline configuration file")->required();
  app.add_option("--out", out_dir, "Output directory (overrides paths.out_dir)");
  app.add_flag("--fail-fast", fail_fast, "Abort on the first per-example failure");
  app.add_option("--seed", seed, "Sampling seed for every stage");
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string stage_name = "zero";
  auto* generate = app.add_subcommand("generate", "Sample, segment and judge generation groups");
  generate->add_option("--stage", stage_name, "zero | sft_curation | hard_mining")
      ->capture_default_str();

  app.add_subcommand("score-select", "Pick the best correct rationale per example (SFT set)");

  std::string export_stage = "zero";
  auto* rl_export = app.add_subcommand("rl-export", "Gate groups and export rewards/advantages");
  rl_export->add_option("--stage", export_stage, "Stage whose generations to export")
      ->capture_default_str();
  bool exclude_all_incorrect = false;

  auto* mine_hard = app.add_subcommand("mine-hard", "Collect examples not solved N out of N");
  mine_hard->add_flag("--exclude-all-incorrect", exclude_all_incorrect,
                      "Leave out examples with zero correct samples");

  bool best_of_n = false;
  auto* eval = app.add_subcommand("eval", "Evaluate the eval endpoint on the eval dataset");
  eval->add_flag("--bon", best_of_n, "Eval dataset holds best-of-n instances");

  std::string format = "markdown";
  auto* report = app.add_subcommand("report", "Render the report from stored eval outcomes");
  report->add_option("--format", format, "markdown | json")
      ->check(CLI::IsMember({"markdown", "json"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::debug);
  spdlog::debug("reduction kernels: {}", grmcurate::kernels::to_string(grmcurate::kernels::active_isa()));

  gp::PipelineConfig cfg;
  try {
    cfg = gp::load_config(config_path, gp::process_environment());
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (fail_fast) cfg.flags.fail_fast = true;
    if (exclude_all_incorrect) cfg.flags.exclude_all_incorrect = true;
    if (seed)
      for (auto stage : {gp::Stage::Zero, gp::Stage::SftCuration, gp::Stage::HardMining,
                         gp::Stage::Eval}) {
        if (!cfg.endpoints.contains(stage)) continue;
        auto s = cfg.sampling_for(stage);
        s.seed = seed;
        cfg.sampling[stage] = s;
      }
    cfg.validate();
    if (*generate) {
      const auto stage = gp::parse_stage(stage_name);
      if (stage == gp::Stage::Eval) throw grmcurate::ConfigError("generate does not run the eval stage");
      cfg.endpoint(stage);
    }
    if (*eval) cfg.endpoint(gp::Stage::Eval);
  } catch (const grmcurate::Error& e) {
    std::cerr << "config invalid: " << e.what() << "\n";
    return static_cast<int>(gp::ExitCode::ConfigInvalid);
  }

  gp::CommandResult result;
  std::string rendered;
  try {
    if (*generate)
      result = gp::cmd_generate(cfg, gp::parse_stage(stage_name));
    else if (app.got_subcommand("score-select"))
      result = gp::cmd_score_select(cfg);
    else if (*rl_export)
      result = gp::cmd_rl_export(cfg, gp::parse_stage(export_stage));
    else if (*mine_hard)
      result = gp::cmd_mine_hard(cfg);
    else if (*eval)
      result = gp::cmd_eval(cfg, best_of_n);
    else if (*report)
      result = gp::cmd_report(cfg,
                              format == "json" ? grmcurate::evalbench::ReportFormat::Json
                                               : grmcurate::evalbench::ReportFormat::MarkdownTable,
                              rendered);
  } catch (const grmcurate::ConfigError& e) {
    std::cerr << "config invalid: " << e.what() << "\n";
    return static_cast<int>(gp::ExitCode::ConfigInvalid);
  } catch (const grmcurate::TransportError& e) {
    std::cerr << "endpoint error: " << e.what() << "\n";
    return static_cast<int>(e.unreachable() ? gp::ExitCode::EndpointUnreachable
                                            : gp::ExitCode::Failure);
  } catch (const grmcurate::EmptyRunError& e) {
    std::cerr << "empty run: " << e.what() << "\n";
    return static_cast<int>(gp::ExitCode::EmptyRun);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(gp::ExitCode::Failure);
  }

  std::cout << rendered << result.summary << "\n";
  return static_cast<int>(result.code);
}
