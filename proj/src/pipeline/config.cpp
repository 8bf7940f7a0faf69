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

#include "grmcurate/pipeline/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "grmcurate/core/errors.hpp"

extern char** environ;

namespace grmcurate::pipeline {
namespace {

constexpr std::array<Stage, 4> kStages = {Stage::Zero, Stage::SftCuration, Stage::HardMining,
                                          Stage::Eval};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

struct TemplateKeys {
  std::optional<std::filesystem::path> path;
  client::Segmentation segmentation = client::Segmentation::ThinkTags;
  std::string answer_pattern{judge::kDefaultAnswerPattern};
};

void set_endpoint_field(ModelEndpoint& ep, const std::string& key, const std::string& field,
                        const std::string& value) {
  if (field == "base_url")
    ep.base_url = value;
  else if (field == "model")
    ep.model_name = value;
  else if (field == "max_in_flight")
    ep.max_in_flight = parse_int<int>(key, value);
  else if (field == "timeout_ms")
    ep.timeout = std::chrono::milliseconds(parse_int<long long>(key, value));
  else if (field == "retry_limit")
    ep.retry_limit = parse_int<int>(key, value);
  else if (field == "backoff_ms")
    ep.initial_backoff = std::chrono::milliseconds(parse_int<long long>(key, value));
  else if (field == "api_key")
    ep.api_key = value;
  else
    throw ConfigError("unknown key '" + key + "'");
}

void set_sampling_field(client::SamplingConfig& s, const std::string& key,
                        const std::string& field, const std::string& value) {
  if (field == "num_samples")
    s.num_samples = parse_int<int>(key, value);
  else if (field == "temperature")
    s.temperature = parse_double(key, value);
  else if (field == "max_tokens")
    s.max_tokens = parse_int<int>(key, value);
  else if (field == "seed")
    s.seed = value.empty() ? std::nullopt : std::optional(parse_int<std::int64_t>(key, value));
  else
    throw ConfigError("unknown key '" + key + "'");
}

client::SamplingConfig default_sampling(Stage stage) {
  client::SamplingConfig s;
  if (stage == Stage::Eval) {
    s.num_samples = 1;
    s.temperature = 0.0;
  }
  return s;
}

}  // namespace

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Zero:
      return "zero";
    case Stage::SftCuration:
      return "sft_curation";
    case Stage::HardMining:
      return "hard_mining";
    case Stage::Eval:
      break;
  }
  return "eval";
}

Stage parse_stage(std::string_view text) {
  for (Stage s : kStages)
    if (text == to_string(s)) return s;
  throw ConfigError("unknown stage '" + std::string(text) +
                    "' (expected zero, sft_curation, hard_mining or eval)");
}

const ModelEndpoint& PipelineConfig::endpoint(Stage stage) const {
  auto it = endpoints.find(stage);
  if (it == endpoints.end())
    throw ConfigError("no endpoint configured for stage '" + std::string(to_string(stage)) +
                      "' (set endpoint." + std::string(to_string(stage)) + ".base_url)");
  return it->second;
}

client::SamplingConfig PipelineConfig::sampling_for(Stage stage) const {
  auto it = sampling.find(stage);
  return it == sampling.end() ? default_sampling(stage) : it->second;
}

std::filesystem::path PipelineConfig::dataset_for(Stage stage) const {
  if (stage == Stage::Eval) return eval_dataset;
  auto it = stage_datasets.find(stage);
  return it == stage_datasets.end() ? dataset : it->second;
}

std::filesystem::path PipelineConfig::generations_path(Stage stage) const {
  return out_dir / ("generations_" + std::string(to_string(stage)) + ".jsonl");
}

std::filesystem::path PipelineConfig::rl_export_path(Stage stage) const {
  return out_dir / ("rl_export_" + std::string(to_string(stage)) + ".jsonl");
}

std::filesystem::path PipelineConfig::rl_skips_path(Stage stage) const {
  return out_dir / ("rl_skips_" + std::string(to_string(stage)) + ".jsonl");
}

void PipelineConfig::validate() const {
  for (const auto& [stage, ep] : endpoints) {
    try {
      ep.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("endpoint." + std::string(to_string(stage)) + ": " + e.what());
    }
  }
  for (const auto& [stage, s] : sampling) {
    if (!endpoints.contains(stage))
      throw ConfigError("sampling configured for stage '" + std::string(to_string(stage)) +
                        "' which has no endpoint");
    try {
      s.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sampling." + std::string(to_string(stage)) + ": " + e.what());
    }
  }
  if (rl_group_size < 1) throw ConfigError("rl.group_size must be >= 1");

  std::set<std::filesystem::path> outputs;
  for (Stage s : kStages) {
    outputs.insert(generations_path(s).lexically_normal());
    outputs.insert(rl_export_path(s).lexically_normal());
    outputs.insert(rl_skips_path(s).lexically_normal());
  }
  for (const auto& p : {sft_path(), sft_rejects_path(), hard_path(), eval_outcomes_path(),
                        report_json_path(), report_md_path()})
    outputs.insert(p.lexically_normal());
  std::vector<std::filesystem::path> inputs = {dataset, eval_dataset};
  for (const auto& [stage, p] : stage_datasets) inputs.push_back(p);
  for (const auto& in : inputs) {
    // hard.jsonl is the one output meant to be fed back as a stage input.
    if (!in.empty() && in.lexically_normal() != hard_path().lexically_normal() &&
        outputs.contains(in.lexically_normal()))
      throw ConfigError("input path '" + in.string() + "' collides with an output path");
  }
}

Environment process_environment() {
  Environment env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view entry(*e);
    if (entry.rfind("GRMCURATE_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const Environment& env) {
  PipelineConfig cfg;
  TemplateKeys tmpl;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    const std::string rest = dot == std::string::npos ? "" : key.substr(dot + 1);

    if (section == "endpoint" || section == "sampling") {
      const auto dot2 = rest.find('.');
      if (dot2 == std::string::npos) throw ConfigError("unknown key '" + key + "'");
      const Stage stage = parse_stage(rest.substr(0, dot2));
      const std::string field = rest.substr(dot2 + 1);
      if (section == "endpoint")
        set_endpoint_field(cfg.endpoints[stage], key, field, value);
      else
        set_sampling_field(cfg.sampling.try_emplace(stage, default_sampling(stage)).first->second,
                           key, field, value);
    } else if (key == "paths.dataset") {
      cfg.dataset = resolve(base_dir, value);
    } else if (key.rfind("paths.dataset.", 0) == 0) {
      cfg.stage_datasets[parse_stage(key.substr(14))] = resolve(base_dir, value);
    } else if (key == "paths.eval_dataset") {
      cfg.eval_dataset = resolve(base_dir, value);
    } else if (key == "paths.out_dir") {
      cfg.out_dir = resolve(base_dir, value);
    } else if (key == "template.path") {
      tmpl.path = resolve(base_dir, value);
    } else if (key == "template.segmentation") {
      tmpl.segmentation = client::parse_segmentation(value);
    } else if (key == "template.answer_pattern") {
      tmpl.answer_pattern = value;
    } else if (key == "judge.match") {
      if (value == "first")
        cfg.match_policy = judge::MatchPolicy::First;
      else if (value == "last")
        cfg.match_policy = judge::MatchPolicy::Last;
      else
        throw ConfigError("judge.match must be first or last");
    } else if (key == "rl.group_size") {
      cfg.rl_group_size = parse_int<std::size_t>(key, value);
    } else if (key == "flags.exclude_all_incorrect") {
      cfg.flags.exclude_all_incorrect = parse_bool(key, value);
    } else if (key == "flags.swap_positions") {
      cfg.flags.swap_positions = parse_bool(key, value);
    } else if (key == "flags.fail_fast") {
      cfg.flags.fail_fast = parse_bool(key, value);
    } else if (key == "report.timestamp") {
      cfg.report_timestamp = value;
    } else if (key == "score_select.stage") {
      cfg.score_select_stage = parse_stage(value);
    } else if (key == "mine_hard.stage") {
      cfg.mine_hard_stage = parse_stage(value);
    } else {
      throw ConfigError("unknown key '" + key + "' on config line " + std::to_string(line_no));
    }
  }

  for (auto& [stage, ep] : cfg.endpoints) {
    const std::string prefix = "GRMCURATE_" + upper(to_string(stage)) + "_";
    if (auto it = env.find(prefix + "BASE_URL"); it != env.end())
      ep.base_url = it->second;
    else if (auto all = env.find("GRMCURATE_BASE_URL"); all != env.end())
      ep.base_url = all->second;
    if (auto it = env.find(prefix + "API_KEY"); it != env.end())
      ep.api_key = it->second;
    else if (auto all = env.find("GRMCURATE_API_KEY"); all != env.end())
      ep.api_key = all->second;
  }

  if (tmpl.path)
    cfg.tmpl = client::load_template(*tmpl.path, tmpl.segmentation, tmpl.answer_pattern);
  else
    cfg.tmpl = client::PromptTemplate(client::default_template().template_text(),
                                      tmpl.segmentation, tmpl.answer_pattern);
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, const Environment& env) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path(), env);
}

}  // namespace grmcurate::pipeline
