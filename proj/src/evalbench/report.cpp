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

#include <unordered_map>

#include <fmt/format.h>

#include "grmcurate/core/errors.hpp"
#include "grmcurate/evalbench/evalbench.hpp"

namespace grmcurate::evalbench {
namespace {

std::string percent(double fraction) { return fmt::format("{:.2f}", fraction * 100.0); }

struct OrderingPair {
  std::optional<VerdictChoice> plain;
  std::optional<VerdictChoice> swapped;
};

}  // namespace

double macro_average(const std::vector<CategoryStat>& per_category) {
  if (per_category.empty()) throw EmptyRunError("no categories to average");
  double total = 0.0;
  for (const auto& c : per_category) total += c.accuracy;
  return total / static_cast<double>(per_category.size());
}

BenchmarkReport aggregate(const std::vector<EvalOutcome>& outcomes, RunMetadata metadata) {
  BenchmarkReport report;
  report.run_metadata = std::move(metadata);
  std::unordered_map<std::string, std::size_t> slot;
  std::unordered_map<std::string, OrderingPair> orderings;
  std::vector<std::string> order;
  std::size_t correct = 0;

  for (const auto& o : outcomes) {
    ++report.attempted;
    if (o.errored()) {
      ++report.errored;
      continue;
    }
    auto [pair_it, inserted] = orderings.try_emplace(o.example_id);
    if (inserted) order.push_back(o.example_id);
    (o.position_swapped ? pair_it->second.swapped : pair_it->second.plain) = o.verdict.choice;
    if (o.position_swapped) continue;

    auto [it, fresh] = slot.try_emplace(o.category, report.per_category.size());
    if (fresh) report.per_category.push_back({o.category, 0, 0, 0.0});
    CategoryStat& stat = report.per_category[it->second];
    ++stat.count;
    ++report.scored;
    if (o.correct) {
      ++stat.correct;
      ++correct;
    }
  }
  if (report.scored == 0) throw EmptyRunError("no scored outcomes");

  for (auto& c : report.per_category)
    c.accuracy = static_cast<double>(c.correct) / static_cast<double>(c.count);
  report.macro_average = macro_average(report.per_category);
  report.micro_average = static_cast<double>(correct) / static_cast<double>(report.scored);

  std::size_t pairs = 0;
  std::size_t consistent = 0;
  for (const auto& id : order) {
    const OrderingPair& p = orderings[id];
    if (!p.plain || !p.swapped) continue;
    ++pairs;
    // Slot A after the swap holds the original response B.
    if (*p.plain != VerdictChoice::Unparseable && *p.plain == flipped(*p.swapped)) ++consistent;
  }
  if (pairs > 0)
    report.position_consistency = static_cast<double>(consistent) / static_cast<double>(pairs);
  return report;
}

std::string render_report(const BenchmarkReport& report, ReportFormat format) {
  if (format == ReportFormat::Json)
    return Codec<BenchmarkReport>::encode(report).dump(2) + "\n";

  const std::string& model =
      report.run_metadata.model.empty() ? std::string("judge") : report.run_metadata.model;
  std::string header = "| Model |";
  std::string rule = "| :--- |";
  std::string row = "| " + model + " |";
  for (const auto& c : report.per_category) {
    header += " " + c.category + " |";
    rule += " ---: |";
    row += " " + percent(c.accuracy) + " |";
  }
  header += " Score |\n";
  rule += " ---: |\n";
  row += " " + percent(report.macro_average) + " |\n";

  std::string out = header + rule + row + "\n";
  out += fmt::format("Micro average: {} over {} examples\n", percent(report.micro_average),
                     report.scored);
  out += "Position consistency: " +
         (report.position_consistency ? percent(*report.position_consistency)
                                      : std::string("n/a")) +
         "\n";
  out += fmt::format("Errored: {} of {} requests\n", report.errored, report.attempted);
  return out;
}

}  // namespace grmcurate::evalbench

namespace grmcurate {

using evalbench::BenchmarkReport;

json Codec<BenchmarkReport>::encode(const BenchmarkReport& r) {
  json cats = json::array();
  for (const auto& c : r.per_category)
    cats.push_back({{"category", c.category},
                    {"count", c.count},
                    {"correct", c.correct},
                    {"accuracy", c.accuracy}});
  const auto& m = r.run_metadata;
  json sampling = {{"num_samples", m.sampling.num_samples},
                   {"temperature", m.sampling.temperature},
                   {"max_tokens", m.sampling.max_tokens}};
  if (m.sampling.seed) sampling["seed"] = *m.sampling.seed;
  return {{"per_category", std::move(cats)},
          {"macro_average", r.macro_average},
          {"micro_average", r.micro_average},
          {"position_consistency",
           r.position_consistency ? json(*r.position_consistency) : json(nullptr)},
          {"scored", r.scored},
          {"errored", r.errored},
          {"attempted", r.attempted},
          {"run_metadata",
           {{"endpoint", m.endpoint},
            {"model", m.model},
            {"template_hash", m.template_hash},
            {"sampling", std::move(sampling)},
            {"swap_positions", m.swap_positions},
            {"timestamp", m.timestamp}}}};
}

BenchmarkReport Codec<BenchmarkReport>::decode(const json& j) {
  BenchmarkReport r;
  try {
    for (const auto& c : j.at("per_category"))
      r.per_category.push_back({c.at("category").get<std::string>(), c.at("count").get<std::size_t>(),
                                c.at("correct").get<std::size_t>(), c.at("accuracy").get<double>()});
    r.macro_average = j.at("macro_average").get<double>();
    r.micro_average = j.at("micro_average").get<double>();
    if (!j.at("position_consistency").is_null())
      r.position_consistency = j["position_consistency"].get<double>();
    r.scored = j.at("scored").get<std::size_t>();
    r.errored = j.at("errored").get<std::size_t>();
    r.attempted = j.at("attempted").get<std::size_t>();
    const json& m = j.at("run_metadata");
    r.run_metadata.endpoint = m.at("endpoint").get<std::string>();
    r.run_metadata.model = m.at("model").get<std::string>();
    r.run_metadata.template_hash = m.at("template_hash").get<std::string>();
    const json& s = m.at("sampling");
    r.run_metadata.sampling.num_samples = s.at("num_samples").get<int>();
    r.run_metadata.sampling.temperature = s.at("temperature").get<double>();
    r.run_metadata.sampling.max_tokens = s.at("max_tokens").get<int>();
    if (s.contains("seed")) r.run_metadata.sampling.seed = s["seed"].get<std::int64_t>();
    r.run_metadata.swap_positions = m.at("swap_positions").get<bool>();
    r.run_metadata.timestamp = m.at("timestamp").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("benchmark report: ") + e.what());
  }
  if (r.per_category.empty()) throw ValidationError("benchmark report without categories");
  return r;
}

}  // namespace grmcurate
