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

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <set>

#include "grmcurate/core/codec.hpp"
#include "grmcurate/core/dataset.hpp"
#include "grmcurate/core/errors.hpp"
#include "grmcurate/core/jsonl.hpp"
#include "grmcurate/core/parallel.hpp"
#include "test_support.hpp"

using namespace grmcurate;
using namespace grmcurate::testing;

namespace {

std::string example_line(const std::string& id, const std::string& label = "A") {
  return canonical_json({{"id", id},
                         {"prompt", "p " + id},
                         {"response_a", "a"},
                         {"response_b", "b"},
                         {"label", label}});
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("labels and verdicts parse and flip") {
    CHECK(parse_label("A") == Label::A);
    CHECK(parse_label("B") == Label::B);
    CHECK_THROWS_AS(parse_label("C"), ValidationError);
    CHECK(parse_verdict_choice("Unparseable") == VerdictChoice::Unparseable);
    CHECK(flipped(VerdictChoice::Unparseable) == VerdictChoice::Unparseable);
    CHECK(matches(VerdictChoice::A, Label::A));
    CHECK_FALSE(matches(VerdictChoice::B, Label::A));
    CHECK_FALSE(matches(VerdictChoice::Unparseable, Label::B));
  }

  TEST_CASE("swapped example exchanges responses and flips the label") {
    auto ex = make_example("x", Label::A, "chat");
    auto s = ex.swapped();
    CHECK(s.response_a() == ex.response_b());
    CHECK(s.response_b() == ex.response_a());
    CHECK(s.label() == Label::B);
    CHECK(s.swapped() == ex);
  }

  TEST_CASE("example validation") {
    CHECK_THROWS_AS(PreferenceExample("", "p", "a", "b", Label::A), ValidationError);
    CHECK_THROWS_AS(PreferenceExample("i", "", "a", "b", Label::A), ValidationError);
    CHECK_THROWS_AS(PreferenceExample("i", "p", "", "b", Label::A), ValidationError);
  }

  TEST_CASE("record invariants") {
    CHECK_NOTHROW(simple_record("x", 0, true));
    CHECK_THROWS_AS(simple_record("x", 0, true, {1.5}), ValidationError);
    CHECK_THROWS_AS(simple_record("x", 0, true, {0.5}, {-0.1}), ValidationError);
    GenerationRecord::Fields f;
    f.example_id = "x";
    f.verdict = VerdictChoice::Unparseable;
    f.correct = true;
    CHECK_THROWS_AS(GenerationRecord{f}, ValidationError);
    f.correct = false;
    CHECK_NOTHROW(GenerationRecord{f});  // segmentation failure: empty spans allowed
    f.verdict = VerdictChoice::A;
    CHECK_THROWS_AS(GenerationRecord{f}, ValidationError);
  }

  TEST_CASE("group invariants") {
    auto g = group_from_bits("g", {true, false, true});
    CHECK(g.correct_count() == 2);
    CHECK_THROWS_AS(GenerationGroup("g", {}), ValidationError);
    CHECK_THROWS_AS(GenerationGroup("g", {simple_record("h", 0, true)}), ValidationError);
    CHECK_THROWS_AS(GenerationGroup("g", {simple_record("g", 1, true)}), ValidationError);
  }

  TEST_CASE("RStarScore is the product and rejects out-of-range factors") {
    RStarScore s(0.75, 0.8);
    CHECK(s.r_star() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK_THROWS_AS(RStarScore(1.1, 0.5), ValidationError);
    CHECK_THROWS_AS(RStarScore(0.5, -0.1), ValidationError);
  }

  TEST_CASE("endpoint validation") {
    ModelEndpoint ep{.base_url = "http://localhost:1", .model_name = "m"};
    CHECK_NOTHROW(ep.validate());
    auto bad = ep;
    bad.base_url = "localhost";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ep;
    bad.max_in_flight = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ep;
    bad.retry_limit = 11;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ep;
    bad.model_name.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }

  TEST_CASE("codec round trips") {
    auto ex = make_example("x", Label::B, "safety");
    CHECK(Codec<PreferenceExample>::decode(Codec<PreferenceExample>::encode(ex)) == ex);
    auto rec = simple_record("x", 0, true, {0.25, 0.5}, {1.0});
    CHECK(Codec<GenerationRecord>::decode(Codec<GenerationRecord>::encode(rec)) == rec);
    auto g = group_from_bits("g", {true, false});
    CHECK(Codec<GenerationGroup>::decode(Codec<GenerationGroup>::encode(g)) == g);
    RStarScore s(0.3, 0.7);
    CHECK(Codec<RStarScore>::decode(Codec<RStarScore>::encode(s)) == s);
  }

  TEST_CASE("codec rejects inconsistent stored values") {
    auto gj = Codec<GenerationGroup>::encode(group_from_bits("g", {true, false}));
    gj["correct_count"] = 2;
    CHECK_THROWS_AS(Codec<GenerationGroup>::decode(gj), ValidationError);
    json sj = {{"self_consistency", 0.5}, {"validity", 0.5}, {"r_star", 0.3}};
    CHECK_THROWS_AS(Codec<RStarScore>::decode(sj), ValidationError);
    json ej = json::parse(example_line("x"));
    ej.erase("label");
    CHECK_THROWS_AS(Codec<PreferenceExample>::decode(ej), ValidationError);
    json rj = json::parse(example_line("a::b"));
    CHECK_THROWS_AS(Codec<PreferenceExample>::decode(rj), ValidationError);
  }

  TEST_CASE("unknown fields are ignored on decode") {
    json ej = json::parse(example_line("x"));
    ej["extra"] = 3;
    CHECK(Codec<PreferenceExample>::decode(ej).id() == "x");
  }

  TEST_CASE("canonical json sorts keys and refuses invalid UTF-8") {
    CHECK(canonical_json({{"b", 1}, {"a", 2}}) == R"({"a":2,"b":1})");
    CHECK_THROWS(canonical_json(json(std::string("\xff"))));
  }

  TEST_CASE("dataset: two valid lines keep ids") {
    TempDir dir;
    write_file(dir / "d.jsonl", example_line("one") + "\n" + example_line("two", "B") + "\n");
    auto ds = load_dataset(dir / "d.jsonl");
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].id() == "one");
    CHECK(ds[1].id() == "two");
    CHECK(ds[1].label() == Label::B);
  }

  TEST_CASE("dataset: missing label is a SchemaError at its line") {
    TempDir dir;
    json bad = json::parse(example_line("two"));
    bad.erase("label");
    write_file(dir / "d.jsonl", example_line("one") + "\n\n" + bad.dump() + "\n");
    try {
      load_dataset(dir / "d.jsonl");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("dataset: skip-and-log keeps going and records the line") {
    TempDir dir;
    write_file(dir / "d.jsonl", example_line("one") + "\n{not json\n" + example_line("two") + "\n");
    DatasetReader reader(dir / "d.jsonl", DatasetFormat::PreferenceJsonl, ErrorPolicy::SkipAndLog);
    std::vector<std::string> ids;
    while (auto ex = reader.next()) ids.push_back(ex->id());
    CHECK(ids == std::vector<std::string>{"one", "two"});
    REQUIRE(reader.skipped().size() == 1);
    CHECK(reader.skipped()[0].line == 2);
  }

  TEST_CASE("dataset: duplicate id is a dataset-level error") {
    TempDir dir;
    write_file(dir / "d.jsonl", example_line("one") + "\n" + example_line("one") + "\n");
    CHECK_THROWS_AS(load_dataset(dir / "d.jsonl"), DuplicateIdError);
    CHECK_THROWS_AS(load_dataset(dir / "d.jsonl", ErrorPolicy::SkipAndLog), DuplicateIdError);
  }

  TEST_CASE("dataset: 80,000 lines stream one at a time") {
    TempDir dir;
    {
      std::ofstream out(dir / "big.jsonl");
      for (int i = 0; i < 80000; ++i) out << example_line("ex" + std::to_string(i)) << '\n';
    }
    DatasetReader reader(dir / "big.jsonl");
    std::size_t n = 0;
    std::string last;
    while (auto ex = reader.next()) {
      ++n;
      last = ex->id();
    }
    CHECK(n == 80000);
    CHECK(last == "ex79999");
  }

  TEST_CASE("split_by_id is deterministic and disjoint") {
    std::vector<PreferenceExample> xs;
    for (int i = 0; i < 500; ++i) xs.push_back(make_example("e" + std::to_string(i)));
    auto a = split_by_id(xs, 0.2, 7);
    auto b = split_by_id(xs, 0.2, 7);
    CHECK(a.train == b.train);
    CHECK(a.held_out.size() + a.train.size() == 500);
    CHECK(a.held_out.size() > 50);
    CHECK(a.held_out.size() < 150);
    CHECK(split_by_id(xs, 0.0).held_out.empty());
    CHECK(split_by_id(xs, 1.0).train.empty());
  }

  TEST_CASE("jsonl: write then load 100 records") {
    TempDir dir;
    std::mt19937_64 rng(5);
    std::vector<GenerationRecord> recs;
    for (int i = 0; i < 100; ++i) recs.push_back(random_correct_record(rng, "r" + std::to_string(i), 0));
    CHECK(write_records<GenerationRecord>(dir / "r.jsonl", recs) == 100);
    CHECK(read_records<GenerationRecord>(dir / "r.jsonl") == recs);
  }

  TEST_CASE("jsonl: empty stream gives an empty file") {
    TempDir dir;
    std::vector<GenerationRecord> none;
    CHECK(write_records<GenerationRecord>(dir / "e.jsonl", none) == 0);
    CHECK(fs::exists(dir / "e.jsonl"));
    CHECK(fs::file_size(dir / "e.jsonl") == 0);
  }

  TEST_CASE("jsonl: abandoned writer leaves no output and no temp file") {
    TempDir dir;
    write_file(dir / "out.jsonl", "previous\n");
    fs::path tmp;
    try {
      AtomicJsonlWriter w(dir / "out.jsonl");
      tmp = w.temp_path();
      for (int i = 0; i < 10; ++i) w.write({{"i", i}});
      throw std::runtime_error("interrupted");
    } catch (const std::runtime_error&) {
    }
    CHECK(read_file(dir / "out.jsonl") == "previous\n");
    CHECK_FALSE(fs::exists(tmp));
  }

  TEST_CASE("jsonl: process killed mid-write never exposes a partial file") {
    TempDir dir;
    const auto target = dir / "out.jsonl";
    const pid_t pid = ::fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
      AtomicJsonlWriter w(target);
      for (int i = 0; i < 5000; ++i) w.write({{"i", i}, {"pad", std::string(64, 'x')}});
      ::_exit(0);  // dies before commit, destructors never run
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    CHECK_FALSE(fs::exists(target));
    // Truncated-write oracle: whatever reached the temp file is a torn prefix,
    // and the reader must never see it under the final name.
    for (const auto& entry : fs::directory_iterator(dir.path()))
      CHECK(entry.path().filename().string().rfind("out.jsonl.tmp.", 0) == 0);
  }

  TEST_CASE("jsonl: unwritable destination raises IoError") {
    CHECK_THROWS_AS(AtomicJsonlWriter("/nonexistent-dir/x.jsonl"), IoError);
  }

  TEST_CASE("jsonl: invalid json is a SchemaError carrying the line") {
    TempDir dir;
    write_file(dir / "x.jsonl", "{}\n[1,\n");
    JsonlReader r(dir / "x.jsonl");
    CHECK(r.next().has_value());
    try {
      r.next();
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), 8, [&](std::size_t i) { ++hits[i]; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 4) throw IoError("boom");
                                 }),
                    IoError);
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
  }
}
