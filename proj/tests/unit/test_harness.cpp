#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "callshield/errors.hpp"
#include "callshield/harness/experiment.hpp"
#include "callshield/harness/runner.hpp"

using namespace callshield;
using namespace callshield::harness;

namespace {

ExperimentSpec small(Experiment e, int trials = 4) {
  auto s = default_spec(e);
  s.trials = trials;
  s.seed = 42;
  return s;
}

std::filesystem::path tmp_dir() {
  auto d = std::filesystem::temp_directory_path() / "callshield_harness_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("Wilson interval reference values") {
  auto ci = wilson_interval(50, 100);
  CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
  ci = wilson_interval(0, 200);
  CHECK(ci.lo == 0.0);
  CHECK(ci.hi == doctest::Approx(0.01884).epsilon(1e-3));
  ci = wilson_interval(200, 200);
  CHECK(ci.hi == 1.0);
  CHECK(ci.lo == doctest::Approx(0.98116).epsilon(1e-4));
  CHECK(wilson_interval(0, 0).hi == 1.0);
  CHECK(Interval{0.1, 0.3}.overlaps({0.25, 0.5}));
  CHECK_FALSE(Interval{0.1, 0.2}.overlaps({0.25, 0.5}));
}

TEST_CASE("default specs validate and bad specs are rejected") {
  for (auto e : {Experiment::bit_accuracy, Experiment::sync_eval, Experiment::ablation, Experiment::protocol_stages,
                 Experiment::retry_comparison, Experiment::timing, Experiment::attacks}) {
    CAPTURE(to_string(e));
    CHECK_NOTHROW(default_spec(e).validate());
    CHECK(parse_experiment(to_string(e)) == e);
  }
  CHECK(default_spec(Experiment::protocol_stages).trials == 200);
  CHECK(default_spec(Experiment::protocol_stages, watermark::Backend::spread_spectrum).trials == 50);
  auto s = default_spec(Experiment::protocol_stages);
  s.trials = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_spec(Experiment::protocol_stages);
  s.grid = {{audio::DistortionKind::white_noise, 0.5}};
  CHECK_THROWS_AS(s.validate(), CalibrationMissError);
  s.backend = watermark::Backend::spread_spectrum;
  CHECK_NOTHROW(s.validate());  // the signal backend needs no table
}

TEST_CASE("JSON overrides") {
  auto s = apply_overrides(default_spec(Experiment::timing),
                           R"({"trials": 7, "seed": 9, "guard_seconds": 1.5, "strategy": "constant",
                               "grid": [{"kind": "echo", "coverage": 0.4}], "alphas": [0.8], "variants": ["x"]})");
  CHECK(s.trials == 7);
  CHECK(s.seed == 9);
  CHECK(s.guard_seconds == 1.5);
  CHECK(s.strategy == datalink::AlphaStrategy::constant_alpha);
  REQUIRE(s.grid.size() == 1);
  CHECK(s.grid[0].first == audio::DistortionKind::echo);
  CHECK(s.alphas == std::vector<double>{0.8});
  CHECK_THROWS_AS(apply_overrides(s, R"({"trails": 3})"), FormatError);
  CHECK_THROWS_AS(apply_overrides(s, R"({"trials": "many"})"), FormatError);
  CHECK_THROWS_AS(apply_overrides(s, "[1, 2]"), FormatError);
}

TEST_CASE("empty record sets give valid files") {
  std::ostringstream csv, jsonl;
  write_records({}, RecordFormat::csv, csv);
  write_records({}, RecordFormat::jsonl, jsonl);
  CHECK(jsonl.str().empty());
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("experiment,backend,variant,group,kind,coverage,alpha,trial,seed,success", 0) == 0);
  std::istringstream csv_in(csv.str()), jsonl_in(jsonl.str());
  CHECK(read_csv(csv_in).empty());
  CHECK(read_jsonl(jsonl_in).empty());
}

TEST_CASE("CSV header matches the documented schema") {
  std::ostringstream csv;
  write_records({}, RecordFormat::csv, csv);
  std::string expected;
  for (const auto& c : record_columns()) expected += (expected.empty() ? "" : ",") + c;
  CHECK(csv.str() == expected + "\n");
  CHECK(record_columns().size() == 27);
}

TEST_CASE("records round-trip through JSONL and CSV files") {
  auto records = run_experiment(small(Experiment::protocol_stages, 2));
  auto more = run_experiment(small(Experiment::sync_eval, 1));
  records.insert(records.end(), more.begin(), more.end());
  records.front().group = "needs, \"quoting\"";
  const auto dir = tmp_dir();
  for (const char* name : {"r.jsonl", "r.csv"}) {
    write_records(records, dir / name);
    CHECK(read_records(dir / name) == records);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("every trial replays bit-for-bit from its seed") {
  for (auto e : {Experiment::bit_accuracy, Experiment::sync_eval, Experiment::ablation, Experiment::protocol_stages,
                 Experiment::retry_comparison, Experiment::timing, Experiment::attacks}) {
    CAPTURE(to_string(e));
    auto spec = small(e, 2);
    if (e == Experiment::bit_accuracy || e == Experiment::protocol_stages) spec.grid.resize(3);
    const ExperimentContext ctx(spec);
    const auto records = run_experiment(ctx);
    REQUIRE_FALSE(records.empty());
    for (std::size_t i = 0; i < records.size(); i += 3) CHECK(replay_trial(ctx, records[i]) == records[i]);
  }
}

TEST_CASE("results do not depend on the thread count") {
  auto spec = small(Experiment::retry_comparison, 6);
  spec.threads = 1;
  const auto a = run_experiment(spec);
  spec.threads = 4;
  CHECK(run_experiment(spec) == a);
  spec.seed = 43;
  CHECK_FALSE(run_experiment(spec) == a);
}

TEST_CASE("stage rates are conditional on reaching the stage") {
  auto spec = small(Experiment::protocol_stages, 30);
  spec.grid = {{audio::DistortionKind::white_noise, 0.4}};
  const auto records = run_experiment(spec);
  const auto rows = summarize_stages(records);
  REQUIRE(rows.size() == 1);
  std::int64_t reached_challenge = 0;
  for (const auto& r : records) reached_challenge += r.stages[1] >= 0 ? 1 : 0;
  CHECK(rows[0].stages[1].trials == reached_challenge);
  CHECK(rows[0].stages[0].trials == 30);
  CHECK(rows[0].stages[0].successes == reached_challenge);
  const auto fa = attribute_failures(records);
  CHECK(fa.failures == 30 - rows[0].overall.successes);
  double total = 0;
  for (const auto& [s, n] : fa.by_stage) total += fa.share(s);
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("success by attempt is non-decreasing") {
  const auto spec = small(Experiment::retry_comparison, 20);
  for (const auto& row : summarize_retries(run_experiment(spec), spec.max_attempts)) {
    for (std::size_t a = 1; a < row.by_attempt.size(); ++a) CHECK(row.by_attempt[a].value() >= row.by_attempt[a - 1].value());
  }
}

TEST_CASE("unknown variants are rejected") {
  auto spec = small(Experiment::ablation);
  spec.variants = {"half"};
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("plot data files are written per experiment") {
  const auto dir = tmp_dir();
  for (auto e : {Experiment::protocol_stages, Experiment::retry_comparison, Experiment::sync_eval, Experiment::bit_accuracy}) {
    auto spec = small(e, 2);
    if (e == Experiment::bit_accuracy || e == Experiment::protocol_stages) spec.grid.resize(5);
    const auto files = write_plot_data(run_experiment(spec), dir / std::string(to_string(e)));
    REQUIRE(files.size() == 2);
    for (const auto& f : files) CHECK(std::filesystem::file_size(f) > 0);
    std::ifstream gp(files[1]);
    std::stringstream ss;
    ss << gp.rdbuf();
    CHECK(ss.str().find("plot ") != std::string::npos);
  }
  CHECK_THROWS(write_plot_data({}, dir / "none"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("signal backend runs through the same harness") {
  auto spec = default_spec(Experiment::ablation, watermark::Backend::spread_spectrum);
  spec.trials = 3;
  spec.variants = {"full"};
  const auto records = run_experiment(spec);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    CHECK(r.backend == "spread_spectrum");
    CHECK(r.success);
  }
}
