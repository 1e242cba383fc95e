#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pimecc/errors.hpp"
#include "pimecc/experiments.hpp"
#include "test_support.hpp"

namespace pimecc {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pimecc_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void check_golden(const std::string& name, const std::string& got) {
  const std::string path = std::string(PIMECC_GOLDEN_DIR) + "/" + name;
  if (std::getenv("PIMECC_UPDATE_GOLDEN")) std::ofstream(path, std::ios::binary) << got;
  EXPECT_EQ(got, testing::read_text(path)) << path;
}

TEST(Config, PresetsValidate) {
  for (auto k : {ExperimentKind::Coverage, ExperimentKind::RSweep, ExperimentKind::FftAccuracy,
                 ExperimentKind::Energy}) {
    EXPECT_NO_THROW(ExperimentConfig::defaults(k).validate()) << to_string(k);
    EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_experiment_kind("bogus"), ConfigError);
}

TEST(Config, ParseOverridesPreset) {
  const auto c = parse_config(
      R"({"experiment": "coverage", "trials": 7, "p": [0.5], "netlist": {"gates": 9}, "schemes": ["tmr"]})");
  EXPECT_EQ(c.kind, ExperimentKind::Coverage);
  EXPECT_EQ(c.trials, 7u);
  EXPECT_EQ(c.p_grid, std::vector<double>{0.5});
  EXPECT_EQ(c.netlist.gates, 9u);
  EXPECT_EQ(c.netlist.inputs, ExperimentConfig::defaults(ExperimentKind::Coverage).netlist.inputs);
  EXPECT_EQ(c.schemes, std::vector<std::string>{"tmr"});
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"trials": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "coverage", "trails": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "coverage", "netlist": {"gate": 3}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "coverage", "trials": "many"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "coverage", "p": [2.0]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "coverage", "schemes": ["quad"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": "coverage", "trials": 0})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, JsonRoundTripAndHash) {
  auto c = ExperimentConfig::defaults(ExperimentKind::Coverage);
  c.trials = 13;
  const auto back = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
  auto moved = c;
  moved.out = "elsewhere";
  moved.threads = 3;
  EXPECT_EQ(config_hash(moved), config_hash(c));
  auto changed = c;
  changed.seed = 2;
  EXPECT_NE(config_hash(changed), config_hash(c));
}

TEST(Schemes, ParseAndLabel) {
  EXPECT_EQ(SchemeSpec::parse("hamming").kind, SchemeKind::Hamming);
  const auto h = SchemeSpec::parse("hybrid(0.25)");
  EXPECT_EQ(h.kind, SchemeKind::Hybrid);
  EXPECT_DOUBLE_EQ(h.alpha, 0.25);
  EXPECT_EQ(SchemeSpec::parse("hybrid", 0.4).alpha, 0.4);
  EXPECT_LT(SchemeSpec::parse("hybrid(iso)").alpha, 0.0);
  EXPECT_EQ(SchemeSpec::parse(h.label()).alpha, 0.25);
  EXPECT_THROW(SchemeSpec::parse("hybrid(2)"), ConfigError);
  EXPECT_THROW(SchemeSpec::parse("hybrid(x"), ConfigError);
}

TEST(Seeds, DeriveIsStableAndSpreads) {
  EXPECT_EQ(derive_seed(1, 2, 3, 4), derive_seed(1, 2, 3, 4));
  EXPECT_NE(derive_seed(1, 2, 3, 4), derive_seed(1, 2, 3, 5));
  EXPECT_NE(derive_seed(1, 2, 3, 4), derive_seed(2, 2, 3, 4));
}

TEST(Wilson, KnownValuesAndEdges) {
  const auto a = wilson_interval(0, 100);
  EXPECT_DOUBLE_EQ(a.low, 0.0);
  EXPECT_NEAR(a.high, 0.0370, 1e-4);
  const auto b = wilson_interval(50, 100);
  EXPECT_NEAR(b.low, 0.4038, 1e-4);
  EXPECT_NEAR(b.high, 0.5962, 1e-4);
  const auto c = wilson_interval(0, 0);
  EXPECT_EQ(c.low, 0.0);
  EXPECT_EQ(c.high, 1.0);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-5), "1e-05");
  EXPECT_EQ(format_double(3.0), "3");
  EXPECT_EQ(format_double(800000.0), "800000");
  EXPECT_EQ(format_double(-2.5e6), "-2500000");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(NAN), "nan");
}

ExperimentConfig small_coverage() {
  auto c = ExperimentConfig::defaults(ExperimentKind::Coverage);
  c.netlist.gates = 24;
  c.netlist.inputs = 5;
  c.trials = 40;
  c.rows = 8;
  c.p_grid = {0.0, 1e-3, 1e-2};
  c.schemes = {"none", "detection", "hamming", "dmr", "tmr", "hybrid(0.5)"};
  c.threads = 1;
  return c;
}

TEST(Coverage, ZeroProbabilityHasNoErrors) {
  const Table t = run_coverage_sweep(small_coverage());
  const auto col = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), n) - t.columns.begin());
  };
  for (const auto& r : t.rows) {
    if (r[col("p")] == "0") {
      EXPECT_EQ(r[col("errors")], "0");
      EXPECT_EQ(r[col("flagged")], "0");
    }
    EXPECT_EQ(r[col("samples")], "320");
  }
  EXPECT_EQ(t.rows.size(), 18u);
}

TEST(Coverage, ThreadCountDoesNotChangeResults) {
  auto c = small_coverage();
  const std::string one = run_coverage_sweep(c).to_csv();
  c.threads = 4;
  EXPECT_EQ(run_coverage_sweep(c).to_csv(), one);
}

TEST(Coverage, SameSeedIsByteIdenticalOnDisk) {
  const auto dir = scratch_dir("determinism");
  const auto c = small_coverage();
  write_outputs(run_experiment(c), (dir / "a").string());
  write_outputs(run_experiment(c), (dir / "b").string());
  EXPECT_EQ(testing::read_text((dir / "a.csv").string()), testing::read_text((dir / "b.csv").string()));
  EXPECT_EQ(testing::read_text((dir / "a.json").string()), testing::read_text((dir / "b.json").string()));
  auto other = c;
  other.seed = 99;
  EXPECT_NE(run_experiment(other).to_csv(), testing::read_text((dir / "a.csv").string()));
  fs::remove_all(dir);
}

TEST(Golden, CoverageCsv) { check_golden("coverage_small.csv", run_coverage_sweep(small_coverage()).to_csv()); }

TEST(Golden, RSweepPresetCsv) {
  check_golden("rsweep_preset.csv", run_r_sweep(ExperimentConfig::defaults(ExperimentKind::RSweep)).to_csv());
}

TEST(Golden, RSweepSimulatedCsv) {
  auto c = ExperimentConfig::defaults(ExperimentKind::RSweep);
  c.netlist.generator = "adder";
  c.netlist.bits = 8;
  c.r_values = {0, 2, 8};
  c.schemes = {"detection", "hamming", "tmr", "hybrid(iso)"};
  check_golden("rsweep_adder.csv", run_r_sweep(c).to_csv());
}

TEST(Golden, EnergyAdderCsv) {
  auto c = ExperimentConfig::defaults(ExperimentKind::Energy);
  c.netlist.generator = "adder";
  c.netlist.bits = 8;
  check_golden("energy_adder.csv", run_energy_breakdown(c).to_csv());
}

TEST(Golden, FftTinyCsv) {
  auto c = ExperimentConfig::defaults(ExperimentKind::FftAccuracy);
  c.netlist.points = 4;
  c.trials = 6;
  c.rows = 2;
  c.p_grid = {0.0, 1e-3};
  check_golden("fft_tiny.csv", run_fft_accuracy(c).to_csv());
}

TEST(Energy, NoneHasNoEccAndRedundancyScales) {
  auto c = ExperimentConfig::defaults(ExperimentKind::Energy);
  c.netlist.generator = "adder";
  c.netlist.bits = 4;
  c.schemes = {"none", "dmr", "tmr"};
  c.technologies = {"ReRAM"};
  const Table t = run_energy_breakdown(c);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][4], "0");
  EXPECT_EQ(t.rows[0][7], "0");
  EXPECT_NEAR(std::stod(t.rows[1][7]), 100.0, 1e-9);
  EXPECT_NEAR(std::stod(t.rows[2][7]), 200.0, 1e-9);
}

TEST(Fft, RejectsOtherGenerators) {
  auto c = ExperimentConfig::defaults(ExperimentKind::FftAccuracy);
  c.netlist.generator = "adder";
  EXPECT_THROW(run_fft_accuracy(c), ConfigError);
}

TEST(ExactErrorRate, UnprotectedMatchesClosedFormOnSingleGate) {
  // one NOR gate, one write: error iff that write flips
  const auto net = parse_netlist("INPUT a\nINPUT b\nNOR y a b\nOUTPUT y\n");
  for (double p : {0.0, 1e-3, 0.2}) {
    const auto r = exact_error_rate(net, SchemeSpec{}, p, 1);
    EXPECT_NEAR(r.low, p, 1e-12);
    EXPECT_NEAR(r.high, p, 1e-12);
  }
}

TEST(ExactErrorRate, BoundsTightenWithMoreFaults) {
  const auto net = gen_random(4, 3, 5);
  const auto a = exact_error_rate(net, SchemeSpec::parse("hamming"), 0.01, 1);
  const auto b = exact_error_rate(net, SchemeSpec::parse("hamming"), 0.01, 2);
  EXPECT_LE(a.low, b.low + 1e-15);
  EXPECT_GE(a.high, b.high - 1e-15);
  EXPECT_LT(b.high - b.low, a.high - a.low);
  EXPECT_THROW(exact_error_rate(gen_random(4, 13, 1), SchemeSpec{}, 0.1, 1), ConfigError);
}

TEST(ExactErrorRate, SingleFaultsNeverBreakHamming) {
  const auto net = gen_random(5, 3, 6);
  const double p = 1e-4;
  const auto r = exact_error_rate(net, SchemeSpec::parse("hamming"), p, 1);
  // only double and higher faults can leave an error: O(p^2)
  EXPECT_LT(r.low, 1e-5);
}

TEST(AtomicWrite, CreatesParentsAndLeavesNoTemp) {
  const auto dir = scratch_dir("atomic");
  const auto path = dir / "nested" / "out.csv";
  write_file_atomic(path.string(), "a,b\n1,2\n");
  EXPECT_EQ(testing::read_text(path.string()), "a,b\n1,2\n");
  write_file_atomic(path.string(), "x\n");
  EXPECT_EQ(testing::read_text(path.string()), "x\n");
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  EXPECT_THROW(write_file_atomic("/proc/definitely/not/here.csv", "x"), std::exception);
  fs::remove_all(dir);
}

TEST(SchemeExecutor, RejectsRowMismatch) {
  const auto net = gen_random(6, 3, 1);
  const SchemeExecutor ex(net, SchemeSpec::parse("tmr"), 2, 0, 4);
  NoFaults none;
  EXPECT_THROW(ex.execute(testing::random_rows(3, 3, 1), none), ConfigError);
  const auto ok = ex.execute(testing::random_rows(2, 3, 1), none);
  EXPECT_EQ(ok.data.size(), 2u);
}

}  // namespace
}  // namespace pimecc
