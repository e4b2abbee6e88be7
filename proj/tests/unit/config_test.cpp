#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "pcdiff/config.hpp"
#include "pcdiff/errors.hpp"

namespace pcdiff::sim {
namespace {

using testing::Gen;

SimConfig parse(const std::string& text, const std::string& base = ".") {
  std::istringstream in(text);
  return parse_config(in, base);
}

TEST(Config, ParsesSectionsCommentsAndDerivesRate) {
  auto c = parse(
      "# comment\n"
      "[protocol]\nprotocol = prism\nchains = 5  # trailing\nenforce_m2 = false\n"
      "[params]\nphi = 20\ntau = 3/2\n"
      "[sim]\nblock_rate = 0.25\nround_interval = 2\nhonest_nodes = 3\nnode_weights = 1,2,3\n"
      "[adversary]\nadversary_fraction = 3/13\n"
      "[metrics]\nfairness_subset = 0,2\n");
  EXPECT_EQ(c.protocol, ProtocolKind::Prism);
  EXPECT_EQ(c.chain_count(), 5u);
  EXPECT_FALSE(c.enforce_m2);
  EXPECT_EQ(c.params.phi, 20u);
  EXPECT_EQ(c.params.tau, Rational(3, 2));
  EXPECT_EQ(c.params.f, Rational(1, 2));
  EXPECT_EQ(c.node_weights, (std::vector<double>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(c.adversary.fraction, 3.0 / 13.0);
  EXPECT_EQ(c.metrics.fairness_subset, (std::vector<std::uint32_t>{0, 2}));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, SyntaxErrorsNameTheLine) {
  const std::vector<std::string> bad{
      "[bogus]\n",          "[sim\n",
      "duration = 5\n",     "[sim]\nduration\n",
      "[sim]\nwhat = 1\n",  "[sim]\nphi = 3\n",
      "[sim]\nduration = 1\nduration = 2\n",
      "[sim]\nduration = -1\n", "[sim]\nduration = x\n",
      "[protocol]\nprotocol = bitcoin\n", "[protocol]\nenforce_m2 = maybe\n",
      "[params]\ntau = 1/0\n"};
  for (const auto& text : bad) EXPECT_THROW(parse(text), ConfigError) << text;
  try {
    parse("[sim]\n\nwhat = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, ValidationRejectsInconsistentSettings) {
  auto expect_invalid = [](const std::string& text) {
    SimConfig c = parse(text);
    EXPECT_THROW(c.validate(), ConfigError) << text;
  };
  expect_invalid("[protocol]\nprotocol = fruitchains\nchains = 2\n");
  expect_invalid("[protocol]\nprotocol = prism\nchains = 1\n");
  expect_invalid("[protocol]\nprotocol = ohie\n[adversary]\nadversary_fraction = 0.3\nadversary_strategy = epoch-delayer\n");
  expect_invalid("[adversary]\nadversary_strategy = genesis-referrer\n");
  expect_invalid("[adversary]\nadversary_fraction = 1\n");
  expect_invalid("[adversary]\nadversary_fraction = 0.2\nadversary_strategy = stale-pivot-ref\nattack_chain = 0\n");
  expect_invalid("[adversary]\nrelease_delay = 5\n");
  expect_invalid("[sim]\nhonest_nodes = 2\nnode_weights = 1\n");
  expect_invalid("[params]\ntau = 1/2\n");
  expect_invalid("[trace]\ntrace_kind = file\n");
  expect_invalid("[metrics]\nfairness_subset = 0,0\n");
  expect_invalid("[metrics]\nwindows = 0\n");
}

TEST(Config, OverridesReplaceOneKey) {
  SimConfig c;
  apply_override(c, "adversary_fraction=0.3");
  apply_override(c, "sim.block_rate = 1/5");
  apply_override(c, "phi=100");
  EXPECT_DOUBLE_EQ(c.adversary.fraction, 0.3);
  EXPECT_EQ(c.params.f, Rational(2, 5));
  EXPECT_EQ(c.params.phi, 100u);
  EXPECT_THROW(apply_override(c, "phi"), ConfigError);
  EXPECT_THROW(apply_override(c, "nope=1"), ConfigError);
  EXPECT_THROW(apply_override(c, "sim.phi=1"), ConfigError);
}

TEST(Config, RelativeTraceFileResolvesAgainstConfigDir) {
  auto c = parse("[trace]\ntrace_kind = file\ntrace_file = data/t.csv\n", "/cfg");
  EXPECT_EQ(c.trace.file, "/cfg/data/t.csv");
  auto abs = parse("[trace]\ntrace_file = /x/t.csv\n", "/cfg");
  EXPECT_EQ(abs.trace.file, "/x/t.csv");
}

TEST(Config, LoadsShippedSample) {
  const auto path = std::filesystem::path(PCDIFF_SOURCE_DIR) / "configs" / "honest.ini";
  SimConfig c = load_config(path.string());
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.params.f, Rational(1, 5));
  EXPECT_THROW(load_config("/nonexistent.ini"), ConfigError);
}

TEST(ConfigProperty, WriteParseRoundTrip) {
  Gen g(81);
  const ProtocolKind protocols[] = {ProtocolKind::Prism, ProtocolKind::Ohie, ProtocolKind::FruitChains,
                                    ProtocolKind::GenericParallel};
  const StrategyKind strategies[] = {StrategyKind::None, StrategyKind::EpochDelayer, StrategyKind::GenesisReferrer,
                                     StrategyKind::DifficultyRaiser, StrategyKind::PrivateMiner,
                                     StrategyKind::StalePivotRef};
  for (int i = 0; i < 300; ++i) {
    SimConfig c;
    c.protocol = protocols[g.integer(0, 3)];
    c.enforce_m2 = g.coin();
    c.params.m = static_cast<std::uint32_t>(g.integer(1, 1000));
    c.params.phi = static_cast<std::uint32_t>(g.integer(1, 5000));
    c.params.tau = g.positive(100, 7);
    c.params.lambda = g.positive();
    c.params.t0 = g.huge().abs();
    c.params.ell = static_cast<std::uint32_t>(g.integer(0, 1000));
    c.block_rate = g.positive(5, 100);
    c.round_interval = g.positive(5, 4);
    c.duration = static_cast<Round>(g.integer(1, 1 << 30));
    c.honest_nodes = static_cast<std::uint32_t>(g.integer(1, 5));
    if (g.coin())
      for (std::uint32_t k = 0; k < c.honest_nodes; ++k) c.node_weights.push_back(g.real(0.01, 10));
    c.seed = static_cast<std::uint64_t>(g.integer(0, INT64_MAX));
    c.adversary.fraction = g.real(0, 0.99);
    c.adversary.strategy = strategies[g.integer(0, 5)];
    c.adversary.attack_margin = g.positive();
    c.adversary.stop_on_resolution = g.coin();
    c.trace.kind = TraceKind::Ramp;
    c.trace.factor = g.real(0.1, 10);
    c.metrics.fairness_subset = {0, static_cast<std::uint32_t>(g.integer(1, 4))};
    c.resolve();
    std::ostringstream out;
    write_config(out, c);
    EXPECT_EQ(parse(out.str()), c) << out.str();
  }
}

}  // namespace
}  // namespace pcdiff::sim
