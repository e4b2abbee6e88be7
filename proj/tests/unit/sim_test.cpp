#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pcdiff/analysis.hpp"
#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"
#include "pcdiff/ohie.hpp"
#include "pcdiff/prism.hpp"
#include "pcdiff/sim.hpp"

namespace pcdiff::sim {
namespace {

SimConfig small(ProtocolKind protocol, std::uint32_t chains, Round duration = 2000) {
  SimConfig c;
  c.protocol = protocol;
  c.params.m = chains;
  c.params.phi = 20;
  c.duration = duration;
  c.metrics.sample_interval = 100;
  c.resolve();
  return c;
}

std::string log_text(const EventLog& log) {
  std::ostringstream out;
  write_event_log(out, log);
  return out.str();
}

TEST(Sim, SameSeedSameLogDifferentSeedDifferentLog) {
  SimConfig c = small(ProtocolKind::GenericParallel, 3);
  c.honest_nodes = 3;
  c.params.delta = 2;
  c.seed = 5;
  const std::string a = log_text(run(c)), b = log_text(run(c));
  EXPECT_EQ(a, b);
  c.seed = 6;
  EXPECT_NE(log_text(run(c)), a);
}

TEST(Sim, HonestBlockCountMatchesPoissonMean) {
  SimConfig c = small(ProtocolKind::GenericParallel, 4, 20000);
  c.params.phi = 1000000;  // no retarget inside the run
  c.seed = 11;
  EventLog log = run(c);
  const double mean = (c.params.f * Rational(4) * Rational(static_cast<std::int64_t>(c.duration))).to_double();
  const double mined = static_cast<double>(log.count(EventKind::Mine));
  EXPECT_LT(std::abs(mined - mean), 5 * std::sqrt(mean)) << mined << " vs " << mean;
  EXPECT_TRUE(log.complete);
  EXPECT_EQ(log.end_round, c.duration);
}

TEST(Sim, TargetTracksHashrateStep) {
  SimConfig c = small(ProtocolKind::GenericParallel, 2, 20000);
  c.trace.kind = TraceKind::Step;
  c.trace.factor = 4;
  c.trace.step_fraction = 0.25;
  c.seed = 12;
  EventLog log = run(c);
  const ChainView view = log.reference_view();
  const Rational& t = log.store().target(view.tip(0));
  // four times the hashrate, so the target settles near a quarter of T0
  EXPECT_GT(t.to_double(), 0.15);
  EXPECT_LT(t.to_double(), 0.35);
  const auto m = hashrate_multipliers(c);
  EXPECT_EQ(m.front(), 1);
  EXPECT_EQ(m.back(), 4);
}

TEST(Sim, ReferenceViewNeverHoldsAnM2Violation) {
  for (StrategyKind s : {StrategyKind::EpochDelayer, StrategyKind::GenesisReferrer}) {
    SimConfig c = small(ProtocolKind::GenericParallel, 3, 5000);
    c.adversary.fraction = 0.3;
    c.adversary.strategy = s;
    c.seed = 13;
    EventLog log = run(c);
    const ChainView view = log.reference_view();
    const BlockStore& st = log.store();
    for (BlockRef b = st.chain_count(); b < st.size(); ++b)
      if (view.contains(b)) {
        ASSERT_EQ(diffadjust::check_difficulty_rules(view, b, true), Verdict::Valid);
      }
    for (ChainId ch = 0; ch < st.chain_count(); ++ch) EXPECT_EQ(analysis::difficulty_changes(view, ch).mid_epoch, 0u);
    // the delayer falls back to the floor under M2; the genesis referrer is rejected
    if (s == StrategyKind::GenesisReferrer) {
      EXPECT_GT(log.count(EventKind::Reject), 0u);
    }
  }
}

TEST(Sim, EveryProtocolProducesValidBlocks) {
  for (ProtocolKind p : {ProtocolKind::Prism, ProtocolKind::Ohie, ProtocolKind::FruitChains}) {
    SimConfig c = small(p, p == ProtocolKind::FruitChains ? 1 : 4);
    c.honest_nodes = 2;
    c.params.fruit_ratio = Rational(5);
    c.seed = 14;
    EventLog log = run(c);
    const ChainView view = log.reference_view();
    const BlockStore& st = log.store();
    std::size_t checked = 0;
    for (BlockRef b = st.chain_count(); b < st.size(); ++b) {
      if (!view.contains(b)) continue;
      ++checked;
      Verdict v = Verdict::Valid;
      if (p == ProtocolKind::Prism) v = prism::validate_voter_block(view, log.votes(), b, true);
      if (p == ProtocolKind::Ohie) v = ohie::validate_ohie_block(view, *log.ranks(), b, true);
      if (p == ProtocolKind::FruitChains)
        v = st.kind(b) == BlockKind::Fruit
                ? fruit::validate_fruit(view, b)
                : fruit::validate_fruit_block(view, log.fruits(), b, c.params.recency_value());
      ASSERT_EQ(v, Verdict::Valid) << to_string(p) << " block " << b;
    }
    EXPECT_GT(checked, 100u);
    EXPECT_EQ(log.ranks() != nullptr, p == ProtocolKind::Ohie);
  }
}

TEST(Sim, SnapshotsArriveAtInterval) {
  SimConfig c = small(ProtocolKind::Ohie, 3, 1000);
  c.honest_nodes = 3;
  c.params.delta = 2;
  std::vector<Round> rounds;
  RunHooks hooks;
  hooks.snapshot_interval = 250;
  hooks.on_snapshot = [&](const Snapshot& s) {
    rounds.push_back(s.round);
    EXPECT_EQ(s.honest_views.size(), 3u);
    EXPECT_NE(s.ranks, nullptr);
  };
  run(c, hooks);
  EXPECT_EQ(rounds, (std::vector<Round>{250, 500, 750, 1000}));
}

TEST(Sim, ResolvedAttackStopsRun) {
  SimConfig c = small(ProtocolKind::GenericParallel, 2, 100000);
  c.adversary.fraction = 0.3;
  c.adversary.strategy = StrategyKind::PrivateMiner;
  c.adversary.attack_chain = 0;
  c.adversary.confirm_depth = 2;
  c.seed = 15;
  EventLog log = run(c);
  EXPECT_EQ(log.count(EventKind::Attack), 1u);
  EXPECT_LT(log.end_round, c.duration);
  EXPECT_TRUE(log.complete);
}

TEST(Sim, RejectsInvalidConfig) {
  SimConfig c = small(ProtocolKind::Prism, 1);
  EXPECT_THROW(run(c), ConfigError);
}

TEST(EventLogFormat, RoundTripIsIdentical) {
  for (ProtocolKind p : {ProtocolKind::GenericParallel, ProtocolKind::Prism, ProtocolKind::Ohie, ProtocolKind::FruitChains}) {
    SimConfig c = small(p, p == ProtocolKind::FruitChains ? 1 : 3, 1500);
    c.honest_nodes = 2;
    c.seed = 16;
    if (p == ProtocolKind::GenericParallel) {
      c.adversary.fraction = 0.2;
      c.adversary.strategy = StrategyKind::EpochDelayer;
    }
    const EventLog log = run(c);
    const std::string text = log_text(log);
    EXPECT_EQ(text.substr(0, kEventLogHeader.size()), kEventLogHeader);
    std::istringstream in(text);
    const EventLog back = read_event_log(in, c);
    EXPECT_EQ(log_text(back), text) << to_string(p);
    EXPECT_EQ(back.end_round, log.end_round);
    EXPECT_EQ(back.reference_view().tips(), log.reference_view().tips());
  }
}

TEST(EventLogFormat, RejectsTruncatedOrCorruptLogs) {
  SimConfig c = small(ProtocolKind::GenericParallel, 2, 500);
  const std::string text = log_text(run(c));
  const std::string partial = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  std::istringstream a(partial);
  EXPECT_THROW(read_event_log(a, c), LogFormatError);
  std::istringstream b("round,event\n");
  EXPECT_THROW(read_event_log(b, c), LogFormatError);
  std::string corrupt = text;
  corrupt.insert(kEventLogHeader.size() + 1, "x");
  std::istringstream d(corrupt);
  EXPECT_THROW(read_event_log(d, c), LogFormatError);
}

}  // namespace
}  // namespace pcdiff::sim
