#include <algorithm>

#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"
#include "sim_detail.hpp"

namespace pcdiff::sim::detail {

namespace {

Round settle_round(const Simulation& sim, Round released_at) {
  return released_at + std::max<std::uint32_t>(sim.config().adversary.release_delay, 1);
}

void mine_public_chain(Simulation& sim, ChainId c) {
  Node& n = sim.adversary_node();
  const std::uint32_t k = sim.adversary_draw(c, sim.template_target(n.view, c));
  for (std::uint32_t j = 0; j < k; ++j) sim.publish(sim.mine_template(n, c, sim.adversary_miner()));
}

// Mines with the honest rules and publishes at once.
class HonestLike final : public Adversary {
 public:
  void act(Simulation& sim) override {
    Node& n = sim.adversary_node();
    if (sim.config().protocol == ProtocolKind::FruitChains) {
      Rational t = sim.params().fruit_ratio * sim.store().child_target(n.view.tip(0));
      const std::uint32_t k = sim.adversary_draw(0, t, kFruitClass);
      for (std::uint32_t j = 0; j < k; ++j) sim.publish(sim.mine_fruit(n, sim.adversary_miner()));
    }
    for (ChainId c = 0; c < sim.config().chain_count(); ++c) mine_public_chain(sim, c);
  }
};

// Mines the pivot chain honestly and keeps non-pivot blocks on the previous epoch's target.
class EpochDelayer final : public Adversary {
 public:
  void act(Simulation& sim) override {
    mine_public_chain(sim, 0);
    Node& n = sim.adversary_node();
    const BlockStore& s = sim.store();
    for (ChainId c = 1; c < sim.config().chain_count(); ++c) {
      const std::uint32_t k = sim.adversary_draw(c, s.child_target(reference(sim, n.view.tip(c))));
      for (std::uint32_t j = 0; j < k; ++j) {
        BlockDraft d;
        d.chain = c;
        d.parent = n.view.tip(c);
        d.pivot_ref = reference(sim, d.parent);
        d.target = s.child_target(d.pivot_ref);
        d.timestamp = sim.now();
        d.miner = sim.adversary_miner();
        sim.publish(sim.create(d));
      }
    }
  }

 private:
  static BlockRef reference(Simulation& sim, BlockRef parent) {
    const BlockStore& s = sim.store();
    const BlockRef tip0 = sim.adversary_node().view.tip(0);
    const std::uint32_t phi = sim.params().phi;
    const std::uint32_t e = s.height(tip0) / phi;
    if (e == 0) return tip0;
    const BlockRef old = s.ancestor_at(tip0, e * phi - 1);
    const BlockRef floor = diffadjust::monotonicity_floor(s, parent);
    if (!sim.config().enforce_m2 || s.chain_difficulty(old) >= s.chain_difficulty(floor)) return old;
    return floor;
  }
};

// Non-pivot blocks reference the pivot genesis block.
class GenesisReferrer final : public Adversary {
 public:
  void act(Simulation& sim) override {
    mine_public_chain(sim, 0);
    Node& n = sim.adversary_node();
    const BlockStore& s = sim.store();
    const BlockRef g = s.genesis(0);
    for (ChainId c = 1; c < sim.config().chain_count(); ++c) {
      const std::uint32_t k = sim.adversary_draw(c, s.child_target(g));
      for (std::uint32_t j = 0; j < k; ++j) {
        BlockDraft d;
        d.chain = c;
        d.parent = n.view.tip(c);
        d.pivot_ref = g;
        d.target = s.child_target(g);
        d.timestamp = sim.now();
        d.miner = sim.adversary_miner();
        sim.publish(sim.create(d));
      }
    }
  }
};

// Withholds a fork from the parent of the public tip on the attack chain and
// releases it once the forked-off block is k deep and the fork is heavier.
class PrivateMiner final : public Adversary {
 public:
  bool attack_open() const override { return phase_ != Phase::Idle; }

  void observe(Simulation& sim) override {
    if (phase_ != Phase::Released || sim.now() < settle_round(sim, released_at_)) return;
    const ChainId c = sim.config().adversary.attack_chain;
    const bool kept = sim.store().is_ancestor_or_self(victim_, sim.reference_view().tip(c));
    sim.resolve_attack(kept ? AttackResult::Failure : AttackResult::Success, victim_);
    phase_ = Phase::Idle;
  }

  void act(Simulation& sim) override {
    if (sim.now() < sim.config().adversary.attack_start) return;
    const auto& adv = sim.config().adversary;
    const ChainId c = adv.attack_chain;
    Node& n = sim.adversary_node();
    const BlockStore& s = sim.store();
    if (phase_ == Phase::Idle) {
      const BlockRef tip = n.view.tip(c);
      if (s.is_genesis(tip)) return;
      victim_ = tip;
      tip_ = s.parent(tip);
      blocks_.clear();
      phase_ = Phase::Mining;
    }
    if (phase_ != Phase::Mining) return;

    const std::uint32_t k = sim.adversary_draw(c, next_target(sim));
    for (std::uint32_t j = 0; j < k; ++j) {
      BlockDraft d;
      d.chain = c;
      d.parent = tip_;
      if (c != 0) d.pivot_ref = n.view.tip(0);
      d.target = next_target(sim);
      d.timestamp = sim.now();
      d.miner = sim.adversary_miner();
      tip_ = sim.create(d);
      sim.withhold(tip_);
      blocks_.push_back(tip_);
    }

    const BlockRef pub = n.view.tip(c);
    if (!s.is_ancestor_or_self(victim_, pub)) {
      sim.resolve_attack(AttackResult::Failure, victim_);
      phase_ = Phase::Idle;
      return;
    }
    const std::uint32_t depth = s.height(pub) - s.height(victim_) + 1;
    if (depth >= adv.confirm_depth && s.chain_difficulty(tip_) > s.chain_difficulty(pub)) {
      for (BlockRef b : blocks_) sim.release(b);
      released_at_ = sim.now();
      phase_ = Phase::Released;
    } else if (s.height(pub) >= s.height(tip_) + adv.giveup_blocks) {
      sim.resolve_attack(AttackResult::Failure, victim_);
      phase_ = Phase::Idle;
    }
  }

 private:
  enum class Phase { Idle, Mining, Released };

  Rational next_target(Simulation& sim) const {
    const ChainId c = sim.config().adversary.attack_chain;
    return c == 0 ? sim.store().child_target(tip_) : sim.store().child_target(sim.adversary_node().view.tip(0));
  }

  Phase phase_ = Phase::Idle;
  BlockRef victim_ = kNoBlock;
  BlockRef tip_ = kNoBlock;
  std::vector<BlockRef> blocks_;
  Round released_at_ = 0;
};

// Private pivot branch from genesis whose timestamps advance one round per block.
class Raiser {
 public:
  void start(const BlockStore& s) {
    tip_ = s.genesis(0);
    blocks_.clear();
  }

  void mine(Simulation& sim) {
    const BlockStore& s = sim.store();
    const std::uint32_t k = sim.adversary_draw(0, s.child_target(tip_));
    for (std::uint32_t j = 0; j < k; ++j) {
      BlockDraft d;
      d.chain = 0;
      d.parent = tip_;
      d.target = s.child_target(tip_);
      d.timestamp = s.timestamp(tip_) + 1;
      d.miner = sim.adversary_miner();
      tip_ = sim.create(d);
      sim.withhold(tip_);
      blocks_.push_back(tip_);
    }
  }

  void release_all(Simulation& sim) {
    for (BlockRef b : blocks_) sim.release(b);
    blocks_.clear();
  }

  BlockRef tip() const { return tip_; }
  Rational next_difficulty(const BlockStore& s) const { return s.child_target(tip_).reciprocal(); }

 private:
  BlockRef tip_ = kNoBlock;
  std::vector<BlockRef> blocks_;
};

// Difficulty the raised branch must reach before the attack is armed.
Rational arming_difficulty(Simulation& sim) {
  const auto& adv = sim.config().adversary;
  const Rational honest = sim.store().child_target(sim.adversary_node().view.tip(0)).reciprocal();
  return adv.attack_margin * Rational(adv.confirm_depth + 1) * honest;
}

// Raises the private pivot difficulty and releases the branch once it outweighs
// the public pivot chain while that chain has at least k blocks.
class DifficultyRaiser final : public Adversary {
 public:
  bool attack_open() const override { return phase_ != Phase::Idle; }

  void observe(Simulation& sim) override {
    if (phase_ != Phase::Released || sim.now() < settle_round(sim, released_at_)) return;
    const bool won = sim.store().is_ancestor_or_self(raiser_.tip(), sim.reference_view().tip(0));
    sim.resolve_attack(won ? AttackResult::Success : AttackResult::Failure, victim_);
    phase_ = Phase::Idle;
  }

  void act(Simulation& sim) override {
    if (sim.now() < sim.config().adversary.attack_start) return;
    const BlockStore& s = sim.store();
    const std::uint32_t k = sim.config().adversary.confirm_depth;
    if (phase_ == Phase::Idle) {
      raiser_.start(s);
      armed_ = false;
      phase_ = Phase::Raising;
    }
    if (phase_ != Phase::Raising) return;
    raiser_.mine(sim);
    const BlockRef pub = sim.adversary_node().view.tip(0);
    const Rational x = raiser_.next_difficulty(s);
    if (!armed_ && x >= arming_difficulty(sim)) armed_ = true;
    const Rational& mine = s.chain_difficulty(raiser_.tip());
    const Rational& theirs = s.chain_difficulty(pub);
    if (mine > theirs && s.height(pub) >= k) {
      victim_ = s.ancestor_at(pub, s.height(pub) - k + 1);
      raiser_.release_all(sim);
      released_at_ = sim.now();
      phase_ = Phase::Released;
    } else if (armed_ && theirs >= mine + x) {
      sim.resolve_attack(AttackResult::Failure, kNoBlock);
      phase_ = Phase::Idle;
    }
  }

 private:
  enum class Phase { Idle, Raising, Released };
  Phase phase_ = Phase::Idle;
  Raiser raiser_;
  bool armed_ = false;
  BlockRef victim_ = kNoBlock;
  Round released_at_ = 0;
};

// Raises a private pivot branch, then mines one non-pivot block on the attack chain
// that references the raised block and outweighs k public blocks.
class StalePivotRef final : public Adversary {
 public:
  bool attack_open() const override { return phase_ != Phase::Idle; }

  void observe(Simulation& sim) override {
    if (phase_ != Phase::Released || sim.now() < settle_round(sim, released_at_)) return;
    const ChainId c = sim.config().adversary.attack_chain;
    const bool kept = sim.store().is_ancestor_or_self(victim_, sim.reference_view().tip(c));
    sim.resolve_attack(kept ? AttackResult::Failure : AttackResult::Success, victim_);
    phase_ = Phase::Idle;
  }

  void act(Simulation& sim) override {
    if (sim.now() < sim.config().adversary.attack_start) return;
    const auto& adv = sim.config().adversary;
    const ChainId c = adv.attack_chain;
    const BlockStore& s = sim.store();
    Node& n = sim.adversary_node();
    switch (phase_) {
      case Phase::Idle:
        raiser_.start(s);
        phase_ = Phase::Raising;
        [[fallthrough]];
      case Phase::Raising:
        raiser_.mine(sim);
        if (raiser_.next_difficulty(s) >= arming_difficulty(sim)) {
          stale_ = raiser_.tip();
          fork_ = n.view.tip(c);
          victim_ = kNoBlock;
          phase_ = Phase::Racing;
        }
        return;
      case Phase::Racing: {
        const BlockRef pub = track(sim);
        if (s.chain_difficulty(pub) >= s.chain_difficulty(fork_) + s.child_target(stale_).reciprocal()) {
          sim.resolve_attack(AttackResult::Failure, victim_);
          phase_ = Phase::Idle;
          return;
        }
        if (sim.adversary_draw(c, s.child_target(stale_)) == 0) return;
        BlockDraft d;
        d.chain = c;
        d.parent = fork_;
        d.pivot_ref = stale_;
        d.target = s.child_target(stale_);
        d.timestamp = sim.now();
        d.miner = sim.adversary_miner();
        heavy_ = sim.create(d);
        sim.withhold(heavy_);
        phase_ = Phase::Holding;
        [[fallthrough]];
      }
      case Phase::Holding: {
        const BlockRef pub = track(sim);
        if (s.chain_difficulty(pub) >= s.chain_difficulty(heavy_)) {
          sim.resolve_attack(AttackResult::Failure, victim_);
          phase_ = Phase::Idle;
          return;
        }
        if (victim_ != kNoBlock && s.height(pub) - s.height(victim_) + 1 >= adv.confirm_depth) {
          // A raised branch that outweighs the public pivot chain is not a stale reference.
          if (s.chain_difficulty(raiser_.tip()) >= s.chain_difficulty(n.view.tip(0))) {
            sim.resolve_attack(AttackResult::Failure, victim_);
            phase_ = Phase::Idle;
            return;
          }
          raiser_.release_all(sim);
          sim.release(heavy_);
          released_at_ = sim.now();
          phase_ = Phase::Released;
        }
        return;
      }
      case Phase::Released:
        return;
    }
  }

 private:
  enum class Phase { Idle, Raising, Racing, Holding, Released };

  // Public tip of the attack chain; keeps the victim pointed at the public child of the fork point.
  BlockRef track(Simulation& sim) {
    const BlockStore& s = sim.store();
    const BlockRef pub = sim.adversary_node().view.tip(sim.config().adversary.attack_chain);
    if (s.is_ancestor_or_self(fork_, pub) && s.height(pub) > s.height(fork_))
      victim_ = s.ancestor_at(pub, s.height(fork_) + 1);
    else
      victim_ = kNoBlock;
    return pub;
  }

  Phase phase_ = Phase::Idle;
  Raiser raiser_;
  BlockRef stale_ = kNoBlock;
  BlockRef fork_ = kNoBlock;
  BlockRef heavy_ = kNoBlock;
  BlockRef victim_ = kNoBlock;
  Round released_at_ = 0;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const SimConfig& config) {
  switch (config.adversary.strategy) {
    case StrategyKind::None: return std::make_unique<HonestLike>();
    case StrategyKind::EpochDelayer: return std::make_unique<EpochDelayer>();
    case StrategyKind::GenesisReferrer: return std::make_unique<GenesisReferrer>();
    case StrategyKind::DifficultyRaiser: return std::make_unique<DifficultyRaiser>();
    case StrategyKind::PrivateMiner: return std::make_unique<PrivateMiner>();
    case StrategyKind::StalePivotRef: return std::make_unique<StalePivotRef>();
  }
  throw ConfigError("unknown adversary strategy");
}

}  // namespace pcdiff::sim::detail
