#include "pcdiff/sim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"
#include "pcdiff/rng.hpp"
#include "sim_detail.hpp"

namespace pcdiff::sim {

std::vector<double> hashrate_multipliers(const SimConfig& config) {
  const auto& tr = config.trace;
  const double interval = config.round_interval.to_double();
  const double seconds = static_cast<double>(config.duration) * interval * tr.time_scale;
  HashrateTrace trace;
  switch (tr.kind) {
    case TraceKind::Constant:
      return std::vector<double>(static_cast<std::size_t>(config.duration) + 1, 1.0);
    case TraceKind::Ramp:
      trace = ramp_trace(tr.factor, seconds, tr.steps);
      break;
    case TraceKind::Step:
      trace = step_trace(tr.factor, tr.step_fraction * seconds, seconds);
      break;
    case TraceKind::File:
      trace = read_trace_file(tr.file);
      break;
  }
  return replay_trace(trace, interval, config.duration, tr.time_scale);
}

namespace detail {

Simulation::Simulation(const SimConfig& config, const RunHooks& hooks)
    : config_(config), hooks_(hooks), log_(config) {
  const std::uint32_t n = config.honest_nodes + (config.adversary.fraction > 0 ? 1 : 0);
  nodes_.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    nodes_.emplace_back(log_.store());
    nodes_.back().seen.assign(log_.store().size(), Seen::Accepted);
  }
  multipliers_ = hashrate_multipliers(config);
  shares_ = config.node_weights.empty() ? std::vector<double>(config.honest_nodes, 1.0) : config.node_weights;
  const double total = std::accumulate(shares_.begin(), shares_.end(), 0.0);
  for (double& s : shares_) s /= total;
  f_ = config.params.f.to_double();
  t0_ = config.params.t0.to_double();
  honest_delay_ = std::max<std::uint32_t>(config.params.delta, 1);
  release_delay_ = std::max<std::uint32_t>(config.adversary.release_delay, 1);
  ring_.resize(std::max(honest_delay_, release_delay_) + 1);
  if (config.adversary.fraction > 0) adversary_ = make_adversary(config);
}

Simulation::~Simulation() = default;

void Simulation::log_event(EventKind kind, BlockRef b, std::uint32_t node, std::uint8_t code) {
  Event e;
  e.round = now_;
  e.kind = kind;
  e.code = code;
  e.node = static_cast<std::uint16_t>(node);
  e.block = b;
  log_.events.push_back(e);
}

std::uint32_t Simulation::adversary_draw(ChainId c, const Rational& target, std::uint32_t stream) {
  const double mean = f_ * multipliers_[now_] * config_.adversary.fraction * target.to_double() / t0_;
  KeyedRng rng(config_.seed, now_, c, kAdversaryClass + stream);
  return poisson_draw(rng, mean);
}

BlockRef Simulation::create(const BlockDraft& d, std::span<const BlockRef> payload, const ohie::OhieMeta* meta) {
  BlockRef b = log_.store().add(d);
  if (d.kind == BlockKind::Chain) {
    switch (config_.protocol) {
      case ProtocolKind::Prism:
        if (d.chain != 0) log_.votes().set(b, payload);
        break;
      case ProtocolKind::FruitChains:
        log_.fruits().set(b, payload);
        break;
      case ProtocolKind::Ohie:
        if (!meta) throw std::logic_error("OHIE blocks need rank metadata");
        log_.ranks()->set(b, *meta);
        break;
      case ProtocolKind::GenericParallel:
        break;
    }
  }
  log_event(EventKind::Mine, b, d.miner.party);
  return b;
}

Rational Simulation::template_target(const ChainView& view, ChainId c) const {
  (void)c;  // pivot and non-pivot blocks both follow the heaviest pivot tip
  return store().child_target(view.tip(0));
}

BlockRef Simulation::mine_template(Node& node, ChainId c, Miner miner) {
  const ChainView& v = node.view;
  const BlockStore& s = store();
  const BlockRef tip0 = v.tip(0);
  BlockDraft d;
  d.chain = c;
  d.parent = v.tip(c);
  d.timestamp = now_;
  d.miner = miner;
  if (c == 0) {
    d.target = s.child_target(d.parent);
  } else {
    d.pivot_ref = tip0;
    d.target = s.child_target(tip0);
  }
  payload_.clear();
  switch (config_.protocol) {
    case ProtocolKind::Prism:
      if (c != 0) payload_ = prism::honest_votes(s, d.parent, tip0);
      break;
    case ProtocolKind::FruitChains:
      payload_ = fruit::assemble_block(s, log_.fruits(), node.pool, d.parent, now_, params().recency_value());
      break;
    case ProtocolKind::Ohie: {
      ohie::OhieMeta meta = ohie::compute_rank(*log_.ranks(), d.parent, d.target.reciprocal(), c == 0 ? d.parent : tip0, v.tips());
      return create(d, {}, &meta);
    }
    case ProtocolKind::GenericParallel:
      break;
  }
  return create(d, payload_);
}

BlockRef Simulation::mine_fruit(Node& node, Miner miner) {
  const BlockStore& s = store();
  BlockDraft d;
  d.kind = BlockKind::Fruit;
  d.parent = node.view.tip(0);
  d.pivot_ref = fruit::honest_fruit_parent(node.view, params().ell, params().delta, now_);
  d.timestamp = now_;
  d.target = params().fruit_ratio * s.child_target(d.parent);
  d.miner = miner;
  return create(d);
}

void Simulation::publish(BlockRef b) {
  receive(adversary_index(), b);
  schedule(b, now_ + release_delay_, kNobody);
}

void Simulation::withhold(BlockRef b) { log_event(EventKind::Withhold, b, adversary_index()); }

void Simulation::release(BlockRef b) {
  log_event(EventKind::Release, b, adversary_index());
  publish(b);
}

void Simulation::resolve_attack(AttackResult result, BlockRef target) {
  log_event(EventKind::Attack, target, adversary_index(), static_cast<std::uint8_t>(result));
  if (config_.adversary.stop_on_resolution) stopped_ = true;
}

void Simulation::schedule(BlockRef b, Round at, std::uint32_t skip) {
  at = std::max(at, store().timestamp(b));
  if (at - now_ < ring_.size())
    ring_[at % ring_.size()].push_back({b, skip});
  else
    later_.emplace(at, Delivery{b, skip});
}

void Simulation::deliver_due() {
  std::vector<Delivery> due;
  due.swap(ring_[now_ % ring_.size()]);
  for (auto it = later_.begin(); it != later_.end() && it->first <= now_;) {
    due.push_back(it->second);
    it = later_.erase(it);
  }
  for (const auto& d : due)
    for (std::uint32_t i = 0; i < config_.honest_nodes; ++i)
      if (i != d.skip) receive(i, d.block);
}

void Simulation::dependencies(BlockRef b, std::vector<BlockRef>& out) const {
  const BlockStore& s = store();
  out.clear();
  if (s.parent(b) != kNoBlock) out.push_back(s.parent(b));
  if (s.pivot_ref(b) != kNoBlock) out.push_back(s.pivot_ref(b));
  if (s.kind(b) != BlockKind::Chain) return;
  switch (config_.protocol) {
    case ProtocolKind::Prism:
      for (BlockRef p : log_.votes().votes(b)) out.push_back(p);
      break;
    case ProtocolKind::FruitChains:
      for (BlockRef f : log_.fruits().fruits(b)) out.push_back(f);
      break;
    case ProtocolKind::Ohie:
      if (log_.ranks()->has(b)) {
        BlockRef t = log_.ranks()->get(b).trailing_ref;
        if (t < s.size()) out.push_back(t);
      }
      break;
    case ProtocolKind::GenericParallel:
      break;
  }
}

Verdict Simulation::validate(const ChainView& view, BlockRef b) const {
  const bool m2 = config_.enforce_m2;
  switch (config_.protocol) {
    case ProtocolKind::Prism:
      return prism::validate_voter_block(view, log_.votes(), b, m2);
    case ProtocolKind::Ohie:
      return ohie::validate_ohie_block(view, *log_.ranks(), b, m2);
    case ProtocolKind::FruitChains:
      if (store().kind(b) == BlockKind::Fruit) return fruit::validate_fruit(view, b);
      return fruit::validate_fruit_block(view, log_.fruits(), b, params().recency_value());
    case ProtocolKind::GenericParallel:
      break;
  }
  return diffadjust::check_difficulty_rules(view, b, m2);
}

void Simulation::receive(std::uint32_t index, BlockRef b) {
  Node& n = nodes_[index];
  if (n.seen.size() < store().size()) n.seen.resize(store().size(), Seen::Unknown);
  if (n.seen[b] != Seen::Unknown) return;
  work_.clear();
  work_.push_back(b);
  while (!work_.empty()) {
    const BlockRef x = work_.back();
    work_.pop_back();
    if (n.seen[x] != Seen::Unknown) continue;
    dependencies(x, deps_);
    BlockRef missing = kNoBlock;
    bool bad = false;
    for (BlockRef d : deps_) {
      if (n.seen[d] == Seen::Rejected) {
        bad = true;
        break;
      }
      if (n.seen[d] != Seen::Accepted && missing == kNoBlock) missing = d;
    }
    Verdict v = Verdict::InvalidReference;
    if (!bad) {
      if (missing != kNoBlock) {
        n.seen[x] = Seen::Waiting;
        n.waiting[missing].push_back(x);
        continue;
      }
      v = validate(n.view, x);
      if (v == Verdict::Pending) throw std::logic_error("validation pending with all dependencies known");
    }
    if (v == Verdict::Valid) {
      n.view.insert(x);
      n.seen[x] = Seen::Accepted;
      if (index == 0) log_event(EventKind::Accept, x, 0);
      if (store().kind(x) == BlockKind::Fruit) n.pool.add(x);
    } else {
      n.seen[x] = Seen::Rejected;
      if (index == 0) log_event(EventKind::Reject, x, 0, static_cast<std::uint8_t>(v));
    }
    if (auto it = n.waiting.find(x); it != n.waiting.end()) {
      std::vector<BlockRef> woken = std::move(it->second);
      n.waiting.erase(it);
      for (BlockRef w : woken) {
        n.seen[w] = Seen::Unknown;
        work_.push_back(w);
      }
    }
  }
}

void Simulation::honest_round(double multiplier) {
  const double beta = config_.adversary.fraction;
  const std::uint32_t chains = config_.chain_count();
  for (std::uint32_t i = 0; i < config_.honest_nodes; ++i) {
    Node& n = nodes_[i];
    const Miner m{i, false};
    const double base = f_ * multiplier * (1 - beta) * shares_[i];
    if (config_.protocol == ProtocolKind::FruitChains) {
      Rational t = params().fruit_ratio * store().child_target(n.view.tip(0));
      KeyedRng rng(config_.seed, now_, 0, kFruitClass + i);
      for (std::uint32_t k = poisson_draw(rng, base * t.to_double() / t0_); k > 0; --k) {
        BlockRef b = mine_fruit(n, m);
        receive(i, b);
        fresh_.emplace_back(b, i);
      }
    }
    for (ChainId c = 0; c < chains; ++c) {
      const double t = template_target(n.view, c).to_double();
      KeyedRng rng(config_.seed, now_, c, i);
      for (std::uint32_t k = poisson_draw(rng, base * t / t0_); k > 0; --k) {
        BlockRef b = mine_template(n, c, m);
        receive(i, b);
        fresh_.emplace_back(b, i);
      }
    }
  }
}

void Simulation::sample(double multiplier) {
  const ChainView& v = nodes_[0].view;
  BandSample s;
  s.round = now_;
  s.multiplier = multiplier;
  s.min_target = store().target(v.tip(0));
  s.max_target = s.min_target;
  for (ChainId c = 1; c < config_.chain_count(); ++c) {
    const Rational& t = store().target(v.tip(c));
    if (t < s.min_target) s.min_target = t;
    if (t > s.max_target) s.max_target = t;
  }
  Event e;
  e.round = now_;
  e.kind = EventKind::Sample;
  e.aux = static_cast<std::uint32_t>(log_.samples.size());
  log_.samples.push_back(std::move(s));
  log_.events.push_back(e);
}

void Simulation::record_round(double multiplier) {
  diffadjust::RoundRecord rec;
  rec.round = now_;
  rec.honest_power = multiplier * (1 - config_.adversary.fraction);
  rec.t_min = store().child_target(nodes_[0].view.tip(0));
  rec.t_max = rec.t_min;
  for (std::uint32_t i = 1; i < config_.honest_nodes; ++i) {
    const Rational& t = store().child_target(nodes_[i].view.tip(0));
    if (t < rec.t_min) rec.t_min = t;
    if (t > rec.t_max) rec.t_max = t;
  }
  good_.good += diffadjust::good_round_fraction({rec}, params()) > 0.5 ? 1 : 0;
  ++good_.total;
}

void Simulation::snapshot() {
  Snapshot s;
  s.round = now_;
  s.store = &store();
  for (std::uint32_t i = 0; i < config_.honest_nodes; ++i) s.honest_views.push_back(&nodes_[i].view);
  s.votes = &log_.votes();
  s.fruits = &log_.fruits();
  s.ranks = log_.ranks();
  hooks_.on_snapshot(s);
}

EventLog Simulation::run() {
  Round last_sample = 0;
  for (Round r = 1; r <= config_.duration; ++r) {
    now_ = r;
    const double mult = multipliers_[r];
    deliver_due();
    if (adversary_) adversary_->observe(*this);
    if (stopped_) break;
    honest_round(mult);
    for (auto [b, i] : fresh_) {
      schedule(b, now_ + honest_delay_, i);
      if (adversary_) receive(adversary_index(), b);
    }
    fresh_.clear();
    if (adversary_) adversary_->act(*this);
    if (config_.protocol == ProtocolKind::FruitChains && r % 64 == 0)
      for (auto& n : nodes_) n.pool.prune(store(), now_, params().recency_value());
    if (config_.metrics.record_rounds) record_round(mult);
    if (r % config_.metrics.sample_interval == 0 || r == config_.duration) {
      sample(mult);
      last_sample = r;
    }
    if (hooks_.snapshot_interval && hooks_.on_snapshot && r % hooks_.snapshot_interval == 0) snapshot();
    if (stopped_) break;
  }
  if (last_sample != now_) sample(multipliers_[now_]);
  if (adversary_ && adversary_->attack_open()) log_event(EventKind::Attack, kNoBlock, adversary_index(),
                                                         static_cast<std::uint8_t>(AttackResult::Unresolved));
  if (config_.metrics.record_rounds) {
    log_.good_rounds = good_;
    log_event(EventKind::GoodRounds, kNoBlock, 0);
  }
  log_event(EventKind::End, kNoBlock, 0);
  log_.end_round = now_;
  log_.complete = true;
  return std::move(log_);
}

}  // namespace detail

EventLog run(const SimConfig& config, const RunHooks& hooks) {
  SimConfig resolved = config;
  resolved.resolve();
  resolved.validate();
  detail::Simulation sim(resolved, hooks);
  return sim.run();
}

}  // namespace pcdiff::sim
