#include "pcdiff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pcdiff/fruitchains.hpp"
#include "pcdiff/prism.hpp"

namespace pcdiff::analysis {

namespace {

bool is_tree_block(const BlockStore& s, BlockRef b) { return s.kind(b) == BlockKind::Chain; }

// Marks every block on the heaviest chain of each tree chain.
std::vector<char> main_chain_marks(const ChainView& view) {
  const BlockStore& s = view.store();
  std::vector<char> on(s.size(), 0);
  for (ChainId c = 0; c < s.chain_count(); ++c)
    for (BlockRef b = view.tip(c);; b = s.parent(b)) {
      on[b] = 1;
      if (s.is_genesis(b)) break;
    }
  return on;
}

// Epoch of the difficulty a tree block was mined under.
std::uint64_t block_epoch(const BlockStore& s, BlockRef b) {
  if (s.is_genesis(b)) return 0;
  return s.child_epoch(s.chain(b) == 0 ? s.parent(b) : s.pivot_ref(b));
}

}  // namespace

Rational forking_rate(const ForkCount& count) {
  if (count.on_chain == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(count.off_chain), static_cast<std::int64_t>(count.on_chain));
}

ForkCount count_forks(const ChainView& view, ChainId c) {
  const BlockStore& s = view.store();
  ForkCount out;
  std::vector<char> on(s.size(), 0);
  for (BlockRef b = view.tip(c); !s.is_genesis(b); b = s.parent(b)) on[b] = 1;
  for (BlockRef b = 0; b < s.size(); ++b) {
    if (!view.contains(b) || s.chain(b) != c || !is_tree_block(s, b)) continue;
    ++(on[b] ? out.on_chain : out.off_chain);
  }
  return out;
}

Rational forking_rate(const ChainView& view) {
  ForkCount total;
  for (ChainId c = 0; c < view.store().chain_count(); ++c) {
    ForkCount k = count_forks(view, c);
    total.on_chain += k.on_chain;
    total.off_chain += k.off_chain;
  }
  return forking_rate(total);
}

std::vector<ForkingWindow> forking_series(const ChainView& view, Round end_round, std::uint32_t windows) {
  std::vector<ForkingWindow> out;
  if (windows == 0) return out;
  const BlockStore& s = view.store();
  const std::uint64_t span = static_cast<std::uint64_t>(end_round) + 1;
  out.resize(windows);
  for (std::uint32_t w = 0; w < windows; ++w) {
    out[w].begin = static_cast<Round>(span * w / windows);
    out[w].end = static_cast<Round>(span * (w + 1) / windows);
  }
  const std::vector<char> on = main_chain_marks(view);
  for (BlockRef b = 0; b < s.size(); ++b) {
    if (!view.contains(b) || !is_tree_block(s, b)) continue;
    const std::uint64_t ts = std::min<std::uint64_t>(s.timestamp(b), end_round);
    ForkCount& k = out[ts * windows / span].count;
    ++(on[b] ? k.on_chain : k.off_chain);
  }
  return out;
}

std::uint64_t AdoptionDelays::samples() const {
  std::uint64_t n = 0;
  for (const auto& [d, k] : blocks) n += k;
  return n;
}

double AdoptionDelays::fraction_within(std::uint32_t lo, std::uint32_t hi) const {
  const std::uint64_t n = samples();
  if (n == 0) return 0;
  std::uint64_t in = 0;
  for (const auto& [d, k] : blocks)
    if (d >= lo && d <= hi) in += k;
  return static_cast<double>(in) / static_cast<double>(n);
}

AdoptionDelays epoch_adoption_delay(const ChainView& view, const Rational& f) {
  const BlockStore& s = view.store();
  AdoptionDelays out;
  const std::uint32_t phi = s.params().phi;
  const Chain pivot = view.heaviest_chain(0);
  const std::uint64_t boundaries = (pivot.size() - 1) / phi;
  if (boundaries == 0) return out;
  const double rate = f.to_double();

  for (ChainId c = 1; c < s.chain_count(); ++c) {
    const Chain chain = view.heaviest_chain(c);
    // first[k]: index of the first block of epoch >= k
    std::vector<std::size_t> first(boundaries + 1, chain.size());
    std::uint64_t reached = 0;
    for (std::size_t i = 1; i < chain.size() && reached < boundaries; ++i) {
      const std::uint64_t e = std::min<std::uint64_t>(block_epoch(s, chain[i]), boundaries);
      for (; reached < e; ++reached) first[reached + 1] = i;
    }
    for (std::uint64_t k = 1; k <= boundaries; ++k) {
      ++out.transitions;
      if (first[k] == chain.size()) {
        ++out.censored;
        continue;
      }
      const Round tb = s.timestamp(pivot[k * phi]);
      std::uint32_t late = 0;
      for (std::size_t i = first[k] - 1; i > 0 && s.timestamp(chain[i]) >= tb; --i)
        if (block_epoch(s, chain[i]) < k) ++late;
      ++out.blocks[late + 1];
      const Round tn = s.timestamp(chain[first[k]]);
      const double wait = tn > tb ? static_cast<double>(tn - tb) * rate : 0.0;
      ++out.intervals[static_cast<std::uint32_t>(std::ceil(wait - 1e-12))];
    }
  }
  return out;
}

DifficultyChanges difficulty_changes(const ChainView& view, ChainId c) {
  const BlockStore& s = view.store();
  DifficultyChanges out;
  for (BlockRef b = view.tip(c); !s.is_genesis(b); b = s.parent(b)) {
    const BlockRef p = s.parent(b);
    if (s.target_id(b) == s.target_id(p)) continue;
    ++out.changes;
    if (block_epoch(s, b) <= block_epoch(s, p)) ++out.mid_epoch;
  }
  return out;
}

double difficulty_change_frequency(const ChainView& view, ChainId c, double seconds) {
  if (seconds <= 0) return 0;
  return static_cast<double>(difficulty_changes(view, c).changes) / seconds;
}

AttackCounts attack_counts(const sim::EventLog& log) {
  AttackCounts out;
  for (const sim::Event& e : log.events) {
    if (e.kind != sim::EventKind::Attack) continue;
    switch (static_cast<sim::AttackResult>(e.code)) {
      case sim::AttackResult::Success: ++out.success; break;
      case sim::AttackResult::Failure: ++out.failure; break;
      case sim::AttackResult::Unresolved: ++out.unresolved; break;
    }
  }
  return out;
}

FairnessReport fairness(const sim::EventLog& log, const ChainView& view) {
  const BlockStore& s = log.store();
  const sim::SimConfig& cfg = log.config();
  const ProtocolParams& p = cfg.params;
  FairnessReport out;
  const Round wait = p.r_wait();
  out.begin = cfg.metrics.fairness_begin ? cfg.metrics.fairness_begin : wait;
  out.end = cfg.metrics.fairness_end ? cfg.metrics.fairness_end : (log.end_round > wait ? log.end_round - wait : 0);
  const std::set<std::uint32_t> subset(cfg.metrics.fairness_subset.begin(), cfg.metrics.fairness_subset.end());
  const BlockRef tip = view.tip(0);
  out.fraction = fruit::fairness_fraction(s, log.fruits(), tip, out.begin, out.end, subset);

  std::vector<char> on(s.size(), 0);
  for (BlockRef b = tip; !s.is_genesis(b); b = s.parent(b))
    for (BlockRef f : log.fruits().fruits(b)) on[f] = 1;
  const std::int64_t cutoff = static_cast<std::int64_t>(log.end_round) - p.recency_value();
  for (BlockRef f = 0; f < s.size(); ++f) {
    if (s.kind(f) != BlockKind::Fruit || s.miner(f).adversary) continue;
    if (static_cast<std::int64_t>(s.timestamp(f)) > cutoff) continue;
    ++out.honest_fruits;
    if (!on[f]) ++out.lost_fruits;
  }
  return out;
}

MetricsReport compute_metrics(const sim::EventLog& log) {
  const sim::SimConfig& cfg = log.config();
  const ChainView view = log.reference_view();
  const BlockStore& s = log.store();
  MetricsReport r;
  r.end_round = log.end_round;
  r.seconds = static_cast<double>(log.end_round) * cfg.round_interval.to_double();
  for (ChainId c = 0; c < s.chain_count(); ++c) {
    ChainStats st;
    st.chain = c;
    st.forks = count_forks(view, c);
    st.changes = difficulty_changes(view, c);
    st.changes_per_second = r.seconds > 0 ? static_cast<double>(st.changes.changes) / r.seconds : 0;
    r.forks.on_chain += st.forks.on_chain;
    r.forks.off_chain += st.forks.off_chain;
    r.chains.push_back(st);
  }
  r.forking_rate = forking_rate(r.forks);
  r.forking_series = forking_series(view, log.end_round, cfg.metrics.windows);
  r.band = log.samples;
  r.adoption = epoch_adoption_delay(view, cfg.params.f);
  if (cfg.protocol == sim::ProtocolKind::Prism) r.overhead = prism::intervals_vs_levels(view);
  if (cfg.protocol == sim::ProtocolKind::FruitChains) r.fairness = fairness(log, view);
  r.attacks = attack_counts(log);
  r.good_rounds = log.good_rounds;
  return r;
}

}  // namespace pcdiff::analysis
