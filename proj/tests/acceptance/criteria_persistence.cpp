#include <algorithm>
#include <sstream>

#include "criteria.hpp"
#include "pcdiff/ohie.hpp"
#include "pcdiff/prism.hpp"
#include "pcdiff/sim.hpp"

namespace pcdiff::acceptance {

namespace {

using Sequence = std::vector<BlockRef>;

bool is_prefix(const Sequence& a, const Sequence& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// One confirmed sequence per (snapshot, view).
struct Observed {
  Round round;
  std::size_t view;
  Sequence seq;
};

struct Violations {
  std::uint64_t pairs = 0;
  std::uint64_t inconsistent = 0;  // neither sequence is a prefix of the other
  std::uint64_t regressions = 0;   // a view's earlier sequence is not a prefix of its later one
};

void check(const std::vector<Observed>& obs, Violations& v) {
  for (std::size_t i = 0; i < obs.size(); ++i)
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      const auto& a = obs[i];
      const auto& b = obs[j];
      ++v.pairs;
      if (!is_prefix(a.seq, b.seq) && !is_prefix(b.seq, a.seq)) ++v.inconsistent;
      if (a.view == b.view && a.round < b.round && !is_prefix(a.seq, b.seq)) ++v.regressions;
    }
}

sim::SimConfig honest_run(sim::ProtocolKind protocol, std::uint64_t seed) {
  sim::SimConfig c;
  c.protocol = protocol;
  c.params.m = 5;
  c.params.phi = 20;
  c.params.delta = 2;
  c.honest_nodes = 3;
  c.duration = 3000;
  c.seed = seed;
  c.resolve();
  return c;
}

Violations ohie_suite() {
  Violations v;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const sim::SimConfig c = honest_run(sim::ProtocolKind::Ohie, seed);
    const std::int64_t window = c.params.ell + 2 * static_cast<std::int64_t>(c.params.delta);
    std::vector<Observed> obs;
    sim::RunHooks hooks;
    hooks.snapshot_interval = 500;
    hooks.on_snapshot = [&](const sim::Snapshot& s) {
      for (std::size_t i = 0; i < s.honest_views.size(); ++i) {
        const auto scb = ohie::generate_scb(*s.honest_views[i], *s.ranks, ohie::TimeRule{window, s.round});
        obs.push_back({s.round, i, scb.blocks});
      }
    };
    sim::run(c, hooks);
    check(obs, v);
  }
  return v;
}

Violations prism_suite() {
  Violations v;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const sim::SimConfig c = honest_run(sim::ProtocolKind::Prism, seed);
    const std::int64_t window = c.params.ell + 2 * static_cast<std::int64_t>(c.params.delta);
    std::vector<Observed> obs;
    sim::RunHooks hooks;
    hooks.snapshot_interval = 500;
    hooks.on_snapshot = [&](const sim::Snapshot& s) {
      for (std::size_t i = 0; i < s.honest_views.size(); ++i) {
        const ChainView& view = *s.honest_views[i];
        // confirmed difficulty: lowest last-voted value among the settled voter chains
        Rational confirmed;
        for (ChainId ch = 1; ch < s.store->chain_count(); ++ch) {
          const Chain settled = prune_recent(view.heaviest_chain(ch), window, s.round, *s.store);
          const Rational d = prism::last_voted(*s.store, settled.back());
          if (ch == 1 || d < confirmed) confirmed = d;
        }
        const auto assignment = prism::assign_leaders(view, prism::collect_votes(view, *s.votes));
        obs.push_back({s.round, i, prism::leader_sequence_below(assignment, confirmed)});
      }
    };
    sim::run(c, hooks);
    check(obs, v);
  }
  return v;
}

}  // namespace

Outcome persistence() {
  const Violations o = ohie_suite();
  const Violations p = prism_suite();
  std::ostringstream d;
  d << "ohie pairs=" << o.pairs << " inconsistent=" << o.inconsistent << " regressions=" << o.regressions
    << "; prism pairs=" << p.pairs << " inconsistent=" << p.inconsistent << " regressions=" << p.regressions;
  const bool ok = o.pairs > 0 && p.pairs > 0 && o.inconsistent + o.regressions + p.inconsistent + p.regressions == 0;
  return {ok, d.str()};
}

}  // namespace pcdiff::acceptance
