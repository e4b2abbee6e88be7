#include <cmath>
#include <sstream>

#include "criteria.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "pcdiff/attack_calc.hpp"
#include "pcdiff/diffadjust.hpp"
#include "pcdiff/ohie.hpp"
#include "world.hpp"

namespace pcdiff::acceptance {

namespace {

template <class... A>
std::string cat(const A&... parts) {
  std::ostringstream out;
  (out << ... << parts);
  return out.str();
}

}  // namespace

// Three chains at unit difficulty, blocks arriving chain by chain.
Outcome ohie_rank_example() {
  testing::World w(3, testing::unit_params());
  ohie::MetaTable meta(*w.store);
  auto extend = [&](ChainId c) {
    const BlockRef parent = w.view->tip(c);
    const BlockRef b = c == 0 ? w.pivot(parent, 1, false) : w.follower(c, parent, w.view->tip(0), 1, false);
    std::vector<BlockRef> tips;
    for (ChainId o = 0; o < 3; ++o)
      if (o != c) tips.push_back(w.view->tip(o));
    meta.set(b, ohie::compute_rank(meta, parent, w.store->difficulty(b), ohie::chain0_parent(*w.store, b), tips));
    w.view->insert(b);
    return b;
  };
  std::vector<BlockRef> c0, c1, c2;
  for (int i = 0; i < 4; ++i) c0.push_back(extend(0));
  for (int i = 0; i < 4; ++i) c1.push_back(extend(1));
  for (int i = 0; i < 3; ++i) c2.push_back(extend(2));

  const auto scb = ohie::generate_scb(*w.view, meta, ohie::KDeep{2});
  const std::vector<BlockRef> want{0, 1, 2, c0[0], c1[0], c2[0], c0[1], c0[2]};
  const bool ok = scb.y == std::vector<Rational>{Rational(4), Rational(7), Rational(9)} &&
                  scb.confirm_bar == Rational(4) && scb.blocks == want;
  return {ok, cat("y=(", scb.y[0].str(), ",", scb.y[1].str(), ",", scb.y[2].str(), ") bar=", scb.confirm_bar.str(),
                  " confirmed=", scb.blocks.size())};
}

Outcome target_oracle() {
  testing::Gen g(2024);
  std::uint64_t epochs = 0, mismatches = 0, out_of_band = 0, below = 0, above = 0;
  while (epochs < 2000) {
    ProtocolParams p;
    p.phi = static_cast<std::uint32_t>(g.integer(1, 12));
    p.tau = Rational(g.integer(2, 16), g.integer(1, 4));
    if (p.tau < Rational(1)) p.tau = Rational(1);
    p.f = Rational(1, g.integer(2, 20));
    p.t0 = g.positive(1000, 1000);
    p.target_precision_bits = 0;
    const std::size_t n = static_cast<std::size_t>(g.integer(p.phi + 1, 8 * p.phi + 1));
    const auto gap = static_cast<std::uint32_t>(g.integer(1, 3 * static_cast<std::int64_t>((Rational(1) / p.f).to_double())));
    const auto ts = g.timestamps(n, gap, 0.05);
    // every boundary prefix is one recalculation
    Rational prev = p.t0;
    for (std::size_t v = p.phi; v < n; v += p.phi) {
      const std::span<const Round> prefix(ts.data(), v + 1);
      const Rational got = diffadjust::next_target(prefix, p);
      ++epochs;
      if (testing::oracle::q(got) != testing::oracle::next_target(std::vector<std::uint32_t>(prefix.begin(), prefix.end()), p))
        ++mismatches;
      const Rational ratio = got / prev;
      if (ratio < Rational(1) / p.tau || ratio > p.tau) ++out_of_band;
      if (ratio == Rational(1) / p.tau) ++below;
      if (ratio == p.tau) ++above;
      prev = got;
    }
  }
  const bool ok = mismatches == 0 && out_of_band == 0 && below > 0 && above > 0;
  return {ok, cat("epochs=", epochs, " mismatches=", mismatches, " out_of_band=", out_of_band, " clamp_low=", below,
                  " clamp_high=", above)};
}

Outcome attack_calculators() {
  bool ok = true;
  std::ostringstream d;
  // (n, t, k) with tk queries at success probability 1/(nk)
  const std::uint64_t cases[][3] = {{10, 3, 10}, {20, 6, 50}, {5, 2, 40}};
  double worst_sigma = 0;
  for (const auto& c : cases) {
    const auto e = testing::oracle::lottery(c[1] * c[2], c[0] * c[2], 20000, 17 + c[2]);
    const double exact = analysis::simple_attack_prob(static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2]));
    const double z = std::abs(exact - e.p) / e.sigma;
    worst_sigma = std::max(worst_sigma, z);
    ok &= z <= 3;
  }
  d << "lottery_max_z=" << worst_sigma;

  double worst_limit = 0;
  for (double n : {1e4, 1e6, 1e8})
    for (double k : {100.0, 1e3, 1e4}) {
      if (n * k < 1e6) continue;
      const double t = 0.3 * n;
      worst_limit = std::max(worst_limit, std::abs(analysis::simple_attack_prob(n, t, k) - analysis::simple_attack_limit(n, t)));
    }
  ok &= worst_limit <= 1e-3;
  d << " limit_gap=" << worst_limit;

  const double p10 = analysis::simple_attack_prob(1e6, 3e5, 10), p1000 = analysis::simple_attack_prob(1e6, 3e5, 1000);
  ok &= std::abs(p10 - p1000) <= 1e-3 && std::abs(analysis::simple_attack_prob(1e6, 3e5, 100) - p10) <= 1e-3;
  d << " k10=" << p10 << " k1000=" << p1000;
  return {ok, d.str()};
}

}  // namespace pcdiff::acceptance
