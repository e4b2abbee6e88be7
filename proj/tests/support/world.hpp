#pragma once

#include <memory>

#include "pcdiff/block_store.hpp"
#include "pcdiff/chain_view.hpp"

namespace pcdiff::testing {

// A store plus one view, for building block trees by hand.
struct World {
  explicit World(std::uint32_t chains, ProtocolParams p = {}, std::uint64_t salt = 7)
      : store(std::make_unique<BlockStore>(chains, p, salt)), view(std::make_unique<ChainView>(*store)) {}

  BlockRef add(ChainId c, BlockRef parent, const Rational& target, Round ts, BlockRef ref = kNoBlock,
               bool insert = true, Miner miner = {}) {
    BlockDraft d;
    d.chain = c;
    d.parent = parent;
    d.pivot_ref = ref;
    d.timestamp = ts;
    d.target = target;
    d.miner = miner;
    BlockRef b = store->add(d);
    if (insert) view->insert(b);
    return b;
  }

  // Pivot block carrying the target the store derives for children of `parent`.
  BlockRef pivot(BlockRef parent, Round ts, bool insert = true) {
    return add(0, parent, store->child_target(parent), ts, kNoBlock, insert);
  }

  // Non-pivot block following M1 for reference `ref`.
  BlockRef follower(ChainId c, BlockRef parent, BlockRef ref, Round ts, bool insert = true) {
    return add(c, parent, store->child_target(ref), ts, ref, insert);
  }

  std::unique_ptr<BlockStore> store;
  std::unique_ptr<ChainView> view;
};

inline ProtocolParams unit_params(std::uint32_t phi = 1000000) {
  ProtocolParams p;
  p.phi = phi;
  p.t0 = Rational(1);
  p.target_precision_bits = 0;
  return p;
}

}  // namespace pcdiff::testing
