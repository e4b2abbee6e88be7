#include "pcdiff/block_store.hpp"

#include <algorithm>

#include "pcdiff/errors.hpp"

namespace pcdiff {

BlockStore::BlockStore(std::uint32_t chain_count, const ProtocolParams& params, std::uint64_t id_salt)
    : chain_count_(chain_count), params_(params), salt_(id_salt), epochs_(params) {
  if (chain_count == 0) throw DomainError("at least one chain is required");
  if (params.t0.sign() <= 0) throw DomainError("initial target must be positive");
  std::uint32_t t0 = intern_target(params.t0);
  for (ChainId c = 0; c < chain_count; ++c) {
    kind_.push_back(BlockKind::Genesis);
    chain_.push_back(c);
    parent_.push_back(kNoBlock);
    pivot_ref_.push_back(kNoBlock);
    timestamp_.push_back(0);
    height_.push_back(0);
    target_id_.push_back(t0);
    party_.push_back(0);
    local_.push_back(c == 0 ? 0 : kNoBlock);
    chaindiff_.push_back(params.t0.reciprocal());
  }
  epochs_.add_genesis(0);
}

std::uint32_t BlockStore::intern_target(const Rational& t) {
  auto it = target_index_.find(t);
  if (it != target_index_.end()) return it->second;
  targets_.push_back(t);
  auto id = static_cast<std::uint32_t>(targets_.size() - 1);
  target_index_.emplace(t, id);
  return id;
}

BlockRef BlockStore::add(const BlockDraft& d) {
  if (d.target.sign() <= 0) throw DomainError("block target must be positive");
  auto known = [&](BlockRef b) { return b != kNoBlock && b < size(); };
  std::uint32_t height = 0;
  Rational cd;
  if (d.kind == BlockKind::Chain) {
    if (d.chain >= chain_count_) throw LookupError("chain id out of range");
    if (!known(d.parent) || chain_[d.parent] != d.chain || kind_[d.parent] == BlockKind::Fruit)
      throw LookupError("parent must be a known block on the same chain");
    if (d.chain == 0 && d.pivot_ref != kNoBlock) throw LookupError("pivot blocks carry no pivot reference");
    if (d.chain != 0 && (!known(d.pivot_ref) || chain_[d.pivot_ref] != 0))
      throw LookupError("pivot reference must be a known chain-0 block");
    height = height_[d.parent] + 1;
    cd = chaindiff_[d.parent] + d.target.reciprocal();
  } else if (d.kind == BlockKind::Fruit) {
    if (!known(d.parent) || chain_[d.parent] != 0 || !known(d.pivot_ref) || chain_[d.pivot_ref] != 0)
      throw LookupError("fruit parents must be known chain-0 blocks");
    cd = d.target.reciprocal();
  } else {
    throw DomainError("genesis blocks are created with the store");
  }

  auto b = static_cast<BlockRef>(size());
  kind_.push_back(d.kind);
  chain_.push_back(d.kind == BlockKind::Fruit ? fruit_chain() : d.chain);
  parent_.push_back(d.parent);
  pivot_ref_.push_back(d.pivot_ref);
  timestamp_.push_back(d.timestamp);
  height_.push_back(height);
  target_id_.push_back(intern_target(d.target));
  party_.push_back((d.miner.party & 0x7fffffffu) | (d.miner.adversary ? 0x80000000u : 0u));
  chaindiff_.push_back(std::move(cd));
  if (d.kind == BlockKind::Chain && d.chain == 0) {
    local_.push_back(static_cast<std::uint32_t>(epochs_.size()));
    epochs_.add(local_[d.parent], height, d.timestamp);
  } else {
    local_.push_back(kNoBlock);
  }
  return b;
}

Interval BlockStore::covered_interval(BlockRef b) const {
  if (kind_[b] == BlockKind::Fruit) throw LookupError("fruits do not cover a chain interval");
  Rational lo = is_genesis(b) ? Rational(0) : chaindiff_[parent_[b]];
  return Interval{std::move(lo), chaindiff_[b]};
}

std::optional<BlockRef> BlockStore::find(const BlockId& id) const {
  BlockRef b = id.embedded_index();
  if (b < size() && BlockId::derive(salt_, b) == id) return b;
  return std::nullopt;
}

BlockRef BlockStore::lookup(const BlockId& id) const {
  if (auto b = find(id)) return *b;
  throw LookupError("unknown block id " + id.short_hex());
}

Block BlockStore::block(BlockRef b) const {
  Block out;
  out.id = id(b);
  out.kind = kind_[b];
  out.chain_id = chain_[b];
  if (parent_[b] != kNoBlock) out.parent = id(parent_[b]);
  if (pivot_ref_[b] != kNoBlock) out.pivot_ref = id(pivot_ref_[b]);
  out.timestamp = timestamp_[b];
  out.target = target(b);
  out.miner = miner(b);
  return out;
}

const Rational& BlockStore::child_target(BlockRef pivot_block) const {
  if (pivot_block >= size() || local_[pivot_block] == kNoBlock) throw LookupError("not a pivot block");
  return epochs_.child_target(local_[pivot_block]);
}

diffadjust::EpochState BlockStore::epoch_state(BlockRef pivot_block) const {
  if (pivot_block >= size() || local_[pivot_block] == kNoBlock) throw LookupError("not a pivot block");
  return epochs_.state(local_[pivot_block]);
}

BlockRef BlockStore::ancestor_at(BlockRef b, std::uint32_t h) const {
  if (h > height_[b]) return kNoBlock;
  while (height_[b] > h) b = parent_[b];
  return b;
}

bool BlockStore::is_ancestor_or_self(BlockRef a, BlockRef b) const {
  if (chain_[a] != chain_[b] || kind_[a] == BlockKind::Fruit || kind_[b] == BlockKind::Fruit) return false;
  return ancestor_at(b, height_[a]) == a;
}

std::vector<BlockRef> BlockStore::path(BlockRef tip) const {
  std::vector<BlockRef> out(height_[tip] + 1);
  for (BlockRef b = tip;; b = parent_[b]) {
    out[height_[b]] = b;
    if (is_genesis(b)) break;
  }
  return out;
}

}  // namespace pcdiff
