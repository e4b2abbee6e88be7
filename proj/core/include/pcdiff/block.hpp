#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pcdiff/rational.hpp"

namespace pcdiff {

using Round = std::uint32_t;
using ChainId = std::uint32_t;
// Dense index of a block inside a BlockStore. Stable for the life of the store.
using BlockRef = std::uint32_t;
inline constexpr BlockRef kNoBlock = 0xffffffffu;

class BlockId {
 public:
  BlockId() = default;
  explicit BlockId(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}

  // Deterministic id for the index-th block of a store created with `salt`.
  static BlockId derive(std::uint64_t salt, BlockRef index);
  static BlockId from_hex(std::string_view hex);

  std::string hex() const;
  std::string short_hex() const { return hex().substr(0, 12); }
  // Index embedded by derive(); only meaningful for derived ids.
  BlockRef embedded_index() const;
  const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }

  friend auto operator<=>(const BlockId&, const BlockId&) = default;

 private:
  std::array<std::uint8_t, 32> bytes_{};
};

struct Miner {
  std::uint32_t party = 0;
  bool adversary = false;
  friend bool operator==(const Miner&, const Miner&) = default;
};

enum class BlockKind : std::uint8_t { Genesis, Chain, Fruit };

// Materialized view of one stored block. Payloads live in protocol side tables.
struct Block {
  BlockId id;
  BlockKind kind = BlockKind::Chain;
  ChainId chain_id = 0;
  std::optional<BlockId> parent;
  std::optional<BlockId> pivot_ref;
  Round timestamp = 0;
  Rational target;
  Miner miner;
};

}  // namespace pcdiff
