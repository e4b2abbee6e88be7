#include "pcdiff/block.hpp"

#include "pcdiff/errors.hpp"

namespace pcdiff {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void put64(std::array<std::uint8_t, 32>& b, int at, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
}

}  // namespace

BlockId BlockId::derive(std::uint64_t salt, BlockRef index) {
  std::array<std::uint8_t, 32> b{};
  std::uint64_t h = splitmix(salt ^ splitmix(index));
  put64(b, 0, h);
  put64(b, 8, splitmix(h));
  put64(b, 16, salt);
  for (int i = 0; i < 4; ++i) b[28 + i] = static_cast<std::uint8_t>(index >> (24 - 8 * i));
  return BlockId(b);
}

BlockRef BlockId::embedded_index() const {
  BlockRef v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[28 + i];
  return v;
}

std::string BlockId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto byte : bytes_) {
    s.push_back(digits[byte >> 4]);
    s.push_back(digits[byte & 15]);
  }
  return s;
}

BlockId BlockId::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw LookupError("block id must be 64 hex digits");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw LookupError("bad hex digit in block id");
  };
  std::array<std::uint8_t, 32> b{};
  for (int i = 0; i < 32; ++i) b[i] = static_cast<std::uint8_t>(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
  return BlockId(b);
}

}  // namespace pcdiff
