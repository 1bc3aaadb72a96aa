#pragma once

// Canonical hash inputs for profile TNRSS-V1.
//
//   adm input   = 0x01 || did || for each block in ord(ADM): u64be(len) || block
//   block input = 0x02 || did || u64be(len) || block
//
// The tag byte separates the two input families; the length prefixes make
// both layouts injective.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <ranges>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tnrss/group.hpp"

namespace tnrss {

inline constexpr std::string_view kProfileName = "TNRSS-V1";
inline constexpr std::uint8_t kProfileId = 0x01;
inline constexpr std::string_view kHashToCurveDst = "TNRSS-V1";

inline constexpr std::uint8_t kAdmInputTag = 0x01;
inline constexpr std::uint8_t kBlockInputTag = 0x02;

inline constexpr std::size_t kDidBits = 256;
inline constexpr std::size_t kDidBytes = kDidBits / 8;

/// Size caps enforced at ingestion, signing and verification.
struct Limits {
  std::size_t max_block_bytes = std::size_t{1} << 20;
  std::size_t max_blocks = 1024;
  std::uint32_t max_redactors = 4096;
};

/// One message element. Ordered bytewise; a strict prefix sorts first.
struct Block {
  Bytes bytes;

  Block() = default;
  explicit Block(Bytes b) : bytes(std::move(b)) {}
  explicit Block(std::string_view s) : bytes(s.begin(), s.end()) {}

  std::size_t size() const { return bytes.size(); }
  friend auto operator<=>(const Block&, const Block&) = default;
};

using BlockSet = std::set<Block>;

struct DocumentId {
  std::array<std::uint8_t, kDidBytes> bytes{};

  template <EntropySource R>
  static DocumentId random(R& rng) {
    DocumentId did;
    rng.fill(did.bytes);
    return did;
  }

  static DocumentId from_bytes(ByteSpan in) {
    if (in.size() != kDidBytes) throw Error(ErrorCode::Malformed, "document id must be 32 bytes");
    DocumentId did;
    std::copy(in.begin(), in.end(), did.bytes.begin());
    return did;
  }

  friend auto operator<=>(const DocumentId&, const DocumentId&) = default;
};

/// Builds a set from a list, rejecting duplicates and oversized blocks.
inline BlockSet make_block_set(std::vector<Block> blocks, const Limits& limits = {}) {
  BlockSet out;
  for (auto& b : blocks) {
    if (b.size() > limits.max_block_bytes) {
      throw Error(ErrorCode::BlockTooLarge, "block of " + std::to_string(b.size()) + " bytes");
    }
    if (!out.insert(std::move(b)).second) throw Error(ErrorCode::DuplicateBlock, "duplicate block");
  }
  return out;
}

/// Deterministic lexicographic ordering of a block set.
template <std::ranges::input_range R>
std::vector<Block> ord(const R& blocks) {
  std::vector<Block> out(std::ranges::begin(blocks), std::ranges::end(blocks));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

inline void append_u64be(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void append_block(Bytes& out, const Block& b) {
  append_u64be(out, b.size());
  out.insert(out.end(), b.bytes.begin(), b.bytes.end());
}

}  // namespace detail

inline Bytes encode_adm_input(const DocumentId& did, const BlockSet& adm) {
  Bytes out;
  out.push_back(kAdmInputTag);
  out.insert(out.end(), did.bytes.begin(), did.bytes.end());
  for (const auto& b : ord(adm)) detail::append_block(out, b);
  return out;
}

inline Bytes encode_block_input(const DocumentId& did, const Block& m) {
  Bytes out;
  out.reserve(1 + kDidBytes + 8 + m.size());
  out.push_back(kBlockInputTag);
  out.insert(out.end(), did.bytes.begin(), did.bytes.end());
  detail::append_block(out, m);
  return out;
}

/// BLS12381G1_XMD:SHA-256_SSWU_RO_ with DST "TNRSS-V1".
inline G1Element hash_to_g1(ByteSpan input) {
  blst_p1 out;
  blst_hash_to_g1(&out, input.data(), input.size(),
                  reinterpret_cast<const std::uint8_t*>(kHashToCurveDst.data()),
                  kHashToCurveDst.size(), nullptr, 0);
  return G1Element::from_blst(out);
}

inline G1Element hash_adm(const DocumentId& did, const BlockSet& adm) {
  return hash_to_g1(encode_adm_input(did, adm));
}

inline G1Element hash_block(const DocumentId& did, const Block& m) {
  return hash_to_g1(encode_block_input(did, m));
}

}  // namespace tnrss
