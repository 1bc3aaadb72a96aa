#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "tnrss/encoding.hpp"
#include "tnrss/hex.hpp"

using namespace tnrss;

namespace {

Block B(std::string_view s) { return Block(s); }

DocumentId did_filled(std::uint8_t v) {
  DocumentId d;
  d.bytes.fill(v);
  return d;
}

// Oracle: walk every permutation of the input and return the one in which
// each adjacent pair is non-decreasing under std::lexicographical_compare.
std::vector<Block> brute_force_sort(const std::vector<Block>& in) {
  std::vector<std::size_t> perm(in.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(in[a].bytes.begin(), in[a].bytes.end(), in[b].bytes.begin(),
                                        in[b].bytes.end());
  };
  do {
    bool sorted = true;
    for (std::size_t i = 1; i < perm.size() && sorted; ++i) sorted = !less(perm[i], perm[i - 1]);
    if (sorted) {
      std::vector<Block> out;
      for (std::size_t i : perm) out.push_back(in[i]);
      return out;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {};
}

TEST(Ord, TwoElements) {
  const BlockSet s = {Block(Bytes{0x62}), Block(Bytes{0x61})};
  const auto out = ord(s);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].bytes, Bytes{0x61});
  EXPECT_EQ(out[1].bytes, Bytes{0x62});
}

TEST(Ord, Empty) { EXPECT_TRUE(ord(BlockSet{}).empty()); }

TEST(Ord, PrefixSortsFirst) {
  const std::vector<Block> expected = {B("a"), B("ab"), B("b")};
  EXPECT_EQ(ord(BlockSet{B("ab"), B("a"), B("b")}), expected);
  EXPECT_EQ(brute_force_sort({B("ab"), B("a"), B("b")}), expected);
}

TEST(Ord, PermutationInvariantAndIdempotent) {
  SeededRandom rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Block> items;
    std::set<Bytes> seen;
    while (items.size() < 6) {
      Bytes b(rng.uniform(0, 3));
      for (auto& x : b) x = static_cast<std::uint8_t>(rng.uniform(0x61, 0x63));
      if (seen.insert(b).second) items.emplace_back(b);
    }
    const auto expected = brute_force_sort(items);
    std::vector<Block> shuffled = items;
    for (int k = 0; k < 5; ++k) {
      std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(rng.next_u64()));
      EXPECT_EQ(ord(shuffled), expected);
    }
    EXPECT_EQ(ord(ord(items)), ord(items));
  }
}

TEST(EncodeAdm, EmptyAdm) {
  Bytes expected = {0x01};
  expected.insert(expected.end(), 32, 0x00);
  EXPECT_EQ(encode_adm_input(did_filled(0), {}), expected);
}

TEST(EncodeAdm, SingleBlockLayout) {
  const DocumentId did = did_filled(0xab);
  Bytes expected = {0x01};
  expected.insert(expected.end(), 32, 0xab);
  const Bytes tail = {0, 0, 0, 0, 0, 0, 0, 1, 0x61};
  expected.insert(expected.end(), tail.begin(), tail.end());
  EXPECT_EQ(encode_adm_input(did, {Block(Bytes{0x61})}), expected);
}

TEST(EncodeAdm, UsesOrdOrder) {
  const DocumentId did = did_filled(1);
  const Bytes enc = encode_adm_input(did, {B("b"), B("a")});
  // 0x01 | did | len=1 | 'a' | len=1 | 'b'
  ASSERT_EQ(enc.size(), 1u + 32 + 9 + 9);
  EXPECT_EQ(enc[1 + 32 + 8], 'a');
  EXPECT_EQ(enc[1 + 32 + 17], 'b');
}

TEST(EncodeBlock, EmptyBlockLayout) {
  const DocumentId did = did_filled(0x11);
  Bytes expected = {0x02};
  expected.insert(expected.end(), 32, 0x11);
  expected.insert(expected.end(), 8, 0x00);
  EXPECT_EQ(encode_block_input(did, Block{}), expected);
}

TEST(EncodeBlock, DeterministicAndDidInjective) {
  const Block m = B("hello");
  EXPECT_EQ(encode_block_input(did_filled(1), m), encode_block_input(did_filled(1), m));
  EXPECT_NE(encode_block_input(did_filled(1), m), encode_block_input(did_filled(2), m));
}

TEST(Encode, FamiliesNeverCollide) {
  SeededRandom rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const DocumentId did = DocumentId::random(rng);
    Bytes raw(rng.uniform(0, 16));
    rng.fill(raw);
    EXPECT_NE(encode_adm_input(did, {Block(raw)})[0], encode_block_input(did, Block(raw))[0]);
  }
}

// Bare concatenation would map (did, {"ab"}) and (did, {"a", "b"}) to the same
// bytes. Exhaustive over all sets of short blocks from a small alphabet.
TEST(Encode, InjectiveOverSmallUniverse) {
  std::vector<Block> universe = {Block{}};
  for (char c : std::string("ab")) universe.push_back(Block(std::string(1, c)));
  for (char c : std::string("ab"))
    for (char d : std::string("ab")) universe.push_back(Block(std::string{c, d}));

  std::map<Bytes, std::string> seen;
  const DocumentId dids[] = {did_filled(0), did_filled(1)};
  for (const auto& did : dids) {
    for (std::uint32_t mask = 0; mask < (1u << universe.size()); ++mask) {
      BlockSet adm;
      for (std::size_t i = 0; i < universe.size(); ++i)
        if (mask & (1u << i)) adm.insert(universe[i]);
      const std::string label = "adm:" + std::to_string(did.bytes[0]) + ":" + std::to_string(mask);
      EXPECT_TRUE(seen.emplace(encode_adm_input(did, adm), label).second) << label;
    }
    for (std::size_t i = 0; i < universe.size(); ++i) {
      const std::string label = "blk:" + std::to_string(did.bytes[0]) + ":" + std::to_string(i);
      EXPECT_TRUE(seen.emplace(encode_block_input(did, universe[i]), label).second) << label;
    }
  }
}

TEST(HashToG1, DeterministicAndInSubgroup) {
  const Bytes input = {1, 2, 3};
  const G1Element a = hash_to_g1(input);
  EXPECT_TRUE(a == hash_to_g1(input));
  EXPECT_TRUE(a.in_subgroup());
  EXPECT_FALSE(a.is_identity());
}

TEST(HashToG1, NoCollisionsOverCorpus) {
  std::set<std::array<std::uint8_t, 48>> outputs;
  const DocumentId did = did_filled(7);
  for (std::uint32_t i = 0; i < 10000; ++i) {
    const std::string s = "block-" + std::to_string(i);
    outputs.insert(hash_block(did, Block(s)).compress());
  }
  EXPECT_EQ(outputs.size(), 10000u);
}

// Same suite, different DST: outputs must differ.
TEST(HashToG1, DomainSeparationTagIsBound) {
  const Bytes input = {0x61, 0x62, 0x63};
  blst_p1 other;
  const std::string dst = "QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_";
  blst_hash_to_g1(&other, input.data(), input.size(), reinterpret_cast<const std::uint8_t*>(dst.data()),
                  dst.size(), nullptr, 0);
  EXPECT_FALSE(hash_to_g1(input) == G1Element::from_blst(other));
}

TEST(HashToG1, MatchesStandardTestVector) {
  // RFC 9380 J.9.1, msg = "abc".
  const std::string dst = "QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_";
  const std::string msg = "abc";
  blst_p1 p;
  blst_hash_to_g1(&p, reinterpret_cast<const std::uint8_t*>(msg.data()), msg.size(),
                  reinterpret_cast<const std::uint8_t*>(dst.data()), dst.size(), nullptr, 0);
  blst_p1_affine aff;
  blst_p1_to_affine(&aff, &p);
  std::array<std::uint8_t, 96> raw{};
  blst_p1_affine_serialize(raw.data(), &aff);
  EXPECT_EQ(to_hex(std::span(raw).first(48)),
            "03567bc5ef9c690c2ab2ecdf6a96ef1c139cc0b2f284dca0a9a7943388a49a3aee664ba5379a7655d3c68900be2f6903");
}

TEST(MakeBlockSet, RejectsDuplicatesAndOversize) {
  EXPECT_THROW(make_block_set({B("x"), B("x")}), Error);
  Limits small;
  small.max_block_bytes = 2;
  try {
    make_block_set({B("abc")}, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BlockTooLarge);
  }
  EXPECT_EQ(make_block_set({B("b"), B("a")}).size(), 2u);
}

}  // namespace
