#include <gtest/gtest.h>

#include "tnrss/harness.hpp"
#include "tnrss/scheme.hpp"

using namespace tnrss;

namespace {

const PairingContext& ctx() { return PairingContext::bls12_381(); }

BlockSet blocks_of(std::initializer_list<std::string_view> names) {
  BlockSet out;
  for (auto n : names) out.insert(Block(n));
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

TEST(Keygen, RejectsInvalidParams) {
  SeededRandom rng(31);
  EXPECT_EQ(code_of([&] { keygen(4, 3, rng); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([&] { keygen(0, 3, rng); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([&] { keygen(0, 0, rng); }), ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([&] { keygen(1, 4097, rng); }), ErrorCode::InvalidParams);
}

TEST(Keygen, KeysAreExponentConsistent) {
  SeededRandom rng(32);
  const KeyMaterial km = keygen(2, 3, rng);
  EXPECT_TRUE(ctx().g2.pow(km.sk.sk_fix) == km.pk.pk_fix);
  EXPECT_TRUE(ctx().g2.pow(km.sk.sk_agg) == km.pk.pk_agg);
  EXPECT_EQ(km.pk.t, 2u);
  EXPECT_EQ(km.pk.n, 3u);
  ASSERT_EQ(km.redactor_keys.size(), 3u);
  for (std::uint32_t i = 1; i <= 3; ++i) {
    EXPECT_EQ(km.redactor_keys[i - 1].index, i);
    EXPECT_TRUE(ctx().g2.pow(km.redactor_keys[i - 1].share) == km.verification.at(i));
  }
  EXPECT_EQ(km.pk.curve_id(), "BLS12-381");
}

TEST(Keygen, SingleRedactorHoldsTheSecret) {
  SeededRandom rng(33);
  const KeyMaterial km = keygen(1, 1, rng);
  EXPECT_TRUE(km.redactor_keys[0].share == km.sk.sk_agg);
}

TEST(Keygen, TwoOfThreeReconstructAnyPairButNoSingle) {
  SeededRandom rng(34);
  const KeyMaterial km = keygen(2, 3, rng);
  const G1Element h = hash_to_g1(Bytes{9});
  std::vector<ExponentShare> lifted;
  for (const auto& rk : km.redactor_keys) lifted.emplace_back(rk.index, h.pow(rk.share));
  const G1Element target = h.pow(km.sk.sk_agg);
  for (const IndexSet& j : {IndexSet{1, 2}, IndexSet{1, 3}, IndexSet{2, 3}}) {
    EXPECT_TRUE(reconstruct_in_exponent(lifted, j) == target);
  }
  for (std::uint32_t i = 1; i <= 3; ++i) EXPECT_FALSE(reconstruct_in_exponent(lifted, {i}) == target);
}

TEST(Sign, AdmMustBeSubset) {
  SeededRandom rng(35);
  const KeyMaterial km = keygen(1, 1, rng);
  EXPECT_EQ(code_of([&] { sign(km.sk, blocks_of({"a"}), blocks_of({"b"}), rng); }), ErrorCode::AdmNotSubset);
}

TEST(Sign, TooManyBlocks) {
  SeededRandom rng(36);
  const KeyMaterial km = keygen(1, 1, rng);
  Limits limits;
  limits.max_blocks = 2;
  EXPECT_EQ(code_of([&] { sign(km.sk, blocks_of({"a", "b", "c"}), {}, rng, limits); }), ErrorCode::TooManyBlocks);
}

TEST(Sign, EmptyMessageIsAdmHashOnly) {
  SeededRandom rng(37);
  const KeyMaterial km = keygen(2, 3, rng);
  const SignedDocument sd = sign(km.sk, {}, {}, rng);
  EXPECT_TRUE(sd.sig.sigma_agg == hash_adm(sd.doc.did, {}).pow(km.sk.sk_agg));
  EXPECT_TRUE(verify(km.pk, sd.doc, sd.sig));
}

TEST(Sign, AggregateMatchesPerBlockProduct) {
  SeededRandom rng(38);
  const KeyMaterial km = keygen(2, 3, rng);
  const BlockSet m = blocks_of({"x", "y", "z"});
  const BlockSet adm = blocks_of({"y"});
  const SignedDocument sd = sign(km.sk, m, adm, rng);
  // sigma_ADM * prod sigma_m, each computed on its own.
  G1Element expected = hash_adm(sd.doc.did, adm).pow(km.sk.sk_agg);
  for (const auto& b : m) expected *= hash_block(sd.doc.did, b).pow(km.sk.sk_agg);
  EXPECT_TRUE(sd.sig.sigma_agg == expected);
  EXPECT_TRUE(sd.sig.sigma_fix == hash_adm(sd.doc.did, adm).pow(km.sk.sk_fix));
}

TEST(SignWithDid, DeterministicAndVerifies) {
  SeededRandom rng(39);
  const KeyMaterial km = keygen(2, 3, rng);
  const DocumentId did = DocumentId::random(rng);
  const auto a = sign_with_did(km.sk, blocks_of({"p", "q"}), blocks_of({"p"}), did);
  const auto b = sign_with_did(km.sk, blocks_of({"p", "q"}), blocks_of({"p"}), did);
  EXPECT_EQ(a.sig.sigma_fix.compress(), b.sig.sigma_fix.compress());
  EXPECT_EQ(a.sig.sigma_agg.compress(), b.sig.sigma_agg.compress());
  EXPECT_TRUE(verify(km.pk, a.doc, a.sig));
  EXPECT_TRUE(a.doc.did == did);
}

TEST(SignWithDid, SignDiffersOnlyInDid) {
  SeededRandom rng(40);
  const KeyMaterial km = keygen(1, 2, rng);
  const SignedDocument sd = sign(km.sk, blocks_of({"a", "b"}), {}, rng);
  const SignedDocument again = sign_with_did(km.sk, sd.doc.blocks, sd.doc.adm, sd.doc.did);
  EXPECT_TRUE(sd.sig == again.sig);
}

TEST(Verify, CorrectnessOverRandomInstances) {
  SeededRandom rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<std::uint32_t>(rng.uniform(1, 8));
    const auto t = static_cast<std::uint32_t>(rng.uniform(1, n));
    const KeyMaterial km = keygen(t, n, rng);
    const BlockSet m = detail::random_blocks(rng, rng.uniform(0, 16));
    const BlockSet adm = detail::random_subset(rng, m);
    const SignedDocument sd = sign(km.sk, m, adm, rng);
    EXPECT_TRUE(verify(km.pk, sd.doc, sd.sig));
  }
}

TEST(Verify, RejectsTampering) {
  SeededRandom rng(42);
  const KeyMaterial km = keygen(2, 3, rng);
  const SignedDocument sd = sign(km.sk, blocks_of({"alpha", "beta", "gamma"}), blocks_of({"beta"}), rng);
  ASSERT_TRUE(verify(km.pk, sd.doc, sd.sig));

  // Flip one byte of each block in turn.
  for (const auto& b : sd.doc.blocks) {
    Document d = sd.doc;
    Block changed = b;
    changed.bytes[0] ^= 0x01;
    d.blocks.erase(b);
    d.blocks.insert(changed);
    if (d.adm.contains(b)) {
      d.adm.erase(b);
      d.adm.insert(changed);
    }
    EXPECT_FALSE(verify(km.pk, d, sd.sig));
  }

  // Drop the ADM element from M.
  Document no_adm = sd.doc;
  no_adm.blocks.erase(Block("beta"));
  EXPECT_FALSE(verify(km.pk, no_adm, sd.sig));

  // Another document's DID.
  const SignedDocument other = sign(km.sk, sd.doc.blocks, sd.doc.adm, rng);
  Document swapped = sd.doc;
  swapped.did = other.doc.did;
  EXPECT_FALSE(verify(km.pk, swapped, sd.sig));

  // Components from a different signing.
  EXPECT_FALSE(verify(km.pk, sd.doc, Signature{other.sig.sigma_fix, sd.sig.sigma_agg}));
  EXPECT_FALSE(verify(km.pk, sd.doc, Signature{sd.sig.sigma_fix, other.sig.sigma_agg}));
  EXPECT_FALSE(verify(km.pk, sd.doc, Signature{sd.sig.sigma_agg, sd.sig.sigma_fix}));

  // Wrong key.
  const KeyMaterial other_km = keygen(2, 3, rng);
  EXPECT_FALSE(verify(other_km.pk, sd.doc, sd.sig));
}

TEST(Verify, RejectsDocumentsOverLimits) {
  SeededRandom rng(43);
  const KeyMaterial km = keygen(1, 1, rng);
  const SignedDocument sd = sign(km.sk, blocks_of({"a", "b", "c"}), {}, rng);
  Limits limits;
  limits.max_blocks = 2;
  EXPECT_FALSE(verify(km.pk, sd.doc, sd.sig, limits));
}

TEST(Verify, OptimizedMatchesNaive) {
  SeededRandom rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const KeyMaterial km = keygen(2, 3, rng);
    const BlockSet m = detail::random_blocks(rng, rng.uniform(0, 6));
    const BlockSet adm = detail::random_subset(rng, m);
    const SignedDocument sd = sign(km.sk, m, adm, rng);
    Document d = sd.doc;
    Signature s = sd.sig;
    switch (trial % 4) {
      case 1: d.did.bytes[3] ^= 0x10; break;
      case 2: s.sigma_agg = s.sigma_agg * ctx().g1; break;
      case 3: s.sigma_fix = s.sigma_fix * ctx().g1; break;
      default: break;
    }
    EXPECT_EQ(verify(km.pk, d, s), verify_naive(km.pk, d, s)) << "trial " << trial;
    EXPECT_EQ(verify(km.pk, d, s), trial % 4 == 0);
  }
}

}  // namespace
