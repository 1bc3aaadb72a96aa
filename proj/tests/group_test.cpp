#include <gtest/gtest.h>

#include "tnrss/group.hpp"

using namespace tnrss;

namespace {

const PairingContext& ctx() { return PairingContext::bls12_381(); }

TEST(Pairing, NonDegenerate) {
  const GTElement e = pairing(ctx().g1, ctx().g2);
  EXPECT_FALSE(e.is_one());
  EXPECT_TRUE(e == pairing(ctx().g1, ctx().g2));
}

TEST(Pairing, ZeroExponentGivesIdentity) {
  EXPECT_TRUE(pairing(ctx().g1.pow(Scalar()), ctx().g2).is_one());
  EXPECT_TRUE(pairing(ctx().g1, ctx().g2.pow(Scalar())).is_one());
}

TEST(Pairing, BilinearOverRandomExponents) {
  SeededRandom rng(1);
  const GTElement base = pairing(ctx().g1, ctx().g2);
  for (int trial = 0; trial < 100; ++trial) {
    const Scalar x = Scalar::random(rng);
    const Scalar y = Scalar::random(rng);
    // Left: pairing of exponentiated points. Right: GT exponentiation.
    EXPECT_TRUE(pairing(ctx().g1.pow(x), ctx().g2.pow(y)) == base.pow(x * y)) << "trial " << trial;
  }
}

TEST(Pairing, ProductCheckMatchesDirectComparison) {
  SeededRandom rng(2);
  const Scalar x = Scalar::random(rng);
  const G1Element p = ctx().g1.pow(x);
  const std::pair<G1Element, G2Element> good[] = {{p, ctx().g2.inverse()}, {ctx().g1, ctx().g2.pow(x)}};
  EXPECT_TRUE(pairing_product_is_one(good));
  const std::pair<G1Element, G2Element> bad[] = {{p, ctx().g2.inverse()}, {ctx().g1, ctx().g2.pow(x + Scalar::from_u64(1))}};
  EXPECT_FALSE(pairing_product_is_one(bad));
}

TEST(GroupOps, IdentityExponent) {
  EXPECT_TRUE(g1_exp(ctx().g1, Scalar::from_u64(1)) == ctx().g1);
  EXPECT_TRUE(g2_exp(ctx().g2, Scalar::from_u64(1)) == ctx().g2);
}

TEST(GroupOps, Cancellation) {
  SeededRandom rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const G1Element a = ctx().g1.pow(Scalar::random(rng));
    const G1Element b = ctx().g1.pow(Scalar::random(rng));
    EXPECT_TRUE(g1_mul(a, g1_div(b, a)) == b);
  }
}

TEST(GroupOps, ExponentsAdd) {
  SeededRandom rng(4);
  const Scalar x = Scalar::random(rng);
  const Scalar y = Scalar::random(rng);
  EXPECT_TRUE(ctx().g1.pow(x) * ctx().g1.pow(y) == ctx().g1.pow(x + y));
  EXPECT_TRUE(ctx().g1.pow(x).pow(y) == ctx().g1.pow(x * y));
}

TEST(ScalarField, InverseLaw) {
  SeededRandom rng(5);
  const Scalar one = Scalar::from_u64(1);
  for (int trial = 0; trial < 50; ++trial) {
    Scalar s = Scalar::random(rng);
    if (s.is_zero()) continue;
    EXPECT_TRUE(scalar_mul(scalar_inv(s), s) == one);
  }
}

TEST(ScalarField, InvertZeroThrows) {
  try {
    (void)scalar_inv(Scalar());
    FAIL() << "expected InvertZero";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvertZero);
  }
}

TEST(ScalarField, SmallArithmetic) {
  EXPECT_TRUE(scalar_add(Scalar::from_u64(3), Scalar::from_u64(4)) == Scalar::from_u64(7));
  EXPECT_TRUE(Scalar::from_u64(6) * Scalar::from_u64(7) == Scalar::from_u64(42));
  EXPECT_TRUE(Scalar::from_u64(1) - Scalar::from_u64(2) == -Scalar::from_u64(1));
}

TEST(ScalarField, EncodingIsBigEndian) {
  const auto bytes = Scalar::from_u64(0x0102).to_bytes();
  EXPECT_EQ(bytes[31], 0x02);
  EXPECT_EQ(bytes[30], 0x01);
  EXPECT_EQ(bytes[0], 0x00);
}

TEST(ScalarField, RejectsUnreducedEncoding) {
  // q itself is not a valid scalar encoding; q - 1 is.
  auto q = ctx().group_order;
  EXPECT_THROW(Scalar::from_bytes(q), Error);
  q[31] -= 1;
  EXPECT_TRUE(Scalar::from_bytes(q) == -Scalar::from_u64(1));
  EXPECT_THROW(Scalar::from_bytes(Bytes(31, 0)), Error);
}

TEST(ScalarField, OrderAnnihilatesGenerators) {
  // g^(q-1) * g == identity confirms g has order dividing q.
  auto q_minus_1 = ctx().group_order;
  q_minus_1[31] -= 1;
  const Scalar s = Scalar::from_bytes(q_minus_1);
  EXPECT_TRUE((ctx().g1.pow(s) * ctx().g1).is_identity());
  EXPECT_TRUE((ctx().g2.pow(s) * ctx().g2).is_identity());
  EXPECT_TRUE(ctx().g1.in_subgroup());
  EXPECT_TRUE(ctx().g2.in_subgroup());
}

TEST(Serialization, RoundTripsRandomElements) {
  SeededRandom rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const G1Element p = ctx().g1.pow(Scalar::random(rng));
    const G2Element q = ctx().g2.pow(Scalar::random(rng));
    const Scalar s = Scalar::random(rng);
    EXPECT_TRUE(G1Element::from_compressed(p.compress()) == p);
    EXPECT_TRUE(G2Element::from_compressed(q.compress()) == q);
    EXPECT_TRUE(Scalar::from_bytes(s.to_bytes()) == s);
  }
  EXPECT_TRUE(G1Element::from_compressed(G1Element::identity().compress()).is_identity());
}

TEST(Serialization, EncodingSizes) {
  EXPECT_EQ(ctx().g1.compress().size(), 48u);
  EXPECT_EQ(ctx().g2.compress().size(), 96u);
}

TEST(Serialization, RejectsMalformedEncodings) {
  auto bytes = ctx().g1.compress();
  EXPECT_THROW(G1Element::from_compressed(std::span(bytes).first(47)), Error);
  // Clearing the compression flag makes the encoding invalid.
  bytes[0] &= 0x7f;
  EXPECT_THROW(G1Element::from_compressed(bytes), Error);
  auto g2bytes = ctx().g2.compress();
  g2bytes[0] &= 0x7f;
  EXPECT_THROW(G2Element::from_compressed(g2bytes), Error);
}

// Search for an x such that (x, y) lies on E: y^2 = x^3 + 4 but outside
// the order-q subgroup (the cofactor of G1 is large, so almost any curve
// point qualifies), and confirm the decoder refuses it.
TEST(Serialization, RejectsOffSubgroupG1Point) {
  int rejected = 0;
  for (std::uint8_t seed = 1; seed < 40 && rejected == 0; ++seed) {
    std::array<std::uint8_t, 48> enc{};
    enc[0] = 0x80;  // compressed, not infinity, sign bit 0
    enc[47] = seed;
    blst_p1_affine aff;
    if (blst_p1_uncompress(&aff, enc.data()) != BLST_SUCCESS) continue;  // x not on curve
    ASSERT_FALSE(blst_p1_affine_in_g1(&aff));
    EXPECT_THROW(G1Element::from_compressed(enc), Error);
    ++rejected;
  }
  EXPECT_EQ(rejected, 1);
}

TEST(Serialization, RejectsOffSubgroupG2Point) {
  int rejected = 0;
  for (std::uint8_t seed = 1; seed < 40 && rejected == 0; ++seed) {
    std::array<std::uint8_t, 96> enc{};
    enc[0] = 0x80;
    enc[95] = seed;
    blst_p2_affine aff;
    if (blst_p2_uncompress(&aff, enc.data()) != BLST_SUCCESS) continue;
    ASSERT_FALSE(blst_p2_affine_in_g2(&aff));
    EXPECT_THROW(G2Element::from_compressed(enc), Error);
    ++rejected;
  }
  EXPECT_EQ(rejected, 1);
}

}  // namespace
