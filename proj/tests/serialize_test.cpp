#include <gtest/gtest.h>

#include "tnrss/serialize.hpp"

using namespace tnrss;

namespace {

TEST(KeyFiles, LayoutAndRoundTrip) {
  SeededRandom rng(61);
  const KeyMaterial km = keygen(2, 3, rng);

  const Bytes pk_bytes = serialize_public_key(km.pk);
  ASSERT_EQ(pk_bytes.size(), 4u + 1 + 1 + 96 + 96 + 4 + 4);
  EXPECT_EQ(std::string(pk_bytes.begin(), pk_bytes.begin() + 4), "TNR1");
  EXPECT_EQ(pk_bytes[4], kProfileId);
  EXPECT_EQ(pk_bytes[5], 'P');
  // t = 2, n = 3, big-endian.
  EXPECT_EQ(Bytes(pk_bytes.end() - 8, pk_bytes.end()), (Bytes{0, 0, 0, 2, 0, 0, 0, 3}));
  EXPECT_TRUE(parse_public_key(pk_bytes) == km.pk);

  const Bytes sk_bytes = serialize_secret_key(km.sk);
  EXPECT_EQ(sk_bytes.size(), 6u + 64);
  EXPECT_TRUE(parse_secret_key(sk_bytes) == km.sk);

  const RedactorKeyFile rkf = parse_redactor_key(serialize_redactor_key(km.redactor_keys[1], km.pk));
  EXPECT_TRUE(rkf.key == km.redactor_keys[1]);
  EXPECT_TRUE(rkf.pk == km.pk);

  EXPECT_TRUE(parse_verification_set(serialize_verification_set(km.verification)) == km.verification);
}

TEST(KeyFiles, RejectsWrongKindMagicAndTruncation) {
  SeededRandom rng(62);
  const KeyMaterial km = keygen(1, 2, rng);
  const Bytes pk_bytes = serialize_public_key(km.pk);
  EXPECT_THROW(parse_secret_key(pk_bytes), Error);

  Bytes bad_magic = pk_bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(parse_public_key(bad_magic), Error);

  Bytes bad_profile = pk_bytes;
  bad_profile[4] = 0x7f;
  EXPECT_THROW(parse_public_key(bad_profile), Error);

  EXPECT_THROW(parse_public_key(ByteSpan(pk_bytes).first(pk_bytes.size() - 1)), Error);
  Bytes extra = pk_bytes;
  extra.push_back(0);
  EXPECT_THROW(parse_public_key(extra), Error);

  // t > n in an otherwise well-formed file.
  Bytes bad_t = pk_bytes;
  bad_t[bad_t.size() - 5] = 9;
  EXPECT_THROW(parse_public_key(bad_t), Error);
}

TEST(SignatureBytes, VersionedLayout) {
  SeededRandom rng(63);
  const KeyMaterial km = keygen(1, 1, rng);
  const SignedDocument sd = sign(km.sk, {Block("a")}, {}, rng);
  const Bytes enc = serialize_signature(sd.sig);
  ASSERT_EQ(enc.size(), 97u);
  EXPECT_EQ(enc[0], kSignatureVersion);
  const auto fix = sd.sig.sigma_fix.compress();
  EXPECT_TRUE(std::equal(fix.begin(), fix.end(), enc.begin() + 1));
  EXPECT_TRUE(parse_signature(enc) == sd.sig);

  Bytes bad = enc;
  bad[0] = 2;
  EXPECT_THROW(parse_signature(bad), Error);
}

TEST(RedactionInfoBytes, LayoutAndRoundTrip) {
  RedactionInfo ri{7, {}};
  const G1Element g = PairingContext::bls12_381().g1;
  ri.shares.emplace(Block("ab"), g);
  ri.shares.emplace(Block(""), g.pow(Scalar::from_u64(2)));
  const Bytes enc = serialize_redaction_info(ri);
  // version | index | count | (len | bytes | G1) x 2
  ASSERT_EQ(enc.size(), 1u + 4 + 4 + (8 + 0 + 48) + (8 + 2 + 48));
  EXPECT_EQ(enc[0], kRedactionInfoVersion);
  EXPECT_EQ(Bytes(enc.begin() + 1, enc.begin() + 9), (Bytes{0, 0, 0, 7, 0, 0, 0, 2}));
  // Empty block sorts first.
  EXPECT_EQ(Bytes(enc.begin() + 9, enc.begin() + 17), Bytes(8, 0));
  EXPECT_TRUE(parse_redaction_info(enc) == ri);

  Bytes truncated(enc.begin(), enc.end() - 1);
  EXPECT_THROW(parse_redaction_info(truncated), Error);
}

TEST(RedactionInfoBytes, RejectsDuplicateBlocks) {
  RedactionInfo ri{1, {}};
  ri.shares.emplace(Block("x"), PairingContext::bls12_381().g1);
  Bytes enc = serialize_redaction_info(ri);
  const Bytes entry(enc.begin() + 9, enc.end());
  enc.insert(enc.end(), entry.begin(), entry.end());
  enc[8] = 2;
  EXPECT_THROW(parse_redaction_info(enc), Error);
}

TEST(Hex, RoundTripAndErrors) {
  const Bytes b = {0x00, 0xab, 0xff};
  EXPECT_EQ(to_hex(b), "00abff");
  EXPECT_EQ(from_hex("00ABff"), b);
  EXPECT_THROW(from_hex("abc"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
}

}  // namespace
