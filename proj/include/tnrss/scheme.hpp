#pragma once

// Key generation, signing and verification for the t-out-of-n redactable
// signature scheme.
//
//   pk = (pk_fix = g2^x~, pk_agg = g2^f(0), t, n)
//   sigma_fix = H(adm input)^x~
//   Sigma_agg = H(adm input)^f(0) * prod_{m in M} H(block input m)^f(0)
//
// Redactor i holds f(i); any t of them can strip a block's factor out of
// Sigma_agg (see redact.hpp).

#include <algorithm>
#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "tnrss/encoding.hpp"
#include "tnrss/group.hpp"
#include "tnrss/shamir.hpp"

namespace tnrss {

struct PublicKey {
  G2Element pk_fix;
  G2Element pk_agg;
  std::uint32_t t = 0;
  std::uint32_t n = 0;
  std::uint8_t profile = kProfileId;

  std::string_view curve_id() const { return PairingContext::bls12_381().curve_id; }

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

class SecretKey {
 public:
  SecretKey() = default;
  SecretKey(Scalar fix, Scalar agg) : sk_fix(fix), sk_agg(agg) {}
  SecretKey(const SecretKey&) = default;
  SecretKey& operator=(const SecretKey&) = default;
  ~SecretKey() {
    sk_fix.wipe();
    sk_agg.wipe();
  }

  Scalar sk_fix;
  Scalar sk_agg;

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

class RedactorKey {
 public:
  RedactorKey() = default;
  RedactorKey(std::uint32_t i, Scalar s) : index(i), share(s) {}
  RedactorKey(const RedactorKey&) = default;
  RedactorKey& operator=(const RedactorKey&) = default;
  ~RedactorKey() { share.wipe(); }

  std::uint32_t index = 0;
  Scalar share;

  friend bool operator==(const RedactorKey&, const RedactorKey&) = default;
};

/// y_i = g2^{f(i)} for i = 1..n. Optional; lets a combiner check shares.
struct RedactorVerificationSet {
  std::vector<G2Element> points;

  const G2Element& at(std::uint32_t index) const {
    if (index == 0 || index > points.size()) {
      throw Error(ErrorCode::InvalidParams, "no verification point for index " + std::to_string(index));
    }
    return points[index - 1];
  }

  friend bool operator==(const RedactorVerificationSet&, const RedactorVerificationSet&) = default;
};

struct KeyMaterial {
  PublicKey pk;
  SecretKey sk;
  std::vector<RedactorKey> redactor_keys;
  RedactorVerificationSet verification;
};

struct Document {
  BlockSet blocks;  // M
  BlockSet adm;     // blocks that may never be redacted
  DocumentId did;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Signature {
  G1Element sigma_fix;
  G1Element sigma_agg;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SignedDocument {
  Document doc;
  Signature sig;
};

inline void check_key_params(std::uint32_t t, std::uint32_t n, const Limits& limits = {}) {
  if (n == 0) throw Error(ErrorCode::InvalidParams, "n must be at least 1");
  if (t == 0) throw Error(ErrorCode::InvalidParams, "t must be at least 1");
  if (t > n) throw Error(ErrorCode::InvalidParams, "t must not exceed n");
  if (n > limits.max_redactors) {
    throw Error(ErrorCode::InvalidParams, "n exceeds the cap of " + std::to_string(limits.max_redactors));
  }
}

template <EntropySource R>
KeyMaterial keygen(std::uint32_t t, std::uint32_t n, R& rng, const Limits& limits = {}) {
  check_key_params(t, n, limits);
  const auto& ctx = PairingContext::bls12_381();

  KeyMaterial km;
  const Scalar sk_fix = Scalar::random(rng);
  const SharePolynomial f = sample_polynomial(t, rng);
  km.sk = SecretKey(sk_fix, evaluate(f, 0));
  km.pk = PublicKey{ctx.g2.pow(km.sk.sk_fix), ctx.g2.pow(km.sk.sk_agg), t, n, kProfileId};

  km.redactor_keys.reserve(n);
  km.verification.points.reserve(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    km.redactor_keys.emplace_back(i, evaluate(f, i));
    km.verification.points.push_back(ctx.g2.pow(km.redactor_keys.back().share));
  }

  if (!(ctx.g2.pow(km.sk.sk_fix) == km.pk.pk_fix) || !(ctx.g2.pow(km.sk.sk_agg) == km.pk.pk_agg)) {
    throw Error(ErrorCode::InvalidParams, "generated key pair is inconsistent");
  }
  return km;
}

inline bool is_subset(const BlockSet& sub, const BlockSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

/// The hash values every algorithm recomputes from (M, ADM, DID).
struct DocumentHashes {
  G1Element h_adm;
  std::map<Block, G1Element> h_blocks;
};

inline DocumentHashes hash_document(const Document& doc) {
  DocumentHashes h;
  h.h_adm = hash_adm(doc.did, doc.adm);
  for (const auto& m : doc.blocks) h.h_blocks.emplace(m, hash_block(doc.did, m));
  return h;
}

inline void check_document_limits(const BlockSet& blocks, const Limits& limits) {
  if (blocks.size() > limits.max_blocks) {
    throw Error(ErrorCode::TooManyBlocks, std::to_string(blocks.size()) + " blocks");
  }
  for (const auto& b : blocks) {
    if (b.size() > limits.max_block_bytes) {
      throw Error(ErrorCode::BlockTooLarge, "block of " + std::to_string(b.size()) + " bytes");
    }
  }
}

/// Deterministic core of sign() with a caller-chosen document id.
inline SignedDocument sign_with_did(const SecretKey& sk, BlockSet blocks, BlockSet adm,
                                    const DocumentId& did, const Limits& limits = {}) {
  if (!is_subset(adm, blocks)) throw Error(ErrorCode::AdmNotSubset, "ADM must be a subset of M");
  check_document_limits(blocks, limits);

  SignedDocument out{Document{std::move(blocks), std::move(adm), did}, {}};
  const G1Element h_adm = hash_adm(did, out.doc.adm);
  G1Element product = h_adm;
  for (const auto& m : out.doc.blocks) product *= hash_block(did, m);

  out.sig.sigma_fix = h_adm.pow(sk.sk_fix);
  // prod h^x == (prod h)^x, one exponentiation instead of |M| + 1.
  out.sig.sigma_agg = product.pow(sk.sk_agg);
  return out;
}

template <EntropySource R>
SignedDocument sign(const SecretKey& sk, BlockSet blocks, BlockSet adm, R& rng, const Limits& limits = {}) {
  if (!is_subset(adm, blocks)) throw Error(ErrorCode::AdmNotSubset, "ADM must be a subset of M");
  return sign_with_did(sk, std::move(blocks), std::move(adm), DocumentId::random(rng), limits);
}

inline bool within_limits(const Document& doc, const Limits& limits) {
  if (doc.blocks.size() > limits.max_blocks) return false;
  return std::all_of(doc.blocks.begin(), doc.blocks.end(),
                     [&](const Block& b) { return b.size() <= limits.max_block_bytes; });
}

/// Verification from precomputed hashes: e(sigma_fix, g2) == e(h_adm, pk_fix)
/// and e(Sigma_agg, g2) == e(h_adm * prod h_m, pk_agg), each as a two-term
/// pairing product.
inline bool verify_hashed(const PublicKey& pk, const Document& doc, const Signature& sig,
                          const DocumentHashes& h) {
  if (!is_subset(doc.adm, doc.blocks)) return false;
  const G2Element neg_g2 = PairingContext::bls12_381().g2.inverse();

  const std::pair<G1Element, G2Element> fix_terms[] = {{sig.sigma_fix, neg_g2}, {h.h_adm, pk.pk_fix}};
  if (!pairing_product_is_one(fix_terms)) return false;

  G1Element product = h.h_adm;
  for (const auto& [m, hm] : h.h_blocks) product *= hm;
  const std::pair<G1Element, G2Element> agg_terms[] = {{sig.sigma_agg, neg_g2}, {product, pk.pk_agg}};
  return pairing_product_is_one(agg_terms);
}

inline bool verify(const PublicKey& pk, const Document& doc, const Signature& sig, const Limits& limits = {}) {
  if (!within_limits(doc, limits) || !is_subset(doc.adm, doc.blocks)) return false;
  return verify_hashed(pk, doc, sig, hash_document(doc));
}

/// Reference verifier: one full pairing per factor, 4 + |M| in total.
inline bool verify_naive(const PublicKey& pk, const Document& doc, const Signature& sig,
                         const Limits& limits = {}) {
  if (!within_limits(doc, limits) || !is_subset(doc.adm, doc.blocks)) return false;
  const auto& g2 = PairingContext::bls12_381().g2;
  const G1Element h_adm = hash_adm(doc.did, doc.adm);
  if (!(pairing(sig.sigma_fix, g2) == pairing(h_adm, pk.pk_fix))) return false;
  GTElement rhs = pairing(h_adm, pk.pk_agg);
  for (const auto& m : doc.blocks) rhs = rhs * pairing(hash_block(doc.did, m), pk.pk_agg);
  return pairing(sig.sigma_agg, g2) == rhs;
}

}  // namespace tnrss
