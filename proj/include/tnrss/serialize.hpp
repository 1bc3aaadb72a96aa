#pragma once

// Binary wire formats. All integers are big-endian.
//
//   key file        "TNR1" | profile u8 | kind u8 | payload
//     public    'P'   pk_fix G2 | pk_agg G2 | t u32 | n u32
//     secret    'S'   sk_fix scalar | sk_agg scalar
//     redactor  'R'   index u32 | share scalar | <public payload>
//     verif set 'V'   count u32 | count x G2
//   signature       version u8 | sigma_fix G1 | Sigma_agg G1
//   redaction info  version u8 | index u32 | count u32 |
//                   count x (len u64 | block bytes | share G1)

#include <array>
#include <cstdint>
#include <string>

#include "tnrss/redact.hpp"
#include "tnrss/scheme.hpp"

namespace tnrss {

inline constexpr std::array<std::uint8_t, 4> kKeyMagic = {'T', 'N', 'R', '1'};
inline constexpr std::uint8_t kSignatureVersion = 0x01;
inline constexpr std::uint8_t kRedactionInfoVersion = 0x01;

enum class KeyKind : std::uint8_t {
  Public = 'P',
  Secret = 'S',
  Redactor = 'R',
  VerificationSet = 'V',
};

namespace detail {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void raw(ByteSpan b) { out_.insert(out_.end(), b.begin(), b.end()); }

  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteSpan in) : in_(in) {}

  ByteSpan raw(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::Malformed, "truncated input");
    ByteSpan out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return raw(1)[0]; }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (std::uint8_t b : raw(4)) v = (v << 8) | b;
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (std::uint8_t b : raw(8)) v = (v << 8) | b;
    return v;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

  void expect_end() const {
    if (pos_ != in_.size()) throw Error(ErrorCode::Malformed, "trailing bytes");
  }

 private:
  ByteSpan in_;
  std::size_t pos_ = 0;
};

inline void write_key_header(Writer& w, KeyKind kind) {
  w.raw(kKeyMagic);
  w.u8(kProfileId);
  w.u8(static_cast<std::uint8_t>(kind));
}

inline void read_key_header(Reader& r, KeyKind kind) {
  const ByteSpan magic = r.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kKeyMagic.begin())) {
    throw Error(ErrorCode::Malformed, "bad key file magic");
  }
  if (r.u8() != kProfileId) throw Error(ErrorCode::Malformed, "unsupported profile");
  if (r.u8() != static_cast<std::uint8_t>(kind)) throw Error(ErrorCode::Malformed, "unexpected key kind");
}

inline void write_public_payload(Writer& w, const PublicKey& pk) {
  w.raw(pk.pk_fix.compress());
  w.raw(pk.pk_agg.compress());
  w.u32(pk.t);
  w.u32(pk.n);
}

inline PublicKey read_public_payload(Reader& r) {
  PublicKey pk;
  pk.pk_fix = G2Element::from_compressed(r.raw(kG2Bytes));
  pk.pk_agg = G2Element::from_compressed(r.raw(kG2Bytes));
  pk.t = r.u32();
  pk.n = r.u32();
  pk.profile = kProfileId;
  check_key_params(pk.t, pk.n);
  return pk;
}

}  // namespace detail

inline Bytes serialize_public_key(const PublicKey& pk) {
  detail::Writer w;
  detail::write_key_header(w, KeyKind::Public);
  detail::write_public_payload(w, pk);
  return w.take();
}

inline PublicKey parse_public_key(ByteSpan in) {
  detail::Reader r(in);
  detail::read_key_header(r, KeyKind::Public);
  PublicKey pk = detail::read_public_payload(r);
  r.expect_end();
  return pk;
}

inline Bytes serialize_secret_key(const SecretKey& sk) {
  detail::Writer w;
  detail::write_key_header(w, KeyKind::Secret);
  auto fix = sk.sk_fix.to_bytes();
  auto agg = sk.sk_agg.to_bytes();
  w.raw(fix);
  w.raw(agg);
  tnrss::detail::secure_wipe(fix.data(), fix.size());
  tnrss::detail::secure_wipe(agg.data(), agg.size());
  return w.take();
}

inline SecretKey parse_secret_key(ByteSpan in) {
  detail::Reader r(in);
  detail::read_key_header(r, KeyKind::Secret);
  SecretKey sk;
  sk.sk_fix = Scalar::from_bytes(r.raw(kScalarBytes));
  sk.sk_agg = Scalar::from_bytes(r.raw(kScalarBytes));
  r.expect_end();
  return sk;
}

/// A redactor's key together with the public key it redacts under.
struct RedactorKeyFile {
  RedactorKey key;
  PublicKey pk;
};

inline Bytes serialize_redactor_key(const RedactorKey& rk, const PublicKey& pk) {
  detail::Writer w;
  detail::write_key_header(w, KeyKind::Redactor);
  w.u32(rk.index);
  auto share = rk.share.to_bytes();
  w.raw(share);
  tnrss::detail::secure_wipe(share.data(), share.size());
  detail::write_public_payload(w, pk);
  return w.take();
}

inline RedactorKeyFile parse_redactor_key(ByteSpan in) {
  detail::Reader r(in);
  detail::read_key_header(r, KeyKind::Redactor);
  RedactorKeyFile out;
  out.key.index = r.u32();
  out.key.share = Scalar::from_bytes(r.raw(kScalarBytes));
  out.pk = detail::read_public_payload(r);
  r.expect_end();
  if (out.key.index == 0 || out.key.index > out.pk.n) {
    throw Error(ErrorCode::Malformed, "redactor index out of range");
  }
  return out;
}

inline Bytes serialize_verification_set(const RedactorVerificationSet& vs) {
  detail::Writer w;
  detail::write_key_header(w, KeyKind::VerificationSet);
  w.u32(static_cast<std::uint32_t>(vs.points.size()));
  for (const auto& p : vs.points) w.raw(p.compress());
  return w.take();
}

inline RedactorVerificationSet parse_verification_set(ByteSpan in) {
  detail::Reader r(in);
  detail::read_key_header(r, KeyKind::VerificationSet);
  const std::uint32_t count = r.u32();
  if (static_cast<std::uint64_t>(count) * kG2Bytes != r.remaining()) {
    throw Error(ErrorCode::Malformed, "verification set length mismatch");
  }
  RedactorVerificationSet vs;
  vs.points.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) vs.points.push_back(G2Element::from_compressed(r.raw(kG2Bytes)));
  return vs;
}

/// sigma_fix || Sigma_agg without the version byte (the DocumentFile form).
inline Bytes signature_body(const Signature& sig) {
  detail::Writer w;
  w.raw(sig.sigma_fix.compress());
  w.raw(sig.sigma_agg.compress());
  return w.take();
}

inline Signature parse_signature_body(ByteSpan in) {
  detail::Reader r(in);
  Signature sig;
  sig.sigma_fix = G1Element::from_compressed(r.raw(kG1Bytes));
  sig.sigma_agg = G1Element::from_compressed(r.raw(kG1Bytes));
  r.expect_end();
  return sig;
}

inline Bytes serialize_signature(const Signature& sig) {
  detail::Writer w;
  w.u8(kSignatureVersion);
  w.raw(signature_body(sig));
  return w.take();
}

inline Signature parse_signature(ByteSpan in) {
  if (in.empty() || in[0] != kSignatureVersion) throw Error(ErrorCode::Malformed, "bad signature version");
  return parse_signature_body(in.subspan(1));
}

inline Bytes serialize_redaction_info(const RedactionInfo& ri) {
  detail::Writer w;
  w.u8(kRedactionInfoVersion);
  w.u32(ri.redactor_index);
  w.u32(static_cast<std::uint32_t>(ri.shares.size()));
  for (const auto& [block, share] : ri.shares) {
    w.u64(block.size());
    w.raw(block.bytes);
    w.raw(share.compress());
  }
  return w.take();
}

inline RedactionInfo parse_redaction_info(ByteSpan in, const Limits& limits = {}) {
  detail::Reader r(in);
  if (r.u8() != kRedactionInfoVersion) throw Error(ErrorCode::Malformed, "bad redaction info version");
  RedactionInfo ri;
  ri.redactor_index = r.u32();
  const std::uint32_t count = r.u32();
  if (count > limits.max_blocks) throw Error(ErrorCode::Malformed, "too many shares");
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint64_t len = r.u64();
    if (len > limits.max_block_bytes) throw Error(ErrorCode::Malformed, "block too large");
    const ByteSpan bytes = r.raw(static_cast<std::size_t>(len));
    Block block{Bytes(bytes.begin(), bytes.end())};
    G1Element share = G1Element::from_compressed(r.raw(kG1Bytes));
    if (!ri.shares.emplace(std::move(block), share).second) {
      throw Error(ErrorCode::Malformed, "duplicate block in redaction info");
    }
  }
  r.expect_end();
  return ri;
}

}  // namespace tnrss
