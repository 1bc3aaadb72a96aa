#pragma once

// Value types over the BLS12-381 type-3 pairing groups, backed by blst.
//
// Notation is multiplicative throughout (G1, G2 and GT are written as
// multiplicative groups), so `a * b` is the group operation and `a.pow(s)`
// is exponentiation by a scalar.

#include <blst.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tnrss/error.hpp"
#include "tnrss/random.hpp"

namespace tnrss {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kG1Bytes = 48;
inline constexpr std::size_t kG2Bytes = 96;

namespace detail {

inline void secure_wipe(void* p, std::size_t n) noexcept {
  volatile auto* bytes = static_cast<volatile std::uint8_t*>(p);
  while (n--) *bytes++ = 0;
}

}  // namespace detail

/// Element of Z_q, q the prime order of G1, G2 and GT.
class Scalar {
 public:
  Scalar() { std::memset(&v_, 0, sizeof(v_)); }

  static Scalar from_u64(std::uint64_t x) {
    const std::uint64_t limbs[4] = {x, 0, 0, 0};
    Scalar s;
    blst_fr_from_uint64(&s.v_, limbs);
    return s;
  }

  /// Canonical 32-byte big-endian encoding; values >= q are rejected.
  static Scalar from_bytes(ByteSpan be) {
    if (be.size() != kScalarBytes) {
      throw Error(ErrorCode::Malformed, "scalar encoding must be 32 bytes");
    }
    blst_scalar raw;
    blst_scalar_from_bendian(&raw, be.data());
    if (!blst_scalar_fr_check(&raw)) {
      throw Error(ErrorCode::Malformed, "scalar not reduced mod q");
    }
    Scalar s;
    blst_fr_from_scalar(&s.v_, &raw);
    detail::secure_wipe(&raw, sizeof(raw));
    return s;
  }

  /// Reduces an arbitrary little-endian byte string mod q.
  static Scalar reduce_le(ByteSpan le) {
    blst_scalar raw;
    blst_scalar_from_le_bytes(&raw, le.data(), le.size());
    Scalar s;
    blst_fr_from_scalar(&s.v_, &raw);
    detail::secure_wipe(&raw, sizeof(raw));
    return s;
  }

  /// Uniform over Z_q: 512 random bits reduced mod q (bias < 2^-256).
  template <EntropySource R>
  static Scalar random(R& rng) {
    std::array<std::uint8_t, 64> wide{};
    rng.fill(wide);
    Scalar s = reduce_le(wide);
    detail::secure_wipe(wide.data(), wide.size());
    return s;
  }

  std::array<std::uint8_t, kScalarBytes> to_bytes() const {
    blst_scalar raw;
    blst_scalar_from_fr(&raw, &v_);
    std::array<std::uint8_t, kScalarBytes> out{};
    blst_bendian_from_scalar(out.data(), &raw);
    detail::secure_wipe(&raw, sizeof(raw));
    return out;
  }

  /// Little-endian canonical form, the layout blst expects for point multiplication.
  blst_scalar to_blst() const {
    blst_scalar raw;
    blst_scalar_from_fr(&raw, &v_);
    return raw;
  }

  bool is_zero() const {
    static const blst_fr zero{};
    return std::memcmp(&v_, &zero, sizeof(v_)) == 0;
  }

  Scalar inverse() const {
    if (is_zero()) throw Error(ErrorCode::InvertZero, "scalar 0 has no inverse");
    Scalar r;
    blst_fr_inverse(&r.v_, &v_);
    return r;
  }

  Scalar operator-() const {
    Scalar r;
    blst_fr_cneg(&r.v_, &v_, true);
    return r;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar r;
    blst_fr_add(&r.v_, &a.v_, &b.v_);
    return r;
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    Scalar r;
    blst_fr_sub(&r.v_, &a.v_, &b.v_);
    return r;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar r;
    blst_fr_mul(&r.v_, &a.v_, &b.v_);
    return r;
  }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    // Montgomery form is canonical for reduced values.
    return std::memcmp(&a.v_, &b.v_, sizeof(a.v_)) == 0;
  }

  void wipe() noexcept { detail::secure_wipe(&v_, sizeof(v_)); }

 private:
  blst_fr v_;
};

inline Scalar scalar_add(const Scalar& a, const Scalar& b) { return a + b; }
inline Scalar scalar_mul(const Scalar& a, const Scalar& b) { return a * b; }
inline Scalar scalar_inv(const Scalar& s) { return s.inverse(); }

class G1Element {
 public:
  /// The identity.
  G1Element() { std::memset(&p_, 0, sizeof(p_)); }

  static G1Element generator() { return G1Element(*blst_p1_generator()); }
  static G1Element identity() { return G1Element(); }

  static G1Element from_blst(const blst_p1& p) { return G1Element(p); }

  /// Compressed encoding; rejects off-curve and off-subgroup points.
  static G1Element from_compressed(ByteSpan in) {
    if (in.size() != kG1Bytes) throw Error(ErrorCode::Malformed, "G1 encoding must be 48 bytes");
    blst_p1_affine aff;
    if (blst_p1_uncompress(&aff, in.data()) != BLST_SUCCESS) {
      throw Error(ErrorCode::Malformed, "invalid G1 encoding");
    }
    if (!blst_p1_affine_in_g1(&aff)) throw Error(ErrorCode::Malformed, "G1 point not in subgroup");
    blst_p1 p;
    blst_p1_from_affine(&p, &aff);
    return G1Element(p);
  }

  std::array<std::uint8_t, kG1Bytes> compress() const {
    std::array<std::uint8_t, kG1Bytes> out{};
    blst_p1_compress(out.data(), &p_);
    return out;
  }

  bool is_identity() const { return blst_p1_is_inf(&p_); }
  bool in_subgroup() const { return blst_p1_in_g1(&p_); }

  G1Element pow(const Scalar& s) const {
    const blst_scalar raw = s.to_blst();
    blst_p1 out;
    blst_p1_mult(&out, &p_, raw.b, 255);
    return G1Element(out);
  }

  G1Element inverse() const {
    blst_p1 out = p_;
    blst_p1_cneg(&out, true);
    return G1Element(out);
  }

  friend G1Element operator*(const G1Element& a, const G1Element& b) {
    blst_p1 out;
    blst_p1_add_or_double(&out, &a.p_, &b.p_);
    return G1Element(out);
  }
  friend G1Element operator/(const G1Element& a, const G1Element& b) { return a * b.inverse(); }
  G1Element& operator*=(const G1Element& b) { return *this = *this * b; }

  friend bool operator==(const G1Element& a, const G1Element& b) {
    return blst_p1_is_equal(&a.p_, &b.p_);
  }

  blst_p1_affine to_affine() const {
    blst_p1_affine aff;
    blst_p1_to_affine(&aff, &p_);
    return aff;
  }

 private:
  explicit G1Element(const blst_p1& p) : p_(p) {}
  blst_p1 p_;
};

class G2Element {
 public:
  G2Element() { std::memset(&p_, 0, sizeof(p_)); }

  static G2Element generator() { return G2Element(*blst_p2_generator()); }
  static G2Element identity() { return G2Element(); }

  static G2Element from_compressed(ByteSpan in) {
    if (in.size() != kG2Bytes) throw Error(ErrorCode::Malformed, "G2 encoding must be 96 bytes");
    blst_p2_affine aff;
    if (blst_p2_uncompress(&aff, in.data()) != BLST_SUCCESS) {
      throw Error(ErrorCode::Malformed, "invalid G2 encoding");
    }
    if (!blst_p2_affine_in_g2(&aff)) throw Error(ErrorCode::Malformed, "G2 point not in subgroup");
    blst_p2 p;
    blst_p2_from_affine(&p, &aff);
    return G2Element(p);
  }

  std::array<std::uint8_t, kG2Bytes> compress() const {
    std::array<std::uint8_t, kG2Bytes> out{};
    blst_p2_compress(out.data(), &p_);
    return out;
  }

  bool is_identity() const { return blst_p2_is_inf(&p_); }
  bool in_subgroup() const { return blst_p2_in_g2(&p_); }

  G2Element pow(const Scalar& s) const {
    const blst_scalar raw = s.to_blst();
    blst_p2 out;
    blst_p2_mult(&out, &p_, raw.b, 255);
    return G2Element(out);
  }

  G2Element inverse() const {
    blst_p2 out = p_;
    blst_p2_cneg(&out, true);
    return G2Element(out);
  }

  friend G2Element operator*(const G2Element& a, const G2Element& b) {
    blst_p2 out;
    blst_p2_add_or_double(&out, &a.p_, &b.p_);
    return G2Element(out);
  }
  friend G2Element operator/(const G2Element& a, const G2Element& b) { return a * b.inverse(); }

  friend bool operator==(const G2Element& a, const G2Element& b) {
    return blst_p2_is_equal(&a.p_, &b.p_);
  }

  blst_p2_affine to_affine() const {
    blst_p2_affine aff;
    blst_p2_to_affine(&aff, &p_);
    return aff;
  }

 private:
  explicit G2Element(const blst_p2& p) : p_(p) {}
  blst_p2 p_;
};

inline G1Element g1_exp(const G1Element& base, const Scalar& s) { return base.pow(s); }
inline G2Element g2_exp(const G2Element& base, const Scalar& s) { return base.pow(s); }
inline G1Element g1_mul(const G1Element& a, const G1Element& b) { return a * b; }
inline G1Element g1_div(const G1Element& a, const G1Element& b) { return a / b; }

/// Target group element. Never serialized.
class GTElement {
 public:
  GTElement() : v_(*blst_fp12_one()) {}

  static GTElement one() { return GTElement(); }
  static GTElement from_blst(const blst_fp12& v) {
    GTElement r;
    r.v_ = v;
    return r;
  }

  bool is_one() const { return blst_fp12_is_one(&v_); }

  /// Square-and-multiply over the big-endian scalar bits. GT values here
  /// are public, so this path is not constant time.
  GTElement pow(const Scalar& s) const {
    const auto be = s.to_bytes();
    GTElement acc;
    for (std::uint8_t byte : be) {
      for (int bit = 7; bit >= 0; --bit) {
        blst_fp12_sqr(&acc.v_, &acc.v_);
        if ((byte >> bit) & 1U) blst_fp12_mul(&acc.v_, &acc.v_, &v_);
      }
    }
    return acc;
  }

  friend GTElement operator*(const GTElement& a, const GTElement& b) {
    GTElement r;
    blst_fp12_mul(&r.v_, &a.v_, &b.v_);
    return r;
  }

  friend bool operator==(const GTElement& a, const GTElement& b) {
    return blst_fp12_is_equal(&a.v_, &b.v_);
  }

 private:
  blst_fp12 v_;
};

/// Optimal ate pairing e: G1 x G2 -> GT.
inline GTElement pairing(const G1Element& a, const G2Element& b) {
  if (a.is_identity() || b.is_identity()) return GTElement::one();
  const blst_p1_affine pa = a.to_affine();
  const blst_p2_affine pb = b.to_affine();
  blst_fp12 ml;
  blst_miller_loop(&ml, &pb, &pa);
  blst_fp12 out;
  blst_final_exp(&out, &ml);
  return GTElement::from_blst(out);
}

/// Checks prod_k e(P_k, Q_k) == 1 with one shared final exponentiation.
inline bool pairing_product_is_one(std::span<const std::pair<G1Element, G2Element>> terms) {
  std::vector<blst_p1_affine> ps;
  std::vector<blst_p2_affine> qs;
  ps.reserve(terms.size());
  qs.reserve(terms.size());
  for (const auto& [p, q] : terms) {
    if (p.is_identity() || q.is_identity()) continue;
    ps.push_back(p.to_affine());
    qs.push_back(q.to_affine());
  }
  if (ps.empty()) return true;
  std::vector<const blst_p1_affine*> pptr;
  std::vector<const blst_p2_affine*> qptr;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    pptr.push_back(&ps[i]);
    qptr.push_back(&qs[i]);
  }
  blst_fp12 ml;
  blst_miller_loop_n(&ml, qptr.data(), pptr.data(), ps.size());
  blst_fp12 out;
  blst_final_exp(&out, &ml);
  return blst_fp12_is_one(&out);
}

/// Group descriptor (q, G1, G2, GT, e, g1, g2) for the active curve.
struct PairingContext {
  std::string_view curve_id;
  std::array<std::uint8_t, kScalarBytes> group_order;  // q, big-endian
  G1Element g1;
  G2Element g2;

  static const PairingContext& bls12_381() {
    static const PairingContext ctx{
        "BLS12-381",
        {0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8,
         0x08, 0x09, 0xa1, 0xd8, 0x05, 0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe,
         0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01},
        G1Element::generator(),
        G2Element::generator(),
    };
    return ctx;
  }
};

}  // namespace tnrss
