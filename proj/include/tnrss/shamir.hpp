#pragma once

// (t, n) Shamir sharing over Z_q, with reconstruction either in the field or
// in the exponent of G1. Share indices run 1..n; index 0 is the secret.

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "tnrss/group.hpp"

namespace tnrss {

using IndexSet = std::set<std::uint32_t>;

/// f(X) = a_0 + a_1 X + ... + a_{t-1} X^{t-1}; a_0 is the secret.
class SharePolynomial {
 public:
  explicit SharePolynomial(std::vector<Scalar> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw Error(ErrorCode::InvalidThreshold, "polynomial needs t >= 1 coefficients");
  }
  SharePolynomial(const SharePolynomial&) = default;
  SharePolynomial(SharePolynomial&&) noexcept = default;
  SharePolynomial& operator=(const SharePolynomial&) = default;
  SharePolynomial& operator=(SharePolynomial&&) noexcept = default;
  ~SharePolynomial() {
    for (auto& c : coeffs_) c.wipe();
  }

  std::size_t threshold() const { return coeffs_.size(); }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }
  const Scalar& secret() const { return coeffs_.front(); }

 private:
  std::vector<Scalar> coeffs_;
};

struct Share {
  std::uint32_t index = 0;
  Scalar value;
};

template <EntropySource R>
SharePolynomial sample_polynomial(std::size_t t, R& rng) {
  if (t == 0) throw Error(ErrorCode::InvalidThreshold, "threshold must be at least 1");
  std::vector<Scalar> coeffs;
  coeffs.reserve(t);
  for (std::size_t i = 0; i < t; ++i) coeffs.push_back(Scalar::random(rng));
  return SharePolynomial(std::move(coeffs));
}

/// Horner evaluation of f at x.
inline Scalar evaluate(const SharePolynomial& poly, std::uint64_t x) {
  const Scalar sx = Scalar::from_u64(x);
  const auto& c = poly.coefficients();
  Scalar acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * sx + c[k];
  return acc;
}

inline Share make_share(const SharePolynomial& poly, std::uint32_t index) {
  if (index == 0) throw Error(ErrorCode::BadSubset, "share index 0 is reserved for the secret");
  return Share{index, evaluate(poly, index)};
}

/// gamma_{i,J} = prod_{j in J, j != i} j / (j - i)  (mod q).
inline Scalar lagrange_coefficient(std::uint32_t i, const IndexSet& subset) {
  if (!subset.contains(i)) throw Error(ErrorCode::BadSubset, "index not in subset");
  if (subset.contains(0)) throw Error(ErrorCode::BadSubset, "index 0 is not a share index");
  Scalar num = Scalar::from_u64(1);
  Scalar den = Scalar::from_u64(1);
  const Scalar si = Scalar::from_u64(i);
  for (std::uint32_t j : subset) {
    if (j == i) continue;
    const Scalar sj = Scalar::from_u64(j);
    num = num * sj;
    den = den * (sj - si);
  }
  return num * den.inverse();
}

/// sum_{i in J} gamma_{i,J} * s_i, i.e. f(0) when |J| = t.
inline Scalar reconstruct_field(std::span<const Share> shares, const IndexSet& subset) {
  std::map<std::uint32_t, const Scalar*> by_index;
  for (const auto& s : shares) by_index.emplace(s.index, &s.value);
  Scalar acc;
  for (std::uint32_t i : subset) {
    auto it = by_index.find(i);
    if (it == by_index.end()) throw Error(ErrorCode::BadSubset, "no share for index " + std::to_string(i));
    acc = acc + lagrange_coefficient(i, subset) * *it->second;
  }
  return acc;
}

using ExponentShare = std::pair<std::uint32_t, G1Element>;

/// prod_{i in J} share_i^{gamma_{i,J}}; equals h^{f(0)} when share_i = h^{f(i)}
/// and |J| = t. The subset size is the caller's responsibility.
inline G1Element reconstruct_in_exponent(std::span<const ExponentShare> shares, const IndexSet& subset) {
  std::map<std::uint32_t, const G1Element*> by_index;
  for (const auto& [idx, point] : shares) by_index.emplace(idx, &point);
  G1Element acc;
  for (std::uint32_t i : subset) {
    auto it = by_index.find(i);
    if (it == by_index.end()) throw Error(ErrorCode::BadSubset, "no share for index " + std::to_string(i));
    acc *= it->second->pow(lagrange_coefficient(i, subset));
  }
  return acc;
}

}  // namespace tnrss
