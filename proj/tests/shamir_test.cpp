#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "tnrss/shamir.hpp"

using namespace tnrss;

namespace {

const G1Element& g1() { return PairingContext::bls12_381().g1; }

// Oracle: sum_k a_k * x^k with x^k built by repeated multiplication.
Scalar naive_eval(const SharePolynomial& poly, std::uint64_t x) {
  Scalar acc;
  Scalar power = Scalar::from_u64(1);
  for (const auto& a : poly.coefficients()) {
    acc = acc + a * power;
    power = power * Scalar::from_u64(x);
  }
  return acc;
}

std::vector<IndexSet> subsets_of_size(std::uint32_t n, std::uint32_t k) {
  std::vector<IndexSet> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::uint32_t>(__builtin_popcount(mask)) != k) continue;
    IndexSet s;
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.insert(i + 1);
    out.push_back(s);
  }
  return out;
}

TEST(SamplePolynomial, Shapes) {
  SeededRandom rng(21);
  EXPECT_EQ(sample_polynomial(3, rng).threshold(), 3u);
  try {
    sample_polynomial(0, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidThreshold);
  }
}

TEST(SamplePolynomial, DegreeZeroSharesEqualSecret) {
  SeededRandom rng(22);
  const auto poly = sample_polynomial(1, rng);
  for (std::uint32_t i = 1; i <= 5; ++i) EXPECT_TRUE(evaluate(poly, i) == poly.secret());
}

// Chi-square on the low 4 bits of 1000 sampled coefficients. 15 degrees of
// freedom; 37.70 is the 0.999 quantile.
TEST(SamplePolynomial, CoarseUniformity) {
  SeededRandom rng(23);
  std::array<int, 16> buckets{};
  const int samples = 1000;
  for (int k = 0; k < samples; ++k) {
    const auto poly = sample_polynomial(1, rng);
    ++buckets[poly.secret().to_bytes()[31] & 0x0f];
  }
  const double expected = samples / 16.0;
  double chi2 = 0;
  for (int c : buckets) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 37.70);
}

TEST(Evaluate, LinearPolynomial) {
  const SharePolynomial f({Scalar::from_u64(3), Scalar::from_u64(2)});
  EXPECT_TRUE(evaluate(f, 1) == Scalar::from_u64(5));
  EXPECT_TRUE(evaluate(f, 2) == Scalar::from_u64(7));
  EXPECT_TRUE(evaluate(f, 0) == Scalar::from_u64(3));
}

TEST(Evaluate, MatchesNaiveSum) {
  SeededRandom rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const auto poly = sample_polynomial(rng.uniform(1, 8), rng);
    const std::uint64_t x = rng.uniform(0, 1'000'000);
    EXPECT_TRUE(evaluate(poly, x) == naive_eval(poly, x));
    EXPECT_TRUE(evaluate(poly, 0) == poly.secret());
  }
}

TEST(Lagrange, SingletonIsOne) { EXPECT_TRUE(lagrange_coefficient(1, {1}) == Scalar::from_u64(1)); }

TEST(Lagrange, PairOneTwo) {
  // gamma_1 = 2 / (2 - 1) = 2, gamma_2 = 1 / (1 - 2) = -1 = q - 1.
  EXPECT_TRUE(lagrange_coefficient(1, {1, 2}) == Scalar::from_u64(2));
  auto q_minus_1 = PairingContext::bls12_381().group_order;
  q_minus_1[31] -= 1;
  EXPECT_TRUE(lagrange_coefficient(2, {1, 2}) == Scalar::from_bytes(q_minus_1));
}

TEST(Lagrange, BadSubset) {
  try {
    lagrange_coefficient(3, {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadSubset);
  }
  EXPECT_THROW(lagrange_coefficient(1, {0, 1}), Error);
}

TEST(Lagrange, ReconstructsSecretForEveryTSubset) {
  SeededRandom rng(25);
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (std::uint32_t t = 1; t <= n; ++t) {
      const auto poly = sample_polynomial(t, rng);
      std::vector<Share> shares;
      for (std::uint32_t i = 1; i <= n; ++i) shares.push_back(make_share(poly, i));
      for (const auto& j : subsets_of_size(n, t)) {
        Scalar sum;
        for (std::uint32_t i : j) sum = sum + lagrange_coefficient(i, j) * evaluate(poly, i);
        EXPECT_TRUE(sum == poly.secret()) << "t=" << t << " n=" << n;
        EXPECT_TRUE(reconstruct_field(shares, j) == poly.secret());
      }
    }
  }
}

TEST(ReconstructInExponent, SingleShareUnchanged) {
  SeededRandom rng(26);
  const G1Element p = g1().pow(Scalar::random(rng));
  const ExponentShare shares[] = {{1, p}};
  EXPECT_TRUE(reconstruct_in_exponent(shares, {1}) == p);
}

TEST(ReconstructInExponent, TwoOfThreeAllSubsets) {
  SeededRandom rng(27);
  for (int trial = 0; trial < 5; ++trial) {
    const G1Element h = g1().pow(Scalar::random(rng));
    const auto f = sample_polynomial(2, rng);
    std::vector<ExponentShare> shares;
    for (std::uint32_t i = 1; i <= 3; ++i) shares.emplace_back(i, h.pow(evaluate(f, i)));
    const G1Element expected = h.pow(f.secret());
    for (const IndexSet& j : {IndexSet{1, 2}, IndexSet{1, 3}, IndexSet{2, 3}}) {
      EXPECT_TRUE(reconstruct_in_exponent(shares, j) == expected);
    }
  }
}

TEST(ReconstructInExponent, WrongPolynomialDoesNotReconstruct) {
  SeededRandom rng(28);
  const G1Element h = g1().pow(Scalar::random(rng));
  const auto f = sample_polynomial(2, rng);
  const auto g = sample_polynomial(2, rng);
  std::vector<ExponentShare> shares;
  for (std::uint32_t i = 1; i <= 3; ++i) shares.emplace_back(i, h.pow(evaluate(g, i)));
  EXPECT_FALSE(reconstruct_in_exponent(shares, {1, 2}) == h.pow(f.secret()));
}

TEST(ReconstructInExponent, MissingIndex) {
  const ExponentShare shares[] = {{1, g1()}};
  try {
    reconstruct_in_exponent(shares, {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadSubset);
  }
}

TEST(ReconstructInExponent, CommutesWithFieldReconstruction) {
  SeededRandom rng(29);
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (std::uint32_t t = 1; t <= n; ++t) {
      const G1Element h = g1().pow(Scalar::random(rng));
      const auto f = sample_polynomial(t, rng);
      std::vector<Share> shares;
      std::vector<ExponentShare> lifted;
      for (std::uint32_t i = 1; i <= n; ++i) {
        shares.push_back(make_share(f, i));
        lifted.emplace_back(i, h.pow(shares.back().value));
      }
      for (const auto& j : subsets_of_size(n, t)) {
        EXPECT_TRUE(reconstruct_in_exponent(lifted, j) == h.pow(reconstruct_field(shares, j)));
      }
    }
  }
}

TEST(ReconstructInExponent, TooFewSharesFail) {
  SeededRandom rng(30);
  int disagreements = 0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const auto f = sample_polynomial(3, rng);
    const G1Element h = g1().pow(Scalar::random(rng));
    std::vector<ExponentShare> lifted;
    for (std::uint32_t i = 1; i <= 3; ++i) lifted.emplace_back(i, h.pow(evaluate(f, i)));
    if (!(reconstruct_in_exponent(lifted, {1, 2}) == h.pow(f.secret()))) ++disagreements;
  }
  EXPECT_GE(disagreements, 999);
}

}  // namespace
