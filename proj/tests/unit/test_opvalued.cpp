#include <gtest/gtest.h>

#include <random>

#include "qfree/opvalued.hpp"

using namespace qfree;

namespace {

using DM = BMatrix<DenseAlgebra>;
using MM = BMatrix<MatrixUnitAlgebra>;

GaussianRational small_rational(std::mt19937& rng, bool complex) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  GaussianRational z(make_rational(num(rng), den(rng)));
  if (complex) z += GaussianRational(BigRational(0), make_rational(num(rng), den(rng)));
  return z;
}

DM random_dense(const DenseAlgebra& alg, int n, std::mt19937& rng, bool complex = false) {
  DM m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto e = alg.zero();
      for (int r = 0; r < alg.dim(); ++r)
        for (int c = 0; c < alg.dim(); ++c) e(r, c) = small_rational(rng, complex);
      m(i, j) = e;
    }
  return m;
}

// A_ij = E_ji(system)
MM flip_matrix(const MatrixUnitAlgebra& alg, int system) {
  MM m(alg.n());
  for (int i = 0; i < alg.n(); ++i)
    for (int j = 0; j < alg.n(); ++j) m(i, j) = alg.unit(system, j + 1, i + 1);
  return m;
}

Partition random_nc(int m, std::mt19937& rng) {
  const auto& all = cached_members(FamilyKind::NC, m);
  return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

}  // namespace

TEST(MatrixUnits, FlipMatrixExpectationAndSquare) {
  for (int n : {2, 3, 5}) {
    MatrixUnitAlgebra alg(n);
    MM a = flip_matrix(alg, 1);
    EXPECT_TRUE(alg.equal(expectation(alg, a), alg.one() * GaussianRational(make_rational(1, n))));
    EXPECT_TRUE(equal(alg, multiply(a, a), MM::identity(alg, n)));
  }
}

TEST(MatrixUnits, CanonicalFormAndSystemsCommute) {
  MatrixUnitAlgebra alg(3);
  auto sum = alg.zero();
  for (int a = 1; a <= 3; ++a) sum += alg.unit(2, a, a);
  EXPECT_TRUE(alg.equal(sum, alg.one()));
  EXPECT_EQ(alg.to_string(sum), "1");
  auto x = alg.unit(1, 1, 2), y = alg.unit(2, 3, 1);
  EXPECT_TRUE(alg.equal(x * y, y * x));
  EXPECT_TRUE((alg.unit(1, 1, 2) * alg.unit(1, 1, 2)).is_zero());
  EXPECT_TRUE(alg.equal(alg.unit(1, 1, 2) * alg.unit(1, 2, 3), alg.unit(1, 1, 3)));
  EXPECT_TRUE(alg.equal(alg.adjoint(x * GaussianRational::i()), alg.unit(1, 2, 1) * (-GaussianRational::i())));
}

TEST(MatrixUnits, OrbitCoordinatesRoundTrip) {
  MatrixUnitAlgebra alg(4);
  auto c = alg.coordinates(alg.one());
  ASSERT_EQ(c.size(), 15u);
  auto labels = alg.coordinate_labels();
  for (std::size_t k = 0; k < c.size(); ++k) {
    bool expected = labels[k] == "O{{1,2},{3,4}}" || labels[k] == "O{{1,2,3,4}}";
    EXPECT_EQ(c[k], GaussianRational(expected ? 1 : 0)) << labels[k];
  }
  // the swap operator sum_{a,b} E_ab(1) E_ba(2)
  auto swap = alg.zero();
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) swap += alg.unit(1, a, b) * alg.unit(2, b, a);
  EXPECT_TRUE(alg.equal(alg.from_coordinates(alg.coordinates(swap)), swap));
  EXPECT_THROW(alg.coordinates(alg.unit(1, 1, 2)), std::domain_error);
  EXPECT_THROW(MatrixUnitAlgebra(3).coordinates(MatrixUnitAlgebra(3).one()), std::domain_error);
}

TEST(MatrixUnits, FromCoordinatesEveryClass) {
  for (int n : {4, 5}) {
    MatrixUnitAlgebra alg(n);
    std::vector<GaussianRational> c;
    for (int k = 0; k < 15; ++k) c.push_back(GaussianRational(make_rational(k * k - 7, k + 1), BigRational(k % 3)));
    auto x = alg.from_coordinates(c);
    EXPECT_EQ(alg.coordinates(x), c);
    for (int k = 0; k < 15; ++k) {
      std::vector<GaussianRational> e(15);
      e[k] = 1;
      EXPECT_EQ(alg.coordinates(alg.from_coordinates(e)), e) << k;
    }
  }
  // one stays a single term instead of N^2 explicit ones
  MatrixUnitAlgebra alg(20);
  auto one = alg.coordinates(MatrixUnitAlgebra(4).one());
  EXPECT_EQ(alg.from_coordinates(one).terms().size(), 1u);
}

TEST(MatrixUnits, FloatNorms) {
  MatrixUnitAlgebra alg(3);
  EXPECT_NEAR(alg.norm(alg.one()), 1.0, 1e-9);
  EXPECT_NEAR(alg.norm(alg.unit(1, 1, 2) * GaussianRational(3)), 3.0, 1e-9);
  EXPECT_NEAR(norm(alg, flip_matrix(alg, 2)), 1.0, 1e-9);
}

TEST(Functional, CommutativeCaseIsProductOfBlockExpectations) {
  std::mt19937 rng(11);
  DenseAlgebra alg(1);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 4;
    std::vector<DM> a;
    for (int k = 0; k < m; ++k) a.push_back(random_dense(alg, 3, rng));
    Partition s = random_nc(m, rng);
    auto expected = alg.one();
    for (const auto& block : s.blocks()) {
      DM p = a[block[0] - 1];
      for (std::size_t t = 1; t < block.size(); ++t) p = multiply(p, a[block[t] - 1]);
      expected = expected * expectation(alg, p);
    }
    EXPECT_TRUE(alg.equal(functional_e(alg, s, std::span<const DM>(a)), expected)) << s.to_string();
  }
}

TEST(Functional, NestedExample) {
  // E^{(s)} for s = {{1,4},{2,3}} is E[a1 E[a2 a3] a4]
  std::mt19937 rng(5);
  DenseAlgebra alg(2);
  std::vector<DM> a;
  for (int k = 0; k < 4; ++k) a.push_back(random_dense(alg, 2, rng, true));
  auto inner = expectation(alg, multiply(a[1], a[2]));
  auto expected = expectation(alg, multiply(right_multiply(a[0], inner), a[3]));
  EXPECT_TRUE(alg.equal(functional_e(alg, Partition::parse("{{1,4},{2,3}}"), std::span<const DM>(a)), expected));
  EXPECT_THROW(functional_e(alg, Partition::parse("{{1,3},{2,4}}"), std::span<const DM>(a)), std::invalid_argument);
}

TEST(Functional, BimoduleProperty) {
  std::mt19937 rng(7);
  DenseAlgebra alg(2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<DM> a;
    for (int k = 0; k < 3; ++k) a.push_back(random_dense(alg, 2, rng, true));
    auto b0 = random_dense(alg, 1, rng, true)(0, 0);
    Partition s = random_nc(3, rng);
    std::vector<DM> shifted = a;
    shifted[0] = left_multiply(b0, shifted[0]);
    EXPECT_TRUE(alg.equal(functional_e(alg, s, std::span<const DM>(shifted)),
                          b0 * functional_e(alg, s, std::span<const DM>(a))));
  }
}

TEST(Functional, MomentsAreSumsOfCumulants) {
  std::mt19937 rng(3);
  DenseAlgebra alg(2);
  std::vector<DM> a;
  for (int k = 0; k < 4; ++k) a.push_back(random_dense(alg, 2, rng));
  auto total = alg.zero();
  for (const auto& p : cached_members(FamilyKind::NC, 4)) total += cumulant_k(alg, p, std::span<const DM>(a));
  EXPECT_TRUE(alg.equal(total, functional_e(alg, Partition::one(4), std::span<const DM>(a))));
}

TEST(ConstrainedSum, FattenedNoncrossingGivesFunctional) {
  std::mt19937 rng(19);
  DenseAlgebra alg(2);
  for (int m = 1; m <= 4; ++m)
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<DM> a;
      for (int k = 0; k < m; ++k) a.push_back(random_dense(alg, 3, rng, trial % 2 == 1));
      Partition s = random_nc(m, rng);
      BigInteger p = 1;
      for (int b = 0; b < s.num_blocks(); ++b) p *= 3;
      auto rhs = functional_e(alg, s, std::span<const DM>(a)) * GaussianRational(BigRational(p));
      EXPECT_TRUE(alg.equal(constrained_sum(alg, fatten(s), std::span<const DM>(a)), rhs)) << s.to_string();
    }
}

TEST(ConstrainedSum, TwoSumFormMatchesInterleavedFunctional) {
  // sum over j with fatten(s) <= ker j of the odd factors and i with
  // fatten(K(p)) <= ker i of the even factors equals
  // N^{|s|+|K(p)|} E^{(s wr K(p))}
  std::mt19937 rng(23);
  DenseAlgebra alg(2);
  const int m = 3, N = 2;
  std::vector<DM> a;
  for (int k = 0; k < 2 * m; ++k) a.push_back(random_dense(alg, N, rng));
  for (const auto& p : cached_members(FamilyKind::NC, m))
    for (const auto& s : cached_members(FamilyKind::NC, m)) {
      if (!s.refines(p)) continue;
      Partition w = interleave(s, kreweras(p));
      BigInteger scale = 1;
      for (int b = 0; b < s.num_blocks() + kreweras(p).num_blocks(); ++b) scale *= N;
      auto rhs = functional_e(alg, w, std::span<const DM>(a)) * GaussianRational(BigRational(scale));
      EXPECT_TRUE(alg.equal(constrained_sum(alg, fatten(w), std::span<const DM>(a)), rhs));
    }
}

TEST(ConstrainedSum, CrossingPairingOfFlipMatrices) {
  for (int n : {2, 3, 4}) {
    MatrixUnitAlgebra alg(n);
    std::vector<MM> a(3, flip_matrix(alg, 1));
    auto tau = Partition::parse("{{1,4},{2,5},{3,6}}");
    auto v = constrained_sum(alg, tau, std::span<const MM>(a));
    EXPECT_TRUE(alg.equal(v, alg.one() * GaussianRational(n * n)));
    auto nc = norm_check(alg, tau, std::span<const MM>(a));
    EXPECT_TRUE(nc.ok);
    EXPECT_NEAR(nc.lhs_norm, n * n, 1e-9);
    EXPECT_NEAR(nc.bound, n * n * n, 1e-6);
  }
}

TEST(ConstrainedSum, MatchesBruteForce) {
  std::mt19937 rng(29);
  DenseAlgebra alg(2);
  const int N = 2, m = 3;
  std::vector<DM> a;
  for (int k = 0; k < m; ++k) a.push_back(random_dense(alg, N, rng, true));
  for (const auto& theta : cached_members(FamilyKind::ALL, 2 * m)) {
    auto brute = alg.zero();
    std::vector<int> idx(2 * m, 0);
    for (int code = 0; code < 64; ++code) {
      for (int t = 0; t < 2 * m; ++t) idx[t] = (code >> t) & 1;
      bool ok = true;
      for (int x = 1; x <= 2 * m && ok; ++x)
        for (int y = x + 1; y <= 2 * m && ok; ++y)
          if (theta.same_block(x, y) && idx[x - 1] != idx[y - 1]) ok = false;
      if (!ok) continue;
      auto prod = alg.one();
      for (int k = 0; k < m; ++k) prod = prod * a[k](idx[2 * k], idx[2 * k + 1]);
      brute += prod;
    }
    ASSERT_TRUE(alg.equal(constrained_sum(alg, theta, std::span<const DM>(a)), brute)) << theta.to_string();
  }
}

TEST(NormCheck, HoldsForRandomFactors) {
  std::mt19937 rng(31);
  DenseAlgebra alg(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DM> a;
    for (int k = 0; k < 3; ++k) a.push_back(random_dense(alg, 2, rng, true));
    const auto& all = cached_members(FamilyKind::ALL, 6);
    Partition theta = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    auto r = norm_check(alg, theta, std::span<const DM>(a));
    EXPECT_TRUE(r.ok) << theta.to_string() << " " << r.lhs_norm << " > " << r.bound;
  }
}
