#include <gtest/gtest.h>

#include <random>

#include "qfree/freeness.hpp"
#include "qfree/selftest.hpp"

using namespace qfree;

namespace {

using DM = BMatrix<DenseAlgebra>;

MixedWord<DenseAlgebra> identity_word(const DenseAlgebra& alg, Flavor f, int m, int N) {
  MixedWord<DenseAlgebra> w;
  w.flavor = f;
  w.eps = SignPattern::alternating(m);
  w.labels.assign(2 * m, 1);
  w.factors.assign(2 * m, DM::identity(alg, N));
  return w;
}

}  // namespace

TEST(LhsExact, UnitarityGivesOne) {
  DenseAlgebra alg(2);
  for (Flavor f : {Flavor::quantum, Flavor::classical})
    for (int N : {2, 3, 5}) {
      auto w = identity_word(alg, f, 1, N);
      EXPECT_TRUE(alg.equal(lhs_exact(alg, w), alg.one()));
      EXPECT_TRUE(alg.equal(limit_formula(alg, w), alg.one()));
    }
}

TEST(LhsExact, OddOrUnbalancedWordsVanish) {
  DenseAlgebra alg(1);
  auto w = identity_word(alg, Flavor::quantum, 1, 3);
  w.eps = SignPattern::parse("11");
  EXPECT_TRUE(lhs_exact(alg, w).is_zero());
  EXPECT_TRUE(lhs_bruteforce(alg, w).is_zero());
}

TEST(LhsExact, MatchesBruteForceOnRandomWords) {
  std::mt19937 rng(101);
  DenseAlgebra alg(2);
  for (int trial = 0; trial < 24; ++trial) {
    Flavor f = trial % 2 ? Flavor::classical : Flavor::quantum;
    int m = 1 + trial % 2, N = 2 + (trial / 2) % 2;
    int labels = (trial / 4) % 2 ? 2 : 1;
    auto w = random_dense_word(alg, rng, f, m, N, labels, trial % 3 != 0);
    ASSERT_TRUE(alg.equal(lhs_exact(alg, w), lhs_bruteforce(alg, w)))
        << "trial " << trial << " eps " << w.eps.to_string();
  }
}

TEST(LhsExact, LeadFactorMatchesBruteForce) {
  std::mt19937 rng(103);
  DenseAlgebra alg(2);
  for (int N : {2, 3}) {
    auto w = random_dense_word(alg, rng, Flavor::quantum, 1, N, 1, true);
    w.lead = random_dense_bmatrix(alg, N, rng, true);
    EXPECT_TRUE(alg.equal(lhs_exact(alg, w), lhs_bruteforce(alg, w)));
  }
}

TEST(LhsExact, MatrixUnitWordsMatchBruteForce) {
  for (int N : {2, 3})
    for (Flavor f : {Flavor::quantum, Flavor::classical}) {
      MatrixUnitAlgebra alg(N);
      MixedWord<MatrixUnitAlgebra> w;
      w.flavor = f;
      w.eps = SignPattern::alternating(2);
      w.labels.assign(4, 1);
      for (int k = 0; k < 2; ++k) {
        w.factors.push_back(flip_matrix(alg, 1));
        w.factors.push_back(flip_matrix(alg, 2));
      }
      EXPECT_TRUE(alg.equal(lhs_exact(alg, w), lhs_bruteforce(alg, w)));
    }
}

TEST(LimitFormula, MatchesOracleOnRandomWords) {
  std::mt19937 rng(107);
  DenseAlgebra alg(2);
  for (int trial = 0; trial < 18; ++trial) {
    int m = 1 + trial % 3, N = 2 + trial % 2;
    int labels = trial % 4 == 3 ? 2 : 1;
    auto w = random_dense_word(alg, rng, Flavor::quantum, m, N, labels, trial % 2 == 0);
    ASSERT_TRUE(alg.equal(limit_formula(alg, w), limit_oracle(alg, w)))
        << "trial " << trial << " eps " << w.eps.to_string();
  }
}

TEST(LimitFormula, RejectsLeadFactor) {
  DenseAlgebra alg(1);
  auto w = identity_word(alg, Flavor::quantum, 1, 2);
  w.lead = DM::identity(alg, 2);
  EXPECT_THROW(limit_formula(alg, w), std::invalid_argument);
}

TEST(RotatedLimit, AgreesWithLimitFormulaAndCollapses) {
  std::mt19937 rng(109);
  DenseAlgebra alg(2);
  std::vector<DM> as, bs;
  for (int k = 0; k < 2; ++k) {
    as.push_back(random_dense_bmatrix(alg, 3, rng, false));
    bs.push_back(random_dense_bmatrix(alg, 3, rng, true));
  }
  MixedWord<DenseAlgebra> w;
  w.eps = SignPattern::alternating(2);
  w.labels.assign(4, 1);
  w.factors = {as[0], bs[0], as[1], bs[1]};
  EXPECT_TRUE(alg.equal(rotated_limit(alg, std::span<const DM>(as), std::span<const DM>(bs)), limit_formula(alg, w)));
  // A = identity: only the B-moment survives
  std::vector<DM> ids(2, DM::identity(alg, 3));
  auto v = rotated_limit(alg, std::span<const DM>(ids), std::span<const DM>(bs));
  EXPECT_TRUE(alg.equal(v, expectation(alg, multiply(bs[0], bs[1]))));
}

TEST(Counterexample, ClassicalStaysAtOneQuantumDecays) {
  const char* quantum[] = {"1", "23/63", "11/56", "71/575", "13/153"};
  for (long N = 2; N <= 6; ++N) {
    MatrixUnitAlgebra alg(static_cast<int>(N));
    EXPECT_TRUE(alg.equal(counterexample(N, Flavor::classical), alg.one())) << N;
    EXPECT_EQ(alg.to_string(counterexample(N, Flavor::quantum)), quantum[N - 2]) << N;
  }
}

TEST(Counterexample, TauTermScaling) {
  BigRational prev = 0;
  for (long N = 3; N <= 7; ++N) {
    auto t = counterexample_tau_term(N);
    MatrixUnitAlgebra alg(static_cast<int>(N));
    // N^2 * N^2 copies of the unit, so the term is (1/N) W N^4 = N^3 W
    EXPECT_TRUE(alg.equal(t.constrained, alg.one() * GaussianRational(N * N * N * N)));
    if (N > 3) EXPECT_LT(abs(t.n3_weight - 1), abs(prev - 1));
    prev = t.n3_weight;
  }
}

TEST(Convergence, ReportDiagnostics) {
  auto r = convergence_report({2, 3, 4, 5, 6, 7, 8}, [](long N) {
    ConvergenceRow row;
    row.delta = 3.0 / (static_cast<double>(N) * N);
    return row;
  });
  EXPECT_NEAR(r.slope, -2.0, 1e-9);
  EXPECT_TRUE(r.slope_ok && r.bounded && r.strict());
  auto slow = convergence_report({2, 3, 4, 5, 6, 7, 8}, [](long N) {
    ConvergenceRow row;
    row.delta = 1.0 / N;
    return row;
  });
  EXPECT_FALSE(slow.slope_ok);
  EXPECT_FALSE(slow.bounded);
  EXPECT_FALSE(slow.verdict());
  EXPECT_THROW(convergence_report({}, [](long) { return ConvergenceRow{}; }), std::invalid_argument);
}

TEST(Convergence, ClassicalCounterexampleFails) {
  std::vector<long> ns{2, 3, 4, 5, 6};
  auto r = convergence_report(ns, [](long N) {
    MatrixUnitAlgebra alg(static_cast<int>(N));
    return compare_to_limit(alg, counterexample_word(alg, Flavor::classical));
  });
  EXPECT_FALSE(r.verdict());
  // exact value 1 against a limit that tends to 0
  EXPECT_GT(r.rows.back().delta, 0.9);
}

TEST(Laurent, SingleFlipMatrixExpectation) {
  // E_N[A_N] = (1/N) one, so E = 0 and E' = one
  std::vector<std::pair<long, std::vector<GaussianRational>>> samples;
  for (long N = 4; N <= 9; ++N) {
    MatrixUnitAlgebra alg(static_cast<int>(N));
    samples.emplace_back(N, alg.coordinates(expectation(alg, flip_matrix(alg, 1))));
  }
  MatrixUnitAlgebra alg(4);
  auto lm = laurent_from_samples(samples, alg.coordinate_labels(), DegreeBounds{1, 1});
  auto one = alg.coordinates(alg.one());
  for (std::size_t c = 0; c < one.size(); ++c) {
    EXPECT_TRUE(lm.e[c].is_zero());
    EXPECT_EQ(lm.e_prime[c], one[c]);
  }
}

TEST(Laurent, ConstantWordHasNoCorrection) {
  std::vector<std::pair<long, std::vector<GaussianRational>>> samples;
  for (long N = 2; N <= 6; ++N) samples.emplace_back(N, std::vector<GaussianRational>{GaussianRational(3), 0});
  auto lm = laurent_from_samples(samples, {"x", "y"}, DegreeBounds{1, 1});
  EXPECT_EQ(lm.e[0], GaussianRational(3));
  EXPECT_TRUE(lm.e_prime[0].is_zero());
}

TEST(Laurent, MisfitIsLoud) {
  std::vector<std::pair<long, std::vector<GaussianRational>>> samples;
  for (long N = 2; N <= 8; ++N) samples.emplace_back(N, std::vector<GaussianRational>{GaussianRational(N % 2)});
  EXPECT_THROW(laurent_from_samples(samples, {"x"}, DegreeBounds{1, 1}), InterpolationError);
}

TEST(Laurent, FirstOrderWordMatchesLimit) {
  // m = 1 with constant diagonal factors: value at infinity is the limit
  DenseAlgebra alg(2);
  auto a = alg.zero(), b = alg.zero();
  a(0, 0) = 1, a(0, 1) = 2, a(1, 1) = -1;
  b(0, 1) = 1, b(1, 0) = 3;
  std::vector<std::pair<long, std::vector<GaussianRational>>> samples;
  GaussianRational lim0;
  for (long N = 2; N <= 8; ++N) {
    MixedWord<DenseAlgebra> w;
    w.eps = SignPattern::alternating(1);
    w.labels = {1, 1};
    w.factors = {DM::diagonal(static_cast<int>(N), a), DM::diagonal(static_cast<int>(N), b)};
    samples.emplace_back(N, alg.coordinates(lhs_exact(alg, w)));
    if (N == 8) lim0 = alg.coordinates(limit_formula(alg, w))[0];
  }
  auto lm = laurent_from_samples(samples, alg.coordinate_labels(), DegreeBounds{2, 2});
  EXPECT_EQ(lm.e[0], lim0);
}

TEST(WordTokens, ParseAndPrint) {
  auto w = parse_word("U1 A U1* B U2 C U2*");
  ASSERT_EQ(w.size(), 7u);
  EXPECT_EQ(w[0].kind, WordToken::Kind::unitary);
  EXPECT_EQ(w[2].label, 1);
  EXPECT_TRUE(w[2].star);
  EXPECT_EQ(w[4].label, 2);
  EXPECT_EQ(w[5].name, "C");
  EXPECT_EQ(parse_word("U A U* B")[2].label, 1);
  EXPECT_EQ(parse_word(to_string(w)).size(), w.size());
  EXPECT_THROW(parse_word("U0 A"), std::invalid_argument);
}

TEST(WordTokens, InstantiateMergesAndLeads) {
  DenseAlgebra alg(1);
  std::map<std::string, DM> fam{{"A", DM::diagonal(2, alg.one() * GaussianRational(2))},
                                {"B", DM::diagonal(2, alg.one() * GaussianRational(3))}};
  auto w = instantiate(alg, Flavor::quantum, parse_word("A U B A U*"), fam, {}, 2);
  ASSERT_TRUE(w.lead.has_value());
  ASSERT_EQ(w.factors.size(), 2u);
  EXPECT_TRUE(alg.equal(w.factors[0](0, 0), alg.one() * GaussianRational(6)));
  EXPECT_TRUE(alg.equal(w.factors[1](1, 1), alg.one()));
  EXPECT_EQ(w.eps.to_string(), "1*");
}

TEST(Infinitesimal, AlternatingWords) {
  auto words = alternating_words({{"a", 1}, {"b", 2}}, 3);
  EXPECT_EQ(words.size(), 2u + 2u + 2u);
  for (const auto& w : words)
    for (std::size_t k = 1; k < w.size(); ++k) EXPECT_NE(w[k], w[k - 1]);
}
