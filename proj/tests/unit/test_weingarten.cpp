#include <gtest/gtest.h>

#include "qfree/weingarten.hpp"

using namespace qfree;

namespace {

RationalFunction rf(const char* s) { return RationalFunction::parse(s); }

// every tuple in {1..k}^len
std::vector<std::vector<int>> tuples(int len, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(len, 1);
  while (true) {
    out.push_back(t);
    int p = len - 1;
    while (p >= 0 && t[p] == k) t[p--] = 1;
    if (p < 0) break;
    ++t[p];
  }
  return out;
}

std::vector<SignPattern> all_patterns(int len) {
  std::vector<SignPattern> out;
  for (int code = 0; code < (1 << len); ++code) {
    std::vector<bool> s(len);
    for (int b = 0; b < len; ++b) s[b] = (code >> b) & 1;
    out.emplace_back(s);
  }
  return out;
}

}  // namespace

TEST(Weingarten, SmallTables) {
  auto t1 = build_table(Flavor::quantum, SignPattern::parse("1*"));
  ASSERT_EQ(t1.family.size(), 1u);
  EXPECT_EQ(t1.gram(0, 0), rf("n"));
  EXPECT_EQ(t1.wg(0, 0), rf("1/n"));

  auto t2 = build_table(Flavor::quantum, SignPattern::parse("1*1*"));
  ASSERT_EQ(t2.family.size(), 2u);
  EXPECT_EQ(t2.wg(0, 0).to_string(), "1/(n^2 - 1)");
  EXPECT_EQ(t2.wg(1, 1).to_string(), "1/(n^2 - 1)");
  EXPECT_EQ(t2.wg(0, 1).to_string(), "-1/(n^3 - n)");
}

TEST(Weingarten, GramTimesWgIsIdentity) {
  for (const char* e : {"1*", "1*1*", "11**", "1**1", "1*1*1*", "111***", "1*1*1*1*", "11*1**1*"}) {
    const auto& t = weingarten_table(Flavor::quantum, SignPattern::parse(e));
    EXPECT_TRUE((t.gram * t.wg).is_identity()) << e;
    for (std::size_t a = 0; a < t.family.size(); ++a)
      for (std::size_t b = 0; b < t.family.size(); ++b) EXPECT_EQ(t.wg(a, b), t.wg(b, a));
  }
  for (const char* e : {"1*", "1*1*", "1*1*1*", "11*1**"}) {
    const auto& t = weingarten_table(Flavor::classical, SignPattern::parse(e));
    EXPECT_TRUE((t.gram * t.wg).is_identity()) << e;
  }
}

TEST(Weingarten, CrossingPairingOnlyInClassicalTable) {
  auto tau = Partition::parse("{{1,4},{2,5},{3,6}}");
  auto eps = SignPattern::parse("1*1*1*");
  const auto& c = weingarten_table(Flavor::classical, eps);
  const auto& q = weingarten_table(Flavor::quantum, eps);
  EXPECT_EQ(c.family.size(), 6u);
  EXPECT_EQ(q.family.size(), 5u);
  EXPECT_GE(c.index_of(tau), 0);
  EXPECT_EQ(q.index_of(tau), -1);
}

TEST(Weingarten, HaarMomentExamples) {
  auto eps = SignPattern::parse("1*");
  std::vector<int> i{1, 1}, j{1, 1}, j2{2, 2};
  EXPECT_EQ(haar_moment(Flavor::quantum, eps, i, j), rf("1/n"));
  std::vector<int> i2{1, 2};
  EXPECT_TRUE(haar_moment(Flavor::quantum, eps, std::vector<int>{1, 2}, std::vector<int>{1, 2}).is_zero());
  EXPECT_TRUE(haar_moment(Flavor::quantum, eps, i2, i2).is_zero());
  std::vector<int> odd{1, 1, 1};
  EXPECT_TRUE(haar_moment(Flavor::quantum, SignPattern::parse("1*1"), odd, odd).is_zero());
  EXPECT_TRUE(haar_moment(Flavor::quantum, SignPattern::parse("11"), i, j).is_zero());
  EXPECT_THROW(haar_moment(Flavor::quantum, eps, odd, j), std::invalid_argument);
}

TEST(Weingarten, UnitarityRowSums) {
  auto eps = SignPattern::parse("1*");
  for (Flavor f : {Flavor::quantum, Flavor::classical})
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) {
        // sum_k psi(U_ak (U*)_kb) = sum_k psi(U_ak conj(U_bk))
        RationalFunction s;
        for (int k = 1; k <= 3; ++k) s += haar_moment(f, eps, std::vector<int>{a, b}, std::vector<int>{k, k});
        // the sum over k runs to n, so compare after multiplying out: each term is 1/n when a == b
        EXPECT_EQ(s, a == b ? rf("3/n") : RationalFunction());
      }
}

TEST(Weingarten, TranspositionInvariance) {
  for (int len : {2, 4})
    for (const auto& eps : all_patterns(len)) {
      if (!eps.balanced()) continue;
      for (const auto& i : tuples(len, 2))
        for (const auto& j : tuples(len, 2))
          EXPECT_EQ(haar_moment(Flavor::quantum, eps, i, j), haar_moment(Flavor::quantum, eps, j, i));
    }
}

TEST(Weingarten, AdjointReduceExamples) {
  EntryWord w{{1, false, false, 1, 2}, {1, true, true, 3, 4}};
  auto r = adjoint_reduce(w);
  EXPECT_EQ(r[0], (EntryLetter{1, false, false, 1, 2}));
  EXPECT_EQ(r[1], (EntryLetter{1, true, false, 4, 3}));
  EXPECT_THROW(adjoint_reduce(EntryWord{{1, false, false, 1, 1}}), std::invalid_argument);
}

TEST(Weingarten, AdjointReducePreservesHaarValues) {
  for (int len : {2, 4})
    for (const auto& eps : all_patterns(len))
      for (const auto& idx : tuples(2 * len, 2)) {
        EntryWord w;
        for (int k = 0; k < len; ++k) w.push_back({1, eps.star(k + 1), true, idx[2 * k], idx[2 * k + 1]});
        EXPECT_EQ(word_moment(Flavor::quantum, w), word_moment(Flavor::quantum, adjoint_reduce(w)))
            << eps.to_string();
      }
}

TEST(Weingarten, MomentFunctionAndCumulants) {
  auto eps = SignPattern::parse("1*1*");
  std::vector<int> i{1, 1, 2, 2}, j{1, 1, 1, 1};
  EXPECT_EQ(moment_function(Flavor::quantum, eps, Partition::one(4), i, j), haar_moment(Flavor::quantum, eps, i, j));
  EXPECT_EQ(moment_function(Flavor::quantum, eps, Partition::parse("{{1,2},{3,4}}"), i, j), rf("1/n^2"));
  EXPECT_TRUE(moment_function(Flavor::quantum, eps, Partition::parse("{{1,2,3},{4}}"), i, j).is_zero());
  EXPECT_TRUE(entry_cumulant(Flavor::quantum, eps, Partition::parse("{{1},{2,3,4}}"), i, j).is_zero());
  std::vector<int> one{1, 1};
  EXPECT_EQ(entry_cumulant(Flavor::quantum, SignPattern::parse("1*"), Partition::one(2), one, one), rf("1/n"));
  // Mobius inversion back to moments
  for (const auto& w : cached_members(FamilyKind::NC, 4)) {
    RationalFunction s;
    for (const auto& t : cached_members(FamilyKind::NC, 4))
      if (t.refines(w)) s += entry_cumulant(Flavor::quantum, eps, t, i, j);
    EXPECT_EQ(s, moment_function(Flavor::quantum, eps, w, i, j)) << w.to_string();
  }
}

TEST(Weingarten, FreeProductMoments) {
  std::vector<int> ones{1, 1, 1, 1};
  auto alt = SignPattern::parse("1*1*");
  // one label reduces to the Haar state
  for (const auto& i : tuples(4, 2))
    EXPECT_EQ(free_product_moment(Flavor::quantum, alt, std::vector<int>{3, 3, 3, 3}, i, ones),
              haar_moment(Flavor::quantum, alt, i, ones));
  EXPECT_TRUE(free_product_moment(Flavor::quantum, alt, std::vector<int>{1, 2, 1, 2}, ones, ones).is_zero());
  EXPECT_EQ(free_product_moment(Flavor::quantum, alt, std::vector<int>{1, 1, 2, 2}, ones, ones), rf("1/n^2"));
  EXPECT_EQ(free_product_moment(Flavor::quantum, SignPattern::parse("11**"), std::vector<int>{1, 2, 2, 1}, ones, ones),
            rf("1/n^2"));
}

TEST(Weingarten, FreeProductAdjointReduction) {
  for (const auto& eps : all_patterns(4))
    for (const auto& labels : tuples(4, 2))
      for (const auto& idx : tuples(8, 2)) {
        std::vector<int> li, lj, ri, rj;
        for (int k = 0; k < 4; ++k) {
          int a = idx[2 * k], b = idx[2 * k + 1];
          // literal: (U*)_{ab} = (U_{ba})^*
          li.push_back(eps.star(k + 1) ? b : a);
          lj.push_back(eps.star(k + 1) ? a : b);
          ri.push_back(k % 2 ? b : a);
          rj.push_back(k % 2 ? a : b);
        }
        ASSERT_EQ(free_product_moment(Flavor::quantum, eps, labels, li, lj),
                  free_product_moment(Flavor::quantum, eps, labels, ri, rj));
      }
}

TEST(Weingarten, WestExpansion) {
  for (int m = 1; m <= 3; ++m)
    for (const auto& eps : all_patterns(2 * m)) {
      if (!eps.balanced()) continue;
      const auto& fam = cached_members(FamilyKind::NC_EPS, m, &eps);
      if (fam.empty()) continue;
      const auto& t = weingarten_table(Flavor::quantum, eps);
      for (const auto& p : fam)
        for (const auto& s : fam) {
          auto r = west_expansion(t, p, s);
          EXPECT_TRUE(r.ok()) << eps.to_string() << " " << p.to_string() << " " << s.to_string() << " c0=" << r.c0
                              << " c1=" << r.c1;
        }
    }
  const auto& t = weingarten_table(Flavor::quantum, SignPattern::parse("1*1*"));
  auto r = west_expansion(t, Partition::one(2), Partition::zero(2));
  EXPECT_EQ(r.c0, -1);
  EXPECT_EQ(r.c1, 0);
  auto same = west_expansion(t, Partition::one(2), Partition::one(2));
  EXPECT_EQ(same.c0, 1);
  auto below = west_expansion(t, Partition::zero(2), Partition::one(2));
  EXPECT_EQ(below.c0, 0);
}
