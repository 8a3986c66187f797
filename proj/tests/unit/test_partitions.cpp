#include <gtest/gtest.h>

#include <set>

#include "qfree/partitions.hpp"

using namespace qfree;

namespace {

Partition P(const char* s) { return Partition::parse(s); }

}  // namespace

TEST(Partition, ParseAndPrintRoundTrip) {
  auto p = P("{{2,3},{1,4,5},{6}}");
  EXPECT_EQ(p.to_string(), "{{1,4,5},{2,3},{6}}");
  EXPECT_EQ(p.size(), 6);
  EXPECT_EQ(p.num_blocks(), 3);
  EXPECT_THROW(P("{{1,2},{2}}"), PartitionError);
  EXPECT_THROW(P("{{1},{3}}"), PartitionError);
  EXPECT_THROW(P("{1,2}"), PartitionError);
}

TEST(Partition, NoncrossingDetection) {
  EXPECT_TRUE(P("{{1,4},{2,3}}").is_noncrossing());
  EXPECT_FALSE(P("{{1,3},{2,4}}").is_noncrossing());
  EXPECT_FALSE(P("{{1,4},{2,5},{3,6}}").is_noncrossing());
  EXPECT_TRUE(P("{{1,5},{2,3,4},{6,8},{7}}").is_noncrossing());
}

TEST(Enumerate, Counts) {
  const int catalan_numbers[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012};
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(enumerate(FamilyKind::NC, k).members.size(), catalan_numbers[k]) << k;
  const int bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(enumerate(FamilyKind::ALL, k).members.size(), bell[k]) << k;
  for (int m = 1; m <= 6; ++m) EXPECT_EQ(enumerate(FamilyKind::NC2, 2 * m).members.size(), catalan_numbers[m]);
  EXPECT_EQ(enumerate(FamilyKind::NC, 3).members.size(), 5u);
}

TEST(Enumerate, AllOfSizeOne) {
  auto f = enumerate(FamilyKind::ALL, 1);
  ASSERT_EQ(f.members.size(), 1u);
  EXPECT_EQ(f.members[0].to_string(), "{{1}}");
}

TEST(Enumerate, ClassicalPairingsWithCrossingTau) {
  auto eps = SignPattern::parse("1*1*1*");
  auto f = enumerate(FamilyKind::P2_EPS, 6, &eps);
  ASSERT_EQ(f.members.size(), 6u);
  int crossing = 0;
  for (auto& p : f.members)
    if (!p.is_noncrossing()) {
      ++crossing;
      EXPECT_EQ(p, P("{{1,4},{2,5},{3,6}}"));
    }
  EXPECT_EQ(crossing, 1);
  auto q = enumerate(FamilyKind::NC2_EPS, 6, &eps);
  EXPECT_EQ(q.members.size(), 5u);
}

TEST(Enumerate, CanonicalOrderIsLexicographicOnBlocks) {
  auto f = enumerate(FamilyKind::NC, 4);
  for (std::size_t i = 1; i < f.members.size(); ++i) EXPECT_LT(f.members[i - 1].blocks(), f.members[i].blocks());
  EXPECT_EQ(f.members.front(), P("{{1},{2},{3},{4}}"));
}

TEST(Enumerate, ParameterErrors) {
  EXPECT_THROW(enumerate(FamilyKind::NC2, 3), PartitionError);
  EXPECT_THROW(enumerate(FamilyKind::NC2_EPS, 4), PartitionError);
  auto eps = SignPattern::parse("1*");
  EXPECT_THROW(enumerate(FamilyKind::NC, 2, &eps), PartitionError);
  EXPECT_THROW(enumerate(FamilyKind::NC, 13), PartitionError);
  EXPECT_THROW(enumerate(FamilyKind::ALL, 11), PartitionError);
}

TEST(Enumerate, NcEpsMatchesFattenedPairings) {
  for (auto s : {"1*1*", "11**", "1**1", "1*1*1*", "1**1*1"}) {
    auto eps = SignPattern::parse(s);
    int m = eps.size() / 2;
    auto nce = enumerate(FamilyKind::NC_EPS, m, &eps).members;
    auto nc2 = enumerate(FamilyKind::NC2_EPS, 2 * m, &eps).members;
    std::set<std::string> a, b;
    for (auto& p : nce) a.insert(fatten(p).to_string());
    for (auto& p : nc2) b.insert(p.to_string());
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Join, Examples) {
  auto pi = P("{{1,3},{2},{4}}");
  EXPECT_EQ(join_full(Partition::zero(4), pi), pi);
  EXPECT_EQ(join_full(pi, pi), pi);
  EXPECT_EQ(join_full(P("{{1,2},{3,4}}"), P("{{1,4},{2,3}}")), Partition::one(4));
  EXPECT_EQ(join_nc(P("{{1,2},{3},{4}}"), Partition::zero(4)), P("{{1,2},{3},{4}}"));
  EXPECT_EQ(join_nc(P("{{1,3},{2},{4}}"), P("{{1},{2,4},{3}}")), Partition::one(4));
  EXPECT_THROW(join_nc(P("{{1,3},{2,4}}"), Partition::zero(4)), PartitionError);
  EXPECT_THROW(join_full(Partition::zero(3), Partition::zero(4)), PartitionError);
}

TEST(Join, NcJoinIsLeastNoncrossingUpperBound) {
  auto nc = enumerate(FamilyKind::NC, 5).members;
  for (std::size_t a = 0; a < nc.size(); a += 3)
    for (std::size_t b = 0; b < nc.size(); b += 2) {
      auto j = join_nc(nc[a], nc[b]);
      ASSERT_TRUE(j.is_noncrossing());
      ASSERT_TRUE(nc[a].refines(j) && nc[b].refines(j));
      for (auto& t : nc)
        if (nc[a].refines(t) && nc[b].refines(t)) ASSERT_TRUE(j.refines(t));
      auto f = join_full(nc[a], nc[b]);
      if (f.is_noncrossing()) ASSERT_EQ(f, j);
    }
}

TEST(Kreweras, Examples) {
  EXPECT_EQ(kreweras(P("{{1,5},{2,3,4},{6,8},{7}}")), P("{{1,4},{2},{3},{5,8},{6,7}}"));
  for (int m = 1; m <= 6; ++m) EXPECT_EQ(kreweras(Partition::one(m)), Partition::zero(m));
  for (auto& p : enumerate(FamilyKind::NC, 5).members) EXPECT_EQ(kreweras(kreweras(p)), rotate_left(p));
  EXPECT_THROW(kreweras(P("{{1,3},{2,4}}")), PartitionError);
}

TEST(Kreweras, IsLargestInterleavingPartition) {
  // brute force: the largest tau with pi wr tau noncrossing
  for (int m = 1; m <= 5; ++m) {
    auto nc = enumerate(FamilyKind::NC, m).members;
    for (auto& p : nc) {
      auto k = kreweras(p);
      EXPECT_TRUE(interleave(p, k).is_noncrossing());
      for (auto& t : nc)
        if (interleave(p, t).is_noncrossing()) EXPECT_TRUE(t.refines(k));
    }
  }
}

TEST(Fatten, Examples) {
  EXPECT_EQ(fatten(P("{{1,4,5},{2,3},{6}}")), P("{{1,10},{2,7},{3,6},{4,5},{8,9},{11,12}}"));
  EXPECT_EQ(fatten(Partition::zero(3)), P("{{1,2},{3,4},{5,6}}"));
  EXPECT_EQ(fatten(Partition::zero(3)), hat(Partition::zero(3)));
  EXPECT_EQ(fatten(Partition::one(2)), P("{{1,4},{2,3}}"));
}

TEST(Fatten, UnfattenInverts) {
  EXPECT_EQ(unfatten(P("{{1,2},{3,4}}")), Partition::zero(2));
  EXPECT_EQ(unfatten(P("{{1,4},{2,3}}")), Partition::one(2));
  for (auto& p : enumerate(FamilyKind::NC, 4).members) EXPECT_EQ(unfatten(fatten(p)), p);
  EXPECT_THROW(unfatten(P("{{1,3},{2,4}}")), PartitionError);
  EXPECT_THROW(unfatten(P("{{1,2,3,4}}")), PartitionError);
}

TEST(Hat, Examples) {
  EXPECT_EQ(hat(Partition::one(3)), Partition::one(6));
  EXPECT_EQ(hat(Partition::zero(2)), P("{{1,2},{3,4}}"));
  for (auto& p : enumerate(FamilyKind::NC, 4).members) EXPECT_EQ(hat(p).num_blocks(), p.num_blocks());
}

TEST(Interleave, Examples) {
  EXPECT_EQ(interleave(Partition::zero(3), Partition::zero(3)), Partition::zero(6));
  EXPECT_EQ(interleave(Partition::one(1), Partition::one(1)), P("{{1},{2}}"));
  for (auto& p : enumerate(FamilyKind::NC, 4).members) EXPECT_TRUE(interleave(p, kreweras(p)).is_noncrossing());
}

TEST(Rotate, Examples) {
  EXPECT_EQ(rotate_left(P("{{1,2},{3}}")), P("{{1,3},{2}}"));
  EXPECT_EQ(rotate_left(Partition::one(4)), Partition::one(4));
  for (auto& p : enumerate(FamilyKind::NC, 5).members) {
    EXPECT_EQ(rotate_left(fatten(p)), fatten(kreweras(p)));
    EXPECT_EQ(rotate_right(rotate_left(p)), p);
  }
}

TEST(Mobius, Examples) {
  auto nc = enumerate(FamilyKind::NC, 3).members;
  for (auto& p : nc) EXPECT_EQ(mobius(p, p), 1);
  EXPECT_EQ(mobius(Partition::zero(3), Partition::one(3)), 2);
  EXPECT_EQ(mobius_recursive(Partition::zero(3), Partition::one(3)), 2);
  EXPECT_EQ(mobius(Partition::one(3), Partition::zero(3)), 0);
  EXPECT_EQ(mobius(P("{{1,2},{3}}"), P("{{1,3},{2}}")), 0);
  EXPECT_EQ(mobius(Partition::zero(4), Partition::one(4)), -5);
}

TEST(Mobius, ProductFormulaMatchesRecursion) {
  for (int m = 1; m <= 5; ++m) {
    auto nc = enumerate(FamilyKind::NC, m).members;
    for (auto& s : nc)
      for (auto& p : nc) ASSERT_EQ(mobius(s, p), mobius_recursive(s, p)) << s.to_string() << " " << p.to_string();
  }
}

TEST(Kernel, Examples) {
  std::vector<int> a{5, 5, 7}, b{1, 2, 3, 4}, c{9, 9, 9};
  EXPECT_EQ(kernel(a), P("{{1,2},{3}}"));
  EXPECT_EQ(kernel(b), Partition::zero(4));
  EXPECT_EQ(kernel(c), Partition::one(3));
}

TEST(Restrict, Examples) {
  std::vector<int> sub{2, 4, 5};
  EXPECT_EQ(restrict(Partition::one(6), sub), Partition::one(3));
  std::vector<int> s2{2, 3, 4};
  EXPECT_EQ(restrict(P("{{1,4,5},{2,3}}"), s2), P("{{1,2},{3}}"));
  std::vector<int> all{1, 2, 3, 4, 5};
  auto p = P("{{1,4,5},{2,3}}");
  EXPECT_EQ(restrict(p, all), p);
  std::vector<int> bad{0, 1};
  EXPECT_THROW(restrict(p, bad), PartitionError);
}

TEST(SignPattern, ParseAndBalance) {
  auto e = SignPattern::parse("1*1*");
  EXPECT_EQ(e.to_string(), "1*1*");
  EXPECT_TRUE(e.balanced());
  EXPECT_FALSE(SignPattern::parse("11*1").balanced());
  EXPECT_THROW(SignPattern::parse("1x"), PartitionError);
  EXPECT_EQ(SignPattern::alternating(3).to_string(), "1*1*1*");
}
