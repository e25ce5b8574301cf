#include <random>

#include <gtest/gtest.h>

#include "cobra/constraint_store.hpp"
#include "support/brute_force.hpp"

namespace cobra {
namespace {

using testing::BruteClosure;
using testing::Constraint;

TEST(ConstraintStore, MustLinkIsTransitive) {
  ConstraintStore s;
  s.add_must_link(1, 2);
  s.add_must_link(2, 3);
  EXPECT_EQ(s.relation(1, 3), Relation::MustLink);
  EXPECT_EQ(s.relation(3, 1), Relation::MustLink);
  EXPECT_EQ(s.component(2), (std::vector<InstanceId>{1, 2, 3}));
}

TEST(ConstraintStore, CannotLinkIsEntailed) {
  ConstraintStore s;
  s.add_must_link(1, 2);
  s.add_cannot_link(2, 4);
  EXPECT_EQ(s.relation(1, 4), Relation::CannotLink);
  s.add_must_link(4, 5);
  EXPECT_EQ(s.relation(1, 5), Relation::CannotLink);
}

TEST(ConstraintStore, UnrelatedAndUnseenAreUnknown) {
  ConstraintStore s;
  s.add_must_link(1, 2);
  s.add_must_link(3, 4);
  EXPECT_EQ(s.relation(1, 3), Relation::Unknown);
  EXPECT_EQ(s.relation(1, 99), Relation::Unknown);
  EXPECT_EQ(s.relation(7, 7), Relation::MustLink);
}

TEST(ConstraintStore, ContradictionsThrow) {
  ConstraintStore s;
  s.add_must_link(1, 2);
  EXPECT_THROW(s.add_cannot_link(1, 2), ContradictionError);
  EXPECT_THROW(s.add_cannot_link(5, 5), ContradictionError);
  s.add_cannot_link(2, 3);
  EXPECT_THROW(s.add_must_link(1, 3), ContradictionError);
  EXPECT_THROW(s.add(1, 3, Relation::Unknown), ConfigError);
}

TEST(ConstraintStore, ReassertingIsHarmless) {
  ConstraintStore s;
  s.add_must_link(1, 2);
  s.add_must_link(2, 1);
  s.add_cannot_link(1, 3);
  s.add_cannot_link(3, 2);
  EXPECT_EQ(s.queried_pairs().size(), 3u);
  EXPECT_EQ(s.relation(2, 3), Relation::CannotLink);
}

TEST(ConstraintStore, DerivedStats) {
  ConstraintStore s;
  s.add_must_link(0, 1);
  s.add_must_link(1, 2);
  s.add_cannot_link(2, 3);
  // {0,1,2} gives 3 must-link pairs, {3} x {0,1,2} gives 3 cannot-link pairs.
  EXPECT_EQ(s.derived_stats(), (DerivedStats{3, 6}));
  EXPECT_EQ(ConstraintStore{}.derived_stats(), (DerivedStats{0, 0}));
}

TEST(ConstraintStore, RelationStrings) {
  EXPECT_STREQ(to_string(Relation::MustLink), "must-link");
  EXPECT_STREQ(to_string(Relation::CannotLink), "cannot-link");
  EXPECT_EQ(relation_from_string("cannot-link"), Relation::CannotLink);
  EXPECT_THROW(relation_from_string("maybe"), std::exception);
}

// Property: on random consistent sequences the store agrees with a BFS-based
// closure on every pair, and derived_stats matches enumeration.
TEST(ConstraintStore, AgreesWithBruteForceClosure) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 25;
    const std::size_t k = 1 + rng() % 5;
    const auto cs = testing::random_consistent_constraints(rng, n, k, 1 + rng() % (2 * n));
    ConstraintStore s;
    for (const auto& c : cs)
      s.add(c.a, c.b, c.must_link ? Relation::MustLink : Relation::CannotLink);
    const BruteClosure ref(n, cs);
    for (InstanceId a = 0; a < n; ++a)
      for (InstanceId b = 0; b < n; ++b)
        ASSERT_EQ(s.relation(a, b), ref.relation(a, b)) << "trial " << trial << " (" << a << ", " << b << ")";
    const auto st = s.derived_stats();
    EXPECT_EQ(st.derivable_pairs, ref.derivable_pairs());
    EXPECT_GE(st.derivable_pairs, st.queried);
  }
}

}  // namespace
}  // namespace cobra
