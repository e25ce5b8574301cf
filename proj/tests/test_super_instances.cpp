#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "cobra/super_instances.hpp"

namespace cobra {
namespace {

Dataset two_blobs() {
  std::vector<double> v;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) v.insert(v.end(), {u(rng), u(rng)});
  for (int i = 0; i < 10; ++i) v.insert(v.end(), {100 + u(rng), 100 + u(rng)});
  return Dataset(v, 2);
}

Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * m);
  for (auto& x : v) x = u(rng);
  return Dataset(v, m);
}

void expect_partition(const SuperInstanceSet& si, std::size_t n) {
  std::vector<int> hits(n, 0);
  for (const auto& g : si.groups) {
    EXPECT_FALSE(g.empty());
    for (InstanceId i : g) ++hits[i];
  }
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(hits[i], 1) << "instance " << i;
  ASSERT_EQ(si.medoids.size(), si.groups.size());
  for (std::size_t s = 0; s < si.size(); ++s)
    EXPECT_TRUE(std::binary_search(si.groups[s].begin(), si.groups[s].end(), si.medoids[s]));
}

TEST(KMeans, SeparatesWellSeparatedBlobs) {
  const auto groups = kmeans_groups(two_blobs(), 2, 1);
  ASSERT_EQ(groups.size(), 2u);
  for (const auto& g : groups) {
    ASSERT_EQ(g.size(), 10u);
    const bool first = g.front() < 10;
    for (InstanceId i : g) EXPECT_EQ(i < 10, first);
  }
}

TEST(KMeans, KEqualsNGivesSingletons) {
  const auto d = two_blobs();
  const auto groups = kmeans_groups(d, d.size(), 5);
  ASSERT_EQ(groups.size(), d.size());
  for (const auto& g : groups) EXPECT_EQ(g.size(), 1u);
}

TEST(KMeans, RejectsBadK) {
  const auto d = two_blobs();
  EXPECT_THROW(kmeans(d, 0, 1), ConfigError);
  EXPECT_THROW(kmeans(d, d.size() + 1, 1), ConfigError);
}

TEST(KMeans, DeterministicGivenSeed) {
  std::mt19937_64 rng(1);
  const auto d = random_dataset(rng, 200, 3);
  EXPECT_EQ(kmeans_groups(d, 17, 42), kmeans_groups(d, 17, 42));
  const auto r = kmeans(d, 17, 42);
  EXPECT_LE(r.iterations, 300u);
}

TEST(KMeans, NoEmptyClustersWithDuplicatePoints) {
  // Heavy duplication pushes the seeding and Lloyd steps towards empty clusters.
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) v.push_back(0.0);
  for (int i = 0; i < 5; ++i) v.push_back(static_cast<double>(i + 1));
  const Dataset d(v, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (const auto& g : kmeans_groups(d, 8, seed)) EXPECT_FALSE(g.empty());
}

TEST(Medoid, Examples) {
  const Dataset d({0, 0, 1, 0, 10, 0}, 2);
  EXPECT_EQ(medoid({0, 1, 2}, d), 1u);
  EXPECT_EQ(medoid({2}, d), 2u);
  const Dataset line({0, 2}, 1);  // both members have distance sum 2
  EXPECT_EQ(medoid({0, 1}, line), 0u);
  EXPECT_EQ(medoid({1, 0}, line), 0u);
}

TEST(Medoid, RestrictedCandidates) {
  const Dataset d({0, 0, 1, 0, 10, 0}, 2);
  EXPECT_EQ(medoid({0, 1, 2}, d, std::vector<bool>{true, false, true}), 0u);
  EXPECT_THROW(medoid({1}, d, std::vector<bool>{true, false, true}), ConfigError);
}

TEST(BuildSuperInstances, UnrestrictedUsesOverallMedoids) {
  std::mt19937_64 rng(9);
  const auto d = random_dataset(rng, 12, 2);
  const auto si = build_super_instances(d, 4, 0);
  EXPECT_EQ(si.size(), 4u);
  expect_partition(si, d.size());
  for (std::size_t s = 0; s < si.size(); ++s) EXPECT_EQ(si.medoids[s], medoid(si.groups[s], d));
}

TEST(BuildSuperInstances, TestOnlyGroupMergesIntoNearestTrainGroup) {
  // Three tight blobs at x = 0, 10 and 13; the x = 13 blob is all test data
  // and must join the x = 10 blob.
  std::vector<double> v;
  for (double c : {0.0, 10.0, 13.0})
    for (int i = 0; i < 4; ++i) v.insert(v.end(), {c + 0.01 * i, 0.0});
  const Dataset d(v, 2);
  std::vector<bool> train(12, true);
  for (int i = 8; i < 12; ++i) train[i] = false;
  const auto si = build_super_instances(d, 3, 0, train);
  ASSERT_EQ(si.size(), 2u);
  expect_partition(si, d.size());
  for (const auto& g : si.groups) {
    if (std::find(g.begin(), g.end(), 4) != g.end()) {
      EXPECT_EQ(g, (std::vector<InstanceId>{4, 5, 6, 7, 8, 9, 10, 11}));
    }
  }
  for (InstanceId m : si.medoids) EXPECT_TRUE(train[m]);
}

TEST(BuildSuperInstances, Errors) {
  std::mt19937_64 rng(2);
  const auto d = random_dataset(rng, 5, 2);
  EXPECT_THROW(build_super_instances(d, 0, 0), ConfigError);
  EXPECT_THROW(build_super_instances(d, 6, 0), ConfigError);
  EXPECT_THROW(build_super_instances(d, 2, 0, std::vector<bool>(5, false)), ConfigError);
}

TEST(BuildSuperInstances, IrisPartition) {
  const auto d = normalize(dedupe(load_csv(COBRA_DATA_DIR "/iris.csv", {"class", ','})));
  const auto si = build_super_instances(d, 25, 0);
  EXPECT_EQ(si.size(), 25u);
  expect_partition(si, 147);
}

// Property: partition, train-only medoids and medoid optimality on random
// datasets, sizes, seeds and masks.
TEST(BuildSuperInstances, InvariantsOnRandomInputs) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 5 + rng() % 80, m = 1 + rng() % 4;
    const auto d = random_dataset(rng, n, m);
    const std::size_t k = 1 + rng() % n;
    const std::uint64_t seed = rng();
    TrainMask mask;
    if (trial % 2) {
      std::vector<bool> t(n);
      for (std::size_t i = 0; i < n; ++i) t[i] = rng() % 5 != 0;
      t[rng() % n] = true;
      mask = t;
    }
    const auto si = build_super_instances(d, k, seed, mask);
    expect_partition(si, n);
    EXPECT_LE(si.size(), k);
    if (!mask) {
      EXPECT_EQ(si.size(), k);
    }
    for (std::size_t s = 0; s < si.size(); ++s) {
      const InstanceId med = si.medoids[s];
      if (mask) {
        EXPECT_TRUE((*mask)[med]);
      }
      double best = 0.0;
      for (InstanceId o : si.groups[s]) best += distance(d.row(med), d.row(o));
      for (InstanceId c : si.groups[s]) {
        if (mask && !(*mask)[c]) continue;
        double sum = 0.0;
        for (InstanceId o : si.groups[s]) sum += distance(d.row(c), d.row(o));
        EXPECT_GE(sum, best);
      }
    }
  }
}

TEST(BuildSuperInstances, MoreSuperInstancesNeverFewerGroups) {
  std::mt19937_64 rng(5);
  const auto d = random_dataset(rng, 60, 3);
  std::size_t prev = 0;
  for (std::size_t k = 1; k <= 60; k += 3) {
    const auto g = kmeans_groups(d, k, 77).size();
    EXPECT_GE(g, prev);
    prev = g;
  }
}

}  // namespace
}  // namespace cobra
