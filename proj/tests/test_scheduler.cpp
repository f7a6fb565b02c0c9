#include "oracles.hpp"

#include "zac/Errors.hpp"
#include "zac/Scheduler.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zac;

namespace {

auto job(double duration, std::vector<int> qubits = {}) -> SchedItem {
  SchedItem it;
  it.kind = ItemKind::Job;
  it.duration = duration;
  it.qubits = std::move(qubits);
  it.pickFinish = duration / 4;
  it.moveFinish = duration * 3 / 4;
  return it;
}

auto pulse(std::vector<int> qubits) -> SchedItem {
  SchedItem it;
  it.kind = ItemKind::Rydberg;
  it.duration = 0.36;
  it.qubits = std::move(qubits);
  return it;
}

} // namespace

TEST(Scheduler, LongestJobFirstOnTwoAods) {
  const std::vector<SchedItem> items{job(5, {0}), job(3, {1}), job(2, {2})};
  const std::vector<InstGroup> groups{{ItemKind::Job, {0, 1, 2}}};
  const auto deps = buildDependencies(items, groups);
  EXPECT_TRUE(deps.empty());
  const auto two = schedule(items, groups, deps, 2);
  EXPECT_DOUBLE_EQ(makespan(two), 5);
  EXPECT_DOUBLE_EQ(makespan(two), oracle::optimalMakespan({5, 3, 2}, 2));
  EXPECT_NE(two[0].aod, two[1].aod);
  EXPECT_EQ(two[1].aod, two[2].aod);
  EXPECT_DOUBLE_EQ(makespan(schedule(items, groups, deps, 1)), 10);
  EXPECT_THROW(schedule(items, groups, deps, 0), InputError);
}

TEST(Scheduler, QubitEdgesSerialise) {
  const std::vector<SchedItem> items{job(4, {0, 1}), pulse({0, 1}), job(4, {0})};
  const std::vector<InstGroup> groups{{ItemKind::Job, {0}},
                                      {ItemKind::Rydberg, {1}},
                                      {ItemKind::Job, {2}}};
  const auto deps = buildDependencies(items, groups);
  const auto s = schedule(items, groups, deps, 2);
  EXPECT_DOUBLE_EQ(s[1].start, 4);
  EXPECT_DOUBLE_EQ(s[2].start, 4.36);
}

TEST(Scheduler, TrapEdgeLetsJobsOverlap) {
  // job 1 drops into the trap job 0 empties: it may start once job 0 has
  // picked up, shifted back by its own move offset
  auto j0 = job(100, {0});
  j0.pickFinish = 20;
  j0.vacated = {7};
  auto j1 = job(50, {1});
  j1.moveFinish = 10;
  j1.occupied = {7};
  const std::vector<SchedItem> items{j0, j1};
  const std::vector<InstGroup> groups{{ItemKind::Job, {0, 1}}};
  const auto deps = buildDependencies(items, groups);
  ASSERT_EQ(deps.size(), 1u);
  EXPECT_EQ(deps[0].kind, DepKind::Trap);
  const auto s = schedule(items, groups, deps, 2);
  EXPECT_DOUBLE_EQ(s[0].start, 0);
  EXPECT_DOUBLE_EQ(s[1].start, 10);
  EXPECT_DOUBLE_EQ(makespan(s), 100);
}

TEST(Scheduler, SharedQubitSuppressesTrapEdge) {
  auto j0 = job(10, {0});
  j0.vacated = {3};
  auto j1 = job(10, {0});
  j1.occupied = {3};
  const auto deps = buildDependencies({j0, j1}, {{ItemKind::Job, {0, 1}}});
  ASSERT_EQ(deps.size(), 1u);
  EXPECT_EQ(deps[0].kind, DepKind::Qubit);
}

TEST(Scheduler, PulsesFenceJobs) {
  const std::vector<SchedItem> items{job(10, {0}), pulse({1, 2}), job(5, {3})};
  const std::vector<InstGroup> groups{{ItemKind::Job, {0}},
                                      {ItemKind::Rydberg, {1}},
                                      {ItemKind::Job, {2}}};
  const auto s = schedule(items, groups, buildDependencies(items, groups), 2);
  EXPECT_DOUBLE_EQ(s[1].start, 10);
  EXPECT_DOUBLE_EQ(s[2].start, 10.36);
}

TEST(Scheduler, MoreAodsNeverHurt) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SchedItem> items;
    std::vector<InstGroup> groups;
    const int numGroups = 1 + static_cast<int>(rng() % 5);
    for (int g = 0; g < numGroups; ++g) {
      InstGroup grp;
      grp.kind = g % 2 == 0 ? ItemKind::Job : ItemKind::Rydberg;
      const int n = grp.kind == ItemKind::Job ? 1 + static_cast<int>(rng() % 5) : 1;
      for (int i = 0; i < n; ++i) {
        SchedItem it = grp.kind == ItemKind::Job ? job(1 + rng() % 50) : pulse({});
        for (int q = 0; q < 6; ++q) {
          if (rng() % 4 == 0) {
            it.qubits.push_back(q);
          }
        }
        if (grp.kind == ItemKind::Job) {
          it.vacated = {static_cast<std::size_t>(rng() % 8)};
          it.occupied = {static_cast<std::size_t>(8 + rng() % 8)};
          if (rng() % 3 == 0) {
            it.occupied = {static_cast<std::size_t>(rng() % 8)};
          }
        }
        grp.items.push_back(static_cast<int>(items.size()));
        items.push_back(it);
      }
      groups.push_back(grp);
    }
    const auto deps = buildDependencies(items, groups);
    double prev = makespan(schedule(items, groups, deps, 1));
    for (int k = 2; k <= 3; ++k) {
      const double cur = makespan(schedule(items, groups, deps, k));
      EXPECT_LE(cur, prev + 1e-9);
      prev = cur;
    }
  }
}
