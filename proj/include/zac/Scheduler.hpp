#pragma once

#include <cstddef>
#include <vector>

namespace zac {

enum class ItemKind { Rydberg, OneQ, Job };

/// One schedulable instruction. Jobs carry the traps they vacate and fill
/// and the offsets at which pickup and move finish.
struct SchedItem {
  ItemKind kind = ItemKind::Job;
  double duration = 0;
  std::vector<int> qubits;
  std::vector<std::size_t> vacated;
  std::vector<std::size_t> occupied;
  double pickFinish = 0;
  double moveFinish = 0;
};

/// Consecutive items of one kind: the to-entanglement jobs of a stage, its
/// Rydberg pulses, a block of 1Q gates, or its to-storage jobs.
struct InstGroup {
  ItemKind kind = ItemKind::Job;
  std::vector<int> items;
};

enum class DepKind { Qubit, Trap, Barrier };

struct DependencyEdge {
  int from = -1;
  int to = -1;
  DepKind kind = DepKind::Qubit;
};

/// Items are indexed in program order and groups partition them in order.
auto buildDependencies(const std::vector<SchedItem>& items,
                       const std::vector<InstGroup>& groups)
    -> std::vector<DependencyEdge>;

struct ScheduledInst {
  int item = -1;
  double start = 0;
  double end = 0;
  int aod = -1;
};

/// Start times for every item (indexed like items). Jobs go longest first to
/// the AOD that frees up earliest.
auto schedule(const std::vector<SchedItem>& items,
              const std::vector<InstGroup>& groups,
              const std::vector<DependencyEdge>& deps, int numAods)
    -> std::vector<ScheduledInst>;

auto makespan(const std::vector<ScheduledInst>& sched) -> double;

} // namespace zac
