#pragma once

#include "zac/Architecture.hpp"
#include "zac/Hardware.hpp"
#include "zac/Placement.hpp"

#include <vector>

namespace zac {

struct Movement {
  int qubit = -1;
  TrapRef from;
  TrapRef to;
};

struct StageMovements {
  std::vector<Movement> toEntanglement;
  std::vector<Movement> toStorage;
};

/// A qubit location (q, slm, row, col).
struct QLoc {
  int q = -1;
  int slm = -1;
  int r = -1;
  int c = -1;
  auto operator==(const QLoc& o) const -> bool = default;
};

enum class MachineKind { Activate, ParkMove, Move, Deactivate };

/// Activate/deactivate use rowBegin/colBegin as the aligned coordinates;
/// moves carry begin and end coordinates of every listed row and column.
struct MachineInst {
  MachineKind kind = MachineKind::Activate;
  std::vector<int> rowIds;
  std::vector<double> rowBegin;
  std::vector<double> rowEnd;
  std::vector<int> colIds;
  std::vector<double> colBegin;
  std::vector<double> colEnd;
  double duration = 0;
  auto operator==(const MachineInst& o) const -> bool = default;
};

struct RearrangementJob {
  int id = -1;
  int aod = -1;
  std::vector<Movement> moves;
  std::vector<std::vector<QLoc>> beginLocs;
  std::vector<std::vector<QLoc>> endLocs;
  std::vector<MachineInst> insts;
  double pickupTime = 0;
  double moveTime = 0;
  double dropoffTime = 0;

  [[nodiscard]] auto duration() const -> double {
    return pickupTime + moveTime + dropoffTime;
  }
  [[nodiscard]] auto pickFinish() const -> double { return pickupTime; }
  [[nodiscard]] auto moveFinish() const -> double {
    return pickupTime + moveTime;
  }
};

/// Movements for every qubit whose trap differs between two placements.
auto movementsBetween(const Placement& from, const Placement& to)
    -> std::vector<Movement>;
auto movementsForStage(const StagePlan& plan) -> StageMovements;

/// Whether one AOD can carry both movements: order in x and y is the same
/// before and after, shared coordinates stay shared, distinct ones stay at
/// least minSep apart, and the four traps are distinct.
auto compatible(const Movement& a, const Movement& b, double minSep = 0)
    -> bool;

/// Greedy maximal independent sets of the conflict graph, one per job.
auto batchMovements(const std::vector<Movement>& moves, double minSep = 0,
                    int rowCapacity = 1 << 20, int colCapacity = 1 << 20)
    -> std::vector<std::vector<Movement>>;

/// Builds begin/end grids (rows by y, columns by x).
auto makeJob(int id, const std::vector<Movement>& moves) -> RearrangementJob;

/// Fills insts and durations. occupied is indexed by trapIndex and marks
/// traps that may hold an atom while the job runs.
void expandJob(RearrangementJob& job, const Architecture& arch,
               const HardwareParams& hw, std::vector<char> occupied);

} // namespace zac
