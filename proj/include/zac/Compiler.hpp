#pragma once

#include "zac/Architecture.hpp"
#include "zac/Circuit.hpp"
#include "zac/Fidelity.hpp"
#include "zac/Hardware.hpp"
#include "zac/Placement.hpp"
#include "zac/Scheduler.hpp"
#include "zac/Zair.hpp"

#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

namespace zac {

struct RunOptions {
  CompilerConfig config;
  HardwareParams hw;
  int numAods = 0;   ///< 0: one per AOD in the architecture
  int blockRows = 0; ///< logical-block mode when both are > 0
  int blockCols = 0;
  std::optional<Placement> initialPlacement; ///< skip SA and seed with this
};

struct StageStats {
  int t = 0;
  int gates = 0;
  int inheritedGates = 0;
  int keptQubits = 0;
  int jobsToEntanglement = 0;
  int jobsToStorage = 0;
  int parkMoves = 0;
  bool usesReuse = false;
  double planCost = 0;
};

struct Bounds {
  FidelityReport perfectMovement;
  FidelityReport perfectPlacement;
  FidelityReport perfectReuse;
};

struct CompileResult {
  StagedCircuit circuit;    ///< physical circuit
  Placement initial;        ///< physical initial placement
  std::vector<StagePlan> plans; ///< plans at the placement level
  ZairProgram program;
  ReplayCounters counters;
  FidelityReport report;
  Bounds bounds;
  std::vector<StageStats> stages;
  std::vector<ScheduledInst> timeline;
  int numAods = 1;
  int machineInsts = 0;
  std::optional<Architecture> coarse; ///< logical-block architecture
};

/// Per-stage placements handed to routing and scheduling.
struct StageLayout {
  Placement atRydberg;
  Placement after;
  std::vector<int> reusableReturned;
};

/// Full pipeline: placement, routing, scheduling, emission, replay, fidelity.
/// Throws ValidationError if the replay finds violations.
auto compile(const Architecture& arch, const StagedCircuit& circuit,
             const RunOptions& options) -> CompileResult;

/// Routing, scheduling, emission and evaluation for fixed placements.
auto realize(const Architecture& arch, const StagedCircuit& circuit,
             const Placement& initial, const std::vector<StageLayout>& layout,
             const RunOptions& options) -> CompileResult;

auto reportJson(const CompileResult& result, const RunOptions& options)
    -> nlohmann::json;

} // namespace zac
