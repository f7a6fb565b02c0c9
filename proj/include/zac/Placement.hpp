#pragma once

#include "zac/Architecture.hpp"
#include "zac/Circuit.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace zac {

/// qubit -> trap
using Placement = std::vector<TrapRef>;
using GatePair = std::pair<int, int>;

struct CompilerConfig {
  int saIterations = 1000;
  std::uint64_t seed = 42;
  int delta = 2;
  int k = 1;
  double alpha = 0.1;
  bool reuse = true;
  bool dynamicPlacement = true;
  bool sa = true;

  void validate() const;
};

/// Movement cost of a gate on a site (sqrt-µm units).
auto gCost(const Point& q, const Point& q2, const Point& site) -> double;
/// Stage weight w_g for Rydberg stage t (1-based).
auto stageWeight(int t) -> double;
/// Floor-midpoint of the two qubits' nearest sites.
auto nearestSiteForGate(const Architecture& arch, const Point& a,
                        const Point& b) -> const RydbergSite&;
auto initialPlacementCost(const Architecture& arch,
                          const StagedCircuit& circuit, const Placement& m)
    -> double;

/// Qubits in index order along the storage row closest to the first
/// entanglement zone, wrapping to the next closest row.
auto seedPlacement(const Architecture& arch, int numQubits) -> Placement;
auto annealInitialPlacement(const Architecture& arch,
                            const StagedCircuit& circuit,
                            const CompilerConfig& config,
                            const std::optional<Placement>& seed = std::nullopt)
    -> Placement;

/// For every gate of the current stage, the index of the next-stage gate it
/// hands its site to, or -1.
auto matchReuse(const std::vector<GatePair>& current,
                const std::vector<GatePair>& next) -> std::vector<int>;

struct GateRequest {
  GatePair qubits;
  int lookahead = -1; ///< qubit that will join the gate's site next stage
};

struct GatePlacement {
  std::vector<int> sites; ///< site index per request
  std::vector<double> weights;
  double total = 0;
};

auto gateEdgeWeight(const Architecture& arch, const GateRequest& gate,
                    const RydbergSite& site, const Placement& m) -> double;
/// Sites within Chebyshev radius delta (site indices) of the gate's nearest
/// site, inside that site's zone, minus excluded ones.
auto gateCandidates(const Architecture& arch, const GateRequest& gate,
                    const Placement& m, const std::vector<char>& excluded,
                    int delta) -> std::vector<int>;
auto placeGates(const Architecture& arch, const std::vector<GateRequest>& gates,
                const Placement& m, const std::vector<char>& excluded,
                const CompilerConfig& config) -> GatePlacement;

struct ReturnRequest {
  int qubit = -1;
  int related = -1; ///< next-stage partner, if any
};

struct ReturnPlacement {
  std::vector<TrapRef> traps;
  std::vector<double> weights;
  double total = 0;
};

auto returnEdgeWeight(const ReturnRequest& req, const TrapRef& trap,
                      const Placement& m, double alpha) -> double;
/// Free storage traps in the bounding box of the home trap, the trap nearest
/// the qubit (plus k neighbours) and the trap nearest the related qubit.
/// freeTrap is indexed by Architecture::trapIndex.
auto returnCandidates(const Architecture& arch, const ReturnRequest& req,
                      const Placement& m, const TrapRef& home,
                      const std::vector<char>& freeTrap, int k)
    -> std::vector<TrapRef>;
auto placeReturns(const Architecture& arch,
                  const std::vector<ReturnRequest>& requests,
                  const Placement& m, const std::vector<TrapRef>& homes,
                  const std::vector<char>& freeTrap,
                  const CompilerConfig& config) -> ReturnPlacement;

struct StagePlan {
  int t = 0;
  std::vector<GatePair> gates;
  std::vector<int> gateSites;
  std::vector<char> inherited;     ///< site handed over from stage t-1
  std::vector<int> reuseMatching;  ///< per gate: next-stage gate or -1
  std::vector<int> kept;           ///< qubits staying at their site after t
  std::vector<std::pair<int, TrapRef>> returns;
  Placement before;
  Placement atRydberg;
  Placement after;
  double gateCost = 0;
  double returnCost = 0;
  double nextGateCost = 0; ///< placing stage t+1 from `after`
  bool usesReuse = false;

  [[nodiscard]] auto cost() const -> double {
    return gateCost + returnCost + nextGateCost;
  }
};

/// State carried between stages.
struct PlannerState {
  Placement placement;
  std::vector<TrapRef> home;      ///< last storage trap of every qubit
  std::vector<int> inheritedSite; ///< per gate of the next stage, or -1
};

struct StageOptions {
  StagePlan committed;
  std::optional<StagePlan> withReuse;
  StagePlan withoutReuse;
};

class StagePlanner {
public:
  StagePlanner(const Architecture& arch, const StagedCircuit& circuit,
               CompilerConfig config);

  [[nodiscard]] auto initialState(const Placement& initial) const
      -> PlannerState;
  /// Places stage t, then builds the transition to t+1 with and without
  /// reuse and commits the cheaper one.
  auto planStage(int t, PlannerState& state) const -> StageOptions;
  [[nodiscard]] auto planAll(const Placement& initial) const
      -> std::vector<StagePlan>;

private:
  /// Places the gates of stage t; fills gates, gateSites, inherited,
  /// gateCost, before and atRydberg.
  [[nodiscard]] auto placeStage(int t, const Placement& before,
                                const std::vector<int>& inheritedSite) const
      -> StagePlan;
  /// Completes a placed stage with returns and the cost of the next stage.
  [[nodiscard]] auto buildPlan(const StagePlan& placed,
                               const PlannerState& state, bool useReuse) const
      -> StagePlan;
  [[nodiscard]] auto inheritedSites(const StagePlan& plan) const
      -> std::vector<int>;

  const Architecture* arch_;
  const StagedCircuit* circuit_;
  CompilerConfig config_;
  int numStages_;
};

} // namespace zac
