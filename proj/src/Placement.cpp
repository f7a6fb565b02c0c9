#include "zac/Placement.hpp"

#include "zac/Errors.hpp"
#include "zac/Matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace zac {

void CompilerConfig::validate() const {
  if (delta < 1) {
    throw InputError("delta must be >= 1");
  }
  if (k < 0) {
    throw InputError("k must be >= 0");
  }
  if (alpha < 0 || alpha > 1) {
    throw InputError("alpha must lie in [0, 1]");
  }
  if (saIterations < 0) {
    throw InputError("SA iteration limit must be >= 0");
  }
}

auto gCost(const Point& q, const Point& q2, const Point& site) -> double {
  const double a = std::sqrt(distance(site, q));
  const double b = std::sqrt(distance(site, q2));
  if (std::abs(q.y - q2.y) > kTol) {
    return a + b;
  }
  return std::max(a, b);
}

auto stageWeight(int t) -> double {
  return std::max(0.1, 1.0 - 0.1 * (t - 1));
}

namespace {

auto midSite(const Architecture& arch, const RydbergSite& sa,
             const RydbergSite& sb, const Point& a, const Point& b)
    -> const RydbergSite& {
  if (sa.zone == sb.zone) {
    const int idx =
        arch.siteIndex(sa.zone, (sa.row + sb.row) / 2, (sa.col + sb.col) / 2);
    if (idx >= 0) {
      return arch.sites()[idx];
    }
  }
  return arch.nearestSite({(a.x + b.x) / 2, (a.y + b.y) / 2});
}

} // namespace

auto nearestSiteForGate(const Architecture& arch, const Point& a,
                        const Point& b) -> const RydbergSite& {
  return midSite(arch, arch.nearestSite(a), arch.nearestSite(b), a, b);
}

auto initialPlacementCost(const Architecture& arch,
                          const StagedCircuit& circuit, const Placement& m)
    -> double {
  double cost = 0;
  for (int t = 1; t <= circuit.numRydbergStages(); ++t) {
    for (const auto& [a, b] : circuit.rydbergGates(t)) {
      const auto& site = nearestSiteForGate(arch, m[a].pos, m[b].pos);
      cost += stageWeight(t) * gCost(m[a].pos, m[b].pos, site.ref());
    }
  }
  return cost;
}

auto seedPlacement(const Architecture& arch, int numQubits) -> Placement {
  const auto& storage = arch.storageTraps();
  if (static_cast<int>(storage.size()) < numQubits) {
    throw CapacityError("circuit needs " + std::to_string(numQubits) +
                        " storage traps, architecture has " +
                        std::to_string(storage.size()));
  }
  const auto& ez = arch.zone(arch.entanglementZoneIds().front());
  const double cy = ez.offset.y + ez.dimension.y / 2;
  std::vector<TrapRef> order = storage;
  std::sort(order.begin(), order.end(), [&](const TrapRef& a, const TrapRef& b) {
    const double da = std::abs(a.pos.y - cy);
    const double db = std::abs(b.pos.y - cy);
    if (std::abs(da - db) > kTol) {
      return da < db;
    }
    if (std::abs(a.pos.y - b.pos.y) > kTol) {
      return a.pos.y < b.pos.y;
    }
    if (std::abs(a.pos.x - b.pos.x) > kTol) {
      return a.pos.x < b.pos.x;
    }
    return a < b;
  });
  return {order.begin(), order.begin() + numQubits};
}

namespace {

class Annealer {
public:
  Annealer(const Architecture& arch, const StagedCircuit& circuit,
           Placement m)
      : arch_(arch), m_(std::move(m)), byQubit_(m_.size()) {
    for (int t = 1; t <= circuit.numRydbergStages(); ++t) {
      for (const auto& [a, b] : circuit.rydbergGates(t)) {
        byQubit_[a].push_back(static_cast<int>(gates_.size()));
        byQubit_[b].push_back(static_cast<int>(gates_.size()));
        gates_.push_back({a, b, stageWeight(t)});
      }
    }
    near_.resize(m_.size());
    for (std::size_t q = 0; q < m_.size(); ++q) {
      near_[q] = &arch_.nearestSite(m_[q].pos);
    }
    cost_.resize(gates_.size());
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      cost_[g] = gateCost(static_cast<int>(g));
      total_ += cost_[g];
    }
  }

  [[nodiscard]] auto numGates() const -> std::size_t { return gates_.size(); }
  [[nodiscard]] auto total() const -> double { return total_; }
  [[nodiscard]] auto placement() const -> const Placement& { return m_; }

  /// Moves qubit q to trap t; returns the cost delta.
  auto relocate(int q, const TrapRef& t) -> double {
    m_[q] = t;
    near_[q] = &arch_.nearestSite(t.pos);
    return refresh(q, -1);
  }
  auto swap(int a, int b) -> double {
    std::swap(m_[a], m_[b]);
    std::swap(near_[a], near_[b]);
    return refresh(a, b);
  }

private:
  struct G {
    int a;
    int b;
    double w;
  };

  auto gateCost(int g) const -> double {
    const auto& [a, b, w] = gates_[g];
    const auto& site = midSite(arch_, *near_[a], *near_[b], m_[a].pos, m_[b].pos);
    return w * gCost(m_[a].pos, m_[b].pos, site.ref());
  }
  auto refresh(int a, int b) -> double {
    double delta = 0;
    const auto update = [&](int q) {
      for (const int g : byQubit_[q]) {
        const double c = gateCost(g);
        delta += c - cost_[g];
        total_ += c - cost_[g];
        cost_[g] = c;
      }
    };
    update(a);
    if (b >= 0) {
      update(b);
    }
    return delta;
  }

  const Architecture& arch_;
  Placement m_;
  std::vector<G> gates_;
  std::vector<std::vector<int>> byQubit_;
  std::vector<const RydbergSite*> near_;
  std::vector<double> cost_;
  double total_ = 0;
};

} // namespace

auto annealInitialPlacement(const Architecture& arch,
                            const StagedCircuit& circuit,
                            const CompilerConfig& config,
                            const std::optional<Placement>& seed)
    -> Placement {
  Placement start = seed ? *seed : seedPlacement(arch, circuit.numQubits);
  if (!config.sa || circuit.numQubits == 0) {
    return start;
  }
  Annealer sa(arch, circuit, start);
  if (sa.numGates() == 0 || sa.total() <= 0) {
    return start;
  }
  const auto& storage = arch.storageTraps();
  std::vector<int> occupant(arch.numTraps(), -1);
  for (int q = 0; q < circuit.numQubits; ++q) {
    occupant[arch.trapIndex(start[q])] = q;
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pickQubit(0, circuit.numQubits - 1);
  std::uniform_int_distribution<std::size_t> pickTrap(0, storage.size() - 1);
  const bool canJump = storage.size() > static_cast<std::size_t>(circuit.numQubits);
  const bool canSwap = circuit.numQubits > 1;

  double temperature = sa.total() / 10;
  Placement best = sa.placement();
  double bestCost = sa.total();
  int rejections = 0;
  for (int it = 0; it < config.saIterations && rejections < 200; ++it) {
    const bool doSwap = canSwap && (!canJump || unit(rng) < 0.5);
    if (!doSwap && !canJump) {
      break;
    }
    double delta = 0;
    int a = pickQubit(rng);
    int b = -1;
    TrapRef from = sa.placement()[a];
    if (doSwap) {
      do {
        b = pickQubit(rng);
      } while (b == a);
      delta = sa.swap(a, b);
    } else {
      TrapRef to;
      do {
        to = storage[pickTrap(rng)];
      } while (occupant[arch.trapIndex(to)] >= 0);
      delta = sa.relocate(a, to);
    }
    const bool accept =
        delta <= 0 || unit(rng) < std::exp(-delta / std::max(temperature, 1e-12));
    if (accept) {
      rejections = 0;
      if (doSwap) {
        occupant[arch.trapIndex(sa.placement()[a])] = a;
        occupant[arch.trapIndex(sa.placement()[b])] = b;
      } else {
        occupant[arch.trapIndex(from)] = -1;
        occupant[arch.trapIndex(sa.placement()[a])] = a;
      }
      if (sa.total() < bestCost) {
        bestCost = sa.total();
        best = sa.placement();
      }
    } else {
      ++rejections;
      if (doSwap) {
        sa.swap(a, b);
      } else {
        sa.relocate(a, from);
      }
    }
    temperature *= 0.98;
  }
  // Guard against drift of the incremental sum.
  if (initialPlacementCost(arch, circuit, best) >
      initialPlacementCost(arch, circuit, start)) {
    return start;
  }
  return best;
}

auto matchReuse(const std::vector<GatePair>& current,
                const std::vector<GatePair>& next) -> std::vector<int> {
  std::vector<std::vector<int>> adj(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    const auto& [a, b] = current[i];
    for (std::size_t j = 0; j < next.size(); ++j) {
      const auto& [c, d] = next[j];
      if (a == c || a == d || b == c || b == d) {
        adj[i].push_back(static_cast<int>(j));
      }
    }
  }
  return maxBipartiteMatching(static_cast<int>(current.size()),
                              static_cast<int>(next.size()), adj);
}

auto gateEdgeWeight(const Architecture& arch, const GateRequest& gate,
                    const RydbergSite& site, const Placement& m) -> double {
  (void)arch;
  const auto& [a, b] = gate.qubits;
  double w = gCost(m[a].pos, m[b].pos, site.ref());
  if (gate.lookahead >= 0) {
    w += std::sqrt(distance(site.ref(), m[gate.lookahead].pos));
  }
  return w;
}

auto gateCandidates(const Architecture& arch, const GateRequest& gate,
                    const Placement& m, const std::vector<char>& excluded,
                    int delta) -> std::vector<int> {
  std::vector<int> out;
  const auto& [a, b] = gate.qubits;
  const auto& near = nearestSiteForGate(arch, m[a].pos, m[b].pos);
  for (const auto& s : arch.sites()) {
    if (excluded[s.index] != 0) {
      continue;
    }
    if (delta >= 0 && (s.zone != near.zone || std::abs(s.row - near.row) > delta ||
                       std::abs(s.col - near.col) > delta)) {
      continue;
    }
    out.push_back(s.index);
  }
  return out;
}

auto placeGates(const Architecture& arch, const std::vector<GateRequest>& gates,
                const Placement& m, const std::vector<char>& excluded,
                const CompilerConfig& config) -> GatePlacement {
  GatePlacement out;
  if (gates.empty()) {
    return out;
  }
  const auto& sites = arch.sites();
  int diameter = 0;
  for (const int z : arch.entanglementZoneIds()) {
    diameter = std::max({diameter, arch.numSiteRows(z), arch.maxSiteCols(z)});
  }
  int delta = config.delta;
  for (;;) {
    const bool global = delta > diameter;
    std::vector<std::vector<double>> cost(
        gates.size(), std::vector<double>(sites.size(), kNoEdge));
    for (std::size_t i = 0; i < gates.size(); ++i) {
      for (const int s :
           gateCandidates(arch, gates[i], m, excluded, global ? -1 : delta)) {
        cost[i][s] = gateEdgeWeight(arch, gates[i], sites[s], m);
      }
    }
    if (const auto match = minWeightFullMatching(cost)) {
      for (std::size_t i = 0; i < gates.size(); ++i) {
        out.sites.push_back((*match)[i]);
        out.weights.push_back(cost[i][(*match)[i]]);
        out.total += out.weights.back();
      }
      return out;
    }
    if (global) {
      throw CapacityError("entanglement zones cannot host " +
                          std::to_string(gates.size()) +
                          " gates in one stage");
    }
    delta = delta >= diameter ? diameter + 1 : std::min(delta * 2, diameter);
  }
}

auto returnEdgeWeight(const ReturnRequest& req, const TrapRef& trap,
                      const Placement& m, double alpha) -> double {
  double w = std::sqrt(distance(trap.pos, m[req.qubit].pos));
  if (req.related >= 0) {
    w += alpha * std::sqrt(distance(trap.pos, m[req.related].pos));
  }
  return w;
}

auto returnCandidates(const Architecture& arch, const ReturnRequest& req,
                      const Placement& m, const TrapRef& home,
                      const std::vector<char>& freeTrap, int k)
    -> std::vector<TrapRef> {
  Point lo = home.pos;
  Point hi = home.pos;
  const auto extend = [&](const Point& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  const auto& cur = m[req.qubit];
  const int site = arch.isStorage(cur) ? -1 : arch.siteOfTrap(cur);
  const Point anchor = site >= 0 ? arch.sites()[site].ref() : cur.pos;
  const auto near = arch.nearestStorageTrap(anchor);
  extend(near.pos);
  for (int i = 1; i <= k; ++i) {
    for (const auto& [dr, dc] : {std::pair{i, 0}, std::pair{-i, 0},
                                 std::pair{0, i}, std::pair{0, -i}}) {
      if (arch.hasTrap(near.slm, near.row + dr, near.col + dc)) {
        extend(arch.trap(near.slm, near.row + dr, near.col + dc).pos);
      }
    }
  }
  if (req.related >= 0) {
    extend(arch.nearestStorageTrap(m[req.related].pos).pos);
  }
  std::vector<TrapRef> out;
  for (const auto& t : arch.storageTrapsInBox(lo, hi)) {
    if (freeTrap[arch.trapIndex(t)] != 0) {
      out.push_back(t);
    }
  }
  return out;
}

auto placeReturns(const Architecture& arch,
                  const std::vector<ReturnRequest>& requests,
                  const Placement& m, const std::vector<TrapRef>& homes,
                  const std::vector<char>& freeTrap,
                  const CompilerConfig& config) -> ReturnPlacement {
  ReturnPlacement out;
  if (requests.empty()) {
    return out;
  }
  std::map<std::size_t, int> column;
  std::vector<TrapRef> traps;
  std::vector<std::vector<TrapRef>> cands;
  for (const auto& req : requests) {
    cands.push_back(
        returnCandidates(arch, req, m, homes[req.qubit], freeTrap, config.k));
    for (const auto& t : cands.back()) {
      if (column.emplace(arch.trapIndex(t), static_cast<int>(traps.size()))
              .second) {
        traps.push_back(t);
      }
    }
  }
  std::vector<std::vector<double>> cost(
      requests.size(), std::vector<double>(traps.size(), kNoEdge));
  for (std::size_t i = 0; i < requests.size(); ++i) {
    for (const auto& t : cands[i]) {
      cost[i][column[arch.trapIndex(t)]] =
          returnEdgeWeight(requests[i], t, m, config.alpha);
    }
  }
  const auto match = minWeightFullMatching(cost);
  if (!match) {
    throw ValidationError("no storage assignment for returning qubits");
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    out.traps.push_back(traps[(*match)[i]]);
    out.weights.push_back(cost[i][(*match)[i]]);
    out.total += out.weights.back();
  }
  return out;
}

StagePlanner::StagePlanner(const Architecture& arch,
                           const StagedCircuit& circuit, CompilerConfig config)
    : arch_(&arch), circuit_(&circuit), config_(config),
      numStages_(circuit.numRydbergStages()) {
  config_.validate();
}

auto StagePlanner::initialState(const Placement& initial) const
    -> PlannerState {
  PlannerState s;
  s.placement = initial;
  s.home = initial;
  if (numStages_ > 0) {
    s.inheritedSite.assign(circuit_->rydbergGates(1).size(), -1);
  }
  return s;
}

namespace {

auto sharedQubits(const GatePair& g, const GatePair& h) -> std::vector<int> {
  std::vector<int> out;
  for (const int q : {g.first, g.second}) {
    if (q == h.first || q == h.second) {
      out.push_back(q);
    }
  }
  return out;
}

} // namespace

auto StagePlanner::placeStage(int t, const Placement& before,
                              const std::vector<int>& inheritedSite) const
    -> StagePlan {
  const auto& arch = *arch_;
  StagePlan plan;
  plan.t = t;
  plan.gates = circuit_->rydbergGates(t);
  plan.before = before;
  // the reuse matching does not depend on placement, so the lookahead is
  // known before the reuse decision for this stage is taken
  const auto next =
      t < numStages_ ? circuit_->rydbergGates(t + 1) : std::vector<GatePair>{};
  const auto lookahead = config_.reuse
                             ? matchReuse(plan.gates, next)
                             : std::vector<int>(plan.gates.size(), -1);

  std::vector<char> excluded(arch.sites().size(), 0);
  plan.gateSites.assign(plan.gates.size(), -1);
  plan.inherited.assign(plan.gates.size(), 0);
  for (std::size_t i = 0; i < plan.gates.size(); ++i) {
    if (inheritedSite[i] >= 0) {
      plan.gateSites[i] = inheritedSite[i];
      plan.inherited[i] = 1;
      excluded[inheritedSite[i]] = 1;
    }
  }

  std::vector<GateRequest> requests;
  std::vector<std::size_t> requestGate;
  for (std::size_t i = 0; i < plan.gates.size(); ++i) {
    if (plan.inherited[i] != 0) {
      continue;
    }
    GateRequest req{plan.gates[i], -1};
    if (const int j = lookahead[i]; j >= 0) {
      const auto s = sharedQubits(plan.gates[i], next[j]);
      if (s.size() == 1) {
        req.lookahead = next[j].first == s[0] ? next[j].second : next[j].first;
      }
    }
    requests.push_back(req);
    requestGate.push_back(i);
  }
  const auto gp = placeGates(arch, requests, plan.before, excluded, config_);
  plan.gateCost = gp.total;
  for (std::size_t r = 0; r < requests.size(); ++r) {
    plan.gateSites[requestGate[r]] = gp.sites[r];
  }

  plan.atRydberg = plan.before;
  for (std::size_t i = 0; i < plan.gates.size(); ++i) {
    const auto& site = arch.sites()[plan.gateSites[i]];
    const auto [a, b] = plan.gates[i];
    const auto& pa = plan.before[a];
    const auto& pb = plan.before[b];
    const bool aThere = arch.siteOfTrap(pa) == site.index;
    const bool bThere = arch.siteOfTrap(pb) == site.index;
    if (aThere && bThere) {
      continue;
    }
    if (aThere) {
      plan.atRydberg[b] = pa == site.left ? site.right : site.left;
    } else if (bThere) {
      plan.atRydberg[a] = pb == site.left ? site.right : site.left;
    } else {
      const bool aLeft = pa.pos.x < pb.pos.x - kTol ||
                         (std::abs(pa.pos.x - pb.pos.x) <= kTol && a < b);
      plan.atRydberg[a] = aLeft ? site.left : site.right;
      plan.atRydberg[b] = aLeft ? site.right : site.left;
    }
  }
  plan.after = plan.atRydberg;
  plan.reuseMatching.assign(plan.gates.size(), -1);
  return plan;
}

auto StagePlanner::buildPlan(const StagePlan& placed, const PlannerState& state,
                             bool useReuse) const -> StagePlan {
  const auto& arch = *arch_;
  StagePlan plan = placed;
  const int t = plan.t;
  const auto next = circuit_->rydbergGates(t + 1);
  plan.usesReuse = useReuse;
  if (useReuse) {
    plan.reuseMatching = matchReuse(plan.gates, next);
  }

  std::vector<char> isKept(circuit_->numQubits, 0);
  for (std::size_t i = 0; i < plan.gates.size(); ++i) {
    if (const int j = plan.reuseMatching[i]; j >= 0) {
      for (const int q : sharedQubits(plan.gates[i], next[j])) {
        isKept[q] = 1;
        plan.kept.push_back(q);
      }
    }
  }
  std::sort(plan.kept.begin(), plan.kept.end());

  std::vector<int> partner(circuit_->numQubits, -1);
  for (const auto& [a, b] : next) {
    partner[a] = b;
    partner[b] = a;
  }
  std::vector<ReturnRequest> returning;
  for (const auto& [a, b] : plan.gates) {
    for (const int q : {a, b}) {
      if (isKept[q] == 0) {
        returning.push_back({q, partner[q]});
      }
    }
  }
  std::sort(returning.begin(), returning.end(),
            [](const auto& x, const auto& y) { return x.qubit < y.qubit; });
  if (!config_.dynamicPlacement) {
    for (const auto& r : returning) {
      plan.returns.emplace_back(r.qubit, state.home[r.qubit]);
      plan.returnCost +=
          returnEdgeWeight(r, state.home[r.qubit], plan.atRydberg, config_.alpha);
    }
  } else {
    std::vector<char> freeTrap(arch.numTraps(), 0);
    for (const auto& trap : arch.storageTraps()) {
      freeTrap[arch.trapIndex(trap)] = 1;
    }
    for (int q = 0; q < circuit_->numQubits; ++q) {
      if (arch.isStorage(plan.atRydberg[q])) {
        freeTrap[arch.trapIndex(plan.atRydberg[q])] = 0;
      } else if (isKept[q] != 0) {
        freeTrap[arch.trapIndex(state.home[q])] = 0;
      }
    }
    const auto rp = placeReturns(arch, returning, plan.atRydberg, state.home,
                                 freeTrap, config_);
    plan.returnCost = rp.total;
    for (std::size_t i = 0; i < returning.size(); ++i) {
      plan.returns.emplace_back(returning[i].qubit, rp.traps[i]);
    }
  }
  for (const auto& [q, trap] : plan.returns) {
    plan.after[q] = trap;
  }
  plan.nextGateCost =
      placeStage(t + 1, plan.after, inheritedSites(plan)).gateCost;
  return plan;
}

auto StagePlanner::inheritedSites(const StagePlan& plan) const
    -> std::vector<int> {
  std::vector<int> out(circuit_->rydbergGates(plan.t + 1).size(), -1);
  for (std::size_t i = 0; i < plan.gates.size(); ++i) {
    if (plan.reuseMatching[i] >= 0) {
      out[plan.reuseMatching[i]] = plan.gateSites[i];
    }
  }
  return out;
}

auto StagePlanner::planStage(int t, PlannerState& state) const
    -> StageOptions {
  StageOptions out;
  const auto placed = placeStage(t, state.placement, state.inheritedSite);
  if (t == numStages_) {
    out.withoutReuse = placed;
    out.committed = placed;
  } else {
    out.withoutReuse = buildPlan(placed, state, false);
    out.committed = out.withoutReuse;
    if (config_.reuse) {
      out.withReuse = buildPlan(placed, state, true);
      if (!out.withReuse->kept.empty() &&
          out.withReuse->cost() <= out.withoutReuse.cost()) {
        out.committed = *out.withReuse;
      }
    }
  }
  const auto& plan = out.committed;
  state.placement = plan.after;
  for (const auto& [q, trap] : plan.returns) {
    state.home[q] = trap;
  }
  if (t < numStages_) {
    state.inheritedSite = inheritedSites(plan);
  }
  return out;
}

auto StagePlanner::planAll(const Placement& initial) const
    -> std::vector<StagePlan> {
  std::vector<StagePlan> plans;
  auto state = initialState(initial);
  for (int t = 1; t <= numStages_; ++t) {
    plans.push_back(planStage(t, state).committed);
  }
  return plans;
}

} // namespace zac
