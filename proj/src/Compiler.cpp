#include "zac/Compiler.hpp"

#include "zac/Errors.hpp"
#include "zac/Routing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace zac {

using nlohmann::json;

namespace {

auto qloc(int q, const TrapRef& t) -> QLoc { return {q, t.slm, t.row, t.col}; }

auto reusableReturned(const StagedCircuit& circuit, const StagePlan& plan)
    -> std::vector<int> {
  if (plan.t >= circuit.numRydbergStages()) {
    return {};
  }
  std::set<int> next;
  for (const auto& [a, b] : circuit.rydbergGates(plan.t + 1)) {
    next.insert(a);
    next.insert(b);
  }
  std::vector<int> out;
  for (const auto& [q, trap] : plan.returns) {
    (void)trap;
    if (next.count(q) != 0) {
      out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct BlockMap {
  const Architecture* arch;
  int rows;
  int cols;

  [[nodiscard]] auto size() const -> int { return rows * cols; }
  [[nodiscard]] auto placement(const Placement& logical) const -> Placement {
    Placement out;
    for (const auto& t : logical) {
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          out.push_back(arch->trap(t.slm, t.row * rows + i, t.col * cols + j));
        }
      }
    }
    return out;
  }
  [[nodiscard]] auto qubits(const std::vector<int>& logical) const
      -> std::vector<int> {
    std::vector<int> out;
    for (const int b : logical) {
      for (int k = 0; k < size(); ++k) {
        out.push_back(b * size() + k);
      }
    }
    return out;
  }
  [[nodiscard]] auto circuit(const StagedCircuit& logical) const
      -> StagedCircuit {
    StagedCircuit out;
    out.numQubits = logical.numQubits * size();
    int index = 0;
    for (const auto& s : logical.stages) {
      GateStage ps{s.kind, s.t, {}};
      for (const auto& g : s.gates) {
        for (int k = 0; k < size(); ++k) {
          Gate pg = g;
          for (auto& q : pg.qubits) {
            q = q * size() + k;
          }
          pg.index = index++;
          ps.gates.push_back(pg);
        }
      }
      out.stages.push_back(std::move(ps));
    }
    out.g1 = logical.g1 * size();
    out.g2 = logical.g2 * size();
    return out;
  }
};

} // namespace

auto realize(const Architecture& arch, const StagedCircuit& circuit,
             const Placement& initial, const std::vector<StageLayout>& layout,
             const RunOptions& options) -> CompileResult {
  const auto& hw = options.hw;
  CompileResult res;
  res.circuit = circuit;
  res.initial = initial;
  res.numAods = options.numAods > 0 ? options.numAods
                                    : static_cast<int>(arch.aods().size());
  const int numStages = circuit.numRydbergStages();
  if (static_cast<int>(layout.size()) != numStages) {
    throw ValidationError("layout does not cover every Rydberg stage");
  }

  std::vector<SchedItem> items;
  std::vector<InstGroup> groups;
  std::vector<ZairInst> body;
  std::vector<double> groupDisp;
  std::vector<std::vector<int>> groupReusable;
  Placement cur = initial;
  int jobId = 0;

  ZairInst init;
  init.kind = ZairKind::Init;
  for (int q = 0; q < circuit.numQubits; ++q) {
    init.locs.push_back(qloc(q, cur[q]));
  }

  const auto addJobs = [&](const Placement& target,
                           const std::vector<int>& reusable, int& jobCount,
                           int& parkCount) {
    const auto moves = movementsBetween(cur, target);
    if (moves.empty()) {
      return;
    }
    std::vector<char> occupied(arch.numTraps(), 0);
    for (const auto& t : cur) {
      occupied[arch.trapIndex(t)] = 1;
    }
    double disp = 0;
    for (const auto& m : moves) {
      occupied[arch.trapIndex(m.to)] = 1;
      disp = std::max(disp, distance(m.from.pos, m.to.pos));
    }
    InstGroup g{ItemKind::Job, {}};
    for (const auto& set : batchMovements(moves, arch.maxMinSep(),
                                          arch.aodRowCapacity(),
                                          arch.aodColCapacity())) {
      auto job = makeJob(jobId++, set);
      expandJob(job, arch, hw, occupied);
      SchedItem it;
      it.kind = ItemKind::Job;
      it.duration = job.duration();
      it.pickFinish = job.pickFinish();
      it.moveFinish = job.moveFinish();
      for (const auto& m : set) {
        it.qubits.push_back(m.qubit);
        it.vacated.push_back(arch.trapIndex(m.from));
        it.occupied.push_back(arch.trapIndex(m.to));
      }
      std::sort(it.qubits.begin(), it.qubits.end());
      g.items.push_back(static_cast<int>(items.size()));
      items.push_back(std::move(it));
      ZairInst zi;
      zi.kind = ZairKind::RearrangeJob;
      zi.beginLocs = job.beginLocs;
      zi.endLocs = job.endLocs;
      zi.insts = job.insts;
      for (const auto& m : job.insts) {
        parkCount += m.kind == MachineKind::ParkMove ? 1 : 0;
      }
      res.machineInsts += static_cast<int>(job.insts.size());
      body.push_back(std::move(zi));
      ++jobCount;
    }
    groups.push_back(std::move(g));
    groupDisp.push_back(disp);
    groupReusable.push_back(reusable);
    cur = target;
  };

  const auto addOneQ = [&](int slot) {
    InstGroup g{ItemKind::OneQ, {}};
    for (const auto& s : circuit.stages) {
      if (s.kind != StageKind::OneQ || s.t != slot) {
        continue;
      }
      for (const auto& gate : s.gates) {
        const int q = gate.qubits[0];
        SchedItem it;
        it.kind = ItemKind::OneQ;
        it.duration = hw.t1q;
        it.qubits = {q};
        g.items.push_back(static_cast<int>(items.size()));
        items.push_back(std::move(it));
        ZairInst zi;
        zi.kind = ZairKind::OneQGate;
        zi.params = gate.params;
        zi.locs = {qloc(q, cur[q])};
        body.push_back(std::move(zi));
      }
    }
    if (!g.items.empty()) {
      groups.push_back(std::move(g));
      groupDisp.push_back(0);
      groupReusable.emplace_back();
    }
  };

  addOneQ(0);
  for (int t = 1; t <= numStages; ++t) {
    StageStats st;
    st.t = t;
    addJobs(layout[t - 1].atRydberg, {}, st.jobsToEntanglement, st.parkMoves);
    // One pulse per entanglement zone that hosts gates.
    std::map<int, std::vector<std::array<int, 2>>> byZone;
    for (const auto& [a, b] : circuit.rydbergGates(t)) {
      const int sa = arch.siteOfTrap(cur[a]);
      const int sb = arch.siteOfTrap(cur[b]);
      if (sa < 0 || sa != sb) {
        throw ValidationError("stage " + std::to_string(t) + ": qubits " +
                              std::to_string(a) + " and " + std::to_string(b) +
                              " are not at one site");
      }
      byZone[arch.sites()[sa].zone].push_back({a, b});
      ++st.gates;
    }
    InstGroup rg{ItemKind::Rydberg, {}};
    for (const auto& [zone, gates] : byZone) {
      SchedItem it;
      it.kind = ItemKind::Rydberg;
      it.duration = hw.tRyd;
      for (const auto& g : gates) {
        it.qubits.push_back(g[0]);
        it.qubits.push_back(g[1]);
      }
      std::sort(it.qubits.begin(), it.qubits.end());
      rg.items.push_back(static_cast<int>(items.size()));
      items.push_back(std::move(it));
      ZairInst zi;
      zi.kind = ZairKind::Rydberg;
      zi.zone = zone;
      zi.gates = gates;
      body.push_back(std::move(zi));
    }
    if (!rg.items.empty()) {
      groups.push_back(std::move(rg));
      groupDisp.push_back(0);
      groupReusable.emplace_back();
    }
    addOneQ(t);
    addJobs(layout[t - 1].after, layout[t - 1].reusableReturned,
            st.jobsToStorage, st.parkMoves);
    res.stages.push_back(st);
  }

  const auto deps = buildDependencies(items, groups);
  res.timeline = schedule(items, groups, deps, res.numAods);
  for (std::size_t i = 0; i < body.size(); ++i) {
    body[i].beginTime = res.timeline[i].start;
    body[i].endTime = res.timeline[i].end;
    if (body[i].kind == ZairKind::RearrangeJob) {
      body[i].aod = res.timeline[i].aod;
    }
  }
  res.program.instructions.push_back(std::move(init));
  for (auto& zi : body) {
    res.program.instructions.push_back(std::move(zi));
  }

  res.counters = validateReplay(res.program, arch, &circuit, hw);
  if (!res.counters.ok()) {
    std::ostringstream os;
    os << res.counters.violations.size() << " replay violation(s)";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, res.counters.violations.size()); ++i) {
      const auto& v = res.counters.violations[i];
      os << "; [" << v.index << "] " << v.kind << ": " << v.message;
    }
    throw ValidationError(os.str());
  }
  const double duration = makespan(res.timeline);
  res.report = evaluate(duration, circuit.g1, circuit.g2, res.counters.nExc,
                        res.counters.perQubit, hw);

  BoundInput bi;
  bi.items = items;
  bi.groups = groups;
  bi.groupMaxDisplacement = groupDisp;
  bi.reusableReturned = groupReusable;
  bi.g1 = circuit.g1;
  bi.g2 = circuit.g2;
  bi.nExc = res.counters.nExc;
  bi.perQubit = res.counters.perQubit;
  bi.numAods = res.numAods;
  res.bounds.perfectMovement = evaluateBound(BoundKind::PerfectMovement, bi, hw);
  res.bounds.perfectPlacement =
      evaluateBound(BoundKind::PerfectPlacement, bi, hw);
  res.bounds.perfectReuse = evaluateBound(BoundKind::PerfectReuse, bi, hw);
  return res;
}

auto compile(const Architecture& arch, const StagedCircuit& circuit,
             const RunOptions& options) -> CompileResult {
  options.config.validate();
  options.hw.validate();
  const bool blocks = options.blockRows > 0 && options.blockCols > 0;
  std::optional<Architecture> coarse;
  if (blocks) {
    coarse = arch.coarsened(options.blockRows, options.blockCols);
  }
  const Architecture& placeArch = blocks ? *coarse : arch;

  const Placement initial =
      options.initialPlacement
          ? *options.initialPlacement
          : annealInitialPlacement(placeArch, circuit, options.config);
  if (static_cast<int>(initial.size()) != circuit.numQubits) {
    throw InputError("initial placement does not cover every qubit");
  }
  const StagePlanner planner(placeArch, circuit, options.config);
  const auto plans = planner.planAll(initial);

  std::vector<StageLayout> layout;
  for (const auto& p : plans) {
    layout.push_back({p.atRydberg, p.after, reusableReturned(circuit, p)});
  }
  CompileResult res;
  if (blocks) {
    const BlockMap map{&arch, options.blockRows, options.blockCols};
    std::vector<StageLayout> phys;
    for (const auto& l : layout) {
      phys.push_back({map.placement(l.atRydberg), map.placement(l.after),
                      map.qubits(l.reusableReturned)});
    }
    res = realize(arch, map.circuit(circuit), map.placement(initial), phys,
                  options);
    res.coarse = coarse;
  } else {
    res = realize(arch, circuit, initial, layout, options);
  }
  res.plans = plans;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    auto& st = res.stages[i];
    const auto& p = plans[i];
    st.inheritedGates = static_cast<int>(
        std::count(p.inherited.begin(), p.inherited.end(), 1));
    st.keptQubits = static_cast<int>(p.kept.size());
    st.usesReuse = p.usesReuse;
    st.planCost = p.cost();
  }
  return res;
}

auto reportJson(const CompileResult& r, const RunOptions& options) -> json {
  const auto boundJson = [](const FidelityReport& b) {
    return json{{"fidelity", b.fidelity},
                {"duration_us", b.duration},
                {"n_tran", b.nTran}};
  };
  json j;
  j["fidelity"] = r.report.fidelity;
  j["duration_us"] = r.report.duration;
  j["factors"] = {{"one_qubit", r.report.factor1q},
                  {"two_qubit_excitation", r.report.factor2q},
                  {"transfer", r.report.factorTransfer},
                  {"decoherence", r.report.factorDecoherence}};
  j["counts"] = {{"num_qubits", r.circuit.numQubits},
                 {"rydberg_stages", r.circuit.numRydbergStages()},
                 {"g1", r.report.g1},
                 {"g2", r.report.g2},
                 {"n_exc", r.report.nExc},
                 {"n_tran", r.report.nTran}};
  j["idle_us"] = r.report.idle;
  j["approximation_valid"] = r.report.approximationValid;
  j["exceeds_t2"] = r.report.exceedsT2;
  j["bounds"] = {{"perfect_movement", boundJson(r.bounds.perfectMovement)},
                 {"perfect_placement", boundJson(r.bounds.perfectPlacement)},
                 {"perfect_reuse", boundJson(r.bounds.perfectReuse)}};
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"t", s.t},
                      {"gates", s.gates},
                      {"inherited_gates", s.inheritedGates},
                      {"kept_qubits", s.keptQubits},
                      {"jobs_to_entanglement", s.jobsToEntanglement},
                      {"jobs_to_storage", s.jobsToStorage},
                      {"park_moves", s.parkMoves},
                      {"uses_reuse", s.usesReuse},
                      {"plan_cost", s.planCost}});
  }
  j["stages"] = stages;
  const int gates = r.circuit.g1 + r.circuit.g2;
  const auto zairInsts =
      static_cast<int>(r.program.instructions.size()) - 1;
  j["instructions_per_gate"] = {
      {"zair", gates > 0 ? static_cast<double>(zairInsts) / gates : 0.0},
      {"machine", gates > 0 ? static_cast<double>(r.machineInsts) / gates : 0.0}};
  j["num_aods"] = r.numAods;
  const auto& c = options.config;
  j["config"] = {{"sa_iterations", c.saIterations},
                 {"seed", c.seed},
                 {"delta", c.delta},
                 {"k", c.k},
                 {"alpha", c.alpha},
                 {"reuse", c.reuse},
                 {"dynamic_placement", c.dynamicPlacement},
                 {"sa", c.sa}};
  j["hardware"] = options.hw.toJson();
  if (options.blockRows > 0 && options.blockCols > 0) {
    json lb = {{"block_rows", options.blockRows},
               {"block_cols", options.blockCols}};
    if (r.coarse) {
      lb["coarse_sites"] = r.coarse->sites().size();
    }
    j["logical_blocks"] = lb;
  }
  json timeline = json::array();
  for (std::size_t i = 0; i < r.timeline.size(); ++i) {
    const auto& inst = r.program.instructions[i + 1];
    const char* kind = inst.kind == ZairKind::OneQGate ? "1qGate"
                       : inst.kind == ZairKind::Rydberg ? "rydberg"
                                                       : "rearrangeJob";
    json e = {{"index", i + 1},
              {"kind", kind},
              {"start_us", r.timeline[i].start},
              {"end_us", r.timeline[i].end}};
    if (r.timeline[i].aod >= 0) {
      e["aod"] = r.timeline[i].aod;
    }
    timeline.push_back(e);
  }
  j["timeline"] = timeline;
  return j;
}

} // namespace zac
