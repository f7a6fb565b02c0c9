// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exits non-zero if any criterion fails.

#include "../oracles.hpp"

#include "zac/Compiler.hpp"
#include "zac/Errors.hpp"
#include "zac/Fidelity.hpp"
#include "zac/Matching.hpp"
#include "zac/Placement.hpp"
#include "zac/Routing.hpp"
#include "zac/Scheduler.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace zac;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

auto seconds(Clock::time_point since) -> double {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

auto arch(const std::string& name) -> const Architecture& {
  static std::map<std::string, Architecture> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, Architecture::fromFile(
                                 oracle::dataPath("architectures/" + name + ".json")))
             .first;
  }
  return it->second;
}

auto staged(const std::string& name) -> StagedCircuit {
  const auto c = loadCircuit(oracle::dataPath("circuits/" + name + ".qasm"), CircuitFormat::Qasm);
  return stageAsap(c.numQubits, c.gates);
}

const std::vector<std::string> kSuite{
    "bv_10",  "chain_4",  "chain_10", "ghz_8",  "ghz_16",          "ising_8",        "ising_12",
    "ising_20", "qft_5", "random_12", "star_8", "running_example", "transversal_cnot"};
const std::vector<std::string> kArchs{"reference", "two_zone"};

auto near(double a, double b, double tol) -> bool { return std::abs(a - b) <= tol; }

auto ac1() -> Outcome {
  const auto start = Clock::now();
  const auto& a = arch("toy");
  const Placement m{a.trap(0, 3, 4), a.trap(0, 3, 0), a.trap(0, 3, 1),
                    a.trap(0, 3, 2), a.trap(0, 3, 5), a.trap(0, 3, 3)};
  const auto& w00 = a.sites()[a.siteIndex(1, 0, 0)];
  const double d0 = distance(m[0].pos, w00.ref());
  const double d1 = distance(m[1].pos, w00.ref());
  const double g = gCost(m[0].pos, m[1].pos, w00.ref());
  const auto& site = nearestSiteForGate(a, m[0].pos, m[1].pos);
  Outcome o;
  o.pass = near(d0, 16.40, 0.01) && near(d1, 10.05, 0.01) && near(g, 4.05, 0.01) &&
           site.index == w00.index && stageWeight(2) == 0.9;
  const double t = seconds(start);
  o.pass = o.pass && t < 1;
  std::ostringstream os;
  os << "d=" << d0 << "/" << d1 << " g_cost=" << g << " site=(" << site.row << ","
     << site.col << ") w2=" << stageWeight(2) << " " << t << "s";
  o.detail = os.str();
  return o;
}

auto ac2() -> Outcome {
  const auto& a = arch("toy");
  const Placement m{a.trap(0, 3, 4), a.trap(0, 3, 0), a.trap(0, 3, 1),
                    a.trap(0, 3, 2), a.trap(0, 3, 5), a.trap(0, 3, 3)};
  const auto& w00 = a.sites()[a.siteIndex(1, 0, 0)];
  const double base = gateEdgeWeight(a, {{0, 1}, -1}, w00, m);
  const double full = gateEdgeWeight(a, {{0, 1}, 2}, w00, m);
  Outcome o;
  o.pass = near(base, 4.05, 0.02) && near(full - base, 3.28, 0.02);
  std::ostringstream os;
  os << "weight=" << base << "+" << full - base;
  o.detail = os.str();
  return o;
}

auto ac3() -> Outcome {
  const auto start = Clock::now();
  const auto& a = arch("toy");
  const CompilerConfig cfg;
  std::mt19937 rng(2024);
  int instances = 0;
  int bad = 0;
  for (int trial = 0; trial < 250; ++trial) {
    // reuse matching
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    const auto pairs = [&](int count) {
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<GatePair> out;
      for (int i = 0; i < count; ++i) {
        out.emplace_back(perm[2 * i], perm[2 * i + 1]);
      }
      return out;
    };
    const auto cur = pairs(1 + static_cast<int>(rng() % 4));
    const auto nxt = pairs(1 + static_cast<int>(rng() % 4));
    std::vector<std::vector<int>> adj(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = 0; j < nxt.size(); ++j) {
        const auto [p, q] = cur[i];
        const auto [r, s] = nxt[j];
        if (p == r || p == s || q == r || q == s) {
          adj[i].push_back(static_cast<int>(j));
        }
      }
    }
    const auto match = matchReuse(cur, nxt);
    const int size = static_cast<int>(std::count_if(match.begin(), match.end(),
                                                    [](int j) { return j >= 0; }));
    bad += size != oracle::maxMatchingSize(static_cast<int>(cur.size()),
                                           static_cast<int>(nxt.size()), adj)
               ? 1
               : 0;

    // gate placement: up to 4 gates over the 6 toy sites
    auto traps = a.storageTraps();
    std::shuffle(traps.begin(), traps.end(), rng);
    Placement m(traps.begin(), traps.begin() + 8);
    const int numGates = 1 + static_cast<int>(rng() % 4);
    std::vector<GateRequest> gates;
    for (int g = 0; g < numGates; ++g) {
      const int spare = 8 - 2 * numGates;
      gates.push_back({{2 * g, 2 * g + 1},
                       spare == 0 || rng() % 2 == 0 ? -1
                                                    : 2 * numGates + static_cast<int>(rng() % spare)});
    }
    std::vector<char> excluded(a.sites().size(), 0);
    const auto gp = placeGates(a, gates, m, excluded, cfg);
    std::vector<std::vector<double>> w(gates.size(), std::vector<double>(a.sites().size(), kNoEdge));
    for (std::size_t g = 0; g < gates.size(); ++g) {
      for (const int s : gateCandidates(a, gates[g], m, excluded, cfg.delta)) {
        w[g][s] = gateEdgeWeight(a, gates[g], a.sites()[s], m);
      }
    }
    bad += near(gp.total, oracle::minAssignment(w), 1e-9) ? 0 : 1;

    // returns: up to 4 qubits from sites back to storage
    const int numQ = 1 + static_cast<int>(rng() % 4);
    std::vector<TrapRef> homes = m;
    std::vector<char> freeTrap(a.numTraps(), 0);
    for (const auto& t : a.storageTraps()) {
      freeTrap[a.trapIndex(t)] = 1;
    }
    std::vector<int> order(a.sites().size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int q = 0; q < numQ; ++q) {
      m[q] = a.sites()[order[q]].left;
    }
    for (int q = numQ; q < 8; ++q) {
      freeTrap[a.trapIndex(m[q])] = 0;
    }
    std::vector<ReturnRequest> reqs;
    for (int q = 0; q < numQ; ++q) {
      reqs.push_back({q, rng() % 2 == 0 ? -1 : numQ + static_cast<int>(rng() % (8 - numQ))});
    }
    const auto rp = placeReturns(a, reqs, m, homes, freeTrap, cfg);
    std::vector<std::vector<double>> rw(reqs.size(), std::vector<double>(a.numTraps(), kNoEdge));
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      for (const auto& t : returnCandidates(a, reqs[i], m, homes[reqs[i].qubit], freeTrap, cfg.k)) {
        rw[i][a.trapIndex(t)] = returnEdgeWeight(reqs[i], t, m, cfg.alpha);
      }
    }
    bad += near(rp.total, oracle::minAssignment(rw), 1e-9) ? 0 : 1;
    ++instances;
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = bad == 0 && t < 30;
  o.detail = std::to_string(instances) + " instances x 3 matchings, " + std::to_string(bad) +
             " mismatches, " + std::to_string(t) + "s";
  return o;
}

auto ac4() -> Outcome {
  const auto start = Clock::now();
  const auto& a = arch("toy");
  std::mt19937 rng(77);
  int bad = 0;
  int sets = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto src = a.storageTraps();
    std::vector<TrapRef> dst;
    for (const auto& s : a.sites()) {
      dst.push_back(s.left);
      dst.push_back(s.right);
    }
    std::shuffle(src.begin(), src.end(), rng);
    std::shuffle(dst.begin(), dst.end(), rng);
    std::vector<Movement> moves;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n && i < static_cast<int>(dst.size()); ++i) {
      moves.push_back(rng() % 2 == 0 ? Movement{i, src[i], dst[i]} : Movement{i, dst[i], src[i]});
    }
    const double sep = a.maxMinSep();
    const auto jobs = batchMovements(moves, sep);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      for (std::size_t x = 0; x < jobs[j].size(); ++x) {
        for (std::size_t y = x + 1; y < jobs[j].size(); ++y) {
          bad += oracle::trajectoriesCompatible(jobs[j][x], jobs[j][y], sep) ? 0 : 1;
        }
      }
      // maximal against everything not yet batched when this job was formed
      for (std::size_t k = j + 1; k < jobs.size(); ++k) {
        for (const auto& mv : jobs[k]) {
          const bool fits = std::all_of(jobs[j].begin(), jobs[j].end(), [&](const Movement& y) {
            return oracle::trajectoriesCompatible(mv, y, sep);
          });
          bad += fits ? 1 : 0;
        }
      }
    }
    ++sets;
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = bad == 0 && t < 10;
  o.detail = std::to_string(sets) + " movement sets, " + std::to_string(bad) + " violations, " +
             std::to_string(t) + "s";
  return o;
}

struct SuiteRun {
  CompileResult result;
  bool ok = false;
  std::string error;
};

auto run(const std::string& archName, const std::string& circuit, const RunOptions& opt)
    -> SuiteRun {
  SuiteRun r;
  try {
    r.result = compile(arch(archName), staged(circuit), opt);
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

auto ac5() -> Outcome {
  const auto start = Clock::now();
  int bad = 0;
  int runs = 0;
  std::string first;
  for (const auto& a : kArchs) {
    for (const auto& c : kSuite) {
      const auto r = run(a, c, RunOptions{});
      ++runs;
      if (!r.ok) {
        ++bad;
        first = first.empty() ? a + "/" + c + ": " + r.error : first;
        continue;
      }
      const auto replay = validateReplay(r.result.program, arch(a), &r.result.circuit);
      if (!replay.ok() || replay.nExc != 0) {
        ++bad;
        first = first.empty() ? a + "/" + c : first;
      }
    }
  }
  const double t = seconds(start);
  Outcome o;
  o.pass = bad == 0 && runs >= 20 && t < 60;
  o.detail = std::to_string(runs) + " compilations, " + std::to_string(bad) + " with violations, " +
             std::to_string(t) + "s" + (first.empty() ? "" : " first: " + first);
  return o;
}

auto ac6() -> Outcome {
  const HardwareParams hw;
  const auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); };
  const auto empty = evaluate(0, 0, 0, 0, {}, hw);
  const auto oneCz = evaluate(hw.tRyd, 0, 1, 0, {{1, 0, 0}, {1, 0, 0}}, hw);
  const auto tran = evaluate(2 * hw.tTran, 0, 0, 0, {{0, 0, 2}}, hw);
  const double d = 1000;
  const auto mixed = evaluate(d, 1, 1, 1, {{1, 1, 2}, {1, 0, 0}}, hw);
  const double mixedHand = 0.9997 * 0.995 * 0.9975 * 0.999 * 0.999 *
                           (1 - (d - 82.36) / 1.5e6) * (1 - (d - 0.36) / 1.5e6);
  const double mt = movementTime(10, hw);
  // the compiler on an empty circuit
  const auto compiled = compile(arch("toy"), stageAsap(2, {}), RunOptions{});
  Outcome o;
  o.pass = empty.fidelity == 1 && rel(oneCz.fidelity, 0.995) &&
           rel(tran.factorTransfer, 0.998001) && rel(mixed.fidelity, mixedHand) &&
           near(mt, 60.30, 0.01) && compiled.report.fidelity == 1;
  std::ostringstream os;
  os.precision(8);
  os << "empty=" << empty.fidelity << " one_cz=" << oneCz.fidelity
     << " transfer=" << tran.factorTransfer << " mixed=" << mixed.fidelity
     << " movement_time(10)=" << mt;
  o.detail = os.str();
  return o;
}

auto ac7() -> Outcome {
  int bad = 0;
  int runs = 0;
  std::string first;
  for (const auto& a : kArchs) {
    for (const auto& c : kSuite) {
      const auto r = run(a, c, RunOptions{});
      ++runs;
      if (!r.ok) {
        ++bad;
        continue;
      }
      const auto& b = r.result.bounds;
      const double eps = 1e-12;
      if (!(r.result.report.fidelity <= b.perfectMovement.fidelity + eps &&
            b.perfectMovement.fidelity <= b.perfectPlacement.fidelity + eps &&
            b.perfectPlacement.fidelity <= b.perfectReuse.fidelity + eps)) {
        ++bad;
        first = first.empty() ? a + "/" + c : first;
      }
    }
  }
  const double layer = layerDuration(BoundKind::PerfectPlacement, 0, HardwareParams{});
  Outcome o;
  o.pass = bad == 0 && near(layer, 90.30, 0.01);
  std::ostringstream os;
  os << runs << " compilations, " << bad << " chain violations, layer=" << layer << "us"
     << (first.empty() ? "" : " first: " + first);
  o.detail = os.str();
  return o;
}

auto ac8() -> Outcome {
  std::vector<std::string> reuseWorse;
  std::vector<std::string> dynamicWorse;
  for (const auto& a : kArchs) {
    for (const auto& c : kSuite) {
      RunOptions base;
      RunOptions noReuse;
      noReuse.config.reuse = false;
      RunOptions fixed;
      fixed.config.dynamicPlacement = false;
      const auto rb = run(a, c, base);
      const auto rn = run(a, c, noReuse);
      const auto rs = run(a, c, fixed);
      if (!rb.ok || !rn.ok || !rs.ok) {
        reuseWorse.push_back(a + "/" + c + "(error)");
        continue;
      }
      if (rb.result.report.fidelity < rn.result.report.fidelity) {
        reuseWorse.push_back(a + "/" + c);
      }
      if (rb.result.report.fidelity < rs.result.report.fidelity) {
        dynamicWorse.push_back(a + "/" + c);
      }
    }
  }
  const auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) {
      s += (s.empty() ? "" : ",") + x;
    }
    return s.empty() ? std::string("none") : s;
  };
  Outcome o;
  o.pass = reuseWorse.empty() && dynamicWorse.empty();
  o.detail = "reuse below no-reuse: " + join(reuseWorse) +
             "; dynamic below static: " + join(dynamicWorse);
  return o;
}

auto ac9() -> Outcome {
  int bad = 0;
  std::string first;
  for (const auto& a : kArchs) {
    for (const auto& c : kSuite) {
      RunOptions two;
      two.numAods = 2;
      const auto r1 = run(a, c, RunOptions{});
      const auto r2 = run(a, c, two);
      if (!r1.ok || !r2.ok || !r2.result.counters.ok() ||
          r2.result.report.duration > r1.result.report.duration + 1e-9) {
        ++bad;
        first = first.empty() ? a + "/" + c : first;
      }
    }
  }
  std::vector<SchedItem> items(3);
  const double durations[] = {5, 3, 2};
  for (int i = 0; i < 3; ++i) {
    items[i].kind = ItemKind::Job;
    items[i].duration = durations[i];
    items[i].qubits = {i};
  }
  const std::vector<InstGroup> groups{{ItemKind::Job, {0, 1, 2}}};
  const double span = makespan(schedule(items, groups, buildDependencies(items, groups), 2));
  const double best = oracle::optimalMakespan({5, 3, 2}, 2);
  Outcome o;
  o.pass = bad == 0 && span == 5 && best == 5;
  std::ostringstream os;
  os << bad << " circuits slower with 2 AODs; [5,3,2] makespan=" << span << " optimum=" << best
     << (first.empty() ? "" : " first: " + first);
  o.detail = os.str();
  return o;
}

auto ac10() -> Outcome {
  const auto coarse = arch("reference").coarsened(2, 4);
  const int rows = coarse.numSiteRows(1);
  const int cols = coarse.maxSiteCols(1);
  RunOptions opt;
  opt.blockRows = 2;
  opt.blockCols = 4;
  const auto r = run("reference", "transversal_cnot", opt);
  bool clean = false;
  if (r.ok) {
    const auto replay = validateReplay(r.result.program, arch("reference"), &r.result.circuit);
    clean = replay.ok() && replay.nExc == 0;
  }
  Outcome o;
  o.pass = rows == 3 && cols == 5 && clean;
  o.detail = "coarse zone " + std::to_string(rows) + "x" + std::to_string(cols) +
             ", transversal CNOT " + (clean ? "replays cleanly" : "failed: " + r.error);
  return o;
}

auto ac11() -> Outcome {
  int bad = 0;
  for (const auto& c : {"ising_12", "random_12", "running_example"}) {
    RunOptions opt;
    opt.config.seed = 1234;
    const auto a = run("reference", c, opt);
    const auto b = run("reference", c, opt);
    if (!a.ok || !b.ok || serialize(a.result.program) != serialize(b.result.program) ||
        reportJson(a.result, opt).dump(1) != reportJson(b.result, opt).dump(1)) {
      ++bad;
    }
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(bad) + " circuits differ between identical runs";
  return o;
}

} // namespace

auto main() -> int {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 worked example", ac1},        {"AC2 gate edge weight", ac2},
      {"AC3 matching oracles", ac3},      {"AC4 MIS batching", ac4},
      {"AC5 end-to-end soundness", ac5},  {"AC6 fidelity model", ac6},
      {"AC7 bound dominance", ac7},       {"AC8 ablation direction", ac8},
      {"AC9 multi-AOD monotonicity", ac9}, {"AC10 logical blocks", ac10},
      {"AC11 determinism", ac11}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
  }
  return failed == 0 ? 0 : 1;
}
