#include "zac/Fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace zac {

auto evaluate(double duration, int g1, int g2, int nExc,
              const std::vector<QubitCounters>& perQubit,
              const HardwareParams& hw) -> FidelityReport {
  FidelityReport r;
  r.g1 = g1;
  r.g2 = g2;
  r.nExc = nExc;
  r.duration = duration;
  for (const auto& c : perQubit) {
    r.nTran += c.nTran;
  }
  r.factor1q = std::pow(hw.f1, g1);
  r.factor2q = std::pow(hw.f2, g2) * std::pow(hw.fExc, nExc);
  r.factorTransfer = std::pow(hw.fTran, r.nTran);
  const double t2 = hw.t2Micros();
  for (const auto& c : perQubit) {
    const double busy =
        c.nCz * hw.tRyd + c.n1q * hw.t1q + c.nTran * hw.tTran;
    const double idle = std::max(0.0, duration - busy);
    r.idle.push_back(idle);
    if (idle > t2) {
      r.exceedsT2 = true;
      r.factorDecoherence = 0;
    } else {
      r.factorDecoherence *= 1 - idle / t2;
    }
    if (idle / t2 > 0.1) {
      r.approximationValid = false;
    }
  }
  r.fidelity =
      r.factor1q * r.factor2q * r.factorTransfer * r.factorDecoherence;
  return r;
}

auto layerDuration(BoundKind kind, double maxDisplacement,
                   const HardwareParams& hw) -> double {
  const double d = kind == BoundKind::PerfectMovement ? maxDisplacement : hw.dSep;
  return 2 * hw.tTran + movementTime(d, hw);
}

auto evaluateBound(BoundKind kind, const BoundInput& in,
                   const HardwareParams& hw) -> FidelityReport {
  std::vector<SchedItem> items;
  std::vector<InstGroup> groups;
  auto perQubit = in.perQubit;
  for (std::size_t gi = 0; gi < in.groups.size(); ++gi) {
    const auto& g = in.groups[gi];
    InstGroup ng{g.kind, {}};
    if (g.kind != ItemKind::Job) {
      for (const int i : g.items) {
        ng.items.push_back(static_cast<int>(items.size()));
        items.push_back(in.items[i]);
      }
      groups.push_back(ng);
      continue;
    }
    // The whole group becomes one rearrangement layer.
    SchedItem layer;
    layer.kind = ItemKind::Job;
    std::set<int> qubits;
    for (const int i : g.items) {
      const auto& it = in.items[i];
      qubits.insert(it.qubits.begin(), it.qubits.end());
      layer.vacated.insert(layer.vacated.end(), it.vacated.begin(),
                           it.vacated.end());
      layer.occupied.insert(layer.occupied.end(), it.occupied.begin(),
                            it.occupied.end());
    }
    if (kind == BoundKind::PerfectReuse && gi < in.reusableReturned.size()) {
      for (const int q : in.reusableReturned[gi]) {
        if (qubits.erase(q) != 0) {
          perQubit[q].nTran -= 2;
        }
      }
    }
    if (qubits.empty()) {
      continue;
    }
    layer.qubits.assign(qubits.begin(), qubits.end());
    const double disp =
        gi < in.groupMaxDisplacement.size() ? in.groupMaxDisplacement[gi] : 0;
    layer.duration = layerDuration(kind, disp, hw);
    layer.pickFinish = hw.tTran;
    layer.moveFinish = layer.duration - hw.tTran;
    ng.items.push_back(static_cast<int>(items.size()));
    items.push_back(layer);
    groups.push_back(ng);
  }
  const auto deps = buildDependencies(items, groups);
  const auto sched = schedule(items, groups, deps, in.numAods);
  return evaluate(makespan(sched), in.g1, in.g2, in.nExc, perQubit, hw);
}

} // namespace zac
