#include "zac/Scheduler.hpp"

#include "zac/Errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace zac {

auto buildDependencies(const std::vector<SchedItem>& items,
                       const std::vector<InstGroup>& groups)
    -> std::vector<DependencyEdge> {
  std::vector<DependencyEdge> edges;
  std::set<std::pair<int, int>> qubitEdge;
  std::map<int, int> lastOnQubit;
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    for (const int q : items[i].qubits) {
      if (const auto it = lastOnQubit.find(q); it != lastOnQubit.end()) {
        if (qubitEdge.emplace(it->second, i).second) {
          edges.push_back({it->second, i, DepKind::Qubit});
        }
      }
      lastOnQubit[q] = i;
    }
  }
  for (int j2 = 0; j2 < static_cast<int>(items.size()); ++j2) {
    if (items[j2].kind != ItemKind::Job) {
      continue;
    }
    const std::set<std::size_t> fills(items[j2].occupied.begin(),
                                      items[j2].occupied.end());
    for (int j1 = 0; j1 < j2; ++j1) {
      if (items[j1].kind != ItemKind::Job || qubitEdge.count({j1, j2}) != 0) {
        continue;
      }
      const bool hit = std::any_of(
          items[j1].vacated.begin(), items[j1].vacated.end(),
          [&](std::size_t t) { return fills.count(t) != 0; });
      if (hit) {
        edges.push_back({j1, j2, DepKind::Trap});
      }
    }
  }
  // Rydberg pulses and 1Q blocks fence the jobs around them.
  const InstGroup* lastFence = nullptr;
  std::vector<int> jobsSince;
  int lastOneQ = -1;
  for (const auto& g : groups) {
    if (g.kind == ItemKind::Job) {
      for (const int j : g.items) {
        if (lastFence != nullptr) {
          for (const int f : lastFence->items) {
            edges.push_back({f, j, DepKind::Barrier});
          }
        }
        jobsSince.push_back(j);
      }
      continue;
    }
    for (const int i : g.items) {
      for (const int j : jobsSince) {
        edges.push_back({j, i, DepKind::Barrier});
      }
      if (lastFence != nullptr) {
        for (const int f : lastFence->items) {
          edges.push_back({f, i, DepKind::Barrier});
        }
      }
      if (g.kind == ItemKind::OneQ) {
        if (lastOneQ >= 0) {
          edges.push_back({lastOneQ, i, DepKind::Barrier});
        }
        lastOneQ = i;
      }
    }
    jobsSince.clear();
    lastFence = &g;
  }
  return edges;
}

auto schedule(const std::vector<SchedItem>& items,
              const std::vector<InstGroup>& groups,
              const std::vector<DependencyEdge>& deps, int numAods)
    -> std::vector<ScheduledInst> {
  if (numAods < 1) {
    throw InputError("at least one AOD is required");
  }
  const int n = static_cast<int>(items.size());
  std::vector<std::vector<const DependencyEdge*>> preds(n);
  for (const auto& e : deps) {
    preds[e.to].push_back(&e);
  }
  std::vector<ScheduledInst> out(n);
  std::vector<char> done(n, 0);
  std::vector<double> aodFree(numAods, 0);

  const auto cycle = [](int i) {
    throw ValidationError("dependency cycle at instruction " +
                          std::to_string(i));
  };
  const auto ready = [&](int i) {
    return std::all_of(preds[i].begin(), preds[i].end(),
                       [&](const DependencyEdge* e) { return done[e->from]; });
  };
  const auto earliest = [&](int i) {
    double s = 0;
    for (const auto* e : preds[i]) {
      const auto& p = out[e->from];
      if (e->kind == DepKind::Trap) {
        s = std::max(s, p.start + items[e->from].pickFinish -
                            items[i].moveFinish);
      } else {
        s = std::max(s, p.end);
      }
    }
    return s;
  };
  const auto place = [&](int i, double start, int aod) {
    out[i] = {i, start, start + items[i].duration, aod};
    done[i] = 1;
  };

  for (const auto& g : groups) {
    if (g.kind != ItemKind::Job) {
      for (const int i : g.items) {
        if (!ready(i)) {
          cycle(i);
        }
        place(i, earliest(i), -1);
      }
      continue;
    }
    std::vector<int> pending = g.items;
    while (!pending.empty()) {
      int pick = -1;
      for (const int i : pending) {
        if (ready(i) && (pick < 0 || items[i].duration > items[pick].duration ||
                         (items[i].duration == items[pick].duration && i < pick))) {
          pick = i;
        }
      }
      if (pick < 0) {
        cycle(pending.front());
      }
      const auto aod = static_cast<int>(
          std::min_element(aodFree.begin(), aodFree.end()) - aodFree.begin());
      const double start = std::max(aodFree[aod], earliest(pick));
      place(pick, start, aod);
      aodFree[aod] = out[pick].end;
      pending.erase(std::find(pending.begin(), pending.end(), pick));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (done[i] == 0) {
      throw ValidationError("instruction " + std::to_string(i) +
                            " belongs to no group");
    }
  }
  return out;
}

auto makespan(const std::vector<ScheduledInst>& sched) -> double {
  double m = 0;
  for (const auto& s : sched) {
    m = std::max(m, s.end);
  }
  return m;
}

} // namespace zac
