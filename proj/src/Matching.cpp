#include "zac/Matching.hpp"

#include <cmath>
#include <queue>

namespace zac {

auto maxBipartiteMatching(int numLeft, int numRight,
                          const std::vector<std::vector<int>>& adj)
    -> std::vector<int> {
  constexpr int inf = std::numeric_limits<int>::max();
  std::vector<int> matchL(numLeft, -1);
  std::vector<int> matchR(numRight, -1);
  std::vector<int> dist(numLeft);

  const auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int u = 0; u < numLeft; ++u) {
      if (matchL[u] < 0) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = inf;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const int v : adj[u]) {
        const int w = matchR[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == inf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> it(numLeft);
  const auto dfs = [&](auto&& self, int u) -> bool {
    for (; it[u] < adj[u].size(); ++it[u]) {
      const int v = adj[u][it[u]];
      const int w = matchR[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && self(self, w))) {
        matchL[u] = v;
        matchR[v] = u;
        ++it[u];
        return true;
      }
    }
    dist[u] = inf;
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < numLeft; ++u) {
      if (matchL[u] < 0) {
        dfs(dfs, u);
      }
    }
  }
  return matchL;
}

auto minWeightFullMatching(const std::vector<std::vector<double>>& cost)
    -> std::optional<std::vector<int>> {
  const int n = static_cast<int>(cost.size());
  if (n == 0) {
    return std::vector<int>{};
  }
  const int m = static_cast<int>(cost[0].size());
  if (n > m) {
    return std::nullopt;
  }
  // Forbidden edges get a finite penalty larger than any feasible total so
  // the potentials stay finite; a matching that uses one is infeasible.
  double maxFinite = 0;
  for (const auto& row : cost) {
    for (const double c : row) {
      if (c != kNoEdge) {
        maxFinite = std::max(maxFinite, std::abs(c));
      }
    }
  }
  const double big = (maxFinite + 1) * (n + 1) * 4;
  const auto w = [&](int i, int j) {
    const double c = cost[i][j];
    return c == kNoEdge ? big : c;
  };

  // 1-indexed potentials u (rows), v (cols); p[j] = row matched to col j.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0);
  std::vector<double> v(m + 1, 0);
  std::vector<int> p(m + 1, 0);
  std::vector<int> way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j] == 0) {
          const double cur = w(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j] != 0) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) {
      assign[p[j] - 1] = j - 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (cost[i][assign[i]] == kNoEdge) {
      return std::nullopt;
    }
  }
  return assign;
}

} // namespace zac
