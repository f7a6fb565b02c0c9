#pragma once

#include <limits>
#include <optional>
#include <vector>

namespace zac {

/// Maximum-cardinality bipartite matching (Hopcroft-Karp).
/// Returns, for every left vertex, its matched right vertex or -1.
auto maxBipartiteMatching(int numLeft, int numRight,
                          const std::vector<std::vector<int>>& adj)
    -> std::vector<int>;

inline constexpr double kNoEdge = std::numeric_limits<double>::infinity();

/// Minimum-weight matching covering every row of a rows <= cols matrix
/// (shortest augmenting paths, Jonker-Volgenant style). Entries equal to
/// kNoEdge are forbidden. Returns the column of each row, or nullopt if no
/// full matching exists.
auto minWeightFullMatching(const std::vector<std::vector<double>>& cost)
    -> std::optional<std::vector<int>>;

} // namespace zac
