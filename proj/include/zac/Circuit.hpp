#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace zac {

enum class GateKind { CZ, U3 };

struct Gate {
  GateKind kind = GateKind::CZ;
  std::vector<int> qubits;
  std::array<double, 3> params{}; ///< (theta, phi, lambda) for U3
  int index = 0;                  ///< position in the source

  auto operator==(const Gate& o) const -> bool = default;
};

enum class StageKind { Rydberg, OneQ };

struct GateStage {
  StageKind kind = StageKind::Rydberg;
  int t = 0; ///< 1-based Rydberg stage number; for 1Q stages the preceding one
  std::vector<Gate> gates;
};

struct StagedCircuit {
  int numQubits = 0;
  std::vector<GateStage> stages;
  int g1 = 0;
  int g2 = 0;

  [[nodiscard]] auto numRydbergStages() const -> int;
  /// CZ qubit pairs of Rydberg stage t (1-based).
  [[nodiscard]] auto rydbergGates(int t) const
      -> std::vector<std::pair<int, int>>;
};

enum class CircuitFormat { Qasm, JsonGates };

struct ParsedCircuit {
  int numQubits = 0;
  std::vector<Gate> gates;
};

auto parseCircuit(const std::string& text, CircuitFormat format)
    -> ParsedCircuit;
auto loadCircuit(const std::string& path, CircuitFormat format)
    -> ParsedCircuit;

/// ASAP layering into alternating 1Q and Rydberg stages.
auto stageAsap(int numQubits, const std::vector<Gate>& gates) -> StagedCircuit;

} // namespace zac
