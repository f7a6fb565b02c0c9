#pragma once

#include "zac/Architecture.hpp"
#include "zac/Circuit.hpp"
#include "zac/Hardware.hpp"
#include "zac/Routing.hpp"

#include <array>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace zac {

enum class ZairKind { Init, OneQGate, Rydberg, RearrangeJob };

struct ZairInst {
  ZairKind kind = ZairKind::Init;
  std::vector<QLoc> locs;            ///< init / 1qGate
  std::array<double, 3> params{};    ///< 1qGate U3 angles
  int zone = -1;                     ///< rydberg
  std::vector<std::array<int, 2>> gates; ///< rydberg: intended pairs
  int aod = -1;                      ///< rearrangeJob
  std::vector<std::vector<QLoc>> beginLocs;
  std::vector<std::vector<QLoc>> endLocs;
  std::vector<MachineInst> insts;
  double beginTime = 0;
  double endTime = 0;

  auto operator==(const ZairInst& o) const -> bool = default;
};

struct ZairProgram {
  std::vector<ZairInst> instructions; ///< init first

  auto operator==(const ZairProgram& o) const -> bool = default;
};

auto toJson(const ZairProgram& program) -> nlohmann::json;
auto fromJson(const nlohmann::json& doc) -> ZairProgram;
auto serialize(const ZairProgram& program) -> std::string;
auto parseZair(const std::string& text) -> ZairProgram;

struct QubitCounters {
  int nCz = 0;
  int n1q = 0;
  int nTran = 0;
};

struct Violation {
  int index = -1;
  std::string kind;
  std::string message;
};

struct ReplayCounters {
  int nExc = 0;
  int nTran = 0;
  int numPulses = 0; ///< Rydberg stages seen
  std::vector<QubitCounters> perQubit;
  std::vector<Violation> violations;

  [[nodiscard]] auto ok() const -> bool { return violations.empty(); }
};

auto violationsJson(const std::vector<Violation>& v) -> nlohmann::json;

/// Replays the program on the architecture and checks every transfer, move
/// and pulse. With a circuit, also checks that each Rydberg stage realises
/// exactly that stage's gates.
auto validateReplay(const ZairProgram& program, const Architecture& arch,
                    const StagedCircuit* circuit = nullptr,
                    const HardwareParams& hw = {}) -> ReplayCounters;

} // namespace zac
