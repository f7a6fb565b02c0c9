#pragma once

#include "zac/Hardware.hpp"
#include "zac/Scheduler.hpp"
#include "zac/Zair.hpp"

#include <vector>

namespace zac {

struct FidelityReport {
  int g1 = 0;
  int g2 = 0;
  int nExc = 0;
  int nTran = 0;
  double duration = 0; ///< µs
  std::vector<double> idle; ///< per-qubit idle time t_q (µs)
  double factor1q = 1;
  double factor2q = 1; ///< two-qubit gates and idle excitation
  double factorTransfer = 1;
  double factorDecoherence = 1;
  double fidelity = 1;
  bool exceedsT2 = false;          ///< some t_q > T2; its factor is 0
  bool approximationValid = true;  ///< every t_q / T2 <= 0.1
};

/// Fidelity product for a schedule of the given duration.
auto evaluate(double duration, int g1, int g2, int nExc,
              const std::vector<QubitCounters>& perQubit,
              const HardwareParams& hw) -> FidelityReport;

/// What the ideal bounds need from a compiled program.
struct BoundInput {
  std::vector<SchedItem> items;
  std::vector<InstGroup> groups;
  /// per group: largest single-qubit displacement (µm) of its movements
  std::vector<double> groupMaxDisplacement;
  /// per group: qubits that could have stayed at their site (only set on
  /// to-storage groups)
  std::vector<std::vector<int>> reusableReturned;
  int g1 = 0;
  int g2 = 0;
  int nExc = 0;
  std::vector<QubitCounters> perQubit;
  int numAods = 1;
};

enum class BoundKind { PerfectMovement, PerfectPlacement, PerfectReuse };

/// Duration of one idealised rearrangement layer.
auto layerDuration(BoundKind kind, double maxDisplacement,
                   const HardwareParams& hw) -> double;
auto evaluateBound(BoundKind kind, const BoundInput& in,
                   const HardwareParams& hw) -> FidelityReport;

} // namespace zac
