#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace zac {

/// Neutral-atom hardware constants. Durations in µs, T2 in s.
struct HardwareParams {
  double f2 = 0.995;
  double f1 = 0.9997;
  double fExc = 0.9975;
  double fTran = 0.999;
  double t1q = 52;
  double tRyd = 0.36;
  double tTran = 15;
  double t2 = 1.5;
  double accel = 2750; ///< m/s^2
  double dSep = 10;    ///< µm

  void validate() const;
  static auto fromJson(const nlohmann::json& doc) -> HardwareParams;
  static auto fromFile(const std::string& path) -> HardwareParams;
  [[nodiscard]] auto toJson() const -> nlohmann::json;
  [[nodiscard]] auto t2Micros() const -> double { return t2 * 1e6; }
};

/// Time (µs) to move an atom over d µm under constant d/t^2 = accel.
auto movementTime(double d, const HardwareParams& hw) -> double;

} // namespace zac
