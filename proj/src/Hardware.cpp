#include "zac/Hardware.hpp"

#include "zac/Errors.hpp"

#include <cmath>
#include <fstream>

namespace zac {

void HardwareParams::validate() const {
  for (const double f : {f2, f1, fExc, fTran}) {
    if (!(f > 0 && f <= 1)) {
      throw InputError("fidelities must lie in (0, 1]");
    }
  }
  for (const double d : {t1q, tRyd, tTran, t2, accel}) {
    if (!(d > 0)) {
      throw InputError("durations and acceleration must be positive");
    }
  }
  if (dSep < 0) {
    throw InputError("d_sep must be non-negative");
  }
}

auto HardwareParams::fromJson(const nlohmann::json& doc) -> HardwareParams {
  if (!doc.is_object()) {
    throw InputError("hardware parameters must be a JSON object");
  }
  HardwareParams hw;
  const auto read = [&](const char* key, double& field) {
    if (doc.contains(key)) {
      if (!doc[key].is_number()) {
        throw InputError(std::string("hardware parameter '") + key +
                         "' must be a number");
      }
      field = doc[key].get<double>();
    }
  };
  read("f2", hw.f2);
  read("f1", hw.f1);
  read("f_exc", hw.fExc);
  read("f_tran", hw.fTran);
  read("T_1q", hw.t1q);
  read("T_Ryd", hw.tRyd);
  read("T_tran", hw.tTran);
  read("T2", hw.t2);
  read("accel", hw.accel);
  read("d_sep", hw.dSep);
  hw.validate();
  return hw;
}

auto HardwareParams::fromFile(const std::string& path) -> HardwareParams {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open hardware parameter file " + path);
  }
  try {
    return fromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("hardware parameter file " + path + ": " + e.what());
  }
}

auto HardwareParams::toJson() const -> nlohmann::json {
  return {{"f2", f2},       {"f1", f1},         {"f_exc", fExc},
          {"f_tran", fTran}, {"T_1q", t1q},     {"T_Ryd", tRyd},
          {"T_tran", tTran}, {"T2", t2},        {"accel", accel},
          {"d_sep", dSep}};
}

auto movementTime(double d, const HardwareParams& hw) -> double {
  return std::sqrt(d * 1e-6 / hw.accel) * 1e6;
}

} // namespace zac
