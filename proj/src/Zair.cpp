#include "zac/Zair.hpp"

#include "zac/Errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace zac {

using nlohmann::json;

namespace {

auto locJson(const QLoc& l) -> json { return json::array({l.q, l.slm, l.r, l.c}); }

auto gridJson(const std::vector<std::vector<QLoc>>& g) -> json {
  json out = json::array();
  for (const auto& row : g) {
    json r = json::array();
    for (const auto& l : row) {
      r.push_back(locJson(l));
    }
    out.push_back(r);
  }
  return out;
}

auto machineName(MachineKind k) -> const char* {
  switch (k) {
  case MachineKind::Activate:
    return "activate";
  case MachineKind::ParkMove:
    return "parkMove";
  case MachineKind::Move:
    return "move";
  case MachineKind::Deactivate:
    return "deactivate";
  }
  return "move";
}

auto machineJson(const MachineInst& m) -> json {
  json j;
  j["type"] = machineName(m.kind);
  j["row_id"] = m.rowIds;
  j["col_id"] = m.colIds;
  if (m.kind == MachineKind::Activate || m.kind == MachineKind::Deactivate) {
    j["row_y"] = m.rowBegin;
    j["col_x"] = m.colBegin;
  } else {
    j["row_y_begin"] = m.rowBegin;
    j["row_y_end"] = m.rowEnd;
    j["col_x_begin"] = m.colBegin;
    j["col_x_end"] = m.colEnd;
    j["duration"] = m.duration;
  }
  return j;
}

auto field(const json& j, const char* key) -> const json& {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("ZAIR: missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T> auto get(const json& j, const char* key) -> T {
  try {
    return field(j, key).get<T>();
  } catch (const json::type_error&) {
    throw InputError(std::string("ZAIR: malformed field '") + key + "'");
  }
}

auto locFrom(const json& j) -> QLoc {
  if (!j.is_array() || j.size() != 4) {
    throw InputError("ZAIR: qloc must be [q, slm, row, col]");
  }
  try {
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
  } catch (const json::type_error&) {
    throw InputError("ZAIR: qloc entries must be integers");
  }
}

auto locsFrom(const json& j) -> std::vector<QLoc> {
  if (!j.is_array()) {
    throw InputError("ZAIR: expected a list of qlocs");
  }
  std::vector<QLoc> out;
  for (const auto& l : j) {
    out.push_back(locFrom(l));
  }
  return out;
}

auto gridFrom(const json& j) -> std::vector<std::vector<QLoc>> {
  if (!j.is_array()) {
    throw InputError("ZAIR: expected a grid of qlocs");
  }
  std::vector<std::vector<QLoc>> out;
  for (const auto& row : j) {
    out.push_back(locsFrom(row));
  }
  return out;
}

auto machineFrom(const json& j) -> MachineInst {
  MachineInst m;
  const auto type = get<std::string>(j, "type");
  if (type == "activate") {
    m.kind = MachineKind::Activate;
  } else if (type == "parkMove") {
    m.kind = MachineKind::ParkMove;
  } else if (type == "move") {
    m.kind = MachineKind::Move;
  } else if (type == "deactivate") {
    m.kind = MachineKind::Deactivate;
  } else {
    throw InputError("ZAIR: unknown machine instruction '" + type + "'");
  }
  m.rowIds = get<std::vector<int>>(j, "row_id");
  m.colIds = get<std::vector<int>>(j, "col_id");
  if (m.kind == MachineKind::Activate || m.kind == MachineKind::Deactivate) {
    m.rowBegin = get<std::vector<double>>(j, "row_y");
    m.colBegin = get<std::vector<double>>(j, "col_x");
  } else {
    m.rowBegin = get<std::vector<double>>(j, "row_y_begin");
    m.rowEnd = get<std::vector<double>>(j, "row_y_end");
    m.colBegin = get<std::vector<double>>(j, "col_x_begin");
    m.colEnd = get<std::vector<double>>(j, "col_x_end");
    m.duration = get<double>(j, "duration");
    if (m.rowEnd.size() != m.rowIds.size() ||
        m.colEnd.size() != m.colIds.size()) {
      throw InputError("ZAIR: move coordinates do not match ids");
    }
  }
  if (m.rowBegin.size() != m.rowIds.size() ||
      m.colBegin.size() != m.colIds.size()) {
    throw InputError("ZAIR: machine coordinates do not match ids");
  }
  return m;
}

} // namespace

auto toJson(const ZairProgram& program) -> json {
  json list = json::array();
  for (const auto& inst : program.instructions) {
    json j;
    switch (inst.kind) {
    case ZairKind::Init: {
      j["type"] = "init";
      json locs = json::array();
      for (const auto& l : inst.locs) {
        locs.push_back(locJson(l));
      }
      j["init_locs"] = locs;
      break;
    }
    case ZairKind::OneQGate: {
      j["type"] = "1qGate";
      j["unitary"] = "u3";
      j["params"] = inst.params;
      json locs = json::array();
      for (const auto& l : inst.locs) {
        locs.push_back(locJson(l));
      }
      j["locs"] = locs;
      break;
    }
    case ZairKind::Rydberg:
      j["type"] = "rydberg";
      j["zone_id"] = inst.zone;
      j["gates"] = inst.gates;
      break;
    case ZairKind::RearrangeJob: {
      j["type"] = "rearrangeJob";
      j["aod_id"] = inst.aod;
      j["begin_locs"] = gridJson(inst.beginLocs);
      j["end_locs"] = gridJson(inst.endLocs);
      json insts = json::array();
      for (const auto& m : inst.insts) {
        insts.push_back(machineJson(m));
      }
      j["insts"] = insts;
      break;
    }
    }
    j["begin_time"] = inst.beginTime;
    j["end_time"] = inst.endTime;
    list.push_back(j);
  }
  return {{"instructions", list}};
}

auto fromJson(const json& doc) -> ZairProgram {
  ZairProgram p;
  for (const auto& j : field(doc, "instructions")) {
    ZairInst inst;
    const auto type = get<std::string>(j, "type");
    if (type == "init") {
      inst.kind = ZairKind::Init;
      inst.locs = locsFrom(field(j, "init_locs"));
    } else if (type == "1qGate") {
      inst.kind = ZairKind::OneQGate;
      if (get<std::string>(j, "unitary") != "u3") {
        throw InputError("ZAIR: only u3 unitaries are supported");
      }
      inst.params = get<std::array<double, 3>>(j, "params");
      inst.locs = locsFrom(field(j, "locs"));
    } else if (type == "rydberg") {
      inst.kind = ZairKind::Rydberg;
      inst.zone = get<int>(j, "zone_id");
      inst.gates = get<std::vector<std::array<int, 2>>>(j, "gates");
    } else if (type == "rearrangeJob") {
      inst.kind = ZairKind::RearrangeJob;
      inst.aod = get<int>(j, "aod_id");
      inst.beginLocs = gridFrom(field(j, "begin_locs"));
      inst.endLocs = gridFrom(field(j, "end_locs"));
      for (const auto& m : field(j, "insts")) {
        inst.insts.push_back(machineFrom(m));
      }
    } else {
      throw InputError("ZAIR: unknown instruction type '" + type + "'");
    }
    inst.beginTime = get<double>(j, "begin_time");
    inst.endTime = get<double>(j, "end_time");
    p.instructions.push_back(std::move(inst));
  }
  return p;
}

auto serialize(const ZairProgram& program) -> std::string {
  return toJson(program).dump(1) + "\n";
}

auto parseZair(const std::string& text) -> ZairProgram {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("ZAIR: ") + e.what());
  }
  return fromJson(doc);
}

auto violationsJson(const std::vector<Violation>& v) -> json {
  json out = json::array();
  for (const auto& x : v) {
    out.push_back({{"index", x.index}, {"kind", x.kind}, {"message", x.message}});
  }
  return out;
}

namespace {

class Replayer {
public:
  Replayer(const Architecture& arch, const HardwareParams& hw)
      : arch_(arch), hw_(hw), occupant_(arch.numTraps(), -1) {}

  auto run(const ZairProgram& program, const StagedCircuit* circuit)
      -> ReplayCounters {
    const auto& insts = program.instructions;
    if (insts.empty() || insts.front().kind != ZairKind::Init) {
      violate(0, "structure", "program must start with init");
      return out_;
    }
    for (std::size_t i = 0; i < insts.size(); ++i) {
      idx_ = static_cast<int>(i);
      const auto& inst = insts[i];
      if (inst.endTime < inst.beginTime - 1e-9 || inst.beginTime < -1e-9) {
        violate(idx_, "timing", "negative duration or start");
      }
      switch (inst.kind) {
      case ZairKind::Init:
        if (i != 0) {
          violate(idx_, "structure", "init must appear once, first");
        } else {
          init(inst);
        }
        break;
      case ZairKind::OneQGate:
        oneq(inst);
        break;
      case ZairKind::Rydberg:
        rydberg(inst, i > 0 && insts[i - 1].kind == ZairKind::Rydberg);
        break;
      case ZairKind::RearrangeJob:
        job(inst);
        break;
      }
    }
    if (circuit != nullptr) {
      checkCircuit(*circuit);
    }
    out_.numPulses = static_cast<int>(realized_.size());
    return out_;
  }

private:
  void violate(int index, const std::string& kind, const std::string& msg) {
    out_.violations.push_back({index, kind, msg});
  }

  auto validQubit(int q) const -> bool {
    return q >= 0 && q < static_cast<int>(where_.size());
  }

  void touch(const std::vector<int>& qubits, const ZairInst& inst) {
    for (const int q : qubits) {
      if (!validQubit(q)) {
        continue;
      }
      if (inst.beginTime < busyUntil_[q] - 1e-6) {
        violate(idx_, "timing",
                "qubit " + std::to_string(q) + " used by overlapping instructions");
      }
      busyUntil_[q] = std::max(busyUntil_[q], inst.endTime);
    }
  }

  void init(const ZairInst& inst) {
    const auto n = inst.locs.size();
    where_.assign(n, std::nullopt);
    busyUntil_.assign(n, 0);
    out_.perQubit.assign(n, {});
    for (const auto& l : inst.locs) {
      if (l.q < 0 || l.q >= static_cast<int>(n) || where_[l.q]) {
        violate(idx_, "structure", "init must list every qubit exactly once");
        continue;
      }
      if (!arch_.hasTrap(l.slm, l.r, l.c)) {
        violate(idx_, "location", "init trap does not exist");
        continue;
      }
      const auto t = arch_.trap(l.slm, l.r, l.c);
      auto& occ = occupant_[arch_.trapIndex(t)];
      if (occ >= 0) {
        violate(idx_, "occupancy", "two qubits in one trap at init");
        continue;
      }
      occ = l.q;
      where_[l.q] = t;
    }
  }

  auto at(const QLoc& l) const -> bool {
    return validQubit(l.q) && where_[l.q] &&
           *where_[l.q] == TrapRef{l.slm, l.r, l.c, {}};
  }

  void oneq(const ZairInst& inst) {
    if (inst.locs.size() != 1) {
      violate(idx_, "structure", "1qGate acts on one qubit");
      return;
    }
    const auto& l = inst.locs.front();
    if (!at(l)) {
      violate(idx_, "location", "qubit " + std::to_string(l.q) +
                                    " is not at the 1qGate location");
      return;
    }
    touch({l.q}, inst);
    ++out_.perQubit[l.q].n1q;
  }

  void rydberg(const ZairInst& inst, bool continuesStage) {
    if (!continuesStage) {
      realized_.emplace_back();
    }
    const auto zones = arch_.entanglementZoneIds();
    if (std::find(zones.begin(), zones.end(), inst.zone) == zones.end()) {
      violate(idx_, "structure", "rydberg zone is not an entanglement zone");
      return;
    }
    std::set<std::pair<int, int>> intended;
    std::vector<int> qubits;
    for (const auto& g : inst.gates) {
      intended.emplace(std::min(g[0], g[1]), std::max(g[0], g[1]));
      qubits.push_back(g[0]);
      qubits.push_back(g[1]);
    }
    touch(qubits, inst);
    std::set<std::pair<int, int>> seen;
    for (const auto& s : arch_.sites()) {
      if (s.zone != inst.zone) {
        continue;
      }
      const int a = occupant_[arch_.trapIndex(s.left)];
      const int b = occupant_[arch_.trapIndex(s.right)];
      if (a >= 0 && b >= 0) {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        if (intended.count(key) == 0) {
          violate(idx_, "unintended pairing",
                  "qubits " + std::to_string(a) + " and " + std::to_string(b) +
                      " share a site without a gate");
          continue;
        }
        seen.insert(key);
        ++out_.perQubit[a].nCz;
        ++out_.perQubit[b].nCz;
        if (!realized_.back().insert(key).second) {
          violate(idx_, "duplicate gate", "gate realised twice in a stage");
        }
      } else if (a >= 0 || b >= 0) {
        ++out_.nExc;
      }
    }
    for (const auto& key : intended) {
      if (seen.count(key) == 0) {
        violate(idx_, "unrealized gate",
                "qubits " + std::to_string(key.first) + " and " +
                    std::to_string(key.second) + " are not at one site");
      }
    }
  }

  auto checkOrder(const std::map<int, double>& pos, double minSep,
                  const char* what) -> bool {
    std::optional<double> prev;
    for (const auto& [id, p] : pos) {
      if (prev && p - *prev < minSep - kTol) {
        violate(idx_, "ordering",
                std::string("AOD ") + what + " out of order or closer than min_sep");
        return false;
      }
      prev = p;
    }
    return true;
  }

  void job(const ZairInst& inst) {
    double minSep = arch_.maxMinSep();
    for (const auto& a : arch_.aods()) {
      if (a.id == inst.aod) {
        minSep = a.minSep;
      }
    }
    if (inst.aod < 0) {
      violate(idx_, "structure", "job without AOD");
    }
    if (inst.aod >= 0) {
      // jobs on one AOD may run out of program order, so compare intervals
      auto& spans = aodBusy_[inst.aod];
      for (const auto& [b, e] : spans) {
        if (inst.beginTime < e - 1e-6 && b < inst.endTime - 1e-6) {
          violate(idx_, "timing", "AOD used by overlapping jobs");
          break;
        }
      }
      spans.emplace_back(inst.beginTime, inst.endTime);
    }
    if (inst.beginLocs.size() != inst.endLocs.size()) {
      violate(idx_, "structure", "begin_locs and end_locs differ in shape");
      return;
    }
    // expected AOD coordinates (row id, col id) and destination per qubit
    std::map<int, std::pair<int, int>> expect;
    std::map<int, QLoc> dest;
    std::vector<double> xs;
    std::vector<int> qubits;
    for (std::size_t r = 0; r < inst.beginLocs.size(); ++r) {
      if (inst.beginLocs[r].size() != inst.endLocs[r].size()) {
        violate(idx_, "structure", "begin_locs and end_locs differ in shape");
        return;
      }
      for (std::size_t k = 0; k < inst.beginLocs[r].size(); ++k) {
        const auto& b = inst.beginLocs[r][k];
        const auto& e = inst.endLocs[r][k];
        if (b.q != e.q || !arch_.hasTrap(b.slm, b.r, b.c) ||
            !arch_.hasTrap(e.slm, e.r, e.c) || !validQubit(b.q)) {
          violate(idx_, "structure", "invalid qloc in job");
          return;
        }
        if (!at(b)) {
          violate(idx_, "location",
                  "qubit " + std::to_string(b.q) + " is not at its begin location");
          return;
        }
        if (dest.count(b.q) != 0) {
          violate(idx_, "structure", "qubit appears twice in one job");
          return;
        }
        dest[b.q] = e;
        qubits.push_back(b.q);
        const double x = arch_.trap(b.slm, b.r, b.c).pos.x;
        if (std::none_of(xs.begin(), xs.end(),
                         [&](double v) { return std::abs(v - x) <= kTol; })) {
          xs.push_back(x);
        }
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t r = 0; r < inst.beginLocs.size(); ++r) {
      for (const auto& b : inst.beginLocs[r]) {
        const double x = arch_.trap(b.slm, b.r, b.c).pos.x;
        const auto c = std::find_if(xs.begin(), xs.end(), [&](double v) {
                         return std::abs(v - x) <= kTol;
                       }) - xs.begin();
        expect[b.q] = {static_cast<int>(r), static_cast<int>(c)};
      }
    }
    touch(qubits, inst);

    std::map<int, double> rows;
    std::map<int, double> cols;
    std::map<std::pair<int, int>, int> carried;
    const auto dropAt = [&](const std::pair<int, int>& rc, int q) {
      const Point p{cols[rc.second], rows[rc.first]};
      const auto t = arch_.trapAt(p);
      if (!t) {
        violate(idx_, "alignment", "qubit " + std::to_string(q) +
                                       " released away from any trap");
        return;
      }
      auto& occ = occupant_[arch_.trapIndex(*t)];
      if (occ >= 0) {
        violate(idx_, "occupancy", "qubit " + std::to_string(q) +
                                       " dropped onto an occupied trap");
        return;
      }
      const auto& e = dest[q];
      if (!(*t == TrapRef{e.slm, e.r, e.c, {}})) {
        violate(idx_, "location",
                "qubit " + std::to_string(q) + " released at the wrong trap");
      }
      occ = q;
      where_[q] = *t;
      ++out_.perQubit[q].nTran;
      ++out_.nTran;
    };

    for (const auto& m : inst.insts) {
      switch (m.kind) {
      case MachineKind::Activate: {
        std::vector<int> newRows;
        std::vector<int> newCols;
        for (std::size_t k = 0; k < m.rowIds.size(); ++k) {
          if (!rows.emplace(m.rowIds[k], m.rowBegin[k]).second) {
            violate(idx_, "structure", "row activated twice");
          }
          newRows.push_back(m.rowIds[k]);
        }
        for (std::size_t k = 0; k < m.colIds.size(); ++k) {
          if (!cols.emplace(m.colIds[k], m.colBegin[k]).second) {
            violate(idx_, "structure", "column activated twice");
          }
          newCols.push_back(m.colIds[k]);
        }
        checkOrder(rows, minSep, "rows");
        checkOrder(cols, minSep, "columns");
        const auto isNew = [](const std::vector<int>& v, int id) {
          return std::find(v.begin(), v.end(), id) != v.end();
        };
        for (const auto& [r, y] : rows) {
          for (const auto& [c, x] : cols) {
            if (!isNew(newRows, r) && !isNew(newCols, c)) {
              continue;
            }
            const auto t = arch_.trapAt({x, y});
            if (!t) {
              continue;
            }
            auto& occ = occupant_[arch_.trapIndex(*t)];
            if (occ < 0) {
              continue;
            }
            const auto it = expect.find(occ);
            if (it == expect.end() || it->second != std::pair{r, c}) {
              violate(idx_, "unwanted pickup",
                      "qubit " + std::to_string(occ) + " picked up by mistake");
              continue;
            }
            carried[{r, c}] = occ;
            where_[occ].reset();
            ++out_.perQubit[occ].nTran;
            ++out_.nTran;
            occ = -1;
          }
        }
        break;
      }
      case MachineKind::ParkMove:
      case MachineKind::Move: {
        std::map<int, double> endRows = rows;
        std::map<int, double> endCols = cols;
        bool ok = true;
        for (std::size_t k = 0; k < m.rowIds.size(); ++k) {
          const auto it = rows.find(m.rowIds[k]);
          if (it == rows.end() || std::abs(it->second - m.rowBegin[k]) > kTol) {
            ok = false;
          } else {
            endRows[m.rowIds[k]] = m.rowEnd[k];
          }
        }
        for (std::size_t k = 0; k < m.colIds.size(); ++k) {
          const auto it = cols.find(m.colIds[k]);
          if (it == cols.end() || std::abs(it->second - m.colBegin[k]) > kTol) {
            ok = false;
          } else {
            endCols[m.colIds[k]] = m.colEnd[k];
          }
        }
        if (!ok) {
          violate(idx_, "structure", "move does not start at the AOD state");
          break;
        }
        std::map<int, double> midRows;
        std::map<int, double> midCols;
        for (const auto& [id, y] : rows) {
          midRows[id] = (y + endRows[id]) / 2;
        }
        for (const auto& [id, x] : cols) {
          midCols[id] = (x + endCols[id]) / 2;
        }
        for (const auto* r : {&rows, &midRows, &endRows}) {
          checkOrder(*r, minSep, "rows");
        }
        for (const auto* c : {&cols, &midCols, &endCols}) {
          checkOrder(*c, minSep, "columns");
        }
        double disp = 0;
        for (const auto& [rc, q] : carried) {
          disp = std::max(disp, std::hypot(endCols[rc.second] - cols[rc.second],
                                           endRows[rc.first] - rows[rc.first]));
        }
        if (m.duration < movementTime(disp, hw_) - 1e-6) {
          violate(idx_, "timing", "move faster than the acceleration limit");
        }
        rows = endRows;
        cols = endCols;
        break;
      }
      case MachineKind::Deactivate: {
        std::set<int> offRows(m.rowIds.begin(), m.rowIds.end());
        std::set<int> offCols(m.colIds.begin(), m.colIds.end());
        for (std::size_t k = 0; k < m.rowIds.size(); ++k) {
          const auto it = rows.find(m.rowIds[k]);
          if (it == rows.end() || std::abs(it->second - m.rowBegin[k]) > kTol) {
            violate(idx_, "structure", "deactivating an inactive row");
          }
        }
        for (std::size_t k = 0; k < m.colIds.size(); ++k) {
          const auto it = cols.find(m.colIds[k]);
          if (it == cols.end() || std::abs(it->second - m.colBegin[k]) > kTol) {
            violate(idx_, "structure", "deactivating an inactive column");
          }
        }
        for (auto it = carried.begin(); it != carried.end();) {
          if (offRows.count(it->first.first) != 0 ||
              offCols.count(it->first.second) != 0) {
            dropAt(it->first, it->second);
            it = carried.erase(it);
          } else {
            ++it;
          }
        }
        for (const int r : offRows) {
          rows.erase(r);
        }
        for (const int c : offCols) {
          cols.erase(c);
        }
        break;
      }
      }
    }
    if (!rows.empty() || !cols.empty() || !carried.empty()) {
      violate(idx_, "structure", "AOD not empty at the end of the job");
      for (const auto& [rc, q] : carried) {
        (void)rc;
        where_[q].reset();
      }
    }
    for (const auto& [q, e] : dest) {
      if (!where_[q] || !(*where_[q] == TrapRef{e.slm, e.r, e.c, {}})) {
        violate(idx_, "location",
                "qubit " + std::to_string(q) + " did not reach its end location");
      }
    }
  }

  void checkCircuit(const StagedCircuit& circuit) {
    const int stages = circuit.numRydbergStages();
    if (static_cast<int>(realized_.size()) != stages) {
      violate(-1, "unrealized gate",
              "program has " + std::to_string(realized_.size()) +
                  " Rydberg stages, circuit has " + std::to_string(stages));
    }
    for (int t = 1; t <= std::min<int>(stages, realized_.size()); ++t) {
      std::set<std::pair<int, int>> want;
      for (const auto& [a, b] : circuit.rydbergGates(t)) {
        want.emplace(std::min(a, b), std::max(a, b));
      }
      if (want != realized_[t - 1]) {
        violate(-1, "unrealized gate",
                "stage " + std::to_string(t) +
                    " does not realise exactly its circuit gates");
      }
    }
  }

  const Architecture& arch_;
  HardwareParams hw_;
  std::vector<int> occupant_;
  std::vector<std::optional<TrapRef>> where_;
  std::vector<double> busyUntil_;
  std::map<int, std::vector<std::pair<double, double>>> aodBusy_;
  std::vector<std::set<std::pair<int, int>>> realized_;
  ReplayCounters out_;
  int idx_ = 0;
};

} // namespace

auto validateReplay(const ZairProgram& program, const Architecture& arch,
                    const StagedCircuit* circuit, const HardwareParams& hw)
    -> ReplayCounters {
  return Replayer(arch, hw).run(program, circuit);
}

} // namespace zac
