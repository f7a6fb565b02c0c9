#include "zac/Architecture.hpp"

#include "zac/Errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace zac {

using nlohmann::json;

auto distance(const Point& a, const Point& b) -> double {
  return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

auto require(const json& obj, const char* key, const std::string& where)
    -> const json& {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

auto readInt(const json& obj, const char* key, const std::string& where)
    -> int {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw InputError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

auto readNumber(const json& obj, const char* key, const std::string& where)
    -> double {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) {
    throw InputError(where + ": field '" + key + "' must be a number");
  }
  return v.get<double>();
}

auto readPoint(const json& obj, const char* key, const std::string& where)
    -> Point {
  const auto& v = require(obj, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw InputError(where + ": field '" + key + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

auto extras(const json& obj, std::initializer_list<const char*> known)
    -> json {
  json out = json::object();
  for (const auto& [k, v] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* s) {
          return k == s;
        }) == known.end()) {
      out[k] = v;
    }
  }
  return out;
}

auto kindName(ZoneKind k) -> const char* {
  switch (k) {
  case ZoneKind::Entanglement:
    return "entanglement";
  case ZoneKind::Storage:
    return "storage";
  case ZoneKind::Readout:
    return "readout";
  }
  return "storage";
}

auto pointJson(const Point& p) -> json { return json::array({p.x, p.y}); }

// Gap between two axis-aligned boxes; 0 when they touch or overlap.
auto boxGap(const ZoneSpec& a, const ZoneSpec& b) -> double {
  const double dx = std::max({0.0, b.offset.x - (a.offset.x + a.dimension.x),
                              a.offset.x - (b.offset.x + b.dimension.x)});
  const double dy = std::max({0.0, b.offset.y - (a.offset.y + a.dimension.y),
                              a.offset.y - (b.offset.y + b.dimension.y)});
  return std::hypot(dx, dy);
}

auto boxesOverlap(const ZoneSpec& a, const ZoneSpec& b) -> bool {
  const double ox = std::min(a.offset.x + a.dimension.x,
                             b.offset.x + b.dimension.x) -
                    std::max(a.offset.x, b.offset.x);
  const double oy = std::min(a.offset.y + a.dimension.y,
                             b.offset.y + b.dimension.y) -
                    std::max(a.offset.y, b.offset.y);
  return ox > kTol && oy > kTol;
}

} // namespace

auto Architecture::fromJson(const json& doc) -> Architecture {
  if (!doc.is_object()) {
    throw InputError("architecture: top level must be an object");
  }
  Architecture arch;
  arch.extra = extras(doc, {"aods", "zones"});
  const auto& aods = require(doc, "aods", "architecture");
  if (!aods.is_array()) {
    throw InputError("architecture: 'aods' must be a list");
  }
  std::set<int> aodIds;
  for (const auto& a : aods) {
    AodSpec spec;
    spec.id = readInt(a, "aod_id", "aod");
    const auto where = "aod " + std::to_string(spec.id);
    spec.maxNumCol = readInt(a, "max_num_col", where);
    spec.maxNumRow = readInt(a, "max_num_row", where);
    spec.minSep = readNumber(a, "min_sep", where);
    spec.extra = extras(a, {"aod_id", "max_num_col", "max_num_row", "min_sep"});
    if (spec.maxNumCol < 1 || spec.maxNumRow < 1) {
      throw InputError(where + ": max_num_col and max_num_row must be >= 1");
    }
    if (!(spec.minSep > 0)) {
      throw InputError(where + ": min_sep must be positive");
    }
    if (!aodIds.insert(spec.id).second) {
      throw InputError(where + ": duplicate aod_id");
    }
    arch.aods_.push_back(std::move(spec));
  }
  if (arch.aods_.empty()) {
    throw InputError("architecture: at least one AOD is required");
  }

  const auto& zones = require(doc, "zones", "architecture");
  if (!zones.is_array()) {
    throw InputError("architecture: 'zones' must be a list");
  }
  std::set<int> zoneIds;
  std::set<int> slmIds;
  for (const auto& z : zones) {
    ZoneSpec zone;
    zone.id = readInt(z, "zone_id", "zone");
    const auto where = "zone " + std::to_string(zone.id);
    const auto& kind = require(z, "kind", where);
    if (kind == "entanglement") {
      zone.kind = ZoneKind::Entanglement;
    } else if (kind == "storage") {
      zone.kind = ZoneKind::Storage;
    } else if (kind == "readout") {
      zone.kind = ZoneKind::Readout;
    } else {
      throw InputError(where + ": unknown kind " + kind.dump());
    }
    zone.offset = readPoint(z, "offset", where);
    zone.dimension = readPoint(z, "dimension", where);
    if (zone.dimension.x < 0 || zone.dimension.y < 0) {
      throw InputError(where + ": negative dimension");
    }
    zone.extra =
        extras(z, {"zone_id", "kind", "offset", "dimension", "slms"});
    const auto& slms = require(z, "slms", where);
    if (!slms.is_array()) {
      throw InputError(where + ": 'slms' must be a list");
    }
    for (const auto& s : slms) {
      SlmSpec slm;
      slm.id = readInt(s, "slm_id", where + " slm");
      const auto sw = "slm " + std::to_string(slm.id);
      slm.numCol = readInt(s, "num_col", sw);
      slm.numRow = readInt(s, "num_row", sw);
      slm.sep = readPoint(s, "sep", sw);
      slm.offset = readPoint(s, "offset", sw);
      slm.extra =
          extras(s, {"slm_id", "num_col", "num_row", "sep", "offset"});
      if (slm.numCol < 1 || slm.numRow < 1) {
        throw InputError(sw + ": num_col and num_row must be >= 1");
      }
      if (!(slm.sep.x > 0) || !(slm.sep.y > 0)) {
        throw InputError(sw + ": separation must be positive");
      }
      if (!slmIds.insert(slm.id).second) {
        throw InputError(sw + ": duplicate slm_id");
      }
      zone.slms.push_back(std::move(slm));
    }
    if (!zoneIds.insert(zone.id).second) {
      throw InputError(where + ": duplicate zone_id");
    }
    arch.zones_.push_back(std::move(zone));
  }
  arch.derive();
  return arch;
}

auto Architecture::fromFile(const std::string& path) -> Architecture {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open architecture file " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("architecture file " + path + ": " + e.what());
  }
  return fromJson(doc);
}

auto Architecture::toJson() const -> json {
  json doc = extra;
  doc["aods"] = json::array();
  for (const auto& a : aods_) {
    json j = a.extra;
    j["aod_id"] = a.id;
    j["max_num_col"] = a.maxNumCol;
    j["max_num_row"] = a.maxNumRow;
    j["min_sep"] = a.minSep;
    doc["aods"].push_back(j);
  }
  doc["zones"] = json::array();
  for (const auto& z : zones_) {
    json j = z.extra;
    j["zone_id"] = z.id;
    j["kind"] = kindName(z.kind);
    j["offset"] = pointJson(z.offset);
    j["dimension"] = pointJson(z.dimension);
    j["slms"] = json::array();
    for (const auto& s : z.slms) {
      json sj = s.extra;
      sj["slm_id"] = s.id;
      sj["num_col"] = s.numCol;
      sj["num_row"] = s.numRow;
      sj["sep"] = pointJson(s.sep);
      sj["offset"] = pointJson(s.offset);
      j["slms"].push_back(sj);
    }
    doc["zones"].push_back(j);
  }
  return doc;
}

void Architecture::derive() {
  bool hasStorage = false;
  bool hasEntanglement = false;
  std::size_t base = 0;
  for (std::size_t zi = 0; zi < zones_.size(); ++zi) {
    const auto& z = zones_[zi];
    hasStorage |= z.kind == ZoneKind::Storage;
    hasEntanglement |= z.kind == ZoneKind::Entanglement;
    for (std::size_t si = 0; si < z.slms.size(); ++si) {
      const auto& s = z.slms[si];
      slmLoc_[s.id] = {static_cast<int>(zi), static_cast<int>(si)};
      slmBase_[s.id] = base;
      base += static_cast<std::size_t>(s.numRow) * s.numCol;
      // Corners suffice since traps form a rectangle.
      for (const auto& p : {s.position(0, 0),
                            s.position(s.numRow - 1, s.numCol - 1)}) {
        if (p.x < z.offset.x - kTol || p.y < z.offset.y - kTol ||
            p.x > z.offset.x + z.dimension.x + kTol ||
            p.y > z.offset.y + z.dimension.y + kTol) {
          throw InputError("slm " + std::to_string(s.id) +
                           ": trap outside zone " + std::to_string(z.id));
        }
      }
    }
  }
  numTraps_ = base;
  if (!hasStorage) {
    throw InputError("architecture: no storage zone");
  }
  if (!hasEntanglement) {
    throw InputError("architecture: no entanglement zone");
  }
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    for (std::size_t j = i + 1; j < zones_.size(); ++j) {
      if (boxesOverlap(zones_[i], zones_[j])) {
        throw InputError("zones " + std::to_string(zones_[i].id) + " and " +
                         std::to_string(zones_[j].id) + " overlap");
      }
    }
  }

  trapSite_.assign(numTraps_, -1);
  double largestSitePitch = 0;
  for (const auto& z : zones_) {
    if (z.kind == ZoneKind::Storage) {
      for (const auto& s : z.slms) {
        for (int r = 0; r < s.numRow; ++r) {
          for (int c = 0; c < s.numCol; ++c) {
            storageTraps_.push_back({s.id, r, c, s.position(r, c)});
          }
        }
      }
    }
    if (z.kind != ZoneKind::Entanglement) {
      continue;
    }
    std::vector<TrapRef> traps;
    for (const auto& s : z.slms) {
      for (int r = 0; r < s.numRow; ++r) {
        for (int c = 0; c < s.numCol; ++c) {
          traps.push_back({s.id, r, c, s.position(r, c)});
        }
      }
    }
    std::sort(traps.begin(), traps.end(),
              [](const TrapRef& a, const TrapRef& b) {
                if (std::abs(a.pos.y - b.pos.y) > kTol) {
                  return a.pos.y < b.pos.y;
                }
                return a.pos.x < b.pos.x;
              });
    int row = -1;
    double rowY = -std::numeric_limits<double>::infinity();
    double prevRowY = rowY;
    std::size_t i = 0;
    while (i < traps.size()) {
      std::size_t j = i;
      while (j < traps.size() && std::abs(traps[j].pos.y - traps[i].pos.y) <= kTol) {
        ++j;
      }
      if ((j - i) % 2 != 0) {
        throw InputError("zone " + std::to_string(z.id) +
                         ": unpaired trap in row y=" +
                         std::to_string(traps[i].pos.y));
      }
      ++row;
      prevRowY = rowY;
      rowY = traps[i].pos.y;
      if (row > 0) {
        largestSitePitch = std::max(largestSitePitch, rowY - prevRowY);
      }
      int col = 0;
      for (std::size_t k = i; k < j; k += 2, ++col) {
        RydbergSite site;
        site.index = static_cast<int>(sites_.size());
        site.zone = z.id;
        site.row = row;
        site.col = col;
        site.left = traps[k];
        site.right = traps[k + 1];
        if (k + 2 < j) {
          largestSitePitch = std::max(
              largestSitePitch, traps[k + 2].pos.x - traps[k + 1].pos.x);
        }
        trapSite_[trapIndex(site.left)] = site.index;
        trapSite_[trapIndex(site.right)] = site.index;
        siteLookup_[{z.id, row, col}] = site.index;
        sites_.push_back(site);
      }
      i = j;
    }
  }

  for (std::size_t i = 0; i < zones_.size(); ++i) {
    for (std::size_t j = i + 1; j < zones_.size(); ++j) {
      if (zones_[i].kind == zones_[j].kind) {
        continue;
      }
      const double gap = boxGap(zones_[i], zones_[j]);
      if (gap + kTol < largestSitePitch) {
        std::ostringstream os;
        os << "zones " << zones_[i].id << " and " << zones_[j].id
           << " are only " << gap << " um apart (site pitch "
           << largestSitePitch << " um)";
        warnings_.push_back(os.str());
      }
    }
  }
}

auto Architecture::zone(int zoneId) const -> const ZoneSpec& {
  for (const auto& z : zones_) {
    if (z.id == zoneId) {
      return z;
    }
  }
  throw InputError("unknown zone " + std::to_string(zoneId));
}

auto Architecture::entanglementZoneIds() const -> std::vector<int> {
  std::vector<int> ids;
  for (const auto& z : zones_) {
    if (z.kind == ZoneKind::Entanglement) {
      ids.push_back(z.id);
    }
  }
  return ids;
}

auto Architecture::slm(int slmId) const -> const SlmSpec& {
  const auto it = slmLoc_.find(slmId);
  if (it == slmLoc_.end()) {
    throw InputError("unknown slm " + std::to_string(slmId));
  }
  return zones_[it->second.first].slms[it->second.second];
}

auto Architecture::zoneOfSlm(int slmId) const -> const ZoneSpec& {
  const auto it = slmLoc_.find(slmId);
  if (it == slmLoc_.end()) {
    throw InputError("unknown slm " + std::to_string(slmId));
  }
  return zones_[it->second.first];
}

auto Architecture::hasTrap(int slmId, int r, int c) const -> bool {
  const auto it = slmLoc_.find(slmId);
  if (it == slmLoc_.end()) {
    return false;
  }
  const auto& s = zones_[it->second.first].slms[it->second.second];
  return r >= 0 && c >= 0 && r < s.numRow && c < s.numCol;
}

auto Architecture::trap(int slmId, int r, int c) const -> TrapRef {
  if (!hasTrap(slmId, r, c)) {
    throw InputError("no trap (" + std::to_string(slmId) + ", " +
                     std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  return {slmId, r, c, slm(slmId).position(r, c)};
}

auto Architecture::trapIndex(const TrapRef& t) const -> std::size_t {
  const auto& s = slm(t.slm);
  return slmBase_.at(t.slm) + static_cast<std::size_t>(t.row) * s.numCol +
         t.col;
}

auto Architecture::isStorage(const TrapRef& t) const -> bool {
  return zoneOfSlm(t.slm).kind == ZoneKind::Storage;
}

auto Architecture::trapAt(const Point& p) const -> std::optional<TrapRef> {
  for (const auto& z : zones_) {
    for (const auto& s : z.slms) {
      const double fc = (p.x - s.offset.x) / s.sep.x;
      const double fr = (p.y - s.offset.y) / s.sep.y;
      const auto c = static_cast<int>(std::lround(fc));
      const auto r = static_cast<int>(std::lround(fr));
      if (r < 0 || c < 0 || r >= s.numRow || c >= s.numCol) {
        continue;
      }
      const auto q = s.position(r, c);
      if (std::abs(q.x - p.x) <= kTol && std::abs(q.y - p.y) <= kTol) {
        return TrapRef{s.id, r, c, q};
      }
    }
  }
  return std::nullopt;
}

auto Architecture::siteOfTrap(const TrapRef& t) const -> int {
  return trapSite_[trapIndex(t)];
}

auto Architecture::siteIndex(int zoneId, int r, int c) const -> int {
  const auto it = siteLookup_.find({zoneId, r, c});
  return it == siteLookup_.end() ? -1 : it->second;
}

auto Architecture::numSiteRows(int zoneId) const -> int {
  int rows = 0;
  for (const auto& s : sites_) {
    if (s.zone == zoneId) {
      rows = std::max(rows, s.row + 1);
    }
  }
  return rows;
}

auto Architecture::maxSiteCols(int zoneId) const -> int {
  int cols = 0;
  for (const auto& s : sites_) {
    if (s.zone == zoneId) {
      cols = std::max(cols, s.col + 1);
    }
  }
  return cols;
}

auto Architecture::nearestSite(const Point& p) const -> const RydbergSite& {
  const RydbergSite* best = nullptr;
  double bestD = std::numeric_limits<double>::infinity();
  for (const auto& s : sites_) {
    const double d = distance(p, s.ref());
    if (best == nullptr || d < bestD - kTol ||
        (d <= bestD + kTol &&
         std::tie(s.row, s.col, s.zone) <
             std::tie(best->row, best->col, best->zone))) {
      best = &s;
      bestD = std::min(bestD, d);
    }
  }
  return *best;
}

auto Architecture::nearestStorageTrap(const Point& p) const -> TrapRef {
  std::optional<TrapRef> best;
  double bestD = std::numeric_limits<double>::infinity();
  for (const auto& z : zones_) {
    if (z.kind != ZoneKind::Storage) {
      continue;
    }
    for (const auto& s : z.slms) {
      // Distance is separable per axis: the minimiser is a floor/ceil index.
      const double fc = (p.x - s.offset.x) / s.sep.x;
      const double fr = (p.y - s.offset.y) / s.sep.y;
      const auto clampC = [&](double v) {
        return std::clamp(static_cast<int>(v), 0, s.numCol - 1);
      };
      const auto clampR = [&](double v) {
        return std::clamp(static_cast<int>(v), 0, s.numRow - 1);
      };
      const int cs[2] = {clampC(std::floor(fc)), clampC(std::ceil(fc))};
      const int rs[2] = {clampR(std::floor(fr)), clampR(std::ceil(fr))};
      for (const int r : rs) {
        for (const int c : cs) {
          const TrapRef t{s.id, r, c, s.position(r, c)};
          const double d = distance(p, t.pos);
          if (!best || d < bestD - kTol ||
              (d <= bestD + kTol && std::tie(t.row, t.col, t.slm) <
                                        std::tie(best->row, best->col,
                                                 best->slm))) {
            best = t;
            bestD = std::min(bestD, d);
          }
        }
      }
    }
  }
  return *best;
}

auto Architecture::storageTrapsInBox(const Point& lo, const Point& hi) const
    -> std::vector<TrapRef> {
  std::vector<TrapRef> out;
  for (const auto& z : zones_) {
    if (z.kind != ZoneKind::Storage) {
      continue;
    }
    for (const auto& s : z.slms) {
      const int c0 = std::max(
          0, static_cast<int>(std::ceil((lo.x - s.offset.x) / s.sep.x - 1e-9)));
      const int c1 = std::min(
          s.numCol - 1,
          static_cast<int>(std::floor((hi.x - s.offset.x) / s.sep.x + 1e-9)));
      const int r0 = std::max(
          0, static_cast<int>(std::ceil((lo.y - s.offset.y) / s.sep.y - 1e-9)));
      const int r1 = std::min(
          s.numRow - 1,
          static_cast<int>(std::floor((hi.y - s.offset.y) / s.sep.y + 1e-9)));
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
          out.push_back({s.id, r, c, s.position(r, c)});
        }
      }
    }
  }
  return out;
}

auto Architecture::maxMinSep() const -> double {
  double m = 0;
  for (const auto& a : aods_) {
    m = std::max(m, a.minSep);
  }
  return m;
}

auto Architecture::aodRowCapacity() const -> int {
  int m = std::numeric_limits<int>::max();
  for (const auto& a : aods_) {
    m = std::min(m, a.maxNumRow);
  }
  return m;
}

auto Architecture::aodColCapacity() const -> int {
  int m = std::numeric_limits<int>::max();
  for (const auto& a : aods_) {
    m = std::min(m, a.maxNumCol);
  }
  return m;
}

auto Architecture::coarsened(int blockRows, int blockCols) const
    -> Architecture {
  if (blockRows < 1 || blockCols < 1) {
    throw InputError("block shape must be at least 1x1");
  }
  json doc = toJson();
  for (auto& z : doc["zones"]) {
    for (auto& s : z["slms"]) {
      const int rows = s["num_row"].get<int>() / blockRows;
      const int cols = s["num_col"].get<int>() / blockCols;
      if (rows < 1 || cols < 1) {
        throw CapacityError("slm " + s["slm_id"].dump() + " is smaller than a " +
                            std::to_string(blockRows) + "x" +
                            std::to_string(blockCols) + " block");
      }
      s["num_row"] = rows;
      s["num_col"] = cols;
      s["sep"] = json::array({s["sep"][0].get<double>() * blockCols,
                              s["sep"][1].get<double>() * blockRows});
    }
  }
  return fromJson(doc);
}

} // namespace zac
