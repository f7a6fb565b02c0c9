#pragma once

#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace zac {

/// Absolute tolerance for coordinate comparisons (µm).
inline constexpr double kTol = 1e-6;

struct Point {
  double x = 0;
  double y = 0;
  auto operator==(const Point& o) const -> bool = default;
};

/// Euclidean distance in µm.
auto distance(const Point& a, const Point& b) -> double;

struct AodSpec {
  int id = 0;
  int maxNumCol = 1;
  int maxNumRow = 1;
  double minSep = 1;
  nlohmann::json extra = nlohmann::json::object();
};

struct SlmSpec {
  int id = 0;
  int numCol = 1;
  int numRow = 1;
  Point sep;
  Point offset;
  nlohmann::json extra = nlohmann::json::object();

  [[nodiscard]] auto position(int r, int c) const -> Point {
    return {offset.x + c * sep.x, offset.y + r * sep.y};
  }
};

enum class ZoneKind { Entanglement, Storage, Readout };

struct ZoneSpec {
  int id = 0;
  ZoneKind kind = ZoneKind::Storage;
  Point offset;
  Point dimension;
  std::vector<SlmSpec> slms;
  nlohmann::json extra = nlohmann::json::object();
};

struct TrapRef {
  int slm = -1;
  int row = -1;
  int col = -1;
  Point pos;

  /// Identity is the (slm, row, col) triple; the position is derived.
  auto operator==(const TrapRef& o) const -> bool {
    return slm == o.slm && row == o.row && col == o.col;
  }
  auto operator<(const TrapRef& o) const -> bool {
    return std::tie(slm, row, col) < std::tie(o.slm, o.row, o.col);
  }
};

struct RydbergSite {
  int index = -1; ///< global index into Architecture::sites()
  int zone = -1;  ///< zone id
  int row = -1;
  int col = -1;
  TrapRef left;
  TrapRef right;

  [[nodiscard]] auto ref() const -> const Point& { return left.pos; }
};

class Architecture {
public:
  static auto fromJson(const nlohmann::json& doc) -> Architecture;
  static auto fromFile(const std::string& path) -> Architecture;
  [[nodiscard]] auto toJson() const -> nlohmann::json;

  [[nodiscard]] auto aods() const -> const std::vector<AodSpec>& {
    return aods_;
  }
  [[nodiscard]] auto zones() const -> const std::vector<ZoneSpec>& {
    return zones_;
  }
  [[nodiscard]] auto zone(int zoneId) const -> const ZoneSpec&;
  [[nodiscard]] auto sites() const -> const std::vector<RydbergSite>& {
    return sites_;
  }
  [[nodiscard]] auto storageTraps() const -> const std::vector<TrapRef>& {
    return storageTraps_;
  }
  [[nodiscard]] auto entanglementZoneIds() const -> std::vector<int>;
  [[nodiscard]] auto warnings() const -> const std::vector<std::string>& {
    return warnings_;
  }

  [[nodiscard]] auto slm(int slmId) const -> const SlmSpec&;
  [[nodiscard]] auto hasTrap(int slmId, int r, int c) const -> bool;
  [[nodiscard]] auto trap(int slmId, int r, int c) const -> TrapRef;
  /// Dense index over all traps of all SLMs, usable for occupancy arrays.
  [[nodiscard]] auto trapIndex(const TrapRef& t) const -> std::size_t;
  [[nodiscard]] auto numTraps() const -> std::size_t { return numTraps_; }
  [[nodiscard]] auto isStorage(const TrapRef& t) const -> bool;
  [[nodiscard]] auto zoneOfSlm(int slmId) const -> const ZoneSpec&;
  /// Trap at a position (any SLM), if one lies within tolerance.
  [[nodiscard]] auto trapAt(const Point& p) const -> std::optional<TrapRef>;

  /// Site that owns the trap, or -1 for storage/readout traps.
  [[nodiscard]] auto siteOfTrap(const TrapRef& t) const -> int;
  /// Site index for (zone, row, col) or -1.
  [[nodiscard]] auto siteIndex(int zoneId, int r, int c) const -> int;
  [[nodiscard]] auto numSiteRows(int zoneId) const -> int;
  [[nodiscard]] auto maxSiteCols(int zoneId) const -> int;

  [[nodiscard]] auto nearestSite(const Point& p) const -> const RydbergSite&;
  [[nodiscard]] auto nearestStorageTrap(const Point& p) const -> TrapRef;
  /// Storage traps whose position lies in the closed box [lo, hi].
  [[nodiscard]] auto storageTrapsInBox(const Point& lo, const Point& hi) const
      -> std::vector<TrapRef>;

  /// Largest AOD min_sep; jobs are expanded against it so any AOD can run them.
  [[nodiscard]] auto maxMinSep() const -> double;
  [[nodiscard]] auto aodRowCapacity() const -> int;
  [[nodiscard]] auto aodColCapacity() const -> int;

  /// Coarsen every SLM into blocks of rows x cols traps (logical-block mode).
  [[nodiscard]] auto coarsened(int blockRows, int blockCols) const
      -> Architecture;

  nlohmann::json extra = nlohmann::json::object();

private:
  void derive();

  std::vector<AodSpec> aods_;
  std::vector<ZoneSpec> zones_;
  std::vector<RydbergSite> sites_;
  std::vector<TrapRef> storageTraps_;
  std::vector<std::string> warnings_;

  std::map<int, std::pair<int, int>> slmLoc_; // slm id -> (zone idx, slm idx)
  std::map<int, std::size_t> slmBase_;
  std::size_t numTraps_ = 0;
  std::vector<int> trapSite_; // dense trap index -> site or -1
  std::map<std::tuple<int, int, int>, int> siteLookup_;
};

} // namespace zac
