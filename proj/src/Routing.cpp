#include "zac/Routing.hpp"

#include "zac/Errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace zac {

auto movementsBetween(const Placement& from, const Placement& to)
    -> std::vector<Movement> {
  std::vector<Movement> out;
  for (std::size_t q = 0; q < from.size(); ++q) {
    if (!(from[q] == to[q])) {
      out.push_back({static_cast<int>(q), from[q], to[q]});
    }
  }
  return out;
}

auto movementsForStage(const StagePlan& plan) -> StageMovements {
  return {movementsBetween(plan.before, plan.atRydberg),
          movementsBetween(plan.atRydberg, plan.after)};
}

namespace {

auto sgn(double d) -> int {
  if (std::abs(d) <= kTol) {
    return 0;
  }
  return d < 0 ? -1 : 1;
}

auto axisOk(double a0, double b0, double a1, double b1, double minSep)
    -> bool {
  const double d0 = a0 - b0;
  const double d1 = a1 - b1;
  if (sgn(d0) != sgn(d1)) {
    return false;
  }
  if (sgn(d0) == 0) {
    return true;
  }
  return std::abs(d0) >= minSep - kTol && std::abs(d1) >= minSep - kTol;
}

} // namespace

auto compatible(const Movement& a, const Movement& b, double minSep) -> bool {
  if (a.qubit == b.qubit) {
    return false;
  }
  if (a.from == b.from || a.to == b.to || a.from == b.to || a.to == b.from) {
    return false;
  }
  return axisOk(a.from.pos.x, b.from.pos.x, a.to.pos.x, b.to.pos.x, minSep) &&
         axisOk(a.from.pos.y, b.from.pos.y, a.to.pos.y, b.to.pos.y, minSep);
}

auto batchMovements(const std::vector<Movement>& moves, double minSep,
                    int rowCapacity, int colCapacity)
    -> std::vector<std::vector<Movement>> {
  const std::size_t n = moves.size();
  std::vector<std::vector<char>> conflict(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      conflict[i][j] = conflict[j][i] =
          compatible(moves[i], moves[j], minSep) ? 0 : 1;
    }
  }
  std::vector<char> done(n, 0);
  std::size_t left = n;
  std::vector<std::vector<Movement>> jobs;
  while (left > 0) {
    std::vector<char> cand(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      cand[i] = done[i] == 0 ? 1 : 0;
    }
    std::vector<std::size_t> job;
    std::vector<double> rowsY;
    std::vector<double> colsX;
    const auto countNew = [](const std::vector<double>& v, double x) {
      return std::none_of(v.begin(), v.end(),
                          [&](double y) { return std::abs(x - y) <= kTol; });
    };
    for (;;) {
      std::optional<std::size_t> pick;
      std::size_t pickDeg = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (cand[i] == 0) {
          continue;
        }
        std::size_t deg = 0;
        for (std::size_t j = 0; j < n; ++j) {
          deg += (cand[j] != 0 && conflict[i][j] != 0) ? 1 : 0;
        }
        if (!pick || deg < pickDeg ||
            (deg == pickDeg && moves[i].qubit < moves[*pick].qubit)) {
          pick = i;
          pickDeg = deg;
        }
      }
      if (!pick) {
        break;
      }
      const auto& m = moves[*pick];
      const bool newRow = countNew(rowsY, m.from.pos.y);
      const bool newCol = countNew(colsX, m.from.pos.x);
      cand[*pick] = 0;
      if ((newRow && static_cast<int>(rowsY.size()) >= rowCapacity) ||
          (newCol && static_cast<int>(colsX.size()) >= colCapacity)) {
        continue;
      }
      if (newRow) {
        rowsY.push_back(m.from.pos.y);
      }
      if (newCol) {
        colsX.push_back(m.from.pos.x);
      }
      job.push_back(*pick);
      for (std::size_t j = 0; j < n; ++j) {
        if (conflict[*pick][j] != 0) {
          cand[j] = 0;
        }
      }
    }
    std::vector<Movement> out;
    for (const auto i : job) {
      done[i] = 1;
      out.push_back(moves[i]);
    }
    left -= job.size();
    jobs.push_back(std::move(out));
  }
  return jobs;
}

auto makeJob(int id, const std::vector<Movement>& moves) -> RearrangementJob {
  RearrangementJob job;
  job.id = id;
  job.moves = moves;
  std::vector<Movement> sorted = moves;
  std::sort(sorted.begin(), sorted.end(),
            [](const Movement& a, const Movement& b) {
              if (std::abs(a.from.pos.y - b.from.pos.y) > kTol) {
                return a.from.pos.y < b.from.pos.y;
              }
              return a.from.pos.x < b.from.pos.x;
            });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& m = sorted[i];
    if (i == 0 ||
        std::abs(m.from.pos.y - sorted[i - 1].from.pos.y) > kTol) {
      job.beginLocs.emplace_back();
      job.endLocs.emplace_back();
    }
    job.beginLocs.back().push_back({m.qubit, m.from.slm, m.from.row, m.from.col});
    job.endLocs.back().push_back({m.qubit, m.to.slm, m.to.row, m.to.col});
  }
  return job;
}

namespace {

// Picks one position per item (in order) so consecutive items stay at least
// minSep apart; candidates are listed by preference.
auto chooseOrdered(const std::vector<std::vector<double>>& cands,
                   double minSep) -> std::optional<std::vector<double>> {
  const std::size_t n = cands.size();
  std::vector<std::vector<char>> feasible(n);
  for (std::size_t i = 0; i < n; ++i) {
    feasible[i].assign(cands[i].size(), 0);
    for (std::size_t k = 0; k < cands[i].size(); ++k) {
      if (i == 0) {
        feasible[i][k] = 1;
        continue;
      }
      for (std::size_t kp = 0; kp < cands[i - 1].size(); ++kp) {
        if (feasible[i - 1][kp] != 0 &&
            cands[i][k] - cands[i - 1][kp] >= minSep - kTol) {
          feasible[i][k] = 1;
          break;
        }
      }
    }
  }
  std::vector<double> out(n);
  std::optional<double> nextPos;
  for (std::size_t ii = n; ii-- > 0;) {
    bool found = false;
    for (std::size_t k = 0; k < cands[ii].size(); ++k) {
      if (feasible[ii][k] != 0 &&
          (!nextPos || *nextPos - cands[ii][k] >= minSep - kTol)) {
        out[ii] = cands[ii][k];
        nextPos = cands[ii][k];
        found = true;
        break;
      }
    }
    if (!found) {
      return std::nullopt;
    }
  }
  return out;
}

} // namespace

void expandJob(RearrangementJob& job, const Architecture& arch,
               const HardwareParams& hw, std::vector<char> occupied) {
  job.insts.clear();
  job.pickupTime = job.moveTime = job.dropoffTime = 0;
  const double minSep = arch.maxMinSep();
  const double park = minSep / 2;
  const auto numRows = job.beginLocs.size();
  if (numRows == 0) {
    return;
  }
  const auto fail = [&](const std::string& why) {
    throw ValidationError("job " + std::to_string(job.id) +
                          ": infeasible expansion (" + why + ")");
  };
  const auto posOf = [&](const QLoc& l) {
    return arch.trap(l.slm, l.r, l.c).pos;
  };

  // Column ids follow the order of begin x.
  std::vector<double> colHome;
  for (const auto& row : job.beginLocs) {
    for (const auto& l : row) {
      const double x = posOf(l).x;
      if (std::none_of(colHome.begin(), colHome.end(),
                       [&](double v) { return std::abs(v - x) <= kTol; })) {
        colHome.push_back(x);
      }
    }
  }
  std::sort(colHome.begin(), colHome.end());
  const auto colOf = [&](double x) {
    for (std::size_t c = 0; c < colHome.size(); ++c) {
      if (std::abs(colHome[c] - x) <= kTol) {
        return static_cast<int>(c);
      }
    }
    return -1;
  };
  std::vector<double> rowHome(numRows);
  std::vector<std::vector<int>> rowCols(numRows);
  std::vector<double> colEnd(colHome.size(), 0);
  std::vector<double> rowEnd(numRows, 0);
  for (std::size_t r = 0; r < numRows; ++r) {
    rowHome[r] = posOf(job.beginLocs[r].front()).y;
    rowEnd[r] = posOf(job.endLocs[r].front()).y;
    for (std::size_t k = 0; k < job.beginLocs[r].size(); ++k) {
      const int c = colOf(posOf(job.beginLocs[r][k]).x);
      rowCols[r].push_back(c);
      colEnd[c] = posOf(job.endLocs[r][k]).x;
    }
  }

  const auto occupiedAt = [&](double x, double y) {
    const auto t = arch.trapAt({x, y});
    return t && occupied[arch.trapIndex(*t)] != 0;
  };

  std::vector<double> rowPos(numRows, 0);
  std::vector<double> colPos(colHome.size(), 0);
  std::vector<char> colActive(colHome.size(), 0);
  // (row, col) pairs carrying an atom
  std::vector<std::pair<int, int>> carried;

  const auto atomDisplacement = [&](const std::vector<double>& newRow,
                                    const std::vector<double>& newCol) {
    double d = 0;
    for (const auto& [r, c] : carried) {
      d = std::max(d, std::hypot(newRow[r] - rowPos[r], newCol[c] - colPos[c]));
    }
    return d;
  };

  for (std::size_t i = 0; i < numRows; ++i) {
    const double y = rowHome[i];
    std::vector<char> wanted(colHome.size(), 0);
    for (const int c : rowCols[i]) {
      wanted[c] = 1;
    }
    std::vector<int> newCols;
    for (const int c : rowCols[i]) {
      if (colActive[c] == 0) {
        newCols.push_back(c);
      }
    }
    if (i > 0) {
      // Rows already active: avoid atoms under the columns about to appear.
      std::vector<std::vector<double>> rc;
      for (std::size_t j = 0; j < i; ++j) {
        std::vector<double> cands;
        for (const double p : {rowPos[j], rowHome[j], rowHome[j] - park,
                               rowHome[j] + park}) {
          if (std::any_of(cands.begin(), cands.end(),
                          [&](double v) { return std::abs(v - p) <= kTol; })) {
            continue;
          }
          const bool clash = std::any_of(
              newCols.begin(), newCols.end(),
              [&](int c) { return occupiedAt(colHome[c], p); });
          if (!clash) {
            cands.push_back(p);
          }
        }
        rc.push_back(cands);
      }
      rc.push_back({y});
      const auto rows = chooseOrdered(rc, minSep);
      if (!rows) {
        fail("no parking for rows before row " + std::to_string(i));
      }
      // Active columns: wanted ones sit at home, others avoid atoms of row i.
      std::vector<std::vector<double>> cc;
      std::vector<int> order;
      for (std::size_t c = 0; c < colHome.size(); ++c) {
        if (colActive[c] == 0 && wanted[c] == 0) {
          continue;
        }
        order.push_back(static_cast<int>(c));
        if (wanted[c] != 0) {
          cc.push_back({colHome[c]});
          continue;
        }
        std::vector<double> cands;
        for (const double p : {colPos[c], colHome[c], colHome[c] - park,
                               colHome[c] + park}) {
          if (std::any_of(cands.begin(), cands.end(),
                          [&](double v) { return std::abs(v - p) <= kTol; })) {
            continue;
          }
          if (!occupiedAt(p, y)) {
            cands.push_back(p);
          }
        }
        cc.push_back(cands);
      }
      const auto cols = chooseOrdered(cc, minSep);
      if (!cols) {
        fail("no parking for columns before row " + std::to_string(i));
      }
      std::vector<double> newRowPos = rowPos;
      std::vector<double> newColPos = colPos;
      for (std::size_t j = 0; j < i; ++j) {
        newRowPos[j] = (*rows)[j];
      }
      for (std::size_t k = 0; k < order.size(); ++k) {
        if (colActive[order[k]] != 0) {
          newColPos[order[k]] = (*cols)[k];
        }
      }
      MachineInst pm;
      pm.kind = MachineKind::ParkMove;
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(newRowPos[j] - rowPos[j]) > kTol) {
          pm.rowIds.push_back(static_cast<int>(j));
          pm.rowBegin.push_back(rowPos[j]);
          pm.rowEnd.push_back(newRowPos[j]);
        }
      }
      for (std::size_t c = 0; c < colHome.size(); ++c) {
        if (colActive[c] != 0 && std::abs(newColPos[c] - colPos[c]) > kTol) {
          pm.colIds.push_back(static_cast<int>(c));
          pm.colBegin.push_back(colPos[c]);
          pm.colEnd.push_back(newColPos[c]);
        }
      }
      if (!pm.rowIds.empty() || !pm.colIds.empty()) {
        pm.duration = movementTime(atomDisplacement(newRowPos, newColPos), hw);
        job.pickupTime += pm.duration;
        job.insts.push_back(pm);
        rowPos = newRowPos;
        colPos = newColPos;
      }
    }
    MachineInst act;
    act.kind = MachineKind::Activate;
    act.rowIds = {static_cast<int>(i)};
    act.rowBegin = {y};
    rowPos[i] = y;
    for (const int c : newCols) {
      act.colIds.push_back(c);
      act.colBegin.push_back(colHome[c]);
      colActive[c] = 1;
      colPos[c] = colHome[c];
    }
    for (const int c : rowCols[i]) {
      const auto t = arch.trapAt({colHome[c], y});
      if (!t) {
        fail("begin location is not a trap");
      }
      occupied[arch.trapIndex(*t)] = 0;
      carried.emplace_back(static_cast<int>(i), c);
    }
    job.pickupTime += hw.tTran;
    job.insts.push_back(act);
  }

  for (std::size_t r = 1; r < numRows; ++r) {
    if (rowEnd[r] - rowEnd[r - 1] < minSep - kTol) {
      fail("end rows out of order");
    }
  }
  for (std::size_t c = 1; c < colHome.size(); ++c) {
    if (colEnd[c] - colEnd[c - 1] < minSep - kTol) {
      fail("end columns out of order");
    }
  }
  MachineInst mv;
  mv.kind = MachineKind::Move;
  for (std::size_t r = 0; r < numRows; ++r) {
    mv.rowIds.push_back(static_cast<int>(r));
    mv.rowBegin.push_back(rowPos[r]);
    mv.rowEnd.push_back(rowEnd[r]);
  }
  for (std::size_t c = 0; c < colHome.size(); ++c) {
    mv.colIds.push_back(static_cast<int>(c));
    mv.colBegin.push_back(colPos[c]);
    mv.colEnd.push_back(colEnd[c]);
  }
  mv.duration = movementTime(atomDisplacement(rowEnd, colEnd), hw);
  job.moveTime = mv.duration;
  job.insts.push_back(mv);

  for (std::size_t r = 0; r < numRows; ++r) {
    MachineInst de;
    de.kind = MachineKind::Deactivate;
    de.rowIds = {static_cast<int>(r)};
    de.rowBegin = {rowEnd[r]};
    if (r + 1 == numRows) {
      de.colIds = mv.colIds;
      de.colBegin = colEnd;
    }
    job.dropoffTime += hw.tTran;
    job.insts.push_back(de);
  }
}

} // namespace zac
