#include "oracles.hpp"

#include "zac/Compiler.hpp"
#include "zac/Errors.hpp"
#include "zac/Zair.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace zac;

namespace {

auto toy() -> const Architecture& {
  static const auto arch = Architecture::fromFile(oracle::dataPath("architectures/toy.json"));
  return arch;
}

auto staged(const std::string& name) -> StagedCircuit {
  const auto c = loadCircuit(oracle::dataPath("circuits/" + name + ".qasm"), CircuitFormat::Qasm);
  return stageAsap(c.numQubits, c.gates);
}

auto initAt(const std::vector<TrapRef>& traps) -> ZairInst {
  ZairInst init;
  init.kind = ZairKind::Init;
  for (int q = 0; q < static_cast<int>(traps.size()); ++q) {
    init.locs.push_back({q, traps[q].slm, traps[q].row, traps[q].col});
  }
  return init;
}

auto rydberg(std::vector<std::array<int, 2>> gates) -> ZairInst {
  ZairInst r;
  r.kind = ZairKind::Rydberg;
  r.zone = 1;
  r.gates = std::move(gates);
  r.endTime = 0.36;
  return r;
}

auto hasKind(const ReplayCounters& c, const std::string& kind) -> bool {
  return std::any_of(c.violations.begin(), c.violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

} // namespace

TEST(Zair, CompiledProgramRoundTrips) {
  const auto c = staged("running_example");
  const auto res = compile(toy(), c, RunOptions{});
  const auto text = serialize(res.program);
  const auto back = parseZair(text);
  EXPECT_EQ(back, res.program);
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(res.program.instructions.front().kind, ZairKind::Init);
  const auto replay = validateReplay(back, toy(), &c);
  EXPECT_TRUE(replay.ok()) << violationsJson(replay.violations).dump();
  EXPECT_EQ(replay.nExc, 0);
  EXPECT_EQ(replay.numPulses, 3);
}

TEST(Zair, EmptyProgramRoundTrips) {
  ZairProgram p;
  EXPECT_EQ(parseZair(serialize(p)), p);
  p.instructions.push_back(initAt({}));
  EXPECT_EQ(parseZair(serialize(p)), p);
  EXPECT_THROW(parseZair("{\"instructions\": [{\"type\": \"teleport\"}]}"), InputError);
  EXPECT_THROW(parseZair("not json"), InputError);
}

TEST(Zair, RandomProgramsRoundTrip) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0, 100);
  for (int trial = 0; trial < 50; ++trial) {
    ZairProgram p;
    p.instructions.push_back(initAt({toy().trap(0, 0, 0), toy().trap(0, 1, 1)}));
    for (int i = 0; i < 6; ++i) {
      ZairInst x;
      switch (rng() % 3) {
      case 0:
        x.kind = ZairKind::OneQGate;
        x.locs = {{0, 0, 0, 0}};
        x.params = {u(rng), u(rng), u(rng)};
        break;
      case 1:
        x = rydberg({{0, 1}});
        break;
      default: {
        x.kind = ZairKind::RearrangeJob;
        x.aod = static_cast<int>(rng() % 2);
        x.beginLocs = {{{0, 0, 0, 0}, {1, 0, 0, 1}}};
        x.endLocs = {{{0, 1, 0, 0}, {1, 2, 0, 0}}};
        MachineInst a;
        a.kind = MachineKind::Activate;
        a.rowIds = {0};
        a.rowBegin = {u(rng)};
        a.colIds = {0, 1};
        a.colBegin = {u(rng), u(rng)};
        MachineInst m;
        m.kind = MachineKind::Move;
        m.rowIds = {0};
        m.rowBegin = {u(rng)};
        m.rowEnd = {u(rng)};
        m.colIds = {0};
        m.colBegin = {u(rng)};
        m.colEnd = {u(rng)};
        m.duration = u(rng);
        x.insts = {a, m};
      }
      }
      x.beginTime = u(rng);
      x.endTime = x.beginTime + u(rng);
      p.instructions.push_back(x);
    }
    EXPECT_EQ(parseZair(serialize(p)), p);
  }
}

TEST(Zair, CorruptedDestinationIsCaught) {
  const auto c = staged("running_example");
  auto program = compile(toy(), c, RunOptions{}).program;
  // send the first moved qubit onto a trap another qubit holds
  auto& init = program.instructions.front();
  for (auto& inst : program.instructions) {
    if (inst.kind == ZairKind::RearrangeJob) {
      auto& loc = inst.endLocs.front().front();
      const auto& other = init.locs[(loc.q + 1) % init.locs.size()];
      loc.slm = other.slm;
      loc.r = other.r;
      loc.c = other.c;
      break;
    }
  }
  EXPECT_FALSE(validateReplay(program, toy(), &c).ok());
}

TEST(Zair, TimingOverlapIsCaught) {
  const auto c = staged("running_example");
  auto program = compile(toy(), c, RunOptions{}).program;
  for (auto& inst : program.instructions) {
    inst.beginTime = 0;
  }
  const auto replay = validateReplay(program, toy(), &c);
  EXPECT_TRUE(hasKind(replay, "timing"));
}

TEST(Zair, LoneQubitCountsAsExcitation) {
  const auto& site = toy().sites()[0];
  ZairProgram p;
  p.instructions = {initAt({site.left, toy().trap(0, 0, 0)}), rydberg({})};
  const auto replay = validateReplay(p, toy());
  EXPECT_TRUE(replay.ok());
  EXPECT_EQ(replay.nExc, 1);
  EXPECT_EQ(replay.numPulses, 1);
}

TEST(Zair, UnintendedPairIsCaught) {
  const auto& site = toy().sites()[0];
  ZairProgram p;
  p.instructions = {initAt({site.left, site.right}), rydberg({})};
  EXPECT_FALSE(validateReplay(p, toy()).ok());
  p.instructions[1] = rydberg({{0, 1}});
  const auto replay = validateReplay(p, toy());
  EXPECT_TRUE(replay.ok()) << violationsJson(replay.violations).dump();
  EXPECT_EQ(replay.perQubit[0].nCz, 1);
}

TEST(Zair, MissingGateIsCaught) {
  const auto& site = toy().sites()[0];
  ZairProgram p;
  p.instructions = {initAt({site.left, toy().trap(0, 0, 0)}), rydberg({{0, 1}})};
  EXPECT_FALSE(validateReplay(p, toy()).ok());
}

TEST(Zair, DuplicateInitIsCaught) {
  ZairProgram p;
  p.instructions = {initAt({toy().trap(0, 0, 0), toy().trap(0, 0, 0)})};
  EXPECT_FALSE(validateReplay(p, toy()).ok());
}
