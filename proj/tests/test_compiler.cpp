#include "oracles.hpp"

#include "zac/Compiler.hpp"
#include "zac/Errors.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace zac;

namespace {

auto arch(const std::string& name) -> const Architecture& {
  static std::map<std::string, Architecture> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache.emplace(name, Architecture::fromFile(
                                 oracle::dataPath("architectures/" + name + ".json")))
             .first;
  }
  return it->second;
}

auto staged(const std::string& name) -> StagedCircuit {
  const auto c = loadCircuit(oracle::dataPath("circuits/" + name + ".qasm"), CircuitFormat::Qasm);
  return stageAsap(c.numQubits, c.gates);
}

} // namespace

TEST(Compiler, RunningExampleOnToy) {
  const auto c = staged("running_example");
  const auto res = compile(arch("toy"), c, RunOptions{});
  EXPECT_TRUE(res.counters.ok());
  EXPECT_EQ(res.counters.nExc, 0);
  EXPECT_EQ(res.report.g2, 6);
  EXPECT_EQ(res.report.g1, 4);
  EXPECT_EQ(res.stages.size(), 3u);
  EXPECT_GT(res.report.fidelity, 0);
  EXPECT_LT(res.report.fidelity, 1);
  EXPECT_NEAR(res.report.duration, makespan(res.timeline), 1e-9);
  EXPECT_EQ(res.report.nTran % 2, 0);
}

TEST(Compiler, VanillaConfiguration) {
  RunOptions opt;
  opt.config.reuse = false;
  opt.config.dynamicPlacement = false;
  opt.config.sa = false;
  const auto c = staged("ghz_8");
  const auto res = compile(arch("reference"), c, opt);
  EXPECT_TRUE(res.counters.ok());
  for (const auto& s : res.stages) {
    EXPECT_FALSE(s.usesReuse);
    EXPECT_EQ(s.keptQubits, 0);
  }
  // a round trip is four transfers per qubit; the last stage stays put
  const int last = static_cast<int>(c.rydbergGates(c.numRydbergStages()).size());
  EXPECT_EQ(res.report.nTran, 4 * 2 * c.g2 - 2 * 2 * last);
  // static placement: qubits return to their initial traps
  const auto& beforeLast = res.plans[res.plans.size() - 2].after;
  for (int q = 0; q < c.numQubits; ++q) {
    EXPECT_EQ(beforeLast[q], res.initial[q]);
  }
}

TEST(Compiler, ReportIsConsistent) {
  const auto c = staged("qft_5");
  RunOptions opt;
  const auto res = compile(arch("two_zone"), c, opt);
  const auto j = reportJson(res, opt);
  EXPECT_DOUBLE_EQ(j["fidelity"].get<double>(), res.report.fidelity);
  const auto& f = j["factors"];
  EXPECT_NEAR(f["one_qubit"].get<double>() * f["two_qubit_excitation"].get<double>() *
                  f["transfer"].get<double>() * f["decoherence"].get<double>(),
              res.report.fidelity, 1e-12);
  EXPECT_EQ(j["counts"]["n_tran"].get<int>(), res.counters.nTran);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(j["num_aods"].get<int>(), 1);
}

TEST(Compiler, EmptyCircuit) {
  const auto res = compile(arch("toy"), stageAsap(3, {}), RunOptions{});
  EXPECT_DOUBLE_EQ(res.report.fidelity, 1);
  EXPECT_DOUBLE_EQ(res.report.duration, 0);
  EXPECT_EQ(res.program.instructions.size(), 1u);
  EXPECT_DOUBLE_EQ(res.bounds.perfectReuse.fidelity, 1);
}

TEST(Compiler, OneQubitOnlyCircuit) {
  const auto res = compile(arch("toy"), stageAsap(2, {{GateKind::U3, {0}, {1, 0, 0}, 0},
                                                      {GateKind::U3, {1}, {1, 0, 0}, 1}}),
                           RunOptions{});
  EXPECT_TRUE(res.counters.ok());
  EXPECT_EQ(res.report.nTran, 0);
  EXPECT_EQ(res.report.g1, 2);
}

TEST(Compiler, TooManyQubits) {
  EXPECT_THROW(compile(arch("toy"), stageAsap(41, {}), RunOptions{}), CapacityError);
}

TEST(Compiler, RejectsBadConfig) {
  RunOptions opt;
  opt.config.alpha = 2;
  EXPECT_THROW(compile(arch("toy"), stageAsap(2, {}), opt), InputError);
}

TEST(Compiler, SeedsAreReproducible) {
  const auto c = staged("random_12");
  RunOptions opt;
  opt.config.seed = 99;
  const auto a = compile(arch("reference"), c, opt);
  const auto b = compile(arch("reference"), c, opt);
  EXPECT_EQ(serialize(a.program), serialize(b.program));
  EXPECT_EQ(reportJson(a, opt).dump(), reportJson(b, opt).dump());
}

TEST(Compiler, MultipleAodsShortenTheSchedule) {
  const auto c = staged("ising_12");
  RunOptions one;
  RunOptions two;
  two.numAods = 2;
  const auto a = compile(arch("reference"), c, one);
  const auto b = compile(arch("reference"), c, two);
  EXPECT_TRUE(b.counters.ok());
  EXPECT_LE(b.report.duration, a.report.duration + 1e-9);
}

TEST(Compiler, LogicalBlocks) {
  RunOptions opt;
  opt.blockRows = 2;
  opt.blockCols = 4;
  const auto c = staged("transversal_cnot");
  const auto res = compile(arch("reference"), c, opt);
  ASSERT_TRUE(res.coarse.has_value());
  EXPECT_EQ(res.coarse->numSiteRows(1), 3);
  EXPECT_EQ(res.coarse->maxSiteCols(1), 5);
  EXPECT_EQ(res.circuit.numQubits, c.numQubits * 8);
  EXPECT_EQ(res.circuit.g2, c.g2 * 8);
  EXPECT_TRUE(res.counters.ok());
  EXPECT_EQ(res.counters.nExc, 0);
}

TEST(Compiler, UserSuppliedPlacement) {
  const auto& a = arch("toy");
  RunOptions opt;
  opt.initialPlacement = Placement{a.trap(0, 3, 4), a.trap(0, 3, 0), a.trap(0, 3, 1),
                                   a.trap(0, 3, 2), a.trap(0, 3, 5), a.trap(0, 3, 3)};
  const auto res = compile(a, staged("running_example"), opt);
  EXPECT_EQ(res.initial, *opt.initialPlacement);
  EXPECT_TRUE(res.counters.ok());
  // g0 lands on the site nearest its midpoint (row 0, column 0)
  const auto& first = res.plans.front();
  EXPECT_EQ(a.sites()[first.gateSites[0]].row, 0);
  EXPECT_EQ(a.sites()[first.gateSites[0]].col, 0);
  EXPECT_NE(first.gateSites[0], first.gateSites[1]);
}
