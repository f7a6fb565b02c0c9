#include "zac/Compiler.hpp"
#include "zac/Errors.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

namespace {

auto writeFile(const std::string& path, const std::string& text) -> void {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw zac::InputError("cannot write " + path);
  }
  out << text;
}

auto parseBlocks(const std::string& s) -> std::pair<int, int> {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) {
    throw zac::InputError("--blocks expects RxC, got '" + s + "'");
  }
  try {
    const int r = std::stoi(s.substr(0, x));
    const int c = std::stoi(s.substr(x + 1));
    if (r < 1 || c < 1) {
      throw zac::InputError("--blocks needs positive sizes");
    }
    return {r, c};
  } catch (const std::logic_error&) {
    throw zac::InputError("--blocks expects RxC, got '" + s + "'");
  }
}

} // namespace

auto main(int argc, char** argv) -> int {
  CLI::App app{"Compile {cz, u3} circuits for zoned neutral-atom machines"};
  std::string archPath;
  std::string circuitPath;
  std::string format;
  std::string zairPath;
  std::string reportPath;
  std::string hwPath;
  std::string blocks;
  zac::RunOptions opts;
  bool noSa = false;
  bool noReuse = false;
  bool staticPlacement = false;

  app.add_option("--arch", archPath, "architecture JSON")->required();
  app.add_option("--circuit", circuitPath, "circuit file")->required();
  app.add_option("--format", format, "qasm or json (default: by extension)")
      ->check(CLI::IsMember({"qasm", "json"}));
  app.add_option("--out-zair", zairPath, "write the ZAIR program here");
  app.add_option("--out-report", reportPath, "write the report here");
  app.add_option("--hw-params", hwPath, "hardware parameter JSON");
  app.add_option("--seed", opts.config.seed, "annealing seed");
  app.add_option("--sa-iters", opts.config.saIterations,
                 "annealing iteration limit");
  app.add_flag("--no-sa", noSa, "keep the sequential initial placement");
  app.add_flag("--no-reuse", noReuse, "always return qubits to storage");
  app.add_flag("--static-placement", staticPlacement,
               "return qubits to their initial traps");
  app.add_option("--aods", opts.numAods, "number of AODs");
  app.add_option("--blocks", blocks, "logical-block shape RxC");
  app.add_option("--k", opts.config.k, "neighbouring traps for returns");
  app.add_option("--delta", opts.config.delta, "initial site search radius");
  app.add_option("--alpha", opts.config.alpha, "lookahead weight");

  CLI11_PARSE(app, argc, argv);
  opts.config.sa = !noSa;
  opts.config.reuse = !noReuse;
  opts.config.dynamicPlacement = !staticPlacement;

  try {
    if (!blocks.empty()) {
      std::tie(opts.blockRows, opts.blockCols) = parseBlocks(blocks);
    }
    if (!hwPath.empty()) {
      opts.hw = zac::HardwareParams::fromFile(hwPath);
    }
    if (opts.numAods < 0) {
      throw zac::InputError("--aods must be positive");
    }
    const auto arch = zac::Architecture::fromFile(archPath);
    for (const auto& w : arch.warnings()) {
      std::cerr << "warning: " << w << "\n";
    }
    if (format.empty()) {
      format = circuitPath.size() >= 5 &&
                       circuitPath.substr(circuitPath.size() - 5) == ".json"
                   ? "json"
                   : "qasm";
    }
    const auto parsed = zac::loadCircuit(
        circuitPath, format == "json" ? zac::CircuitFormat::JsonGates
                                      : zac::CircuitFormat::Qasm);
    const auto staged = zac::stageAsap(parsed.numQubits, parsed.gates);
    const auto result = zac::compile(arch, staged, opts);
    const auto report = zac::reportJson(result, opts);
    if (!zairPath.empty()) {
      writeFile(zairPath, zac::serialize(result.program));
    }
    if (!reportPath.empty()) {
      writeFile(reportPath, report.dump(1) + "\n");
    } else {
      std::cout << "fidelity " << result.report.fidelity << "\n"
                << "duration_us " << result.report.duration << "\n";
    }
  } catch (const zac::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const zac::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const zac::ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
