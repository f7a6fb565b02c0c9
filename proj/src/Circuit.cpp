#include "zac/Circuit.hpp"

#include "zac/Errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

namespace zac {

auto StagedCircuit::numRydbergStages() const -> int {
  int n = 0;
  for (const auto& s : stages) {
    n += s.kind == StageKind::Rydberg ? 1 : 0;
  }
  return n;
}

auto StagedCircuit::rydbergGates(int t) const
    -> std::vector<std::pair<int, int>> {
  std::vector<std::pair<int, int>> out;
  for (const auto& s : stages) {
    if (s.kind == StageKind::Rydberg && s.t == t) {
      for (const auto& g : s.gates) {
        out.emplace_back(g.qubits[0], g.qubits[1]);
      }
    }
  }
  return out;
}

namespace {

// Angle expressions: numbers, pi, + - * /, unary minus, parentheses.
class ExprParser {
public:
  explicit ExprParser(std::string s) : s_(std::move(s)) {}

  auto parse() -> double {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) {
      throw InputError("bad parameter expression '" + s_ + "'");
    }
    return v;
  }

private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }
  auto eat(char c) -> bool {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  auto sum() -> double {
    double v = product();
    for (;;) {
      if (eat('+')) {
        v += product();
      } else if (eat('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }
  auto product() -> double {
    double v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }
  auto unary() -> double {
    if (eat('-')) {
      return -unary();
    }
    if (eat('+')) {
      return unary();
    }
    return atom();
  }
  auto atom() -> double {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) {
        throw InputError("unbalanced parentheses in '" + s_ + "'");
      }
      return v;
    }
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return std::numbers::pi;
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      throw InputError("bad parameter expression '" + s_ + "'");
    }
    pos_ += used;
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

auto trim(const std::string& s) -> std::string {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

auto splitTopLevel(const std::string& s, char sep) -> std::vector<std::string> {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (const char c : s) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    }
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

auto parseQasm(const std::string& text) -> ParsedCircuit {
  std::string clean;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto cpos = line.find("//");
      clean += (cpos == std::string::npos ? line : line.substr(0, cpos));
      clean += '\n';
    }
  }
  ParsedCircuit out;
  std::map<std::string, std::pair<int, int>> regs; // name -> (offset, size)

  const auto resolve = [&](const std::string& arg) -> int {
    const auto lb = arg.find('[');
    const auto rb = arg.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
      throw InputError("malformed qubit argument '" + arg + "'");
    }
    const auto name = trim(arg.substr(0, lb));
    const auto it = regs.find(name);
    if (it == regs.end()) {
      throw InputError("unknown register '" + name + "'");
    }
    int idx = 0;
    try {
      idx = std::stoi(arg.substr(lb + 1, rb - lb - 1));
    } catch (const std::exception&) {
      throw InputError("malformed qubit index in '" + arg + "'");
    }
    if (idx < 0 || idx >= it->second.second) {
      throw InputError("qubit index out of range in '" + arg + "'");
    }
    return it->second.first + idx;
  };

  std::size_t start = 0;
  int index = 0;
  while (start < clean.size()) {
    const auto semi = clean.find(';', start);
    const auto stmt = trim(clean.substr(
        start, semi == std::string::npos ? std::string::npos : semi - start));
    if (semi == std::string::npos) {
      if (!stmt.empty()) {
        throw InputError("missing ';' after '" + stmt + "'");
      }
      break;
    }
    start = semi + 1;
    if (stmt.empty()) {
      continue;
    }
    // Split "name(params) args" into head and arguments.
    std::string head;
    std::string params;
    std::string args;
    {
      std::size_t i = 0;
      while (i < stmt.size() &&
             (std::isalnum(static_cast<unsigned char>(stmt[i])) ||
              stmt[i] == '_' || stmt[i] == '.')) {
        ++i;
      }
      head = stmt.substr(0, i);
      auto rest = trim(stmt.substr(i));
      if (!rest.empty() && rest[0] == '(') {
        const auto close = rest.find(')');
        if (close == std::string::npos) {
          throw InputError("unbalanced parentheses in '" + stmt + "'");
        }
        // Find the matching parenthesis.
        int depth = 0;
        std::size_t j = 0;
        for (; j < rest.size(); ++j) {
          depth += rest[j] == '(' ? 1 : rest[j] == ')' ? -1 : 0;
          if (depth == 0) {
            break;
          }
        }
        if (j == rest.size()) {
          throw InputError("unbalanced parentheses in '" + stmt + "'");
        }
        params = rest.substr(1, j - 1);
        rest = trim(rest.substr(j + 1));
      }
      args = rest;
    }
    if (head == "OPENQASM" || head == "include" || head == "creg" ||
        head == "barrier") {
      continue;
    }
    if (head == "qreg") {
      const auto lb = args.find('[');
      const auto rb = args.find(']');
      if (lb == std::string::npos || rb == std::string::npos) {
        throw InputError("malformed qreg '" + stmt + "'");
      }
      const auto name = trim(args.substr(0, lb));
      int size = 0;
      try {
        size = std::stoi(args.substr(lb + 1, rb - lb - 1));
      } catch (const std::exception&) {
        throw InputError("malformed qreg '" + stmt + "'");
      }
      if (size < 0 || regs.count(name) != 0) {
        throw InputError("invalid qreg '" + stmt + "'");
      }
      regs[name] = {out.numQubits, size};
      out.numQubits += size;
      continue;
    }
    if (head == "measure") {
      throw InputError("measure is not supported");
    }
    if (head == "cz") {
      const auto qs = splitTopLevel(args, ',');
      if (qs.size() != 2 || !params.empty()) {
        throw InputError("malformed cz '" + stmt + "'");
      }
      Gate g;
      g.kind = GateKind::CZ;
      g.qubits = {resolve(qs[0]), resolve(qs[1])};
      if (g.qubits[0] == g.qubits[1]) {
        throw InputError("cz on a single qubit '" + stmt + "'");
      }
      g.index = index++;
      out.gates.push_back(g);
      continue;
    }
    if (head == "u3" || head == "u" || head == "U") {
      const auto ps = splitTopLevel(params, ',');
      const auto qs = splitTopLevel(args, ',');
      if (ps.size() != 3 || qs.size() != 1) {
        throw InputError("malformed u3 '" + stmt + "'");
      }
      Gate g;
      g.kind = GateKind::U3;
      g.qubits = {resolve(qs[0])};
      for (std::size_t k = 0; k < 3; ++k) {
        g.params[k] = ExprParser(ps[k]).parse();
      }
      g.index = index++;
      out.gates.push_back(g);
      continue;
    }
    throw InputError("unsupported gate '" + head +
                     "': transpile to {cz, u3} first");
  }
  return out;
}

auto parseJsonGates(const std::string& text) -> ParsedCircuit {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("gate list: ") + e.what());
  }
  ParsedCircuit out;
  if (!doc.is_object() || !doc.contains("num_qubits") ||
      !doc["num_qubits"].is_number_integer() || !doc.contains("gates") ||
      !doc["gates"].is_array()) {
    throw InputError("gate list: expected {num_qubits, gates}");
  }
  out.numQubits = doc["num_qubits"].get<int>();
  if (out.numQubits < 0) {
    throw InputError("gate list: negative num_qubits");
  }
  int index = 0;
  for (const auto& j : doc["gates"]) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("qubits") ||
        !j["qubits"].is_array()) {
      throw InputError("gate list: malformed gate " + j.dump());
    }
    Gate g;
    const auto kind = j["kind"].get<std::string>();
    for (const auto& q : j["qubits"]) {
      if (!q.is_number_integer()) {
        throw InputError("gate list: malformed qubit in " + j.dump());
      }
      const int v = q.get<int>();
      if (v < 0 || v >= out.numQubits) {
        throw InputError("gate list: qubit index out of range in " + j.dump());
      }
      g.qubits.push_back(v);
    }
    if (kind == "cz") {
      g.kind = GateKind::CZ;
      if (g.qubits.size() != 2 || g.qubits[0] == g.qubits[1]) {
        throw InputError("gate list: cz needs two distinct qubits");
      }
    } else if (kind == "u3") {
      g.kind = GateKind::U3;
      if (g.qubits.size() != 1 || !j.contains("params") ||
          !j["params"].is_array() || j["params"].size() != 3) {
        throw InputError("gate list: u3 needs one qubit and three params");
      }
      for (std::size_t k = 0; k < 3; ++k) {
        g.params[k] = j["params"][k].get<double>();
      }
    } else {
      throw InputError("unsupported gate '" + kind +
                       "': transpile to {cz, u3} first");
    }
    g.index = index++;
    out.gates.push_back(g);
  }
  return out;
}

} // namespace

auto parseCircuit(const std::string& text, CircuitFormat format)
    -> ParsedCircuit {
  return format == CircuitFormat::Qasm ? parseQasm(text) : parseJsonGates(text);
}

auto loadCircuit(const std::string& path, CircuitFormat format)
    -> ParsedCircuit {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open circuit file " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parseCircuit(ss.str(), format);
}

auto stageAsap(int numQubits, const std::vector<Gate>& gates)
    -> StagedCircuit {
  StagedCircuit out;
  out.numQubits = numQubits;
  // level of the last CZ on each qubit; U3s land in the slot after it
  std::vector<int> lastCz(numQubits, 0);
  std::vector<std::vector<Gate>> czLevels;
  // slot -> list of 1Q layers
  std::map<int, std::vector<std::vector<Gate>>> oneq;
  std::map<std::pair<int, int>, int> depthInSlot; // (slot, qubit) -> count
  for (const auto& g : gates) {
    for (const int q : g.qubits) {
      if (q < 0 || q >= numQubits) {
        throw InputError("qubit index out of range");
      }
    }
    if (g.kind == GateKind::CZ) {
      const int lvl = std::max(lastCz[g.qubits[0]], lastCz[g.qubits[1]]) + 1;
      lastCz[g.qubits[0]] = lastCz[g.qubits[1]] = lvl;
      if (static_cast<int>(czLevels.size()) < lvl) {
        czLevels.resize(lvl);
      }
      czLevels[lvl - 1].push_back(g);
      ++out.g2;
    } else {
      const int slot = lastCz[g.qubits[0]];
      const int layer = depthInSlot[{slot, g.qubits[0]}]++;
      auto& layers = oneq[slot];
      if (static_cast<int>(layers.size()) <= layer) {
        layers.resize(layer + 1);
      }
      layers[layer].push_back(g);
      ++out.g1;
    }
  }
  const auto emitSlot = [&](int slot) {
    const auto it = oneq.find(slot);
    if (it == oneq.end()) {
      return;
    }
    for (auto& layer : it->second) {
      out.stages.push_back({StageKind::OneQ, slot, std::move(layer)});
    }
  };
  emitSlot(0);
  for (std::size_t l = 0; l < czLevels.size(); ++l) {
    const int t = static_cast<int>(l) + 1;
    out.stages.push_back({StageKind::Rydberg, t, czLevels[l]});
    emitSlot(t);
  }
  return out;
}

} // namespace zac
