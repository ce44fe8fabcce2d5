#include "qgs/circuit.hpp"

#include <algorithm>

#include "json.hpp"

#include "qgs/error.hpp"

namespace qgs {

const char* gate_name(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::Z: return "z";
    case GateKind::CX: return "cx";
    case GateKind::MCX: return "mcx";
    case GateKind::MCZ: return "mcz";
  }
  return "?";
}

Registers Registers::plain(std::size_t width) {
  Registers r;
  r.variables.resize(width);
  for (std::size_t q = 0; q < width; ++q) r.variables[q] = static_cast<Qubit>(q);
  return r;
}

Registers Registers::oracle_layout(std::size_t num_vars, std::size_t num_clauses) {
  Registers r = plain(num_vars);
  r.ancillas.resize(num_clauses);
  for (std::size_t i = 0; i < num_clauses; ++i) r.ancillas[i] = static_cast<Qubit>(num_vars + i);
  r.target = static_cast<Qubit>(num_vars + num_clauses);
  return r;
}

namespace {

std::string describe(const Gate& g, std::size_t index) {
  return "gate " + std::to_string(index) + " (" + gate_name(g.kind) + ")";
}

void validate_gate(const Gate& g, std::size_t index, std::size_t width) {
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::Index, describe(g, index) + ": " + why);
  };
  if (g.target >= width) fail("target qubit " + std::to_string(g.target) + " out of range");
  switch (g.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::Z:
      if (!g.controls.empty()) fail("single-qubit gate has controls");
      break;
    case GateKind::CX:
      if (g.controls.size() != 1) fail("cx needs exactly one control");
      break;
    case GateKind::MCX:
    case GateKind::MCZ:
      if (g.controls.empty()) fail("needs at least one control");
      break;
  }
  for (auto c : g.controls) {
    if (c >= width) fail("control qubit " + std::to_string(c) + " out of range");
    if (c == g.target) fail("control equals target");
  }
  auto sorted = g.controls;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
    fail("repeated control " + std::to_string(*dup));
}

}  // namespace

Circuit::Circuit(std::size_t width, Registers registers, std::vector<Gate> gates)
    : width_(width), registers_(std::move(registers)), gates_(std::move(gates)) {
  std::vector<int> seen(width_, 0);
  const auto mark = [&](Qubit q) {
    if (q >= width_)
      throw Error(ErrorKind::Index, "register qubit " + std::to_string(q) + " out of range");
    if (seen[q]++)
      throw Error(ErrorKind::Index, "qubit " + std::to_string(q) + " assigned to two registers");
  };
  for (auto q : registers_.variables) mark(q);
  for (auto q : registers_.ancillas) mark(q);
  if (registers_.target) mark(*registers_.target);
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw Error(ErrorKind::Index, "registers do not cover every qubit");
  for (std::size_t i = 0; i < gates_.size(); ++i) validate_gate(gates_[i], i, width_);
}

std::size_t depth(std::span<const Gate> gates, std::size_t width) {
  std::vector<std::size_t> layer(width, 0);
  std::size_t max_layer = 0;
  for (const auto& g : gates) {
    std::size_t top = layer.at(g.target);
    for (auto c : g.controls) top = std::max(top, layer.at(c));
    ++top;
    layer[g.target] = top;
    for (auto c : g.controls) layer[c] = top;
    max_layer = std::max(max_layer, top);
  }
  return max_layer;
}

std::size_t depth(const Circuit& circuit) { return depth(circuit.gates(), circuit.width()); }

std::uint64_t total_depth(std::uint64_t depth_k1, std::uint64_t k) {
  if (depth_k1 == 0) throw Error(ErrorKind::Domain, "depth of the one-round circuit must be >= 1");
  return k * (depth_k1 - 1) + 1;
}

BigInt total_depth(std::uint64_t depth_k1, const BigInt& k) {
  if (depth_k1 == 0) throw Error(ErrorKind::Domain, "depth of the one-round circuit must be >= 1");
  return k * (depth_k1 - 1) + 1;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const Circuit& circuit) {
  using nlohmann::ordered_json;
  ordered_json gates = ordered_json::array();
  for (const auto& g : circuit.gates()) {
    ordered_json jg;
    jg["g"] = gate_name(g.kind);
    if (!g.controls.empty()) jg["c"] = g.controls;
    jg["q"] = ordered_json::array({g.target});
    gates.push_back(std::move(jg));
  }
  const auto& regs = circuit.registers();
  ordered_json doc;
  doc["version"] = 1;
  doc["num_qubits"] = circuit.width();
  doc["registers"] = {
      {"variables", regs.variables},
      {"ancillas", regs.ancillas},
      {"target", regs.target ? ordered_json(*regs.target) : ordered_json(nullptr)},
  };
  doc["gates"] = std::move(gates);
  return doc.dump() + "\n";
}

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing key '") + key + "'");
  return *it;
}

Qubit read_qubit(const json& v, const std::string& path, std::size_t width) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected integer qubit index");
  const auto q = v.get<long long>();
  if (q < 0 || static_cast<unsigned long long>(q) >= width)
    throw SchemaError(path, "qubit " + std::to_string(q) + " out of range for width " +
                                std::to_string(width));
  return static_cast<Qubit>(q);
}

std::vector<Qubit> read_qubits(const json& v, const std::string& path, std::size_t width) {
  if (!v.is_array()) throw SchemaError(path, "expected array");
  std::vector<Qubit> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(read_qubit(v[i], path + "/" + std::to_string(i), width));
  return out;
}

GateKind read_kind(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected gate name string");
  const auto name = v.get<std::string>();
  for (auto k : {GateKind::X, GateKind::H, GateKind::Z, GateKind::CX, GateKind::MCX, GateKind::MCZ})
    if (name == gate_name(k)) return k;
  throw SchemaError(path, "unknown gate '" + name + "'");
}

}  // namespace

Circuit circuit_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected object");
  const auto& version = require(doc, "version", "");
  if (version != 1) throw SchemaError("/version", "unsupported version");
  const auto& nq = require(doc, "num_qubits", "");
  if (!nq.is_number_unsigned()) throw SchemaError("/num_qubits", "expected nonnegative integer");
  const auto width = nq.get<std::size_t>();

  const auto& regs_json = require(doc, "registers", "");
  if (!regs_json.is_object()) throw SchemaError("/registers", "expected object");
  Registers regs;
  regs.variables = read_qubits(require(regs_json, "variables", "/registers"), "/registers/variables", width);
  regs.ancillas = read_qubits(require(regs_json, "ancillas", "/registers"), "/registers/ancillas", width);
  const auto& target = require(regs_json, "target", "/registers");
  if (!target.is_null()) regs.target = read_qubit(target, "/registers/target", width);

  const auto& gates_json = require(doc, "gates", "");
  if (!gates_json.is_array()) throw SchemaError("/gates", "expected array");
  std::vector<Gate> gates;
  gates.reserve(gates_json.size());
  for (std::size_t i = 0; i < gates_json.size(); ++i) {
    const auto path = "/gates/" + std::to_string(i);
    const auto& jg = gates_json[i];
    if (!jg.is_object()) throw SchemaError(path, "expected object");
    Gate g{read_kind(require(jg, "g", path), path + "/g"), {}, 0};
    const auto targets = read_qubits(require(jg, "q", path), path + "/q", width);
    if (targets.size() != 1) throw SchemaError(path + "/q", "expected exactly one target");
    g.target = targets.front();
    const bool controlled = g.kind == GateKind::CX || g.kind == GateKind::MCX || g.kind == GateKind::MCZ;
    if (auto c = jg.find("c"); c != jg.end()) {
      if (!controlled) throw SchemaError(path + "/c", "controls on an uncontrolled gate");
      g.controls = read_qubits(*c, path + "/c", width);
    } else if (controlled) {
      throw SchemaError(path, "missing key 'c'");
    }
    gates.push_back(std::move(g));
  }

  try {
    return Circuit(width, std::move(regs), std::move(gates));
  } catch (const Error& e) {
    throw SchemaError("", e.what());
  }
}

// ---------------------------------------------------------------------------
// OpenQASM 3

std::string to_qasm3(const Circuit& circuit) {
  std::string out = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[" +
                    std::to_string(circuit.width()) + "] q;\n";
  const auto ref = [](Qubit q) { return "q[" + std::to_string(q) + "]"; };
  for (const auto& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::X:
      case GateKind::H:
      case GateKind::Z:
        out += std::string(gate_name(g.kind)) + " " + ref(g.target) + ";\n";
        break;
      case GateKind::CX:
        out += "cx " + ref(g.controls[0]) + ", " + ref(g.target) + ";\n";
        break;
      case GateKind::MCX:
      case GateKind::MCZ: {
        out += "ctrl(" + std::to_string(g.controls.size()) + ") @ " +
               (g.kind == GateKind::MCX ? "x" : "z");
        for (std::size_t i = 0; i < g.controls.size(); ++i)
          out += (i == 0 ? " " : ", ") + ref(g.controls[i]);
        out += ", " + ref(g.target) + ";\n";
        break;
      }
    }
  }
  return out;
}

}  // namespace qgs
