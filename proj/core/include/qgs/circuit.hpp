#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgs/bigint.hpp"

namespace qgs {

using Qubit = std::uint32_t;

enum class GateKind { X, H, Z, CX, MCX, MCZ };

const char* gate_name(GateKind kind) noexcept;

/// Gate over 0-based qubit indices. Single-qubit gates carry no controls; CX
/// carries exactly one; MCX/MCZ carry one or more. Every gate is self-inverse.
struct Gate {
  GateKind kind;
  std::vector<Qubit> controls;
  Qubit target;

  static Gate x(Qubit t) { return {GateKind::X, {}, t}; }
  static Gate h(Qubit t) { return {GateKind::H, {}, t}; }
  static Gate z(Qubit t) { return {GateKind::Z, {}, t}; }
  static Gate cx(Qubit c, Qubit t) { return {GateKind::CX, {c}, t}; }
  static Gate mcx(std::vector<Qubit> controls, Qubit t) { return {GateKind::MCX, std::move(controls), t}; }
  static Gate mcz(std::vector<Qubit> controls, Qubit t) { return {GateKind::MCZ, std::move(controls), t}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Role of every qubit. For oracle circuits: variables 0..n-1, clause
/// ancillas n..n+m-1, target n+m.
struct Registers {
  std::vector<Qubit> variables;
  std::vector<Qubit> ancillas;
  std::optional<Qubit> target;

  /// All qubits are variables.
  static Registers plain(std::size_t width);
  /// Layout of a formula circuit over n variables and m clauses.
  static Registers oracle_layout(std::size_t num_vars, std::size_t num_clauses);

  friend bool operator==(const Registers&, const Registers&) = default;
};

/// Immutable gate list with declared width and register roles.
class Circuit {
 public:
  /// Validates that the registers partition 0..width-1 and every gate is in range.
  Circuit(std::size_t width, Registers registers, std::vector<Gate> gates);
  Circuit(std::size_t width, std::vector<Gate> gates)
      : Circuit(width, Registers::plain(width), std::move(gates)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t gate_count() const noexcept { return gates_.size(); }
  std::span<const Gate> gates() const noexcept { return gates_; }
  const Registers& registers() const noexcept { return registers_; }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t width_;
  Registers registers_;
  std::vector<Gate> gates_;
};

/// ASAP layered depth: each gate sits one layer above the latest gate on any
/// qubit it touches.
std::size_t depth(const Circuit& circuit);
std::size_t depth(std::span<const Gate> gates, std::size_t width);

/// Depth of a k-round Grover circuit given the depth of the 1-round circuit;
/// the Hadamard initialization layer is shared: k * (depth_k1 - 1) + 1.
std::uint64_t total_depth(std::uint64_t depth_k1, std::uint64_t k);
BigInt total_depth(std::uint64_t depth_k1, const BigInt& k);

std::string to_json(const Circuit& circuit);
Circuit circuit_from_json(std::string_view text);

std::string to_qasm3(const Circuit& circuit);

}  // namespace qgs
