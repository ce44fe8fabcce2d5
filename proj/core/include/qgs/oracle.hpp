#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qgs/bigint.hpp"
#include "qgs/circuit.hpp"
#include "qgs/cnf.hpp"

namespace qgs {

/// Iteration plan for amplitude amplification over N = 2^n basis states of
/// which M are marked.
struct GroverPlan {
  std::size_t num_vars = 0;
  std::size_t num_clauses = 0;
  BigInt search_space;  // N
  BigInt model_count;   // M
  double theta_half = 0.0;  // asin(sqrt(M / N))
  BigInt k_best;

  /// k_best as a machine integer; throws Domain if it does not fit.
  std::uint64_t iterations() const;
};

/// X-conjugated multi-controlled X that leaves ancilla n + clause_index equal
/// to the truth value of the clause.
std::vector<Gate> build_clause_fragment(const Clause& clause, std::size_t clause_index,
                                        std::size_t num_vars, std::size_t width);

/// Phase oracle: |x>|0^m>|0> -> (-1)^f(x) |x>|0^m>|0>, width n + m + 1.
Circuit build_oracle(const Cnf& cnf);

/// Reflection about the uniform state over qubits 0..n-1 (global phase -1).
std::vector<Gate> build_diffusion(std::size_t num_vars);

/// M / N as a double without overflowing for large n.
double model_fraction(std::size_t num_vars, const BigInt& model_count);

GroverPlan plan(std::size_t num_vars, const BigInt& model_count);

/// Hadamard layer on the variables followed by `rounds` oracle+diffusion rounds.
Circuit build_grover_rounds(const Cnf& cnf, std::uint64_t rounds);

/// As above, with `rounds` defaulting to the plan's k_best.
std::pair<Circuit, GroverPlan> build_grover(const Cnf& cnf, const BigInt& model_count,
                                            std::optional<std::uint64_t> rounds = std::nullopt);

/// sin^2((2k + 1) asin(sqrt(M / N))).
double analytic_success(std::size_t num_vars, const BigInt& model_count, std::uint64_t rounds);

}  // namespace qgs
