#pragma once

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgs/bigint.hpp"

namespace qgs {

/// Signed, nonzero DIMACS literal. |value| is the 1-based variable index.
class Literal {
 public:
  explicit Literal(int value);

  static Literal positive(int var) { return Literal(var); }
  static Literal negative(int var) { return Literal(-var); }

  int value() const noexcept { return value_; }
  int var() const noexcept { return std::abs(value_); }
  /// 0-based qubit / bit position of the variable.
  std::size_t bit() const noexcept { return static_cast<std::size_t>(var() - 1); }
  bool is_positive() const noexcept { return value_ > 0; }
  Literal operator~() const noexcept { return Literal(-value_); }

  friend bool operator==(Literal, Literal) = default;
  friend auto operator<=>(Literal, Literal) = default;

 private:
  int value_;
};

/// Disjunction of literals: nonempty, no duplicates, no complementary pair.
class Clause {
 public:
  explicit Clause(std::vector<Literal> literals);
  Clause(std::initializer_list<int> literals);

  std::span<const Literal> literals() const noexcept { return literals_; }
  std::size_t size() const noexcept { return literals_.size(); }
  auto begin() const noexcept { return literals_.begin(); }
  auto end() const noexcept { return literals_.end(); }

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> literals_;
};

/// Truth assignment over variables 1..n. Bit i-1 holds variable i, so the
/// packed form is exactly the basis-state index of the variable register.
class Assignment {
 public:
  explicit Assignment(std::size_t num_vars) : bits_(num_vars, false) {}
  explicit Assignment(std::vector<bool> bits) : bits_(std::move(bits)) {}

  static Assignment from_index(std::size_t num_vars, std::uint64_t index);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t bit) const { return bits_[bit]; }
  bool value_of(int var) const { return bits_.at(static_cast<std::size_t>(var - 1)); }
  void set(int var, bool value) { bits_.at(static_cast<std::size_t>(var - 1)) = value; }

  /// Packed basis index; requires size() <= 64.
  std::uint64_t index() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<bool> bits_;
};

/// Formula in conjunctive normal form. Clause order is significant: it fixes
/// the ancilla layout of every circuit built from the formula.
class Cnf {
 public:
  Cnf() = default;
  Cnf(std::size_t num_vars, std::vector<Clause> clauses);

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  std::span<const Clause> clauses() const noexcept { return clauses_; }

  friend bool operator==(const Cnf&, const Cnf&) = default;

 private:
  std::size_t num_vars_ = 0;
  std::vector<Clause> clauses_;
};

Cnf parse_dimacs(std::string_view text);
std::string emit_dimacs(const Cnf& cnf);

bool evaluate(const Cnf& cnf, const Assignment& assignment);

/// Largest variable count accepted by the brute-force enumerator and the
/// fast simulation backend.
inline constexpr std::size_t kMaxEnumerationVars = 24;

/// Clause bit masks over the packed basis index (n <= 64). A clause holds on
/// index x iff (x & pos) | (~x & neg) is nonzero.
class PackedCnf {
 public:
  explicit PackedCnf(const Cnf& cnf);

  bool satisfied_by(std::uint64_t index) const noexcept {
    for (const auto& c : clauses_)
      if (((index & c.pos) | (~index & c.neg)) == 0) return false;
    return true;
  }

 private:
  struct Masks {
    std::uint64_t pos;
    std::uint64_t neg;
  };
  std::vector<Masks> clauses_;
};

std::vector<Assignment> enumerate_models(const Cnf& cnf);
/// Same set as enumerate_models, as ascending packed indices.
std::vector<std::uint64_t> enumerate_model_indices(const Cnf& cnf);

struct CountOptions {
  /// Maximum number of search nodes before giving up; 0 means unbounded.
  std::uint64_t node_budget = 50'000'000;
};

/// Exact #SAT by DPLL with unit propagation, lowest-index branching and
/// 2^free multiplication at satisfied leaves.
BigInt count_models(const Cnf& cnf, const CountOptions& options = {});

}  // namespace qgs
