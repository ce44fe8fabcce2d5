#include "qgs/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qgs/error.hpp"

namespace qgs {

std::uint64_t GroverPlan::iterations() const {
  if (k_best > std::numeric_limits<std::uint64_t>::max())
    throw Error(ErrorKind::Domain, "k_best does not fit in 64 bits");
  return static_cast<std::uint64_t>(k_best);
}

std::vector<Gate> build_clause_fragment(const Clause& clause, std::size_t clause_index,
                                        std::size_t num_vars, std::size_t width) {
  const std::size_t ancilla = num_vars + clause_index;
  if (ancilla >= width)
    throw Error(ErrorKind::Index, "ancilla qubit " + std::to_string(ancilla) +
                                      " out of range for width " + std::to_string(width));
  const auto a = static_cast<Qubit>(ancilla);
  std::vector<Gate> gates;
  std::vector<Qubit> controls;
  for (Literal lit : clause) {
    if (lit.bit() >= num_vars)
      throw Error(ErrorKind::Index, "literal " + std::to_string(lit.value()) + " out of range");
    controls.push_back(static_cast<Qubit>(lit.bit()));
  }
  // Controls fire exactly when every literal is false; the ancilla starts
  // flipped to 1 and is reset only in that case.
  for (Literal lit : clause)
    if (lit.is_positive()) gates.push_back(Gate::x(static_cast<Qubit>(lit.bit())));
  gates.push_back(Gate::x(a));
  gates.push_back(Gate::mcx(std::move(controls), a));
  for (Literal lit : clause)
    if (lit.is_positive()) gates.push_back(Gate::x(static_cast<Qubit>(lit.bit())));
  return gates;
}

Circuit build_oracle(const Cnf& cnf) {
  const std::size_t n = cnf.num_vars();
  const std::size_t m = cnf.num_clauses();
  if (m == 0) throw Error(ErrorKind::EmptyFormula, "formula has no clauses to build an oracle from");
  const std::size_t width = n + m + 1;
  const auto target = static_cast<Qubit>(n + m);

  std::vector<Gate> compute;
  for (std::size_t i = 0; i < m; ++i) {
    auto fragment = build_clause_fragment(cnf.clauses()[i], i, n, width);
    compute.insert(compute.end(), fragment.begin(), fragment.end());
  }

  std::vector<Gate> gates;
  gates.reserve(2 * compute.size() + 5);
  gates.push_back(Gate::x(target));
  gates.push_back(Gate::h(target));
  gates.insert(gates.end(), compute.begin(), compute.end());
  std::vector<Qubit> ancillas(m);
  for (std::size_t i = 0; i < m; ++i) ancillas[i] = static_cast<Qubit>(n + i);
  gates.push_back(Gate::mcx(std::move(ancillas), target));
  // every gate is self-inverse, so the adjoint is the reversed list
  gates.insert(gates.end(), compute.rbegin(), compute.rend());
  gates.push_back(Gate::h(target));
  gates.push_back(Gate::x(target));
  return Circuit(width, Registers::oracle_layout(n, m), std::move(gates));
}

std::vector<Gate> build_diffusion(std::size_t num_vars) {
  if (num_vars == 0) throw Error(ErrorKind::Domain, "diffusion needs at least one qubit");
  std::vector<Gate> gates;
  const auto n = static_cast<Qubit>(num_vars);
  for (Qubit q = 0; q < n; ++q) gates.push_back(Gate::h(q));
  for (Qubit q = 0; q < n; ++q) gates.push_back(Gate::x(q));
  if (n == 1) {
    gates.push_back(Gate::z(0));
  } else {
    std::vector<Qubit> controls(n - 1);
    for (Qubit q = 0; q + 1 < n; ++q) controls[q] = q;
    gates.push_back(Gate::mcz(std::move(controls), n - 1));
  }
  for (Qubit q = 0; q < n; ++q) gates.push_back(Gate::x(q));
  for (Qubit q = 0; q < n; ++q) gates.push_back(Gate::h(q));
  return gates;
}

double model_fraction(std::size_t num_vars, const BigInt& model_count) {
  if (model_count <= 0) return 0.0;
  // keep ~62 significant bits of M before converting
  const auto bits = static_cast<long>(boost::multiprecision::msb(model_count)) + 1;
  const long shift = bits > 62 ? bits - 62 : 0;
  const BigInt head = model_count >> shift;
  const auto mantissa = static_cast<double>(static_cast<std::uint64_t>(head));
  return std::ldexp(mantissa, static_cast<int>(shift - static_cast<long>(num_vars)));
}

namespace {

double theta_half_of(std::size_t num_vars, const BigInt& model_count) {
  const double fraction = model_fraction(num_vars, model_count);
  if (fraction > 0.0) return std::asin(std::sqrt(std::min(1.0, fraction)));
  // fraction underflowed: asin(sqrt(r)) ~ sqrt(r), evaluated in the log domain
  const auto bits = static_cast<long>(boost::multiprecision::msb(model_count)) + 1;
  const long shift = bits > 62 ? bits - 62 : 0;
  const auto mantissa = static_cast<double>(static_cast<std::uint64_t>(model_count >> shift));
  const double log_fraction =
      std::log(mantissa) + (static_cast<double>(shift) - static_cast<double>(num_vars)) * std::numbers::ln2;
  return std::exp(0.5 * log_fraction);
}

}  // namespace

GroverPlan plan(std::size_t num_vars, const BigInt& model_count) {
  GroverPlan p;
  p.num_vars = num_vars;
  p.search_space = BigInt(1) << num_vars;
  p.model_count = model_count;
  if (model_count == 0)
    throw Error(ErrorKind::NoSolutions, "formula has no models; nothing to amplify");
  if (model_count < 0 || model_count > p.search_space)
    throw Error(ErrorKind::Domain, "model count outside 1..2^n");
  p.theta_half = theta_half_of(num_vars, model_count);
  if (2 * model_count < p.search_space) {
    const double k = std::floor(std::numbers::pi / (4.0 * p.theta_half));
    p.k_best = BigInt(k);
  } else {
    p.k_best = 0;
  }
  return p;
}

Circuit build_grover_rounds(const Cnf& cnf, std::uint64_t rounds) {
  const std::size_t n = cnf.num_vars();
  const std::size_t m = cnf.num_clauses();
  if (n == 0) throw Error(ErrorKind::Domain, "formula has no variables");
  std::vector<Gate> gates;
  for (std::size_t q = 0; q < n; ++q) gates.push_back(Gate::h(static_cast<Qubit>(q)));
  if (rounds > 0) {
    const Circuit oracle = build_oracle(cnf);
    const auto diffusion = build_diffusion(n);
    gates.reserve(gates.size() + rounds * (oracle.gate_count() + diffusion.size()));
    for (std::uint64_t r = 0; r < rounds; ++r) {
      gates.insert(gates.end(), oracle.gates().begin(), oracle.gates().end());
      gates.insert(gates.end(), diffusion.begin(), diffusion.end());
    }
  }
  // width law holds even for the bare Hadamard layer
  return Circuit(n + m + 1, Registers::oracle_layout(n, m), std::move(gates));
}

std::pair<Circuit, GroverPlan> build_grover(const Cnf& cnf, const BigInt& model_count,
                                            std::optional<std::uint64_t> rounds) {
  GroverPlan p = plan(cnf.num_vars(), model_count);
  p.num_clauses = cnf.num_clauses();
  const std::uint64_t k = rounds ? *rounds : p.iterations();
  return {build_grover_rounds(cnf, k), std::move(p)};
}

double analytic_success(std::size_t num_vars, const BigInt& model_count, std::uint64_t rounds) {
  const BigInt space = BigInt(1) << num_vars;
  if (model_count > space) throw Error(ErrorKind::Domain, "model count exceeds 2^n");
  if (model_count < 0) throw Error(ErrorKind::Domain, "negative model count");
  if (model_count == 0) return 0.0;
  const double angle = (2.0 * static_cast<double>(rounds) + 1.0) * theta_half_of(num_vars, model_count);
  const double s = std::sin(angle);
  return s * s;
}

}  // namespace qgs
