#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "qgs/circuit.hpp"
#include "qgs/cnf.hpp"

namespace qgs {

using Amplitude = std::complex<double>;

/// Amplitudes over 2^w basis states; bit i of the index is qubit i.
class Statevector {
 public:
  /// |0...0> on `width` qubits.
  explicit Statevector(std::size_t width);
  Statevector(std::size_t width, std::vector<Amplitude> amplitudes);

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::span<Amplitude> amplitudes() noexcept { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;
  std::vector<double> probabilities() const;

  void apply(const Gate& gate);

 private:
  std::size_t width_;
  std::vector<Amplitude> amps_;
};

inline constexpr std::size_t kDefaultGateCap = 26;

/// Runs the circuit from |0...0>, gate by gate.
Statevector run_gate_backend(const Circuit& circuit, std::size_t width_cap = kDefaultGateCap);

/// Block size of the deterministic mean reduction in the fast backend.
inline constexpr std::size_t kReductionBlock = 4096;

struct FastBackendOptions {
  std::size_t threads = 1;
  /// Invoked after every completed iteration with the real amplitudes.
  std::function<void(std::span<const double> amplitudes, std::uint64_t iteration)> observer;
};

/// Grover iterations on the n variable qubits only: phase flip on models,
/// then a <- 2*mean - a. Result is bitwise independent of `threads`.
Statevector run_fast_backend(const Cnf& cnf, std::uint64_t rounds,
                             const FastBackendOptions& options = {});

/// Mean by fixed-block pairwise summation; identical for any thread count.
double deterministic_mean(std::span<const double> values, std::size_t threads = 1);

struct MeasurementCounts {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  /// Outcomes in draw order.
  std::vector<std::uint64_t> sequence;
};

/// Independent draws from the given (not necessarily normalized) weights by
/// inverse-CDF binary search over xoshiro256** uniforms.
MeasurementCounts measure_distribution(std::span<const double> weights, std::uint64_t shots,
                                       std::uint64_t seed);
MeasurementCounts measure(const Statevector& sv, std::uint64_t shots, std::uint64_t seed);

double success_probability(const Statevector& sv, std::span<const std::uint64_t> models);

/// Amplitudes of the first `num_qubits` qubits, assuming every other qubit is
/// in |0>. Throws Domain if more than `tolerance` probability lies outside.
Statevector restrict_to_low_qubits(const Statevector& sv, std::size_t num_qubits,
                                   double tolerance = 1e-9);

}  // namespace qgs
