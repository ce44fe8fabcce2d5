#include "qgs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qgs/error.hpp"
#include "qgs/rng.hpp"

namespace qgs {

namespace {

// Runs fn(begin, end) over [0, count) split into contiguous chunks.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count / 1024 + 1));
  if (threads == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

std::uint64_t bit(Qubit q) { return std::uint64_t{1} << q; }

std::uint64_t control_mask(const Gate& g) {
  std::uint64_t mask = 0;
  for (auto c : g.controls) mask |= bit(c);
  return mask;
}

}  // namespace

Statevector::Statevector(std::size_t width) : width_(width) {
  if (width >= 48) throw Error(ErrorKind::WidthExceeded, "statevector too wide");
  amps_.assign(std::size_t{1} << width, Amplitude{});
  amps_[0] = 1.0;
}

Statevector::Statevector(std::size_t width, std::vector<Amplitude> amplitudes)
    : width_(width), amps_(std::move(amplitudes)) {
  if (width >= 48 || amps_.size() != (std::size_t{1} << width))
    throw Error(ErrorKind::LengthMismatch, "amplitude count must be 2^width");
}

double Statevector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Amplitude& a) { return std::norm(a); });
  return p;
}

void Statevector::apply(const Gate& g) {
  if (g.target >= width_) throw Error(ErrorKind::Index, "gate target outside statevector");
  for (auto c : g.controls)
    if (c >= width_) throw Error(ErrorKind::Index, "gate control outside statevector");

  const std::uint64_t t = bit(g.target);
  const std::size_t size = amps_.size();
  switch (g.kind) {
    case GateKind::X:
      for (std::size_t i = 0; i < size; ++i)
        if (!(i & t)) std::swap(amps_[i], amps_[i | t]);
      break;
    case GateKind::H: {
      constexpr double r = std::numbers::sqrt2 / 2.0;
      for (std::size_t i = 0; i < size; ++i) {
        if (i & t) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | t];
        amps_[i] = r * (a0 + a1);
        amps_[i | t] = r * (a0 - a1);
      }
      break;
    }
    case GateKind::Z:
      for (std::size_t i = 0; i < size; ++i)
        if (i & t) amps_[i] = -amps_[i];
      break;
    case GateKind::CX:
    case GateKind::MCX: {
      const std::uint64_t cm = control_mask(g);
      for (std::size_t i = 0; i < size; ++i)
        if ((i & cm) == cm && !(i & t)) std::swap(amps_[i], amps_[i | t]);
      break;
    }
    case GateKind::MCZ: {
      const std::uint64_t mask = control_mask(g) | t;
      for (std::size_t i = 0; i < size; ++i)
        if ((i & mask) == mask) amps_[i] = -amps_[i];
      break;
    }
  }
}

Statevector run_gate_backend(const Circuit& circuit, std::size_t width_cap) {
  if (circuit.width() > width_cap)
    throw Error(ErrorKind::WidthExceeded,
                "circuit width " + std::to_string(circuit.width()) + " exceeds gate-backend cap of " +
                    std::to_string(width_cap) + " qubits");
  Statevector sv(circuit.width());
  for (const auto& g : circuit.gates()) sv.apply(g);
  return sv;
}

double deterministic_mean(std::span<const double> values, std::size_t threads) {
  if (values.empty()) return 0.0;
  const std::size_t blocks = (values.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t lo = b * kReductionBlock;
      const std::size_t hi = std::min(values.size(), lo + kReductionBlock);
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += values[i];
      partial[b] = s;
    }
  });
  // pairwise tree over block sums
  for (std::size_t stride = 1; stride < blocks; stride *= 2)
    for (std::size_t i = 0; i + stride < blocks; i += 2 * stride) partial[i] += partial[i + stride];
  return partial[0] / static_cast<double>(values.size());
}

Statevector run_fast_backend(const Cnf& cnf, std::uint64_t rounds, const FastBackendOptions& options) {
  const std::size_t n = cnf.num_vars();
  if (n > kMaxEnumerationVars)
    throw Error(ErrorKind::TooManyVariables,
                std::to_string(n) + " variables exceeds fast-backend limit of " +
                    std::to_string(kMaxEnumerationVars));
  const std::size_t size = std::size_t{1} << n;
  const PackedCnf packed(cnf);
  const std::size_t threads = std::max<std::size_t>(1, options.threads);

  std::vector<std::uint8_t> marked(size);
  parallel_for(size, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) marked[x] = packed.satisfied_by(x) ? 1 : 0;
  });

  std::vector<double> amps(size, 1.0 / std::sqrt(static_cast<double>(size)));
  for (std::uint64_t r = 0; r < rounds; ++r) {
    parallel_for(size, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t x = begin; x < end; ++x)
        if (marked[x]) amps[x] = -amps[x];
    });
    const double twice_mean = 2.0 * deterministic_mean(amps, threads);
    parallel_for(size, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t x = begin; x < end; ++x) amps[x] = twice_mean - amps[x];
    });
    if (options.observer) options.observer(amps, r + 1);
  }

  std::vector<Amplitude> out(size);
  std::transform(amps.begin(), amps.end(), out.begin(), [](double a) { return Amplitude(a, 0.0); });
  return Statevector(n, std::move(out));
}

MeasurementCounts measure_distribution(std::span<const double> weights, std::uint64_t shots,
                                       std::uint64_t seed) {
  if (shots == 0) throw Error(ErrorKind::InvalidArgument, "shots must be >= 1");
  if (weights.empty()) throw Error(ErrorKind::InvalidArgument, "empty distribution");
  std::vector<double> cdf(weights.size());
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    cdf[i] = running;
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "distribution has zero mass");

  MeasurementCounts result;
  result.shots = shots;
  result.seed = seed;
  result.sequence.reserve(shots);
  Xoshiro256StarStar rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;  // u rounded up to total
    // skip trailing zero-weight entries that share the final cdf value
    while (it != cdf.begin() && weights[static_cast<std::size_t>(it - cdf.begin())] == 0.0) --it;
    const auto index = static_cast<std::uint64_t>(it - cdf.begin());
    ++result.counts[index];
    result.sequence.push_back(index);
  }
  return result;
}

MeasurementCounts measure(const Statevector& sv, std::uint64_t shots, std::uint64_t seed) {
  const auto p = sv.probabilities();
  return measure_distribution(p, shots, seed);
}

double success_probability(const Statevector& sv, std::span<const std::uint64_t> models) {
  double total = 0.0;
  for (auto x : models) {
    if (x >= sv.size()) throw Error(ErrorKind::Index, "model index outside statevector");
    total += std::norm(sv[x]);
  }
  return total;
}

Statevector restrict_to_low_qubits(const Statevector& sv, std::size_t num_qubits, double tolerance) {
  if (num_qubits > sv.width()) throw Error(ErrorKind::Index, "cannot restrict to more qubits than present");
  const std::size_t size = std::size_t{1} << num_qubits;
  double outside = 0.0;
  for (std::size_t i = size; i < sv.size(); ++i) outside += std::norm(sv[i]);
  if (outside > tolerance)
    throw Error(ErrorKind::Domain, "upper qubits are not in |0> (leaked probability " +
                                       std::to_string(outside) + ")");
  std::vector<Amplitude> amps(sv.amplitudes().begin(), sv.amplitudes().begin() + static_cast<std::ptrdiff_t>(size));
  return Statevector(num_qubits, std::move(amps));
}

}  // namespace qgs
