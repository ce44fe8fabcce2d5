#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgs/bigint.hpp"
#include "qgs/cnf.hpp"
#include "qgs/sim.hpp"

namespace qgs {

enum class Backend { Fast, Gate };

const char* to_string(Backend backend) noexcept;

struct SampleOptions {
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  Backend backend = Backend::Fast;
  /// Grover rounds; k_best when unset.
  std::optional<std::uint64_t> rounds;
  /// Drop measured configurations that violate the formula.
  bool reject = true;
  /// Also report the accepted configurations with repeats removed.
  bool distinct = false;
  std::size_t gate_cap = kDefaultGateCap;
  std::size_t threads = 1;
  CountOptions count;
};

struct SampleReport {
  std::string model;
  Backend backend = Backend::Fast;
  std::uint64_t shots = 0;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::size_t num_vars = 0;
  BigInt model_count;
  bool reject = true;
  std::map<std::uint64_t, std::uint64_t> valid_counts;
  std::map<std::uint64_t, std::uint64_t> invalid_counts;
  std::uint64_t rejected = 0;
  /// Accepted configurations in first-seen order; filled when distinct mode is on.
  std::optional<std::vector<std::uint64_t>> distinct;

  std::uint64_t valid_total() const;
  std::uint64_t invalid_total() const;
};

/// Count models, plan, simulate, measure and classify every outcome.
SampleReport sample(const Cnf& cnf, const SampleOptions& options, std::string model_name = "");

struct UniformityResult {
  double chi2 = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::uint64_t shots_used = 0;
  double expected = 0.0;
  /// Expected count per model below 5; the test has little power.
  bool underpowered = false;
};

/// Chi-square goodness of fit of the accepted outcomes against the uniform
/// distribution over all models (unseen models count as zero).
UniformityResult uniformity_test(const SampleReport& report);

inline constexpr double kUniformityAlpha = 0.01;

std::string report_to_json(const SampleReport& report);
std::string report_to_text(const SampleReport& report);

// ---------------------------------------------------------------------------
// Resource analysis

struct AnalysisInput {
  std::string name;
  Cnf cnf;
};

struct AnalysisRow {
  std::string name;
  std::size_t num_features = 0;
  std::size_t num_clauses = 0;
  std::size_t width = 0;
  std::optional<BigInt> model_count;
  std::optional<double> pct_valid;  // percent
  std::optional<BigInt> k_best;
  std::optional<std::uint64_t> depth_k1;
  std::optional<BigInt> total_depth;
  /// Why fields are missing, e.g. "timeout" or "unsatisfiable".
  std::string note;
};

struct AnalyzeOptions {
  CountOptions count;
  std::size_t threads = 1;
};

AnalysisRow analyze_one(const AnalysisInput& input, const AnalyzeOptions& options = {});
std::vector<AnalysisRow> analyze(std::span<const AnalysisInput> inputs, const AnalyzeOptions& options = {});

std::string analysis_to_csv(std::span<const AnalysisRow> rows);
std::string analysis_to_json(std::span<const AnalysisRow> rows);
std::string analysis_to_text(std::span<const AnalysisRow> rows);

/// `2.06e+201` style rendering with `digits` significant digits.
std::string format_scientific(const BigInt& value, int digits = 3);

}  // namespace qgs
