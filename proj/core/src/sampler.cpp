#include "qgs/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "qgs/error.hpp"
#include "qgs/oracle.hpp"
#include "qgs/stats.hpp"

namespace qgs {

const char* to_string(Backend backend) noexcept {
  return backend == Backend::Fast ? "fast" : "gate";
}

std::uint64_t SampleReport::valid_total() const {
  return std::accumulate(valid_counts.begin(), valid_counts.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const auto& kv) { return acc + kv.second; });
}

std::uint64_t SampleReport::invalid_total() const {
  return std::accumulate(invalid_counts.begin(), invalid_counts.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const auto& kv) { return acc + kv.second; });
}

SampleReport sample(const Cnf& cnf, const SampleOptions& options, std::string model_name) {
  const std::size_t n = cnf.num_vars();
  if (n > kMaxEnumerationVars)
    throw Error(ErrorKind::TooManyVariables,
                std::to_string(n) + " variables exceeds sampling limit of " +
                    std::to_string(kMaxEnumerationVars));

  SampleReport report;
  report.model = std::move(model_name);
  report.backend = options.backend;
  report.shots = options.shots;
  report.seed = options.seed;
  report.num_vars = n;
  report.reject = options.reject;
  report.model_count = count_models(cnf, options.count);
  const GroverPlan p = plan(n, report.model_count);
  report.rounds = options.rounds ? *options.rounds : p.iterations();

  Statevector sv = [&] {
    if (options.backend == Backend::Fast) {
      FastBackendOptions fast;
      fast.threads = options.threads;
      return run_fast_backend(cnf, report.rounds, fast);
    }
    const Circuit circuit = build_grover_rounds(cnf, report.rounds);
    return restrict_to_low_qubits(run_gate_backend(circuit, options.gate_cap), n);
  }();

  const auto counts = measure(sv, options.shots, options.seed);
  const PackedCnf packed(cnf);
  for (const auto& [index, count] : counts.counts) {
    if (packed.satisfied_by(index))
      report.valid_counts[index] = count;
    else
      report.invalid_counts[index] = count;
  }
  if (options.reject) report.rejected = report.invalid_total();

  if (options.distinct) {
    std::vector<std::uint64_t> order;
    std::unordered_set<std::uint64_t> seen;
    for (auto x : counts.sequence) {
      if (!packed.satisfied_by(x) && options.reject) continue;
      if (seen.insert(x).second) order.push_back(x);
    }
    report.distinct = std::move(order);
  }
  return report;
}

UniformityResult uniformity_test(const SampleReport& report) {
  if (report.model_count < 2)
    throw Error(ErrorKind::DegenerateTest, "uniformity test needs at least two models");
  std::vector<std::uint64_t> observed;
  observed.reserve(report.valid_counts.size());
  for (const auto& [index, count] : report.valid_counts) observed.push_back(count);
  const auto cells = report.model_count.convert_to<double>();
  const auto chi = chi_square_uniform(observed, cells);
  UniformityResult result;
  result.chi2 = chi.chi2;
  result.dof = chi.dof;
  result.p_value = chi.p_value;
  result.expected = chi.expected;
  result.shots_used = report.valid_total();
  result.underpowered = chi.expected < 5.0;
  return result;
}

namespace {

std::optional<UniformityResult> try_uniformity(const SampleReport& report) {
  try {
    return uniformity_test(report);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateTest) return std::nullopt;
    throw;
  }
}

template <typename Json>
Json counts_json(const std::map<std::uint64_t, std::uint64_t>& counts) {
  Json obj = Json::object();
  for (const auto& [index, count] : counts) obj[std::to_string(index)] = count;
  return obj;
}

std::string config_bits(std::uint64_t index, std::size_t n) {
  // variable 1 first
  std::string bits(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if ((index >> i) & 1U) bits[i] = '1';
  return bits;
}

}  // namespace

std::string report_to_json(const SampleReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["model"] = report.model;
  doc["backend"] = to_string(report.backend);
  doc["shots"] = report.shots;
  doc["k"] = report.rounds;
  doc["seed"] = report.seed;
  doc["model_count"] = report.model_count.str();
  doc["reject"] = report.reject;
  doc["valid"] = counts_json<ordered_json>(report.valid_counts);
  doc["invalid"] = counts_json<ordered_json>(report.invalid_counts);
  doc["rejected"] = report.rejected;
  if (report.distinct) doc["distinct"] = *report.distinct;
  if (auto u = try_uniformity(report)) {
    doc["chi2"] = u->chi2;
    doc["p_value"] = u->p_value;
  } else {
    doc["chi2"] = nullptr;
    doc["p_value"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string report_to_text(const SampleReport& report) {
  std::string out;
  const auto valid = report.valid_total();
  const auto invalid = report.invalid_total();
  char buf[128];
  out += "model:      " + (report.model.empty() ? std::string("-") : report.model) + "\n";
  out += "backend:    " + std::string(to_string(report.backend)) + "\n";
  out += "seed:       " + std::to_string(report.seed) + "\n";
  out += "k:          " + std::to_string(report.rounds) + "\n";
  out += "models:     " + report.model_count.str() + "\n";
  std::snprintf(buf, sizeof buf, "%.4f", report.shots ? static_cast<double>(valid) / static_cast<double>(report.shots) : 0.0);
  out += "shots:      " + std::to_string(report.shots) + " (valid " + std::to_string(valid) +
         ", invalid " + std::to_string(invalid) + ", valid fraction " + buf + ")\n";
  if (report.reject) out += "rejected:   " + std::to_string(report.rejected) + "\n";
  if (auto u = try_uniformity(report)) {
    std::snprintf(buf, sizeof buf, "chi2 %.4f, dof %.0f, p %.6f", u->chi2, u->dof, u->p_value);
    out += "uniformity: " + std::string(buf) + (u->underpowered ? " (expected count < 5)" : "") + "\n";
  }
  out += "configurations (variable 1 first):\n";
  for (const auto& [index, count] : report.valid_counts)
    out += "  " + config_bits(index, report.num_vars) + "  " + std::to_string(count) + "\n";
  if (!report.reject)
    for (const auto& [index, count] : report.invalid_counts)
      out += "  " + config_bits(index, report.num_vars) + "  " + std::to_string(count) + "  invalid\n";
  if (report.distinct) {
    out += "distinct:   " + std::to_string(report.distinct->size()) + "\n";
    for (auto x : *report.distinct) out += "  " + config_bits(x, report.num_vars) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resource analysis

AnalysisRow analyze_one(const AnalysisInput& input, const AnalyzeOptions& options) {
  const Cnf& cnf = input.cnf;
  AnalysisRow row;
  row.name = input.name;
  row.num_features = cnf.num_vars();
  row.num_clauses = cnf.num_clauses();
  row.width = 1 + cnf.num_vars() + cnf.num_clauses();

  if (cnf.num_clauses() > 0 && cnf.num_vars() > 0)
    row.depth_k1 = depth(build_grover_rounds(cnf, 1));
  else
    row.note = "no clauses";

  try {
    row.model_count = count_models(cnf, options.count);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Timeout) throw;
    row.note = "timeout";
    return row;
  }
  row.pct_valid = 100.0 * model_fraction(cnf.num_vars(), *row.model_count);
  if (*row.model_count == 0) {
    row.note = "unsatisfiable";
    return row;
  }
  row.k_best = plan(cnf.num_vars(), *row.model_count).k_best;
  if (row.depth_k1) row.total_depth = total_depth(*row.depth_k1, *row.k_best);
  return row;
}

std::vector<AnalysisRow> analyze(std::span<const AnalysisInput> inputs, const AnalyzeOptions& options) {
  std::vector<AnalysisRow> rows(inputs.size());
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, inputs.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) rows[i] = analyze_one(inputs[i], options);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(inputs.size());
  {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
          try {
            rows[i] = analyze_one(inputs[i], options);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

namespace {

std::string format_pct(double pct) {
  char buf[64];
  if (pct == 0.0 || pct >= 1e-4)
    std::snprintf(buf, sizeof buf, "%.4f", pct);
  else
    std::snprintf(buf, sizeof buf, "%.4e", pct);
  return buf;
}

template <typename T>
std::string or_na(const std::optional<T>& v) {
  if (!v) return "n/a";
  if constexpr (std::is_same_v<T, BigInt>)
    return v->str();
  else
    return std::to_string(*v);
}

}  // namespace

std::string format_scientific(const BigInt& value, int digits) {
  if (value < 0) return "-" + format_scientific(-value, digits);
  digits = std::max(1, digits);
  long exponent = value == 0 ? 0 : static_cast<long>(value.str().size()) - 1;
  // round half up on the exact integer, keeping `digits` significant digits
  BigInt mantissa = value;
  if (exponent + 1 > digits) {
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent + 1 - digits));
    BigInt rem;
    boost::multiprecision::divide_qr(value, scale, mantissa, rem);
    if (2 * rem >= scale) ++mantissa;
  } else {
    mantissa *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits - 1 - exponent));
  }
  std::string m = value == 0 ? std::string(static_cast<std::size_t>(digits), '0') : mantissa.str();
  if (m.size() > static_cast<std::size_t>(digits)) {  // 9.995 -> 10.0
    m.pop_back();
    ++exponent;
  }
  if (digits > 1) m.insert(1, ".");
  char buf[32];
  std::snprintf(buf, sizeof buf, "e+%02ld", exponent);
  return m + buf;
}

std::string analysis_to_csv(std::span<const AnalysisRow> rows) {
  std::string out = "name,features,clauses,models,pct_valid,k_best,width,depth_k1,total_depth\n";
  for (const auto& r : rows) {
    out += r.name + "," + std::to_string(r.num_features) + "," + std::to_string(r.num_clauses) + "," +
           or_na(r.model_count) + "," + (r.pct_valid ? format_pct(*r.pct_valid) : "n/a") + "," +
           or_na(r.k_best) + "," + std::to_string(r.width) + "," + or_na(r.depth_k1) + "," +
           or_na(r.total_depth) + "\n";
  }
  return out;
}

std::string analysis_to_json(std::span<const AnalysisRow> rows) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  const auto big = [](const std::optional<BigInt>& v) {
    return v ? ordered_json(v->str()) : ordered_json(nullptr);
  };
  for (const auto& r : rows) {
    ordered_json row;
    row["name"] = r.name;
    row["features"] = r.num_features;
    row["clauses"] = r.num_clauses;
    row["models"] = big(r.model_count);
    row["pct_valid"] = r.pct_valid ? ordered_json(*r.pct_valid) : ordered_json(nullptr);
    row["k_best"] = big(r.k_best);
    row["width"] = r.width;
    row["depth_k1"] = r.depth_k1 ? ordered_json(*r.depth_k1) : ordered_json(nullptr);
    row["total_depth"] = big(r.total_depth);
    if (!r.note.empty()) row["note"] = r.note;
    doc.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

std::string analysis_to_text(std::span<const AnalysisRow> rows) {
  const std::vector<std::string> header{"model", "features", "clauses", "valid configs", "% valid",
                                        "k_best", "width", "depth k=1", "total depth"};
  std::vector<std::vector<std::string>> table{header};
  const auto human = [](const std::optional<BigInt>& v) -> std::string {
    if (!v) return "n/a";
    return *v >= 1'000'000 ? format_scientific(*v) : v->str();
  };
  for (const auto& r : rows) {
    std::string pct = "n/a";
    if (r.pct_valid) {
      char buf[64];
      if (*r.pct_valid >= 0.01 || *r.pct_valid == 0.0)
        std::snprintf(buf, sizeof buf, "%.2f%%", *r.pct_valid);
      else
        std::snprintf(buf, sizeof buf, "%.2e%%", *r.pct_valid);
      pct = buf;
    }
    table.push_back({r.name, std::to_string(r.num_features), std::to_string(r.num_clauses),
                     human(r.model_count), pct, human(r.k_best), std::to_string(r.width),
                     or_na(r.depth_k1), human(r.total_depth)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : table)
    for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
  std::string out;
  for (std::size_t li = 0; li < table.size(); ++li) {
    for (std::size_t c = 0; c < table[li].size(); ++c) {
      const auto& cell = table[li][c];
      const auto pad = std::string(widths[c] - cell.size(), ' ');
      out += (c == 0 ? cell + pad : "  " + pad + cell);
    }
    out += "\n";
    if (li == 0) out += std::string(std::accumulate(widths.begin(), widths.end(), std::size_t{0}) + 2 * (widths.size() - 1), '-') + "\n";
  }
  return out;
}

}  // namespace qgs
