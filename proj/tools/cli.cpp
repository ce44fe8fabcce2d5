#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qgs/circuit.hpp"
#include "qgs/cnf.hpp"
#include "qgs/model.hpp"
#include "qgs/oracle.hpp"
#include "qgs/sampler.hpp"

namespace qgs::cli {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Schema:
      return kParse;
    case ErrorKind::ConstraintTooLarge:
      return kConstraintBlowup;
    case ErrorKind::Timeout:
      return kTimeout;
    case ErrorKind::NoSolutions:
      return kNoSolutions;
    case ErrorKind::WidthExceeded:
    case ErrorKind::TooManyVariables:
      return kCapacity;
    default:
      return kFailure;
  }
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << text;
}

bool is_feature_model(const std::string& path) {
  return std::filesystem::path(path).extension() == ".fm";
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

// Feature models are compiled on the fly; anything else is read as DIMACS.
Cnf load_cnf(const std::string& path) {
  const auto text = read_file(path);
  if (is_feature_model(path)) return to_cnf(parse_feature_model(text)).cnf;
  return parse_dimacs(text);
}

std::optional<std::uint64_t> parse_iterations(const std::string& value) {
  if (value == "AUTO" || value == "auto") return std::nullopt;
  std::size_t used = 0;
  unsigned long long k = 0;
  try {
    k = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || value.front() == '-')
    throw CLI::ValidationError("--iterations", "expected AUTO or a nonnegative integer, got '" + value + "'");
  return k;
}

std::size_t gate_cap_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("QGS_GATE_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw IoError(std::string("QGS_GATE_CAP is not a number: '") + env + "'");
    }
  }
  return fallback;
}

struct Options {
  std::string input;
  std::vector<std::string> inputs;
  std::string output;
  std::string map_path;
  std::string format;
  std::string iterations = "AUTO";
  std::string backend = "fast";
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  std::uint64_t budget = CountOptions{}.node_budget;
  std::size_t threads = 1;
  std::optional<std::size_t> gate_cap;
  bool metrics = false;
  bool reject = false;
  bool distinct = false;
};

int cmd_to_cnf(const Options& o, std::ostream& out, std::ostream& err) {
  const auto compiled = to_cnf(parse_feature_model(read_file(o.input)));
  write_output(o.output, emit_dimacs(compiled.cnf), out);
  if (!o.map_path.empty()) {
    write_output(o.map_path, compiled.variables.to_text(), out);
  } else {
    err << "variables " << compiled.cnf.num_vars() << "\n"
        << "clauses " << compiled.cnf.num_clauses() << "\n"
        << compiled.variables.to_text();
  }
  return kOk;
}

int cmd_count(const Options& o, std::ostream& out, std::ostream&) {
  const auto cnf = load_cnf(o.input);
  out << count_models(cnf, {o.budget}).str() << "\n";
  return kOk;
}

int cmd_circuit(const Options& o, std::ostream& out, std::ostream& err) {
  const auto cnf = load_cnf(o.input);
  const auto rounds = parse_iterations(o.iterations);
  std::uint64_t k = 0;
  if (rounds) {
    k = *rounds;
  } else {
    k = plan(cnf.num_vars(), count_models(cnf, {o.budget})).iterations();
  }
  const Circuit circuit = build_grover_rounds(cnf, k);
  const std::string format = o.format.empty() ? "json" : o.format;
  write_output(o.output, format == "qasm3" ? to_qasm3(circuit) : to_json(circuit), out);
  if (o.metrics) {
    const std::uint64_t depth_k1 = depth(build_grover_rounds(cnf, 1));
    err << "width=" << circuit.width() << " gates=" << circuit.gate_count()
        << " depth=" << depth(circuit) << " depth_k1=" << depth_k1 << " k=" << k
        << " total_depth=" << total_depth(depth_k1, k) << "\n";
  }
  return kOk;
}

SampleOptions sample_options(const Options& o) {
  SampleOptions s;
  s.shots = o.shots;
  s.seed = o.seed;
  s.backend = o.backend == "gate" ? Backend::Gate : Backend::Fast;
  s.rounds = parse_iterations(o.iterations);
  s.reject = o.reject;
  s.distinct = o.distinct;
  s.gate_cap = o.gate_cap ? *o.gate_cap : gate_cap_from_env(kDefaultGateCap);
  s.threads = o.threads;
  s.count.node_budget = o.budget;
  return s;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream&) {
  const auto cnf = load_cnf(o.input);
  const auto report = sample(cnf, sample_options(o), stem_of(o.input));
  const std::string format = o.format.empty() ? "json" : o.format;
  write_output(o.output, format == "human" ? report_to_text(report) : report_to_json(report), out);
  return kOk;
}

int cmd_uniformity(const Options& o, std::ostream& out, std::ostream&) {
  const auto cnf = load_cnf(o.input);
  auto opts = sample_options(o);
  opts.reject = true;
  const auto report = sample(cnf, opts, stem_of(o.input));
  const auto u = uniformity_test(report);
  const bool uniform = u.p_value > kUniformityAlpha;
  std::string text;
  if (o.format == "json") {
    nlohmann::ordered_json doc;
    doc["model"] = report.model;
    doc["shots"] = report.shots;
    doc["accepted"] = u.shots_used;
    doc["seed"] = report.seed;
    doc["k"] = report.rounds;
    doc["models"] = report.model_count.str();
    doc["chi2"] = u.chi2;
    doc["dof"] = u.dof;
    doc["p_value"] = u.p_value;
    doc["alpha"] = kUniformityAlpha;
    doc["uniform"] = uniform;
    doc["underpowered"] = u.underpowered;
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s.precision(6);
    s << "chi2 " << u.chi2 << "\n"
      << "dof " << u.dof << "\n"
      << "p_value " << u.p_value << "\n"
      << "accepted " << u.shots_used << " of " << report.shots << "\n"
      << (uniform ? "uniform" : "not uniform") << " at alpha " << kUniformityAlpha
      << (u.underpowered ? " (expected count per model < 5)" : "") << "\n";
    text = s.str();
  }
  write_output(o.output, text, out);
  return kOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<AnalysisInput> inputs;
  for (const auto& path : o.inputs) inputs.push_back({stem_of(path), load_cnf(path)});
  AnalyzeOptions opts;
  opts.count.node_budget = o.budget;
  opts.threads = o.threads;
  const auto rows = analyze(inputs, opts);
  std::string text;
  if (o.format == "csv")
    text = analysis_to_csv(rows);
  else if (o.format == "json")
    text = analysis_to_json(rows);
  else
    text = analysis_to_text(rows);
  write_output(o.output, text, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniform configuration sampling with Grover search"};
  app.name("qgs");
  app.require_subcommand(1);
  Options o;

  const auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget", o.budget, "Model-counter node budget (0 = unbounded)")->capture_default_str();
  };
  const auto add_sampling = [&](CLI::App* cmd) {
    cmd->add_option("--shots", o.shots, "Number of measurements")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", o.seed, "PRNG seed")->capture_default_str();
    cmd->add_option("--backend", o.backend, "Simulation backend")->check(CLI::IsMember({"fast", "gate"}))->capture_default_str();
    cmd->add_option("--iterations,-k", o.iterations, "Grover rounds: AUTO or an integer")->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker threads for the fast backend")->check(CLI::PositiveNumber);
    cmd->add_option("--gate-cap", o.gate_cap, "Gate-backend qubit cap (default 26 or $QGS_GATE_CAP)");
    add_budget(cmd);
  };

  auto* to_cnf_cmd = app.add_subcommand("to-cnf", "Compile a feature model to DIMACS");
  to_cnf_cmd->add_option("model", o.input, "Feature model (.fm)")->required();
  to_cnf_cmd->add_option("-o,--output", o.output, "DIMACS output path (default stdout)");
  to_cnf_cmd->add_option("--map", o.map_path, "Write '<index> <feature>' lines here");

  auto* count_cmd = app.add_subcommand("count", "Print the exact number of models");
  count_cmd->add_option("input", o.input, "DIMACS file or .fm model")->required();
  add_budget(count_cmd);

  auto* circuit_cmd = app.add_subcommand("circuit", "Emit the Grover circuit");
  circuit_cmd->add_option("input", o.input, "DIMACS file or .fm model")->required();
  circuit_cmd->add_option("--iterations,-k", o.iterations, "Grover rounds: AUTO or an integer")->capture_default_str();
  circuit_cmd->add_option("--format", o.format, "Circuit format")->check(CLI::IsMember({"json", "qasm3"}));
  circuit_cmd->add_flag("--metrics", o.metrics, "Print width, gate count and depths to stderr");
  circuit_cmd->add_option("-o,--output", o.output, "Output path (default stdout)");
  add_budget(circuit_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "Draw configurations by simulated measurement");
  sample_cmd->add_option("input", o.input, "DIMACS file or .fm model")->required();
  add_sampling(sample_cmd);
  sample_cmd->add_flag("--reject", o.reject, "Reject configurations that violate the formula");
  sample_cmd->add_flag("--distinct", o.distinct, "Also list accepted configurations without repeats");
  sample_cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "human"}));
  sample_cmd->add_option("-o,--output", o.output, "Output path (default stdout)");

  auto* uniformity_cmd = app.add_subcommand("uniformity", "Chi-square test of accepted samples");
  uniformity_cmd->add_option("input", o.input, "DIMACS file or .fm model")->required();
  add_sampling(uniformity_cmd);
  uniformity_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  uniformity_cmd->add_option("-o,--output", o.output, "Output path (default stdout)");

  auto* analyze_cmd = app.add_subcommand("analyze", "Resource table for one or more inputs");
  analyze_cmd->add_option("inputs", o.inputs, "DIMACS files or .fm models")->required();
  analyze_cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "json", "csv"}));
  analyze_cmd->add_option("--threads", o.threads, "Inputs analyzed in parallel")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("-o,--output", o.output, "Output path (default stdout)");
  add_budget(analyze_cmd);

  std::vector<const char*> argv{"qgs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // help and version requests exit 0; usage errors share the generic failure code
    return app.exit(e, out, err) == 0 ? kOk : kFailure;
  }

  try {
    if (*to_cnf_cmd) return cmd_to_cnf(o, out, err);
    if (*count_cmd) return cmd_count(o, out, err);
    if (*circuit_cmd) return cmd_circuit(o, out, err);
    if (*sample_cmd) return cmd_sample(o, out, err);
    if (*uniformity_cmd) {
      if (uniformity_cmd->count("--shots") == 0) o.shots = 20000;
      return cmd_uniformity(o, out, err);
    }
    if (*analyze_cmd) return cmd_analyze(o, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "qgs: " << e.what() << "\n";
    return kFailure;
  } catch (const Error& e) {
    err << "qgs: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const IoError& e) {
    err << "qgs: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace qgs::cli
