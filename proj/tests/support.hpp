#pragma once

// Shared test helpers: fixture access, random formula generators and
// reference evaluators that do not go through the library code under test.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgs/cnf.hpp"
#include "qgs/model.hpp"

namespace qgs::testing {

inline std::string data_path(const std::string& name) { return std::string(QGS_TEST_DATA_DIR) + "/" + name; }

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Random clause set: every clause has 1..max_len distinct variables with
/// random polarity.
inline Cnf random_cnf(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t max_len) {
  std::vector<Clause> clauses;
  std::vector<int> vars(n);
  for (std::size_t i = 0; i < n; ++i) vars[i] = static_cast<int>(i + 1);
  std::uniform_int_distribution<std::size_t> len_dist(1, std::min(max_len, n));
  std::bernoulli_distribution sign(0.5);
  for (std::size_t c = 0; c < m; ++c) {
    std::shuffle(vars.begin(), vars.end(), rng);
    const auto len = len_dist(rng);
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < len; ++i) lits.emplace_back(sign(rng) ? vars[i] : -vars[i]);
    clauses.emplace_back(std::move(lits));
  }
  return Cnf(n, std::move(clauses));
}

inline Cnf random_3cnf(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<Clause> clauses;
  std::vector<int> vars(n);
  for (std::size_t i = 0; i < n; ++i) vars[i] = static_cast<int>(i + 1);
  std::bernoulli_distribution sign(0.5);
  for (std::size_t c = 0; c < m; ++c) {
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < 3; ++i) lits.emplace_back(sign(rng) ? vars[i] : -vars[i]);
    clauses.emplace_back(std::move(lits));
  }
  return Cnf(n, std::move(clauses));
}

/// Satisfiable random formula: clauses are resampled until `witness` satisfies them.
inline Cnf random_satisfiable_cnf(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t max_len) {
  const std::uint64_t witness = rng() & ((std::uint64_t{1} << n) - 1);
  std::vector<Clause> clauses;
  while (clauses.size() < m) {
    auto one = random_cnf(rng, n, 1, max_len);
    const auto& clause = one.clauses()[0];
    const bool ok = std::any_of(clause.begin(), clause.end(), [&](Literal lit) {
      return (((witness >> lit.bit()) & 1U) != 0) == lit.is_positive();
    });
    if (ok) clauses.push_back(clause);
  }
  return Cnf(n, std::move(clauses));
}

// ---------------------------------------------------------------------------
// Feature-model semantics evaluated directly on the tree.

inline bool eval_formula(const PropFormula& f, const VariableMap& vars, std::uint64_t x) {
  using Op = PropFormula::Op;
  switch (f.op) {
    case Op::Var: return (x >> (vars.index_of(f.name) - 1)) & 1U;
    case Op::Not: return !eval_formula(f.args[0], vars, x);
    case Op::And: return eval_formula(f.args[0], vars, x) && eval_formula(f.args[1], vars, x);
    case Op::Or: return eval_formula(f.args[0], vars, x) || eval_formula(f.args[1], vars, x);
    case Op::Implies: return !eval_formula(f.args[0], vars, x) || eval_formula(f.args[1], vars, x);
    case Op::Iff: return eval_formula(f.args[0], vars, x) == eval_formula(f.args[1], vars, x);
  }
  return false;
}

inline bool tree_valid(const Feature& parent, const VariableMap& vars, std::uint64_t x) {
  const auto on = [&](const Feature& f) { return ((x >> (vars.index_of(f.name) - 1)) & 1U) != 0; };
  const bool p = on(parent);
  for (const auto& entry : parent.children) {
    int selected = 0;
    for (const auto& child : entry.features) {
      if (on(child)) {
        if (!p) return false;
        ++selected;
      }
      if (!tree_valid(child, vars, x)) return false;
    }
    if (!p) continue;
    switch (entry.kind) {
      case ChildKind::Mandatory:
        if (selected != 1) return false;
        break;
      case ChildKind::Optional:
        break;
      case ChildKind::OrGroup:
        if (selected < 1) return false;
        break;
      case ChildKind::AltGroup:
        if (selected != 1) return false;
        break;
    }
  }
  return true;
}

inline bool fm_valid(const FeatureModel& fm, const VariableMap& vars, std::uint64_t x) {
  if (!((x >> (vars.index_of(fm.root.name) - 1)) & 1U)) return false;
  if (!tree_valid(fm.root, vars, x)) return false;
  return std::all_of(fm.constraints.begin(), fm.constraints.end(),
                     [&](const PropFormula& f) { return eval_formula(f, vars, x); });
}

inline void render_feature(const Feature& f, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  for (const auto& entry : f.children) {
    switch (entry.kind) {
      case ChildKind::Mandatory:
      case ChildKind::Optional: {
        const auto& child = entry.features.front();
        out += pad + (entry.kind == ChildKind::Mandatory ? "m " : "o ") + child.name + "\n";
        render_feature(child, indent + 2, out);
        break;
      }
      case ChildKind::OrGroup:
      case ChildKind::AltGroup:
        out += pad + (entry.kind == ChildKind::OrGroup ? "or" : "alt") + "\n";
        for (const auto& member : entry.features) {
          out += pad + "  " + member.name + "\n";
          render_feature(member, indent + 4, out);
        }
        break;
    }
  }
}

/// Random feature model document with exactly `features` features and
/// `constraints` binary cross-tree constraints.
inline std::string random_fm_text(std::mt19937_64& rng, std::size_t features, std::size_t constraints) {
  std::size_t next = 1;
  std::vector<std::string> names{"f0"};
  const auto fresh = [&] {
    names.push_back("f" + std::to_string(next++));
    return Feature{names.back(), {}};
  };
  std::uniform_int_distribution<int> kind(0, 3);
  std::function<void(Feature&, std::size_t)> grow = [&](Feature& parent, std::size_t depth) {
    const auto entries = std::uniform_int_distribution<std::size_t>(depth == 0 ? 1 : 0, 3)(rng);
    for (std::size_t e = 0; e < entries && next < features; ++e) {
      const int k = kind(rng);
      ChildEntry entry{static_cast<ChildKind>(k), {}};
      const auto members = k <= 1 ? 1 : std::uniform_int_distribution<std::size_t>(1, 3)(rng);
      for (std::size_t i = 0; i < members && next < features; ++i) entry.features.push_back(fresh());
      for (auto& child : entry.features) grow(child, depth + 1);
      parent.children.push_back(std::move(entry));
    }
  };
  Feature root{"f0", {}};
  while (next < features) grow(root, 0);

  std::string doc = "f0\n";
  render_feature(root, 2, doc);
  if (constraints > 0) {
    doc += "constraints:\n";
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    const char* ops[] = {" => ", " | ", " & ", " <=> "};
    std::uniform_int_distribution<int> op(0, 3);
    for (std::size_t c = 0; c < constraints; ++c)
      doc += "  " + names[pick(rng)] + ops[op(rng)] + "!" + names[pick(rng)] + "\n";
  }
  return doc;
}

}  // namespace qgs::testing
