#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qgs/cnf.hpp"

namespace qgs {

struct Feature;

enum class ChildKind { Mandatory, Optional, OrGroup, AltGroup };

/// One entry in a feature's ordered child list. Mandatory/Optional entries
/// hold exactly one feature; group entries hold one or more members.
struct ChildEntry {
  ChildKind kind;
  std::vector<Feature> features;

  bool is_group() const noexcept {
    return kind == ChildKind::OrGroup || kind == ChildKind::AltGroup;
  }
};

struct Feature {
  std::string name;
  std::vector<ChildEntry> children;
};

/// Propositional constraint over feature names.
struct PropFormula {
  enum class Op { Var, Not, And, Or, Implies, Iff };

  Op op = Op::Var;
  std::string name;               // Var only
  std::vector<PropFormula> args;  // 1 for Not, 2 for binary operators

  static PropFormula var(std::string name) { return {Op::Var, std::move(name), {}}; }
  static PropFormula negate(PropFormula f) { return {Op::Not, {}, {std::move(f)}}; }
  static PropFormula binary(Op op, PropFormula lhs, PropFormula rhs) {
    return {op, {}, {std::move(lhs), std::move(rhs)}};
  }
};

struct FeatureModel {
  Feature root;
  std::vector<PropFormula> constraints;
};

/// Bijection between feature names and 1-based variable indices, assigned in
/// depth-first pre-order of the feature tree (root = 1).
class VariableMap {
 public:
  static VariableMap from_model(const FeatureModel& fm);

  std::size_t size() const noexcept { return names_.size(); }
  int index_of(std::string_view name) const;
  std::optional<int> find(std::string_view name) const;
  const std::string& name_of(int index) const { return names_.at(static_cast<std::size_t>(index - 1)); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// `<index> <feature>` per line.
  std::string to_text() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

FeatureModel parse_feature_model(std::string_view text);

/// Most clauses a single cross-tree constraint may expand to.
inline constexpr std::size_t kMaxConstraintClauses = 64;

struct CompiledModel {
  Cnf cnf;
  VariableMap variables;
};

CompiledModel to_cnf(const FeatureModel& fm);

std::size_t feature_count(const FeatureModel& fm);

}  // namespace qgs
