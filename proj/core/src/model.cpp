#include "qgs/model.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "qgs/error.hpp"

namespace qgs {

// ---------------------------------------------------------------------------
// VariableMap

namespace {

void collect_preorder(const Feature& f, std::vector<std::string>& out) {
  out.push_back(f.name);
  for (const auto& entry : f.children)
    for (const auto& child : entry.features) collect_preorder(child, out);
}

}  // namespace

VariableMap VariableMap::from_model(const FeatureModel& fm) {
  VariableMap map;
  collect_preorder(fm.root, map.names_);
  for (std::size_t i = 0; i < map.names_.size(); ++i) {
    auto [it, inserted] = map.index_.emplace(map.names_[i], static_cast<int>(i + 1));
    if (!inserted) throw Error(ErrorKind::InvalidArgument, "duplicate feature '" + it->first + "'");
  }
  return map;
}

std::optional<int> VariableMap::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int VariableMap::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw Error(ErrorKind::InvalidArgument, "unknown feature '" + std::string(name) + "'");
}

std::string VariableMap::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < names_.size(); ++i)
    out += std::to_string(i + 1) + " " + names_[i] + "\n";
  return out;
}

std::size_t feature_count(const FeatureModel& fm) {
  std::vector<std::string> names;
  collect_preorder(fm.root, names);
  return names.size();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

struct SourceLine {
  std::size_t number;  // 1-based
  std::size_t indent;
  std::string_view text;  // indentation and comment stripped, right-trimmed
};

std::vector<SourceLine> split_lines(std::string_view doc) {
  std::vector<SourceLine> lines;
  std::size_t pos = 0;
  std::size_t number = 0;
  while (pos < doc.size()) {
    auto eol = doc.find('\n', pos);
    if (eol == std::string_view::npos) eol = doc.size();
    std::string_view raw = doc.substr(pos, eol - pos);
    pos = eol + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
      raw.remove_suffix(1);
    std::size_t indent = 0;
    while (indent < raw.size() && (raw[indent] == ' ' || raw[indent] == '\t')) {
      if (raw[indent] == '\t') throw ParseError(number, indent + 1, "tab in indentation");
      ++indent;
    }
    if (indent == raw.size()) continue;
    lines.push_back({number, indent, raw.substr(indent)});
  }
  return lines;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

class TreeParser {
 public:
  TreeParser(const std::vector<SourceLine>& lines, std::size_t end)
      : lines_(lines), end_(end) {}

  Feature parse_root() {
    const auto& first = lines_[0];
    if (first.indent != 0)
      throw ParseError(first.number, 1, "root feature must start at column 1");
    Feature root{declare(first, first.text, 0), {}};
    std::size_t idx = 1;
    parse_children(idx, 2, root);
    if (idx < end_)
      throw ParseError(lines_[idx].number, lines_[idx].indent + 1,
                       lines_[idx].indent == 0 ? "only one root feature is allowed"
                                               : "bad indentation");
    return root;
  }

  const std::unordered_set<std::string>& names() const { return names_; }

 private:
  std::string declare(const SourceLine& line, std::string_view name, std::size_t offset) {
    const auto column = line.indent + offset + 1;
    if (!is_identifier(name))
      throw ParseError(line.number, column, "invalid feature name '" + std::string(name) + "'");
    if (!names_.emplace(name).second)
      throw ParseError(line.number, column, "duplicate feature name '" + std::string(name) + "'");
    return std::string(name);
  }

  void expect_indent(const SourceLine& line, std::size_t indent) const {
    if (line.indent != indent)
      throw ParseError(line.number, line.indent + 1,
                       "bad indentation: expected " + std::to_string(indent) + " spaces, got " +
                           std::to_string(line.indent));
  }

  void parse_children(std::size_t& idx, std::size_t indent, Feature& parent) {
    while (idx < end_ && lines_[idx].indent >= indent) {
      const auto& line = lines_[idx];
      expect_indent(line, indent);
      const auto words = split_words(line.text);
      const auto head = words.front();
      if (head == "m" || head == "o") {
        if (words.size() != 2)
          throw ParseError(line.number, line.indent + 1, "expected '" + std::string(head) + " <name>'");
        const auto offset = static_cast<std::size_t>(words[1].data() - line.text.data());
        Feature child{declare(line, words[1], offset), {}};
        ++idx;
        parse_children(idx, indent + 2, child);
        parent.children.push_back(
            {head == "m" ? ChildKind::Mandatory : ChildKind::Optional, {std::move(child)}});
      } else if ((head == "or" || head == "alt") && words.size() == 1) {
        ChildEntry group{head == "or" ? ChildKind::OrGroup : ChildKind::AltGroup, {}};
        ++idx;
        while (idx < end_ && lines_[idx].indent >= indent + 2) {
          const auto& member_line = lines_[idx];
          expect_indent(member_line, indent + 2);
          if (split_words(member_line.text).size() != 1)
            throw ParseError(member_line.number, member_line.indent + 1,
                             "group member line must contain only a feature name");
          Feature member{declare(member_line, member_line.text, 0), {}};
          ++idx;
          parse_children(idx, indent + 4, member);
          group.features.push_back(std::move(member));
        }
        if (group.features.empty())
          throw ParseError(line.number, line.indent + 1, "'" + std::string(head) + "' group has no members");
        parent.children.push_back(std::move(group));
      } else {
        throw ParseError(line.number, line.indent + 1,
                         "expected 'm <name>', 'o <name>', 'or' or 'alt'");
      }
    }
  }

  const std::vector<SourceLine>& lines_;
  std::size_t end_;
  std::unordered_set<std::string> names_;
};

// Recursive-descent parser for one constraint line.
//   iff     := implies ('<=>' implies)*
//   implies := disj ('=>' implies)?
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '!' unary | '(' iff ')' | identifier
class FormulaParser {
 public:
  FormulaParser(const SourceLine& line, const std::unordered_set<std::string>& names)
      : line_(line), text_(line.text), names_(names) {}

  PropFormula parse() {
    auto f = parse_iff();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_.number, line_.indent + pos_ + 1, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  PropFormula parse_iff() {
    auto lhs = parse_implies();
    while (accept("<=>"))
      lhs = PropFormula::binary(PropFormula::Op::Iff, std::move(lhs), parse_implies());
    return lhs;
  }

  PropFormula parse_implies() {
    auto lhs = parse_or();
    if (accept("=>"))
      return PropFormula::binary(PropFormula::Op::Implies, std::move(lhs), parse_implies());
    return lhs;
  }

  PropFormula parse_or() {
    auto lhs = parse_and();
    while (accept("|"))
      lhs = PropFormula::binary(PropFormula::Op::Or, std::move(lhs), parse_and());
    return lhs;
  }

  PropFormula parse_and() {
    auto lhs = parse_unary();
    while (accept("&"))
      lhs = PropFormula::binary(PropFormula::Op::And, std::move(lhs), parse_unary());
    return lhs;
  }

  PropFormula parse_unary() {
    if (accept("!")) return PropFormula::negate(parse_unary());
    if (accept("(")) {
      auto inner = parse_iff();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    skip_space();
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const auto name = text_.substr(start, pos_ - start);
    if (name.empty()) {
      if (start >= text_.size()) fail("unexpected end of constraint");
      fail("unexpected '" + std::string(1, text_[start]) + "'");
    }
    if (!is_identifier(name) || !names_.contains(std::string(name))) {
      pos_ = start;
      fail("unknown feature '" + std::string(name) + "' in constraint");
    }
    return PropFormula::var(std::string(name));
  }

  const SourceLine& line_;
  std::string_view text_;
  const std::unordered_set<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

FeatureModel parse_feature_model(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty feature model: missing root feature");

  std::size_t tree_end = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].indent == 0 && lines[i].text == "constraints:") {
      tree_end = i;
      break;
    }
  }
  if (tree_end == 0) throw ParseError(lines[0].number, 1, "missing root feature before 'constraints:'");

  TreeParser tree(lines, tree_end);
  FeatureModel fm{tree.parse_root(), {}};
  for (std::size_t i = tree_end + 1; i < lines.size(); ++i)
    fm.constraints.push_back(FormulaParser(lines[i], tree.names()).parse());
  return fm;
}

// ---------------------------------------------------------------------------
// CNF compilation

namespace {

using LitSet = std::vector<int>;
using ClauseSet = std::vector<LitSet>;

// Bound on intermediate clause sets during distribution.
constexpr std::size_t kDistributionLimit = 1 << 14;

void append_clause(ClauseSet& out, LitSet clause) {
  const bool seen = std::any_of(out.begin(), out.end(), [&](const LitSet& other) {
    return other.size() == clause.size() &&
           std::is_permutation(other.begin(), other.end(), clause.begin());
  });
  if (!seen) out.push_back(std::move(clause));
}

ClauseSet conjoin(ClauseSet a, const ClauseSet& b) {
  for (const auto& clause : b) append_clause(a, clause);
  if (a.size() > kDistributionLimit)
    throw Error(ErrorKind::ConstraintTooLarge, "constraint expansion exceeds limit");
  return a;
}

ClauseSet distribute(const ClauseSet& a, const ClauseSet& b) {
  ClauseSet out;
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      LitSet merged = ca;
      bool tautology = false;
      for (int lit : cb) {
        if (std::find(merged.begin(), merged.end(), -lit) != merged.end()) {
          tautology = true;
          break;
        }
        if (std::find(merged.begin(), merged.end(), lit) == merged.end()) merged.push_back(lit);
      }
      if (tautology) continue;
      append_clause(out, std::move(merged));
      if (out.size() > kDistributionLimit)
        throw Error(ErrorKind::ConstraintTooLarge, "constraint expansion exceeds limit");
    }
  }
  return out;
}

// CNF of f (negated when `negate`), pushing negations to the leaves on the way.
ClauseSet clauses_of(const PropFormula& f, bool negate, const VariableMap& vars) {
  using Op = PropFormula::Op;
  switch (f.op) {
    case Op::Var: {
      const int v = vars.index_of(f.name);
      return {{negate ? -v : v}};
    }
    case Op::Not:
      return clauses_of(f.args[0], !negate, vars);
    case Op::And:
      return negate ? distribute(clauses_of(f.args[0], true, vars), clauses_of(f.args[1], true, vars))
                    : conjoin(clauses_of(f.args[0], false, vars), clauses_of(f.args[1], false, vars));
    case Op::Or:
      return negate ? conjoin(clauses_of(f.args[0], true, vars), clauses_of(f.args[1], true, vars))
                    : distribute(clauses_of(f.args[0], false, vars), clauses_of(f.args[1], false, vars));
    case Op::Implies:
      // a => b  ==  !a | b ;  !(a => b)  ==  a & !b
      return negate ? conjoin(clauses_of(f.args[0], false, vars), clauses_of(f.args[1], true, vars))
                    : distribute(clauses_of(f.args[0], true, vars), clauses_of(f.args[1], false, vars));
    case Op::Iff: {
      // a <=> b  ==  (!a | b) & (a | !b) ;  !(a <=> b)  ==  (a | b) & (!a | !b)
      const auto pos_a = clauses_of(f.args[0], false, vars);
      const auto neg_a = clauses_of(f.args[0], true, vars);
      const auto pos_b = clauses_of(f.args[1], false, vars);
      const auto neg_b = clauses_of(f.args[1], true, vars);
      return negate ? conjoin(distribute(pos_a, pos_b), distribute(neg_a, neg_b))
                    : conjoin(distribute(neg_a, pos_b), distribute(pos_a, neg_b));
    }
  }
  return {};
}

Clause make_clause(std::initializer_list<Literal> lits) { return Clause(std::vector<Literal>(lits)); }

struct Emitter {
  const VariableMap& vars;
  std::vector<Clause> clauses;

  int var(const Feature& f) const { return vars.index_of(f.name); }

  // Child-to-parent implications, children visited in pre-order.
  void parent_links(const Feature& parent) {
    const int p = var(parent);
    for (const auto& entry : parent.children) {
      for (const auto& child : entry.features) {
        const int c = var(child);
        clauses.push_back(make_clause({Literal::negative(c), Literal::positive(p)}));
        if (entry.kind == ChildKind::Mandatory)
          clauses.push_back(make_clause({Literal::negative(p), Literal::positive(c)}));
        parent_links(child);
      }
    }
  }

  void groups(const Feature& parent, ChildKind kind) {
    const int p = var(parent);
    for (const auto& entry : parent.children) {
      if (entry.kind == kind) {
        std::vector<Literal> any{Literal::negative(p)};
        for (const auto& member : entry.features) any.push_back(Literal::positive(var(member)));
        clauses.emplace_back(std::move(any));
        if (kind == ChildKind::AltGroup) {
          for (std::size_t i = 0; i < entry.features.size(); ++i)
            for (std::size_t j = i + 1; j < entry.features.size(); ++j)
              clauses.push_back(make_clause({Literal::negative(var(entry.features[i])),
                                             Literal::negative(var(entry.features[j]))}));
        }
      }
    }
    for (const auto& entry : parent.children)
      for (const auto& child : entry.features) groups(child, kind);
  }
};

}  // namespace

CompiledModel to_cnf(const FeatureModel& fm) {
  auto vars = VariableMap::from_model(fm);
  Emitter emit{vars, {}};
  emit.clauses.push_back(make_clause({Literal::positive(1)}));
  emit.parent_links(fm.root);
  emit.groups(fm.root, ChildKind::OrGroup);
  emit.groups(fm.root, ChildKind::AltGroup);

  for (std::size_t ci = 0; ci < fm.constraints.size(); ++ci) {
    const auto expanded = clauses_of(fm.constraints[ci], false, vars);
    if (expanded.size() > kMaxConstraintClauses)
      throw Error(ErrorKind::ConstraintTooLarge,
                  "constraint " + std::to_string(ci + 1) + " expands to " +
                      std::to_string(expanded.size()) + " clauses (limit " +
                      std::to_string(kMaxConstraintClauses) + ")");
    for (const auto& lits : expanded) {
      std::vector<Literal> clause;
      clause.reserve(lits.size());
      for (int v : lits) clause.emplace_back(v);
      emit.clauses.emplace_back(std::move(clause));
    }
  }

  const auto n = vars.size();
  return {Cnf(n, std::move(emit.clauses)), std::move(vars)};
}

}  // namespace qgs
