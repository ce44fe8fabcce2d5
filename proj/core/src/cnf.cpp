#include "qgs/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "qgs/error.hpp"

namespace qgs {

Literal::Literal(int value) : value_(value) {
  if (value == 0) throw Error(ErrorKind::InvalidArgument, "literal must be nonzero");
  if (value == std::numeric_limits<int>::min())
    throw Error(ErrorKind::InvalidArgument, "literal out of range");
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  if (literals_.empty()) throw Error(ErrorKind::InvalidArgument, "empty clause");
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    for (std::size_t j = i + 1; j < literals_.size(); ++j) {
      if (literals_[i] == literals_[j])
        throw Error(ErrorKind::InvalidArgument,
                    "duplicate literal " + std::to_string(literals_[i].value()));
      if (literals_[i] == ~literals_[j])
        throw Error(ErrorKind::InvalidArgument,
                    "tautological clause on variable " + std::to_string(literals_[i].var()));
    }
  }
}

Clause::Clause(std::initializer_list<int> literals)
    : Clause([&] {
        std::vector<Literal> lits;
        lits.reserve(literals.size());
        for (int v : literals) lits.emplace_back(v);
        return lits;
      }()) {}

Assignment Assignment::from_index(std::size_t num_vars, std::uint64_t index) {
  std::vector<bool> bits(num_vars, false);
  for (std::size_t i = 0; i < num_vars && i < 64; ++i) bits[i] = (index >> i) & 1U;
  return Assignment(std::move(bits));
}

std::uint64_t Assignment::index() const {
  if (bits_.size() > 64)
    throw Error(ErrorKind::TooManyVariables, "assignment wider than 64 bits");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) index |= std::uint64_t{1} << i;
  return index;
}

Cnf::Cnf(std::size_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
    for (Literal lit : clauses_[ci]) {
      if (static_cast<std::size_t>(lit.var()) > num_vars_)
        throw Error(ErrorKind::InvalidArgument,
                    "clause " + std::to_string(ci + 1) + ": literal " +
                        std::to_string(lit.value()) + " exceeds " +
                        std::to_string(num_vars_) + " variables");
    }
  }
}

namespace {

class DimacsLexer {
 public:
  explicit DimacsLexer(std::string_view text) : text_(text) {}

  // Advances to the next non-comment line; false at end of input.
  bool next_line() {
    while (pos_ < text_.size()) {
      auto eol = text_.find('\n', pos_);
      if (eol == std::string_view::npos) eol = text_.size();
      line_ = text_.substr(pos_, eol - pos_);
      if (!line_.empty() && line_.back() == '\r') line_.remove_suffix(1);
      pos_ = eol + 1;
      ++line_no_;
      col_ = 0;
      skip_space();
      if (col_ >= line_.size() || line_[col_] == 'c') continue;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (col_ < line_.size() && (line_[col_] == ' ' || line_[col_] == '\t')) ++col_;
  }

  bool at_line_end() {
    skip_space();
    return col_ >= line_.size();
  }

  std::string_view word() {
    skip_space();
    const auto start = col_;
    while (col_ < line_.size() && line_[col_] != ' ' && line_[col_] != '\t') ++col_;
    return line_.substr(start, col_ - start);
  }

  long long integer(const char* what) {
    skip_space();
    const auto start = col_;
    auto w = word();
    long long value = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (w.empty() || ec != std::errc() || ptr != w.data() + w.size())
      throw ParseError(line_no_, start + 1, std::string("expected ") + what + ", got '" +
                                                std::string(w) + "'");
    last_col_ = start + 1;
    return value;
  }

  char peek() const { return col_ < line_.size() ? line_[col_] : '\0'; }
  std::size_t line_no() const { return line_no_; }
  std::size_t column() const { return col_ + 1; }
  std::size_t last_column() const { return last_col_; }

 private:
  std::string_view text_;
  std::string_view line_;
  std::size_t pos_ = 0;
  std::size_t col_ = 0;
  std::size_t line_no_ = 0;
  std::size_t last_col_ = 0;
};

}  // namespace

Cnf parse_dimacs(std::string_view text) {
  DimacsLexer lex(text);
  if (!lex.next_line()) throw ParseError(0, 0, "missing 'p cnf' header");
  if (lex.word() != "p") throw ParseError(lex.line_no(), 1, "expected 'p cnf <vars> <clauses>' header");
  if (lex.word() != "cnf") throw ParseError(lex.line_no(), 3, "expected format 'cnf'");
  const long long num_vars = lex.integer("variable count");
  if (num_vars < 0 || num_vars > std::numeric_limits<int>::max())
    throw ParseError(lex.line_no(), lex.last_column(), "variable count out of range");
  const long long num_clauses = lex.integer("clause count");
  if (num_clauses < 0) throw ParseError(lex.line_no(), lex.last_column(), "negative clause count");
  if (!lex.at_line_end()) throw ParseError(lex.line_no(), lex.column(), "trailing text after header");

  std::vector<Clause> clauses;
  std::vector<Literal> current;
  std::size_t clause_line = 0;
  std::size_t clause_col = 0;
  while (lex.next_line()) {
    if (lex.peek() == '%') break;  // SATLIB trailer
    if (lex.peek() == 'p')
      throw ParseError(lex.line_no(), 1, "duplicate header");
    while (!lex.at_line_end()) {
      const long long v = lex.integer("literal");
      if (v == 0) {
        if (current.empty())
          throw ParseError(lex.line_no(), lex.last_column(), "empty clause");
        // normalize: drop repeated literals, reject tautologies
        std::vector<Literal> unique;
        for (Literal lit : current) {
          if (std::find(unique.begin(), unique.end(), lit) != unique.end()) continue;
          if (std::find(unique.begin(), unique.end(), ~lit) != unique.end())
            throw ParseError(clause_line, clause_col,
                             "tautological clause on variable " + std::to_string(lit.var()));
          unique.push_back(lit);
        }
        clauses.emplace_back(std::move(unique));
        current.clear();
        continue;
      }
      if (v > num_vars || -v > num_vars)
        throw ParseError(lex.line_no(), lex.last_column(),
                         "literal " + std::to_string(v) + " out of range 1.." +
                             std::to_string(num_vars));
      if (current.empty()) {
        if (static_cast<long long>(clauses.size()) == num_clauses)
          throw ParseError(lex.line_no(), lex.last_column(),
                           "more clauses than the " + std::to_string(num_clauses) + " declared");
        clause_line = lex.line_no();
        clause_col = lex.last_column();
      }
      current.emplace_back(static_cast<int>(v));
    }
  }
  if (!current.empty())
    throw ParseError(clause_line, clause_col, "clause missing terminating 0");
  if (static_cast<long long>(clauses.size()) != num_clauses)
    throw ParseError(0, 0, "header declares " + std::to_string(num_clauses) + " clauses, found " +
                               std::to_string(clauses.size()));
  return Cnf(static_cast<std::size_t>(num_vars), std::move(clauses));
}

std::string emit_dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars()) + " " +
                    std::to_string(cnf.num_clauses()) + "\n";
  for (const auto& clause : cnf.clauses()) {
    for (Literal lit : clause) {
      out += std::to_string(lit.value());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

bool evaluate(const Cnf& cnf, const Assignment& assignment) {
  if (assignment.size() != cnf.num_vars())
    throw Error(ErrorKind::LengthMismatch,
                "assignment has " + std::to_string(assignment.size()) + " bits, formula has " +
                    std::to_string(cnf.num_vars()) + " variables");
  return std::all_of(cnf.clauses().begin(), cnf.clauses().end(), [&](const Clause& clause) {
    return std::any_of(clause.begin(), clause.end(), [&](Literal lit) {
      return assignment[lit.bit()] == lit.is_positive();
    });
  });
}

PackedCnf::PackedCnf(const Cnf& cnf) {
  if (cnf.num_vars() > 64)
    throw Error(ErrorKind::TooManyVariables, "packed evaluation supports at most 64 variables");
  clauses_.reserve(cnf.num_clauses());
  for (const auto& clause : cnf.clauses()) {
    Masks m{0, 0};
    for (Literal lit : clause) {
      const std::uint64_t bit = std::uint64_t{1} << lit.bit();
      (lit.is_positive() ? m.pos : m.neg) |= bit;
    }
    clauses_.push_back(m);
  }
}

std::vector<std::uint64_t> enumerate_model_indices(const Cnf& cnf) {
  if (cnf.num_vars() > kMaxEnumerationVars)
    throw Error(ErrorKind::TooManyVariables,
                std::to_string(cnf.num_vars()) + " variables exceeds enumeration limit of " +
                    std::to_string(kMaxEnumerationVars));
  const PackedCnf packed(cnf);
  const std::uint64_t limit = std::uint64_t{1} << cnf.num_vars();
  std::vector<std::uint64_t> models;
  for (std::uint64_t x = 0; x < limit; ++x)
    if (packed.satisfied_by(x)) models.push_back(x);
  return models;
}

std::vector<Assignment> enumerate_models(const Cnf& cnf) {
  const auto indices = enumerate_model_indices(cnf);
  std::vector<Assignment> models;
  models.reserve(indices.size());
  for (auto x : indices) models.push_back(Assignment::from_index(cnf.num_vars(), x));
  return models;
}

}  // namespace qgs
