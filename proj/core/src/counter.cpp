#include <algorithm>
#include <cstdint>
#include <vector>

#include "qgs/cnf.hpp"
#include "qgs/error.hpp"

namespace qgs {
namespace {

// Plain DPLL counter. Free variables stay unassigned and are accounted for
// at satisfied leaves, so no per-variable bookkeeping is needed.
class DpllCounter {
 public:
  DpllCounter(const Cnf& cnf, const CountOptions& options)
      : num_vars_(cnf.num_vars()), value_(cnf.num_vars() + 1, 0), budget_(options.node_budget) {
    clauses_.reserve(cnf.num_clauses());
    for (const auto& clause : cnf.clauses()) {
      std::vector<int> lits;
      lits.reserve(clause.size());
      for (Literal lit : clause) lits.push_back(lit.value());
      clauses_.push_back(std::move(lits));
    }
    trail_.reserve(num_vars_);
  }

  BigInt run() { return search(); }

 private:
  // +1 true, -1 false, 0 unassigned
  int lit_value(int lit) const {
    const int v = value_[static_cast<std::size_t>(std::abs(lit))];
    return lit > 0 ? v : -v;
  }

  void assign(int lit) {
    value_[static_cast<std::size_t>(std::abs(lit))] = static_cast<std::int8_t>(lit > 0 ? 1 : -1);
    trail_.push_back(std::abs(lit));
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[static_cast<std::size_t>(trail_.back())] = 0;
      trail_.pop_back();
    }
  }

  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& clause : clauses_) {
        int unassigned = 0;
        int last = 0;
        bool satisfied = false;
        for (int lit : clause) {
          const int v = lit_value(lit);
          if (v > 0) {
            satisfied = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = lit;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          assign(last);
          changed = true;
        }
      }
    }
    return true;
  }

  // Lowest-index unassigned variable occurring in an open clause; 0 if every
  // clause is satisfied.
  int pick_branch() const {
    int best = 0;
    for (const auto& clause : clauses_) {
      bool satisfied = false;
      int lowest = 0;
      for (int lit : clause) {
        const int v = lit_value(lit);
        if (v > 0) {
          satisfied = true;
          break;
        }
        if (v == 0 && (lowest == 0 || std::abs(lit) < lowest)) lowest = std::abs(lit);
      }
      if (!satisfied && lowest != 0 && (best == 0 || lowest < best)) best = lowest;
    }
    return best;
  }

  BigInt search() {
    if (budget_ != 0 && ++nodes_ > budget_)
      throw Error(ErrorKind::Timeout,
                  "model counting exceeded node budget of " + std::to_string(budget_));
    const std::size_t mark = trail_.size();
    if (!propagate()) {
      undo(mark);
      return 0;
    }
    const int branch = pick_branch();
    if (branch == 0) {
      const auto free_vars = num_vars_ - trail_.size();
      undo(mark);
      return BigInt(1) << free_vars;
    }
    const std::size_t decision = trail_.size();
    assign(branch);
    BigInt total = search();
    undo(decision);
    assign(-branch);
    total += search();
    undo(mark);
    return total;
  }

  std::size_t num_vars_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

BigInt count_models(const Cnf& cnf, const CountOptions& options) {
  return DpllCounter(cnf, options).run();
}

}  // namespace qgs
