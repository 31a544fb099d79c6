#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "typecause/constraints.hpp"

namespace typecause {

class Solver;

/// Most general unifier of a satisfiable subset, as a union-find snapshot.
class Solution {
 public:
  /// Applies the substitution to a term over system variables.
  TypeTerm apply(const TypeTerm& term) const;
  TypeTerm resolve(TVar var) const;

 private:
  friend class Solver;
  Solution(const Solver* solver, std::vector<std::uint32_t> parent)
      : solver_(solver), parent_(std::move(parent)) {}
  std::uint32_t find(std::uint32_t n) const;
  TypeTerm build(std::uint32_t node, std::vector<std::uint8_t>& visiting) const;

  const Solver* solver_;
  std::vector<std::uint32_t> parent_;
};

/// Satisfiability oracle for a constraint system: hard constraints are always
/// present, soft constraints are enabled per query. Unification with an
/// occurs check; signature variables are rigid in their own template.
class Solver {
 public:
  explicit Solver(const ConstraintSystem& system);

  std::size_t soft_count() const noexcept { return soft_eqs_.size(); }
  /// True when the hard constraints alone are satisfiable.
  bool hard_satisfiable() const noexcept { return hard_ok_; }

  bool satisfiable(const SoftIds& enabled) const;
  /// Returns the most general unifier, or nothing when unsatisfiable.
  std::optional<Solution> solve(const SoftIds& enabled) const;

  /// Number of satisfiability queries answered so far.
  std::size_t query_count() const noexcept { return queries_; }

 private:
  friend class Solution;
  struct Node {
    std::int32_t symbol = -1;  // -1 for a variable
    std::uint32_t first_child = 0;
    std::uint32_t arity = 0;
  };
  using Pair = std::pair<std::uint32_t, std::uint32_t>;

  std::uint32_t compile(const TypeTerm& t);
  static std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t n);
  bool unify(std::vector<std::uint32_t>& parent, std::vector<Pair>& work) const;
  bool acyclic(std::vector<std::uint32_t>& parent) const;
  bool run(const SoftIds& enabled, std::vector<std::uint32_t>& parent) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> children_;
  std::vector<std::string> symbols_;
  std::map<std::string, std::int32_t> symbol_ids_;
  std::vector<std::optional<TVar>> rigid_var_;  // per symbol: the rigid variable it stands for
  std::vector<std::vector<Pair>> soft_eqs_;
  std::vector<std::uint32_t> base_parent_;  // after unifying hard equations
  bool hard_ok_ = true;
  mutable std::size_t queries_ = 0;
};

}  // namespace typecause
