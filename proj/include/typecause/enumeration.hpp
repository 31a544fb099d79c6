#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "typecause/constraints.hpp"

namespace typecause {

class Solver;

/// Satisfiability of a subset of soft constraints (sorted ids).
using SubsetOracle = std::function<bool(const SoftIds&)>;

/// All minimal unsatisfiable, minimal correction and maximal satisfiable
/// subsets of a soft constraint set. Each family is sorted lexicographically.
struct SubsetFamily {
  std::vector<SoftIds> muses;
  std::vector<SoftIds> mcses;
  std::vector<SoftIds> msses;
  std::size_t query_count = 0;
  bool partial = false;  // a budget ran out before the search space was exhausted
};

struct EnumerationBudget {
  std::size_t max_solve_calls = 0;            // 0 means unlimited
  std::chrono::milliseconds timeout{0};       // 0 means unlimited
};

/// Boolean clauses over one selector per soft constraint. A selector set
/// satisfies the map iff it is neither contained in a recorded MSS nor
/// contains a recorded MUS.
class ExplorationMap {
 public:
  explicit ExplorationMap(std::size_t n) : n_(n) {}

  std::size_t size() const noexcept { return n_; }
  /// Excludes every subset of `mss`.
  void block_down(const SoftIds& mss);
  /// Excludes every superset of `mus`.
  void block_up(const SoftIds& mus);
  bool admits(const SoftIds& subset) const;

 private:
  friend std::optional<SoftIds> next_seed(const ExplorationMap& map);
  std::size_t n_;
  std::vector<SoftIds> down_;  // at least one of these selectors is on
  std::vector<SoftIds> up_;    // at least one of these selectors is off
};

/// A maximal selector set satisfying the map, or nothing once exhausted.
std::optional<SoftIds> next_seed(const ExplorationMap& map);

/// Extends a satisfiable seed to a maximal satisfiable subset of [0, n).
SoftIds grow(const SoftIds& seed, std::size_t n, const SubsetOracle& oracle);

/// Deletion-based minimization of an unsatisfiable seed, removing the
/// highest ids first.
SoftIds shrink(const SoftIds& seed, const SubsetOracle& oracle);

/// Enumerates the subset families of n soft constraints. The full set should
/// be unsatisfiable; for a satisfiable one the result is the single MSS of
/// everything with an empty MCS.
SubsetFamily enumerate(std::size_t n, const SubsetOracle& oracle, const EnumerationBudget& budget = {});

SubsetFamily enumerate(const Solver& solver, const EnumerationBudget& budget = {});

/// Set helpers on sorted id vectors.
SoftIds complement(const SoftIds& set, std::size_t n);
bool intersects(const SoftIds& a, const SoftIds& b);
bool is_subset(const SoftIds& a, const SoftIds& b);

}  // namespace typecause
