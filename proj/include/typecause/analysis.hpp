#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "typecause/constraints.hpp"
#include "typecause/enumeration.hpp"
#include "typecause/solver.hpp"

namespace typecause {

/// One type error: a connected component of the MUS intersection graph.
struct ErrorGroup {
  std::size_t id = 0;
  std::vector<SoftIds> muses;
  SoftIds local;                    // union of the member MUSes
  std::vector<SoftIds> local_mcses;  // MCSes projected onto `local`
  std::vector<Span> spans;          // spans of `local`, sorted
};

/// Heuristic weights; lower scores rank first.
struct Weights {
  double locations = 1.0;
  double decls = 0.5;
  double free_vars = 0.25;
  double mus_membership = 0.0;  // rewards constraints that occur in many MUSes
};

struct ScoreBreakdown {
  std::size_t locations = 0;
  std::size_t decls = 0;
  std::size_t free_vars = 0;
  double mus_membership = 0.0;  // mean number of member MUSes per constraint
};

struct CauseSpan {
  Span span;
  TVar subject = 0;
  DeclKey owner;
  std::string expected_type;  // rendered under the fix, "?" when unavailable
};

/// A set of locations whose change fixes one type error.
struct Cause {
  std::size_t id = 0;
  SoftIds mcs;
  std::vector<CauseSpan> spans;  // sorted by span
  std::vector<DeclKey> decls;    // declarations owning the spans, sorted
  ScoreBreakdown breakdown;
  double score = 0.0;
  int stars = 0;
};

enum class HintKind { Expected, Inferred };

struct TypeHint {
  Span span;
  std::string label;  // binder name for inferred hints
  std::string type;
  HintKind kind = HintKind::Expected;
};

/// Type a location is expected to have under a solution: its own type, or
/// the most specific type among instantiated copies when that is open.
TypeTerm expected_type(const ConstraintSystem& system, const Solution& solution, TVar subject);

/// Connected components of the MUS intersection graph, ordered by earliest span.
std::vector<ErrorGroup> group_errors(const SubsetFamily& family, const ConstraintSystem& system);

/// Soft constraints assumed while fixing `group` with `mcs`: everything except
/// the cause and the constraints implicated in the other errors.
SoftIds fix_environment(const ConstraintSystem& system, const std::vector<ErrorGroup>& groups,
                        std::size_t group, const SoftIds& mcs);

/// Scores and orders the local MCSes of one group; stars go to the top three.
std::vector<Cause> rank_causes(const ConstraintSystem& system, const Solver& solver,
                               const std::vector<ErrorGroup>& groups, std::size_t group,
                               const Weights& weights = {});

/// Greedy set cover in rank order: keeps a cause iff it adds an uncovered span.
/// Stars are reassigned to the top three survivors.
std::vector<Cause> reduce_causes(const std::vector<Cause>& ranked);

/// Gives stars 3, 2, 1 to the first three causes and renumbers ids.
void assign_stars(std::vector<Cause>& causes);

/// Expected types at the cause's spans and inferred types of the binders in
/// the declarations the error touches, under the fix.
std::vector<TypeHint> type_hints(const ConstraintSystem& system, const Solver& solver,
                                 const std::vector<ErrorGroup>& groups, std::size_t group, const Cause& cause);

struct AnalysisOptions {
  Weights weights;
  bool reduce = true;
};

/// One error with its final causes and per-cause hints.
struct ErrorReport {
  ErrorGroup group;
  std::vector<Cause> causes;
  std::vector<std::vector<TypeHint>> hints;  // parallel to causes
  std::size_t causes_before_reduction = 0;
};

std::vector<ErrorReport> analyze(const ConstraintSystem& system, const Solver& solver, const SubsetFamily& family,
                                 const AnalysisOptions& options = {});

}  // namespace typecause
