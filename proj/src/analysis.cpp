#include "typecause/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace typecause {

namespace {

SoftIds set_union(const SoftIds& a, const SoftIds& b) {
  SoftIds out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SoftIds set_intersection(const SoftIds& a, const SoftIds& b) {
  SoftIds out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Span> spans_of(const ConstraintSystem& system, const SoftIds& ids) {
  std::vector<Span> out;
  for (auto id : ids)
    for (const auto& s : system.soft[id].spans) out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<DeclKey> owners_of(const ConstraintSystem& system, const SoftIds& ids) {
  std::set<DeclKey> out;
  for (auto id : ids) out.insert(system.soft[id].owner);
  return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::vector<ErrorGroup> group_errors(const SubsetFamily& family, const ConstraintSystem& system) {
  const auto& muses = family.muses;
  std::vector<std::size_t> parent(muses.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < muses.size(); ++i)
    for (std::size_t j = i + 1; j < muses.size(); ++j)
      if (intersects(muses[i], muses[j])) parent[find_root(parent, i)] = find_root(parent, j);

  std::map<std::size_t, ErrorGroup> by_root;
  for (std::size_t i = 0; i < muses.size(); ++i) {
    auto& g = by_root[find_root(parent, i)];
    g.muses.push_back(muses[i]);
    g.local = set_union(g.local, muses[i]);
  }
  std::vector<ErrorGroup> groups;
  for (auto& [root, g] : by_root) {
    std::set<SoftIds> projected;
    for (const auto& c : family.mcses) {
      auto x = set_intersection(c, g.local);
      if (!x.empty()) projected.insert(std::move(x));
    }
    for (const auto& x : projected) {
      bool superset = std::any_of(projected.begin(), projected.end(),
                                  [&](const SoftIds& y) { return y != x && is_subset(y, x); });
      if (!superset) g.local_mcses.push_back(x);
    }
    g.spans = spans_of(system, g.local);
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const ErrorGroup& a, const ErrorGroup& b) {
    if (a.spans != b.spans) return a.spans < b.spans;
    return a.local < b.local;
  });
  for (std::size_t i = 0; i < groups.size(); ++i) groups[i].id = i;
  return groups;
}

SoftIds fix_environment(const ConstraintSystem& system, const std::vector<ErrorGroup>& groups, std::size_t group,
                        const SoftIds& mcs) {
  SoftIds removed = mcs;
  for (std::size_t j = 0; j < groups.size(); ++j)
    if (j != group) removed = set_union(removed, groups[j].local);
  return complement(removed, system.soft.size());
}

namespace {

bool rigid(const ConstraintSystem& system, TVar v) { return system.rigid_names.count(v) > 0; }

// Distinct unbound variables in the types of the subjects of every
// constraint in `decls`.
std::size_t count_free_vars(const ConstraintSystem& system, const Solution& solution,
                            const std::set<DeclKey>& decls) {
  std::set<TVar> subjects;
  for (const auto* list : {&system.soft, &system.hard})
    for (const auto& c : *list) {
      if (!decls.count(c.owner)) continue;
      subjects.insert(c.span_subjects.begin(), c.span_subjects.end());
      subjects.insert(c.subject);
    }
  std::set<TVar> free;
  std::vector<TVar> vars;
  for (auto s : subjects) {
    vars.clear();
    solution.resolve(s).collect_vars(vars);
    for (auto v : vars)
      if (!rigid(system, v)) free.insert(v);
  }
  return free.size();
}

std::size_t free_count(const ConstraintSystem& system, const TypeTerm& t) {
  std::vector<TVar> vars;
  t.collect_vars(vars);
  std::set<TVar> free;
  for (auto v : vars)
    if (!rigid(system, v)) free.insert(v);
  return free.size();
}

// Maximum number of instantiated copies consulted for an expected type.
constexpr std::size_t kCopyLimit = 256;

}  // namespace

TypeTerm expected_type(const ConstraintSystem& system, const Solution& solution, TVar subject) {
  // A generalized declaration may leave the location's own type open while
  // its uses pin it down; report the most specific copy.
  TypeTerm best = solution.resolve(subject);
  std::size_t best_free = free_count(system, best);
  if (best_free == 0) return best;
  auto copies = system.copies_of(subject, kCopyLimit);
  for (std::size_t i = 1; i < copies.size() && best_free > 0; ++i) {
    auto t = solution.resolve(copies[i]);
    auto f = free_count(system, t);
    if (f < best_free) {
      best = std::move(t);
      best_free = f;
    }
  }
  return best;
}

namespace {

bool rank_before(const Cause& a, const Cause& b) {
  if (a.score != b.score) return a.score < b.score;
  auto first = [](const Cause& c) { return c.spans.empty() ? Span{} : c.spans.front().span; };
  if (!(first(a) == first(b))) return first(a) < first(b);
  std::vector<Span> sa, sb;
  for (const auto& s : a.spans) sa.push_back(s.span);
  for (const auto& s : b.spans) sb.push_back(s.span);
  if (sa != sb) return sa < sb;
  return a.mcs < b.mcs;
}

}  // namespace

void assign_stars(std::vector<Cause>& causes) {
  for (std::size_t i = 0; i < causes.size(); ++i) {
    causes[i].id = i;
    causes[i].stars = i < 3 ? static_cast<int>(3 - i) : 0;
  }
}

std::vector<Cause> rank_causes(const ConstraintSystem& system, const Solver& solver,
                               const std::vector<ErrorGroup>& groups, std::size_t group, const Weights& weights) {
  const auto& g = groups.at(group);
  std::map<std::size_t, std::size_t> membership;
  for (const auto& mus : g.muses)
    for (auto id : mus) ++membership[id];

  std::vector<Cause> causes;
  for (const auto& mcs : g.local_mcses) {
    Cause cause;
    cause.mcs = mcs;
    auto solution = solver.solve(fix_environment(system, groups, group, mcs));
    TypeRenderer renderer(&system.rigid_names);
    std::set<DeclKey> decls;
    double member_total = 0;
    for (auto id : mcs) {
      const auto& c = system.soft[id];
      decls.insert(c.owner);
      member_total += static_cast<double>(membership[id]);
      for (std::size_t k = 0; k < c.spans.size(); ++k) {
        TVar subject = k < c.span_subjects.size() ? c.span_subjects[k] : c.subject;
        cause.spans.push_back({c.spans[k], subject, c.owner, ""});
      }
    }
    std::stable_sort(cause.spans.begin(), cause.spans.end(),
                     [](const CauseSpan& a, const CauseSpan& b) { return a.span < b.span; });
    cause.spans.erase(std::unique(cause.spans.begin(), cause.spans.end(),
                                  [](const CauseSpan& a, const CauseSpan& b) { return a.span == b.span; }),
                      cause.spans.end());
    for (auto& s : cause.spans) s.expected_type = solution ? renderer.render(expected_type(system, *solution, s.subject)) : "?";
    cause.decls.assign(decls.begin(), decls.end());

    auto& b = cause.breakdown;
    b.locations = cause.spans.size();
    b.decls = decls.size();
    b.free_vars = solution ? count_free_vars(system, *solution, decls) : 0;
    b.mus_membership = mcs.empty() ? 0.0 : member_total / static_cast<double>(mcs.size());
    cause.score = weights.locations * static_cast<double>(b.locations) +
                  weights.decls * static_cast<double>(b.decls) +
                  weights.free_vars * static_cast<double>(b.free_vars) - weights.mus_membership * b.mus_membership;
    causes.push_back(std::move(cause));
  }
  std::sort(causes.begin(), causes.end(), rank_before);
  assign_stars(causes);
  return causes;
}

std::vector<Cause> reduce_causes(const std::vector<Cause>& ranked) {
  std::set<Span> covered;
  std::vector<Cause> kept;
  for (const auto& c : ranked) {
    bool adds = std::any_of(c.spans.begin(), c.spans.end(), [&](const CauseSpan& s) { return !covered.count(s.span); });
    if (!adds) continue;
    for (const auto& s : c.spans) covered.insert(s.span);
    kept.push_back(c);
  }
  assign_stars(kept);
  return kept;
}

std::vector<TypeHint> type_hints(const ConstraintSystem& system, const Solver& solver,
                                 const std::vector<ErrorGroup>& groups, std::size_t group, const Cause& cause) {
  std::vector<TypeHint> hints;
  auto solution = solver.solve(fix_environment(system, groups, group, cause.mcs));
  if (!solution) return hints;
  TypeRenderer renderer(&system.rigid_names);
  for (const auto& s : cause.spans)
    hints.push_back({s.span, "", renderer.render(expected_type(system, *solution, s.subject)), HintKind::Expected});
  auto touched = owners_of(system, groups.at(group).local);
  std::vector<TypeHint> inferred;
  for (const auto& b : system.binders) {
    if (!touched.count(b.owner)) continue;
    if (b.kind != BinderKind::TopLevel && b.kind != BinderKind::Parameter && b.kind != BinderKind::Lambda) continue;
    inferred.push_back({b.span, b.name, "", HintKind::Inferred});
    inferred.back().type = renderer.render(solution->resolve(b.tvar));
  }
  std::stable_sort(inferred.begin(), inferred.end(),
                   [](const TypeHint& a, const TypeHint& b) { return a.span < b.span; });
  hints.insert(hints.end(), inferred.begin(), inferred.end());
  return hints;
}

std::vector<ErrorReport> analyze(const ConstraintSystem& system, const Solver& solver, const SubsetFamily& family,
                                 const AnalysisOptions& options) {
  std::vector<ErrorReport> reports;
  auto groups = group_errors(family, system);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    ErrorReport report;
    auto ranked = rank_causes(system, solver, groups, i, options.weights);
    report.causes_before_reduction = ranked.size();
    report.causes = options.reduce ? reduce_causes(ranked) : std::move(ranked);
    for (const auto& c : report.causes) report.hints.push_back(type_hints(system, solver, groups, i, c));
    report.group = groups[i];
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace typecause
