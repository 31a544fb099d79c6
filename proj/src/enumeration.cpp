#include "typecause/enumeration.hpp"

#include <algorithm>

#include "typecause/solver.hpp"

namespace typecause {

SoftIds complement(const SoftIds& set, std::size_t n) {
  SoftIds out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < set.size() && set[j] == i) {
      ++j;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

bool intersects(const SoftIds& a, const SoftIds& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    a[i] < b[j] ? ++i : ++j;
  }
  return false;
}

bool is_subset(const SoftIds& a, const SoftIds& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

void ExplorationMap::block_down(const SoftIds& mss) { down_.push_back(complement(mss, n_)); }

void ExplorationMap::block_up(const SoftIds& mus) { up_.push_back(mus); }

bool ExplorationMap::admits(const SoftIds& subset) const {
  for (const auto& c : down_)
    if (!intersects(c, subset)) return false;
  for (const auto& c : up_)
    if (is_subset(c, subset)) return false;
  return true;
}

namespace {

enum : std::int8_t { Unset = -1, Off = 0, On = 1 };
using Assignment = std::vector<std::int8_t>;

// Unit propagation; false on conflict.
bool propagate(const std::vector<SoftIds>& down, const std::vector<SoftIds>& up, Assignment& a) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int polarity = 0; polarity < 2; ++polarity) {
      // down clauses need one selector On, up clauses one selector Off
      const auto& clauses = polarity == 0 ? down : up;
      std::int8_t want = polarity == 0 ? On : Off;
      for (const auto& c : clauses) {
        std::size_t open = 0, last = 0;
        bool satisfied = false;
        for (auto v : c) {
          if (a[v] == want) {
            satisfied = true;
            break;
          }
          if (a[v] == Unset) {
            ++open;
            last = v;
          }
        }
        if (satisfied) continue;
        if (open == 0) return false;
        if (open == 1) {
          a[last] = want;
          changed = true;
        }
      }
    }
  }
  return true;
}

bool search(const std::vector<SoftIds>& down, const std::vector<SoftIds>& up, Assignment& a) {
  if (!propagate(down, up, a)) return false;
  auto it = std::find(a.begin(), a.end(), Unset);
  if (it == a.end()) return true;
  auto var = static_cast<std::size_t>(it - a.begin());
  for (std::int8_t value : {On, Off}) {
    Assignment trial = a;
    trial[var] = value;
    if (search(down, up, trial)) {
      a = std::move(trial);
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<SoftIds> next_seed(const ExplorationMap& map) {
  Assignment a(map.n_, Unset);
  if (!search(map.down_, map.up_, a)) return std::nullopt;
  // Switching a selector on can only violate up clauses; do so while possible.
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a[v] == On) continue;
    a[v] = On;
    for (const auto& c : map.up_) {
      if (std::all_of(c.begin(), c.end(), [&](std::size_t s) { return a[s] == On; })) {
        a[v] = Off;
        break;
      }
    }
  }
  SoftIds seed;
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v] == On) seed.push_back(v);
  return seed;
}

SoftIds grow(const SoftIds& seed, std::size_t n, const SubsetOracle& oracle) {
  SoftIds current = seed;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::binary_search(current.begin(), current.end(), i)) continue;
    SoftIds candidate = current;
    candidate.insert(std::lower_bound(candidate.begin(), candidate.end(), i), i);
    if (oracle(candidate)) current = std::move(candidate);
  }
  return current;
}

SoftIds shrink(const SoftIds& seed, const SubsetOracle& oracle) {
  SoftIds current = seed;
  for (auto it = seed.rbegin(); it != seed.rend(); ++it) {
    SoftIds candidate;
    candidate.reserve(current.size());
    for (auto id : current)
      if (id != *it) candidate.push_back(id);
    if (!oracle(candidate)) current = std::move(candidate);
  }
  return current;
}

namespace {

struct BudgetExhausted {};

}  // namespace

SubsetFamily enumerate(std::size_t n, const SubsetOracle& oracle, const EnumerationBudget& budget) {
  SubsetFamily family;
  auto deadline = std::chrono::steady_clock::now() + budget.timeout;
  SubsetOracle counted = [&](const SoftIds& ids) {
    if (budget.max_solve_calls && family.query_count >= budget.max_solve_calls) throw BudgetExhausted{};
    if (budget.timeout.count() > 0 && std::chrono::steady_clock::now() >= deadline) throw BudgetExhausted{};
    ++family.query_count;
    return oracle(ids);
  };

  ExplorationMap map(n);
  try {
    while (auto seed = next_seed(map)) {
      if (counted(*seed)) {
        family.msses.push_back(*seed);
        family.mcses.push_back(complement(*seed, n));
        map.block_down(*seed);
      } else {
        auto mus = shrink(*seed, counted);
        family.muses.push_back(mus);
        map.block_up(mus);
      }
    }
  } catch (const BudgetExhausted&) {
    family.partial = true;
  }
  std::sort(family.muses.begin(), family.muses.end());
  std::sort(family.mcses.begin(), family.mcses.end());
  std::sort(family.msses.begin(), family.msses.end());
  return family;
}

SubsetFamily enumerate(const Solver& solver, const EnumerationBudget& budget) {
  return enumerate(
      solver.soft_count(), [&](const SoftIds& ids) { return solver.satisfiable(ids); }, budget);
}

}  // namespace typecause
