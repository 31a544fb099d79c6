// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixture_support.hpp"
#include "oracles.hpp"
#include "typecause/diagnosis.hpp"

using namespace typecause;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << why;
      pass = false;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
  failures += !o.pass;
}

std::string show(const std::vector<SoftIds>& family) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < family.size(); ++i) {
    os << (i ? " " : "") << '{';
    for (std::size_t j = 0; j < family[i].size(); ++j) os << (j ? "," : "") << family[i][j];
    os << '}';
  }
  os << '}';
  return os.str();
}

std::size_t duality_violations(const SubsetFamily& f, std::size_t n) {
  std::size_t bad = 0;
  for (const auto& mus : f.muses)
    for (const auto& mcs : f.mcses) bad += !intersects(mus, mcs);
  std::vector<SoftIds> complements;
  for (const auto& mss : f.msses) complements.push_back(complement(mss, n));
  std::sort(complements.begin(), complements.end());
  bad += complements != f.mcses;
  for (const auto* family : {&f.muses, &f.mcses, &f.msses})
    for (std::size_t i = 0; i < family->size(); ++i)
      for (std::size_t j = 0; j < family->size(); ++j) bad += i != j && is_subset((*family)[i], (*family)[j]);
  return bad;
}

// Families enumerated anywhere below, for the duality criterion.
std::vector<std::pair<SubsetFamily, std::size_t>> seen_families;

SubsetFamily remember(SubsetFamily f, std::size_t n) {
  seen_families.emplace_back(f, n);
  return f;
}

std::vector<std::string> places(const Cause& c) {
  std::vector<std::string> out;
  for (const auto& s : c.spans) out.push_back(s.span.to_string());
  return out;
}

CheckResult checked(const std::string& name, const CheckOptions& options = {}) {
  auto r = fixture::check(name, options);
  seen_families.emplace_back(r.family, r.system.soft.size());
  return r;
}

bool matches_fix(const Cause& c, const std::vector<Span>& fix) {
  if (c.spans.size() != fix.size()) return false;
  for (const auto& f : fix)
    if (std::none_of(c.spans.begin(), c.spans.end(), [&](const CauseSpan& s) { return oracle::same_place(f, s.span); }))
      return false;
  return true;
}

bool covers_fix(const Cause& c, const std::vector<Span>& fix) {
  for (const auto& f : fix)
    if (std::none_of(c.spans.begin(), c.spans.end(), [&](const CauseSpan& s) { return oracle::place_within(f, s.span); }))
      return false;
  return true;
}

}  // namespace

int main() {
  const auto corpus_dir = std::filesystem::path(TYPECAUSE_SOURCE_DIR) / "corpus";

  criterion("conflicting-annotation enumeration", [](Outcome& o) {
    auto start = Clock::now();
    auto sys = fixture::system_of(fixture::read(fixture::dir() / "conflicting_annotations.mml"));
    Solver solver(sys);
    auto f = remember(enumerate(solver), sys.soft.size());
    double took = ms_since(start);
    std::size_t ann_f = 0, def_f = 0, ann_g = 0, def_g = 0;
    for (const auto& c : sys.soft) {
      bool sig = c.origin == Origin::Signature;
      if (c.owner.name == "f") (sig ? ann_f : def_f) = c.id;
      if (c.owner.name == "g") (sig ? ann_g : def_g) = c.id;
    }
    std::vector<SoftIds> want{{std::min(ann_f, def_f), std::max(ann_f, def_f)}, {ann_g}, {def_g}};
    std::sort(want.begin(), want.end());
    o.detail << f.muses.size() << " MUSes, " << f.mcses.size() << " MCSes " << show(f.mcses) << ", "
             << f.msses.size() << " MSSes in " << took << " ms";
    o.require(f.muses.size() == 2 && f.mcses.size() == 3 && f.msses.size() == 3, "family sizes");
    o.require(f.mcses == want, "MCS membership");
    o.require(took < 1000, "too slow");
  });

  criterion("oracle equivalence", [](Outcome& o) {
    auto start = Clock::now();
    std::mt19937 rng(2024);
    std::size_t tables = 0, programs = 0, mismatches = 0;
    for (; tables < 300; ++tables) {
      std::size_t n = 1 + rng() % 12;
      auto table = oracle::random_table(rng, n);
      auto got = remember(enumerate(n, table), n);
      auto want = oracle::classify(n, table);
      mismatches += got.muses != want.muses || got.mcses != want.mcses || got.msses != want.msses;
    }
    for (std::uint32_t seed = 0; programs < 250; ++seed) {
      ConstraintSystem sys;
      try {
        sys = fixture::system_of(oracle::ProgramGenerator(seed).program());
      } catch (const ResolveError&) {
        continue;
      }
      std::size_t n = sys.soft.size();
      Solver solver(sys);
      if (n > 12 || !solver.hard_satisfiable()) continue;
      auto want = oracle::classify(n, [&](const SoftIds& ids) { return oracle::naive_satisfiable(sys, ids); });
      if (want.muses.empty()) continue;  // well-typed; enumeration is only defined for errors
      ++programs;
      auto got = remember(enumerate(solver), n);
      mismatches += got.muses != want.muses || got.mcses != want.mcses || got.msses != want.msses;
    }
    double took = ms_since(start);
    o.detail << tables << " truth tables + " << programs << " ill-typed programs, " << mismatches
             << " mismatches, " << took / 1000 << " s";
    o.require(tables + programs >= 500, "too few systems");
    o.require(mismatches == 0, "mismatch");
    o.require(took < 60000, "too slow");
  });

  criterion("grouping", [](Outcome& o) {
    auto one = checked("one_connected_error");
    auto two = checked("two_independent_errors");
    o.detail << "connected: " << one.errors.size() << " error(s), independent: " << two.errors.size() << " error(s)";
    o.require(one.errors.size() == 1, "connected program");
    o.require(two.errors.size() == 2, "independent program");
  });

  criterion("grouping across declarations", [](Outcome& o) {
    auto r = checked("size_mean_variance");
    o.detail << r.family.muses.size() << " MUSes grouped into " << r.errors.size() << " error(s)";
    o.require(r.family.muses.size() == 3, "expected three MUSes");
    o.require(r.errors.size() == 1, "expected one error");
  });

  criterion("ranking", [](Outcome& o) {
    auto loc = checked("fewer_locations");
    bool c_first = loc.errors.size() == 1 && !loc.errors[0].causes.empty() &&
                   places(loc.errors[0].causes[0]) == std::vector<std::string>{"fewer_locations:4:3-4:6"};
    auto concrete = checked("concrete_types");
    std::size_t lit = 99, neg = 99;
    if (concrete.errors.size() == 1)
      for (std::size_t i = 0; i < concrete.errors[0].causes.size(); ++i) {
        auto p = places(concrete.errors[0].causes[i]);
        if (p == std::vector<std::string>{"concrete_types:1:10-1:11"}) lit = i;
        if (p == std::vector<std::string>{"concrete_types:3:7-3:10"}) neg = i;
      }
    o.detail << "\"C\" " << (c_first ? "ranked first" : "not first") << "; literal 3 at rank " << lit + 1
             << ", not at rank " << neg + 1;
    o.require(c_first, "single-location cause");
    o.require(lit < neg && neg != 99, "literal above not");
  });

  criterion("reduction", [](Outcome& o) {
    auto program = resolve_program({{"Main", "main.mml", fixture::read(fixture::dir() / "long_signature.mml")}});
    auto raw = build_constraints(program, {false, false}).soft.size();
    auto merged = build_constraints(program, {true, false}).soft.size();
    CheckOptions all;
    all.analysis.reduce = false;
    auto before = checked("overlapping_causes", all);
    auto after = checked("overlapping_causes");
    std::size_t n_before = before.errors.empty() ? 0 : before.errors[0].causes.size();
    std::size_t n_after = after.errors.empty() ? 0 : after.errors[0].causes.size();
    std::set<std::string> spans_before, spans_after;
    for (const auto& e : before.errors)
      for (const auto& c : e.causes)
        for (const auto& p : places(c)) spans_before.insert(p);
    for (const auto& e : after.errors)
      for (const auto& c : e.causes)
        for (const auto& p : places(c)) spans_after.insert(p);
    o.detail << "signature program " << raw << " -> " << merged << " soft constraints; causes " << n_before << " -> "
             << n_after << ", spans covered " << spans_after.size() << "/" << spans_before.size();
    o.require(raw == 10 && merged == 2, "merge counts");
    o.require(n_before == 4 && n_after == 2, "cause counts");
    o.require(spans_before == spans_after, "coverage lost");
  });

  criterion("corpus properties", [&](Outcome& o) {
    auto entries = oracle::load_corpus(corpus_dir / "ill-typed");
    std::size_t causes = 0, complete = 0, eligible = 0, covered = 0, top3 = 0;
    std::vector<std::size_t> per_error;
    std::vector<std::string> uncovered, missed;
    for (const auto& e : entries) {
      CheckOptions all;
      all.analysis.reduce = false;
      auto full = check(load_files({e.path}), all);
      auto reduced = check(load_files({e.path}));
      seen_families.emplace_back(reduced.family, reduced.system.soft.size());
      Solver solver(full.system);
      std::vector<ErrorGroup> groups;
      for (const auto& err : full.errors) groups.push_back(err.group);
      for (std::size_t g = 0; g < full.errors.size(); ++g)
        for (const auto& c : full.errors[g].causes) {
          ++causes;
          complete += solver.satisfiable(fix_environment(full.system, groups, g, c.mcs));
        }
      bool any_cover = false;
      for (const auto& err : full.errors)
        for (const auto& c : err.causes) any_cover |= covers_fix(c, e.fix);
      if (!e.expected_miss) {
        ++eligible;
        covered += any_cover;
        if (!any_cover) uncovered.push_back(e.path.stem().string());
      }
      bool hit = false;
      for (const auto& err : reduced.errors) {
        per_error.push_back(err.causes.size());
        for (std::size_t i = 0; i < std::min<std::size_t>(3, err.causes.size()); ++i)
          hit |= matches_fix(err.causes[i], e.fix);
      }
      top3 += hit;
      if (!hit) missed.push_back(e.path.stem().string());
    }
    std::sort(per_error.begin(), per_error.end());
    double median = per_error.empty() ? 0
                    : per_error.size() % 2 ? double(per_error[per_error.size() / 2])
                                           : (per_error[per_error.size() / 2 - 1] + per_error[per_error.size() / 2]) / 2.0;
    double cover_rate = eligible ? double(covered) / eligible : 0;
    double top3_rate = entries.empty() ? 0 : double(top3) / entries.size();
    o.detail << entries.size() << " programs; (a) " << complete << "/" << causes << " causes are complete fixes; (b) "
             << covered << "/" << eligible << " fixes covered; (c) median " << median
             << " causes per error; (d) top-3 " << top3 << "/" << entries.size();
    if (!missed.empty()) {
      o.detail << " [outside top 3:";
      for (const auto& m : missed) o.detail << ' ' << m;
      o.detail << ']';
    }
    o.require(entries.size() >= 20, "corpus too small");
    o.require(complete == causes, "(a)");
    o.require(cover_rate >= 0.9, "(b)");
    o.require(median <= 4, "(c)");
    o.require(top3_rate >= 0.7, "(d)");
  });

  criterion("performance", [&](Outcome& o) {
    double worst = 0, worst_budgeted = 0;
    std::string slowest;
    std::size_t partial = 0, runs = 0;
    for (const char* kind : {"ill-typed", "well-typed"})
      for (const auto& e : oracle::load_corpus(corpus_dir / kind)) {
        auto input = load_files({e.path});
        auto start = Clock::now();
        auto r = check(input);
        (void)diagnosis_json(r).dump();
        double took = ms_since(start);
        if (took > worst) {
          worst = took;
          slowest = e.path.stem().string();
        }
        CheckOptions budgeted;
        budgeted.budget.max_solve_calls = 8;
        start = Clock::now();
        auto b = check(input, budgeted);
        (void)diagnosis_json(b, budgeted).dump();
        took = ms_since(start);
        if (b.family.partial) {
          ++partial;
          worst_budgeted = std::max(worst_budgeted, took);
        }
        ++runs;
      }
    o.detail << "slowest full diagnosis " << worst << " ms (" << slowest << "); " << partial << "/" << runs
             << " budgeted runs partial, slowest " << worst_budgeted << " ms";
    o.require(worst < 1000, "full diagnosis over 1 s");
    o.require(partial > 0, "no budgeted run was partial");
    o.require(worst_budgeted < 100, "budgeted run over 100 ms");
  });

  criterion("determinism", [&](Outcome& o) {
    std::size_t files = 0, differing = 0;
    for (const char* kind : {"ill-typed", "well-typed"})
      for (const auto& e : oracle::load_corpus(corpus_dir / kind)) {
        auto a = diagnosis_json(check(load_files({e.path})));
        auto b = diagnosis_json(check(load_files({e.path})));
        a.erase("timing");
        b.erase("timing");
        differing += a.dump() != b.dump();
        ++files;
      }
    o.detail << differing << " of " << files << " documents differ between runs";
    o.require(differing == 0, "nondeterministic output");
  });

  criterion("duality", [](Outcome& o) {
    std::size_t violations = 0;
    for (const auto& [family, n] : seen_families)
      if (!family.muses.empty()) violations += duality_violations(family, n);
    o.detail << seen_families.size() << " families, " << violations << " violations";
    o.require(violations == 0, "violations");
  });

  return failures == 0 ? 0 : 1;
}
