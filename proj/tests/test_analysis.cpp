#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixture_support.hpp"
#include "typecause/analysis.hpp"
#include "typecause/pipeline.hpp"

#include <set>

using namespace typecause;

namespace {

std::vector<std::string> places(const Cause& c) {
  std::vector<std::string> out;
  for (const auto& s : c.spans) out.push_back(s.span.to_string());
  return out;
}

bool covers(const std::vector<Cause>& causes, const Span& span) {
  for (const auto& c : causes)
    for (const auto& s : c.spans)
      if (s.span == span) return true;
  return false;
}

CheckOptions unreduced() {
  CheckOptions o;
  o.analysis.reduce = false;
  return o;
}

}  // namespace

TEST_CASE("connected conflicts form one error") {
  auto r = fixture::check("one_connected_error");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].causes.size() == 3);
}

TEST_CASE("independent conflicts form separate errors") {
  auto r = fixture::check("two_independent_errors");
  REQUIRE(r.errors.size() == 2);
  CHECK(r.errors[0].group.spans.front().start_line == 1);
  CHECK(r.errors[1].group.spans.front().start_line == 3);
  for (const auto& e : r.errors) CHECK(e.causes.size() == 2);
}

TEST_CASE("conflicts spread over several declarations are one error") {
  auto r = fixture::check("size_mean_variance");
  CHECK(r.family.muses.size() == 3);
  REQUIRE(r.errors.size() == 1);
  std::set<std::string> decls;
  for (const auto& c : r.errors[0].causes)
    for (const auto& d : c.decls) decls.insert(d.name);
  CHECK(decls.size() >= 2);
}

TEST_CASE("fewer locations rank first") {
  auto r = fixture::check("fewer_locations");
  REQUIRE(r.errors.size() == 1);
  const auto& causes = r.errors[0].causes;
  REQUIRE(causes.size() == 2);
  CHECK(places(causes[0]) == std::vector<std::string>{"fewer_locations:4:3-4:6"});
  CHECK(causes[0].breakdown.locations == 1);
  CHECK(causes[1].breakdown.locations == 2);
  CHECK(causes[0].stars == 3);
  CHECK(causes[1].stars == 2);
}

TEST_CASE("causes that leave types concrete rank above those that do not") {
  auto r = fixture::check("concrete_types");
  REQUIRE(r.errors.size() == 1);
  const auto& causes = r.errors[0].causes;
  std::size_t lit = causes.size(), neg = causes.size();
  for (std::size_t i = 0; i < causes.size(); ++i) {
    auto p = places(causes[i]);
    REQUIRE(p.size() == 1);
    if (p[0] == "concrete_types:1:10-1:11") lit = i;
    if (p[0] == "concrete_types:3:7-3:10") neg = i;
    // never the whole application
    CHECK(p[0] != "concrete_types:3:7-3:12");
  }
  REQUIRE(lit < causes.size());
  REQUIRE(neg < causes.size());
  CHECK(lit < neg);
  CHECK(causes[lit].breakdown.free_vars < causes[neg].breakdown.free_vars);
  CHECK(causes[lit].spans[0].expected_type == "Bool");
}

TEST_CASE("set cover keeps causes that add new locations") {
  auto all = fixture::check("overlapping_causes", unreduced());
  auto reduced = fixture::check("overlapping_causes");
  REQUIRE(all.errors.size() == 1);
  REQUIRE(reduced.errors.size() == 1);
  CHECK(all.errors[0].causes.size() == 4);
  CHECK(reduced.errors[0].causes.size() == 2);
  CHECK(reduced.errors[0].causes_before_reduction == 4);
  for (const auto& c : all.errors[0].causes)
    for (const auto& s : c.spans) CHECK(covers(reduced.errors[0].causes, s.span));
  // stars and ids are renumbered for the survivors
  CHECK(reduced.errors[0].causes[0].stars == 3);
  CHECK(reduced.errors[0].causes[1].stars == 2);
  CHECK(reduced.errors[0].causes[1].id == 1);
}

TEST_CASE("reduce_causes is greedy in rank order") {
  auto mk = [](std::size_t id, std::vector<int> cols) {
    Cause c;
    c.id = id;
    for (int col : cols) c.spans.push_back({Span{"M", 1, col, 1, col + 1, 0, 0}, 0, {}, ""});
    return c;
  };
  auto kept = reduce_causes({mk(0, {1, 2}), mk(1, {2}), mk(2, {3}), mk(3, {1, 3})});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].spans.size() == 2);
  CHECK(kept[1].spans[0].span.start_col == 3);
  CHECK(kept[0].stars == 3);
  CHECK(kept[1].stars == 2);
}

TEST_CASE("every cause is a complete fix for its error") {
  for (const char* name : {"char_in_int_list", "size_mean_variance", "two_independent_errors", "concrete_types"}) {
    auto r = fixture::check(name, unreduced());
    Solver solver(r.system);
    std::vector<ErrorGroup> groups;
    for (const auto& e : r.errors) groups.push_back(e.group);
    for (std::size_t g = 0; g < r.errors.size(); ++g) {
      for (const auto& c : r.errors[g].causes) {
        INFO(name << " cause " << c.id);
        CHECK(solver.satisfiable(fix_environment(r.system, groups, g, c.mcs)));
        // and removing it from the whole program fixes this error's conflicts
        auto rest = complement(c.mcs, r.system.soft.size());
        for (const auto& mus : r.errors[g].group.muses) CHECK_FALSE(is_subset(mus, rest));
      }
    }
  }
}

TEST_CASE("expected types come from the most specific instance") {
  auto r = fixture::check("conflicting_annotations");
  REQUIRE(r.errors.size() == 1);
  const auto& causes = r.errors[0].causes;
  REQUIRE(causes.size() == 3);
  const auto& both = causes[2];
  REQUIRE(both.spans.size() == 2);
  CHECK(both.spans[0].expected_type == "Bool");
  CHECK(both.spans[1].expected_type == "Bool");
}

TEST_CASE("hints show expected types at the cause and inferred binder types") {
  auto r = fixture::check("char_in_int_list");
  REQUIRE(r.errors.size() == 1);
  const auto& e = r.errors[0];
  REQUIRE(e.hints.size() == e.causes.size());
  const auto& top = e.causes[0];
  CHECK(places(top) == std::vector<std::string>{"char_in_int_list:3:6-3:9"});
  CHECK(top.spans[0].expected_type == "Int");
  bool expected = false, xs = false, ys = false;
  for (const auto& h : e.hints[0]) {
    if (h.kind == HintKind::Expected) expected |= h.type == "Int";
    if (h.kind == HintKind::Inferred && h.label == "xs") xs = h.type == "[Int]";
    if (h.kind == HintKind::Inferred && h.label == "ys") ys = h.type == "[Int]";
  }
  CHECK(expected);
  CHECK(xs);
  CHECK(ys);
}

TEST_CASE("errors across modules") {
  auto r = check(load_manifest(fixture::dir() / "cross_module" / "manifest.json"));
  REQUIRE(r.errors.size() == 1);
  const auto& causes = r.errors[0].causes;
  REQUIRE(causes.size() == 3);
  std::set<std::string> modules;
  for (const auto& c : causes)
    for (const auto& d : c.decls) modules.insert(d.module);
  CHECK(modules == std::set<std::string>{"A", "B"});
  const auto& last = causes[2];
  REQUIRE(last.spans.size() == 2);
  CHECK(last.spans[0].span.module == "B");
}

TEST_CASE("weights change the order") {
  CheckOptions o;
  o.analysis.weights = {0.0, 0.0, -1.0, 0.0};  // prefer open types
  auto r = fixture::check("concrete_types", o);
  REQUIRE(r.errors.size() == 1);
  CHECK(places(r.errors[0].causes[0]) == std::vector<std::string>{"concrete_types:3:7-3:10"});
}

TEST_CASE("well-typed programs have no errors") {
  for (const char* src : {"x = 1\n", "f x = x\n\ny = (f 1, f 'c')\n"}) {
    auto r = check({{{"Main", "main.mml", src}}, {}});
    CHECK(r.well_typed);
    CHECK(r.errors.empty());
  }
}
