#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixture_support.hpp"
#include "typecause/solver.hpp"

using namespace typecause;
using fixture::system_of;

namespace {

GenerationOptions raw() { return {false, false}; }

std::size_t count_origin(const ConstraintSystem& s, Origin o) {
  std::size_t n = 0;
  for (const auto& c : s.soft) n += c.origin == o;
  return n;
}

}  // namespace

TEST_CASE("signature merging: one constraint per signature") {
  auto src = fixture::read(fixture::dir() / "long_signature.mml");
  auto program = resolve_program({{"Main", "main.mml", src}});
  auto plain = build_constraints(program, raw());
  auto merged = build_constraints(program, {true, false});
  CHECK(plain.soft.size() == 10);
  CHECK(merged.soft.size() == 2);
  CHECK(count_origin(merged, Origin::Signature) == 1);

  // Int, Int, the arrow, and the body
  CHECK(system_of("f :: Int -> Int\nf a = a\n", raw()).soft.size() == 4);
  CHECK(system_of("f :: Int -> Int\nf a = a\n", {true, false}).soft.size() == 2);
  // with structural hardening the arrows are hard; merging is unaffected
  CHECK(build_constraints(program, {false, true}).soft.size() == 6);
  CHECK(build_constraints(program).soft.size() == 2);
}

TEST_CASE("a merged signature is located at the whole annotation") {
  auto s = system_of("f :: Int -> Bool\nf a = a\n");
  bool found = false;
  for (const auto& c : s.soft) {
    if (c.origin != Origin::Signature) continue;
    found = true;
    REQUIRE(c.spans.size() == 1);
    CHECK(c.spans[0].to_string() == "Main:1:6-1:17");
    CHECK(c.owner.name == "f");
  }
  CHECK(found);
}

TEST_CASE("structural constraints become hard") {
  const char* src = "f x = if x then [1, 2] else (\\y -> [y]) 3\n";
  auto soft = system_of(src, raw());
  auto marked = system_of(src, {false, true});
  std::size_t structural = 0;
  for (const auto& c : soft.soft) structural += c.structural;
  CHECK(structural > 0);
  CHECK(marked.soft.size() == soft.soft.size() - structural);
  CHECK(marked.hard.size() == soft.hard.size() + structural);
  for (const auto& c : marked.soft) CHECK_FALSE(c.structural);
  // soft ids stay dense
  for (std::size_t i = 0; i < marked.soft.size(); ++i) CHECK(marked.soft[i].id == i);
}

TEST_CASE("every soft constraint is located and owned") {
  auto src = fixture::read(fixture::dir() / "size_mean_variance.mml");
  for (auto options : {GenerationOptions{}, raw()}) {
    auto s = system_of(src, options);
    for (const auto& c : s.soft) {
      CHECK_FALSE(c.spans.empty());
      CHECK(c.spans.size() == c.span_subjects.size());
      CHECK_FALSE(c.owner.name.empty());
      CHECK(c.hardness == Hardness::Soft);
    }
  }
}

TEST_CASE("polymorphic uses instantiate the template with fresh variables") {
  auto s = system_of("ident v = v\n\npair = (ident 1, ident True)\n");
  REQUIRE(s.groups.size() == 2);
  std::size_t calls = 0;
  for (const auto& g : s.groups) calls += g.calls.size();
  CHECK(calls == 2);
  // the callee's soft constraint appears once per copy, under one id
  std::size_t ident_soft = s.soft_owned_by({"Main", "ident"}).size();
  REQUIRE(ident_soft == 1);
  auto id = s.soft_owned_by({"Main", "ident"})[0];
  std::size_t copies = 0;
  for (const auto& eq : s.equations) copies += eq.ref == ConstraintRef{Hardness::Soft, id};
  // the entry copy plus one per use
  CHECK(copies == 3);
  Solver solver(s);
  CHECK(solver.satisfiable(fixture::all_soft(s.soft.size())));
}

TEST_CASE("recursion inside a group is monomorphic") {
  auto s = system_of("f x = g x\ng y = f 1 && y\n");
  CHECK(s.groups.size() == 1);
  CHECK(s.groups[0].members.size() == 2);
  Solver solver(s);
  // g's argument is both Bool (&&) and Int (f 1 flows into x then y)
  CHECK_FALSE(solver.satisfiable(fixture::all_soft(s.soft.size())));
}

TEST_CASE("group_of and copies_of follow instantiation") {
  auto s = system_of("ident v = v\n\nuse = ident (ident 'c')\n");
  const auto& t = s.templates[0];
  REQUIRE(t.key.name == "ident");
  auto g = s.group_of(t.result);
  REQUIRE(g);
  auto copies = s.copies_of(t.result, 16);
  CHECK(copies.size() == 1 + s.instance_bases[*g].size());
  CHECK(copies.front() == t.result);
  CHECK(s.copies_of(t.result, 1).size() == 1);
}

TEST_CASE("structural fallback keeps programs with structural conflicts checkable") {
  auto result = check({{{"Main", "main.mml", "f = (1, 2) 3\n"}}, {}});
  CHECK(result.structural_fallback);
  CHECK_FALSE(result.well_typed);
  CHECK_FALSE(result.errors.empty());

  auto ok = check({{{"Main", "main.mml", "f = 1 + True\n"}}, {}});
  CHECK_FALSE(ok.structural_fallback);
}

TEST_CASE("the clause dump is deterministic and mentions every declaration") {
  auto src = fixture::read(fixture::dir() / "size_mean_variance.mml");
  auto a = dump_clauses(system_of(src));
  auto b = dump_clauses(system_of(src));
  CHECK(a == b);
  for (const char* name : {"size", "mean", "variance", "stderr", "type_check"})
    CHECK(a.find(name) != std::string::npos);
  CHECK(a.find("% soft s0") != std::string::npos);
}

TEST_CASE("data constructors get their declared types") {
  auto s = system_of("data Shape = Circle Float | Square Float\n\narea s = case s of { Circle r -> r; Square w -> w *. w }\n");
  Solver solver(s);
  auto sol = solver.solve(fixture::all_soft(s.soft.size()));
  REQUIRE(sol);
  TypeRenderer r(&s.rigid_names);
  CHECK(r.render(sol->resolve(s.templates[0].result)) == "Shape -> Float");
}
