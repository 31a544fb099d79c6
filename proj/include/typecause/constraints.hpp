#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "typecause/syntax.hpp"
#include "typecause/types.hpp"

namespace typecause {

enum class Hardness : std::uint8_t { Soft, Hard };

/// A subset of soft constraints, as sorted ids.
using SoftIds = std::vector<std::size_t>;

/// Which kind of syntax produced a constraint.
enum class Origin : std::uint8_t {
  Expression,  // an expression node
  Pattern,     // a case-alternative pattern
  Signature,   // a node of a type signature
  Plumbing,    // scoping, declaration shape and instantiation links
};

/// Identifies a top-level declaration: its module and name. A signature and
/// the value it annotates share one key.
struct DeclKey {
  std::string module;
  std::string name;

  friend auto operator<=>(const DeclKey&, const DeclKey&) = default;
  friend bool operator==(const DeclKey&, const DeclKey&) = default;
};

/// One equality constraint between type terms over template-level variables.
struct Constraint {
  std::size_t id = 0;  // dense index within soft() or hard()
  TypeTerm lhs;
  TypeTerm rhs;
  std::vector<Span> spans;
  std::vector<TVar> span_subjects;  // expected-type variable per span
  DeclKey owner;
  TVar subject = 0;  // binding under a fix is the expected type at spans[0]
  Hardness hardness = Hardness::Soft;
  Origin origin = Origin::Expression;
  bool structural = false;  // produced by a node that has children
  std::optional<std::size_t> signature_of;  // Program::values index
  std::size_t seq = 0;  // creation order, for stable dumps
};

/// Reference from an equation to the constraint it instantiates.
struct ConstraintRef {
  Hardness hardness = Hardness::Hard;
  std::size_t id = 0;
  friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

/// A ground-level equation handed to the solver. Several equations may share
/// one constraint (one per instantiation of the owning template).
struct Equation {
  ConstraintRef ref;
  TypeTerm lhs;
  TypeTerm rhs;
};

/// A use of a top-level value from another template group: the callee group
/// is instantiated with fresh variables and `member`'s result variable is
/// linked to `result` by the hard constraint `link`.
struct Instantiation {
  std::size_t group = 0;
  std::size_t member = 0;  // template index
  TVar result = 0;
  std::size_t link = 0;  // hard constraint id
  DeclKey owner;
  Span span;
  std::size_t seq = 0;
};

/// Per-declaration constraint template ("predicate body").
struct DeclTemplate {
  std::size_t value = 0;  // Program::values index
  DeclKey key;
  Span span;
  TVar result = 0;
  std::vector<TVar> params;
  std::vector<ConstraintRef> body;
  std::size_t group = 0;
};

/// Mutually recursive declarations share one group; recursion inside a group
/// is monomorphic. Template-level variables of a group occupy
/// [tvar_begin, tvar_end).
struct TemplateGroup {
  std::vector<std::size_t> members;
  TVar tvar_begin = 0;
  TVar tvar_end = 0;
  std::vector<Equation> equations;
  std::vector<Instantiation> calls;
};

enum class BinderKind : std::uint8_t { TopLevel, Parameter, Lambda, Let, Pattern };

struct BinderInfo {
  std::string name;
  Span span;
  TVar tvar = 0;
  DeclKey owner;
  BinderKind kind = BinderKind::TopLevel;
};

/// Soft constraints (retractable, the enumerator's universe) and hard
/// background constraints of a program, plus the expanded equation list.
/// Immutable once built.
struct ConstraintSystem {
  std::vector<Constraint> soft;
  std::vector<Constraint> hard;
  std::vector<DeclTemplate> templates;
  std::vector<TemplateGroup> groups;  // callees before callers
  std::vector<Equation> equations;    // entry goals and all instantiations
  std::vector<std::vector<TVar>> instance_bases;  // per group: first variable of each instantiated copy
  std::vector<BinderInfo> binders;
  std::map<TVar, std::string> rigid_names;  // signature variables, rigid in their own template
  TVar template_tvars = 0;  // variables below this bound are template-level
  TVar tvar_count = 0;

  const Constraint& constraint(ConstraintRef r) const {
    return r.hardness == Hardness::Soft ? soft[r.id] : hard[r.id];
  }
  /// Group whose template variables include `var`, if any.
  std::optional<std::size_t> group_of(TVar var) const;
  /// Copies of a template variable: itself, then one per instantiation.
  std::vector<TVar> copies_of(TVar var, std::size_t limit) const;
  /// Soft constraints owned by `key`, in id order.
  std::vector<std::size_t> soft_owned_by(const DeclKey& key) const;
};

/// Translates a resolved program into a constraint system. No reductions
/// are applied.
ConstraintSystem generate(const Program& program);

/// Merges the soft constraints of each type signature into one constraint.
ConstraintSystem merge_signature_constraints(const ConstraintSystem& system);

/// Reclassifies constraints of structural nodes (application shapes,
/// patterns, lambdas, conditionals, list and tuple shapes, composite
/// signature nodes) as hard.
ConstraintSystem mark_structural_hard(const ConstraintSystem& system);

struct GenerationOptions {
  bool merge_signatures = true;
  bool structural_hard = true;
};

/// generate() followed by the enabled reductions.
ConstraintSystem build_constraints(const Program& program, const GenerationOptions& options = {});

/// Deterministic clause-style rendering: one block per declaration template.
std::string dump_clauses(const ConstraintSystem& system);

}  // namespace typecause
