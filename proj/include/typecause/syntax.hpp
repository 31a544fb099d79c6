#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace typecause {

/// A region of one module's source. Lines and columns are 1-based; columns
/// count bytes. The end position is exclusive (one past the last byte).
struct Span {
  std::string module;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
  std::size_t begin = 0;  // byte offsets into the module source
  std::size_t end = 0;

  bool contains(const Span& other) const;
  std::string to_string() const;

  friend bool operator==(const Span& a, const Span& b) {
    return a.module == b.module && a.start_line == b.start_line && a.start_col == b.start_col &&
           a.end_line == b.end_line && a.end_col == b.end_col;
  }
  friend bool operator<(const Span& a, const Span& b);
};

Span merge_spans(const Span& first, const Span& last);

/// A syntax or name-resolution problem attached to a source span.
struct Diagnostic {
  Span span;
  std::string message;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Span span, const std::string& message);
  const Span& span() const noexcept { return span_; }
  const std::string& message() const noexcept { return message_; }

 private:
  Span span_;
  std::string message_;
};

/// Raised when a program parses but cannot be name-resolved (unknown names,
/// duplicate definitions, cyclic imports, ...). Carries every problem found.
class ResolveError : public std::runtime_error {
 public:
  explicit ResolveError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// --- AST -------------------------------------------------------------------

enum class RefKind : std::uint8_t { Unresolved, Local, Global, Builtin, Constructor };

/// Resolution of a name occurrence. `index` is a binder id (Local), an index
/// into Program::values (Global), Program::builtins (Builtin) or
/// Program::constructors (Constructor).
struct Ref {
  RefKind kind = RefKind::Unresolved;
  std::size_t index = 0;
};

struct Binder {
  std::string name;
  Span span;
  std::uint32_t id = 0;  // assigned by resolve_program
};

enum class TypeExprKind : std::uint8_t { Var, Con, Fn, List, Tuple };

struct TypeExpr {
  TypeExprKind kind = TypeExprKind::Con;
  Span span;
  std::string name;  // Var and Con
  std::vector<TypeExpr> args;  // Con arguments, Fn {arg, result}, List {elem}, Tuple elems
};

enum class ExprKind : std::uint8_t {
  IntLit,
  FloatLit,
  CharLit,
  StringLit,
  BoolLit,
  Var,
  Lambda,
  Apply,
  Let,
  If,
  List,
  Tuple,
  Ctor,
  Case,
};

struct LetBinding;
struct Alternative;

/// Expression node. Which members are meaningful depends on `kind`:
///   literals: text holds the source lexeme
///   Var / Ctor: text holds the name, ref its resolution
///   Lambda: params, children = {body}
///   Apply: children = {fn, arg1, ..., argN}
///   Let: bindings, children = {body}
///   If: children = {cond, then, else}
///   List / Tuple: children = elements
///   Case: children = {scrutinee}, alts
struct Expr {
  ExprKind kind = ExprKind::IntLit;
  Span span;
  std::string text;
  std::vector<Expr> children;
  std::vector<Binder> params;
  std::vector<LetBinding> bindings;
  std::vector<Alternative> alts;
  Ref ref;
};

struct LetBinding {
  Binder name;
  std::vector<Binder> params;
  Expr body;
  Span span;
};

enum class PatternKind : std::uint8_t { Wildcard, Var, Literal, Ctor, Tuple };

/// Flat pattern: constructor heads bind only variables or wildcards.
/// Cons cells are Ctor ":" with two vars; the empty list is Ctor "[]".
struct Pattern {
  PatternKind kind = PatternKind::Wildcard;
  Span span;
  Span head_span;  // constructor name or literal token
  std::string text;  // constructor name or literal lexeme
  ExprKind literal_kind = ExprKind::IntLit;
  std::vector<Binder> vars;  // wildcards appear as binders named "_"
  Ref ref;
};

struct Alternative {
  Pattern pattern;
  Expr body;
};

struct DataConstructor {
  std::string name;
  Span span;
  std::vector<TypeExpr> fields;
};

enum class DeclKind : std::uint8_t { Value, Signature, Data, Import };

/// Top-level declaration:
///   Value: name params = body
///   Signature: name :: type
///   Data: data name type_params = constructors
///   Import: import name
struct Decl {
  DeclKind kind = DeclKind::Value;
  Span span;
  Binder name;
  std::vector<Binder> params;
  Expr body;
  TypeExpr type;
  std::vector<std::string> type_params;
  std::vector<DataConstructor> constructors;
};

// --- Parsing ---------------------------------------------------------------

struct ParseOptions {
  /// Accept signatures without a binding (used for the built-in prelude).
  bool allow_bare_signatures = false;
};

/// Parses one module. Throws SyntaxError on the first syntax error.
std::vector<Decl> parse_module(std::string_view module_id, std::string_view source,
                               const ParseOptions& options = {});

/// Parses a standalone expression (used for round-trip checks).
Expr parse_expression(std::string_view module_id, std::string_view source);

/// Structural equality ignoring spans and resolution data.
bool same_structure(const Expr& a, const Expr& b);

// --- Programs --------------------------------------------------------------

struct SourceModule {
  std::string id;
  std::string path;
  std::string source;
};

/// `importer` sees every top-level value of `imported`.
struct ImportEdge {
  std::string importer;
  std::string imported;
};

struct Module {
  std::string id;
  std::string path;
  std::string source;
  std::vector<Decl> decls;
  std::vector<std::string> imports;
};

struct ValueInfo {
  std::size_t module = 0;
  std::size_t decl = 0;
  std::optional<std::size_t> signature;  // decl index of the signature, same module
};

struct BuiltinInfo {
  std::string name;
  TypeExpr type;
};

struct ConstructorInfo {
  std::string name;
  std::string type_name;
  std::vector<std::string> type_params;
  std::vector<TypeExpr> fields;
  bool builtin = false;
};

struct Program {
  std::vector<Module> modules;
  std::vector<ValueInfo> values;
  std::vector<BuiltinInfo> builtins;
  std::vector<ConstructorInfo> constructors;
  std::map<std::string, std::size_t> type_arity;
  std::size_t binder_count = 0;

  const Decl& value_decl(std::size_t value) const {
    const auto& v = values[value];
    return modules[v.module].decls[v.decl];
  }
  const Decl* signature_decl(std::size_t value) const {
    const auto& v = values[value];
    return v.signature ? &modules[v.module].decls[*v.signature] : nullptr;
  }
  std::optional<std::size_t> module_index(std::string_view id) const;
};

/// Parses every module and resolves names across them. `imports` are added to
/// any `import` declarations found in the sources. Throws SyntaxError or
/// ResolveError.
Program resolve_program(const std::vector<SourceModule>& modules,
                        const std::vector<ImportEdge>& imports = {});

/// Source text of the built-in prelude.
std::string_view prelude_source();

}  // namespace typecause
