#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "typecause/syntax.hpp"

namespace typecause {

std::optional<std::size_t> Program::module_index(std::string_view id) const {
  for (std::size_t i = 0; i < modules.size(); ++i)
    if (modules[i].id == id) return i;
  return std::nullopt;
}

namespace {

const std::set<std::string, std::less<>> kPrimitiveTypes = {"Int", "Float", "Char", "Bool", "String"};

TypeExpr type_var(const std::string& name) {
  TypeExpr t;
  t.kind = TypeExprKind::Var;
  t.name = name;
  return t;
}

class Resolver {
 public:
  Program run(const std::vector<SourceModule>& sources, const std::vector<ImportEdge>& edges) {
    load_prelude();
    for (const auto& src : sources) {
      Module m;
      m.id = src.id;
      m.path = src.path;
      m.source = src.source;
      m.decls = parse_module(src.id, src.source);
      program_.modules.push_back(std::move(m));
    }
    check_modules(edges);
    collect_types();
    collect_values();
    if (!diags_.empty()) throw ResolveError(std::move(diags_));
    build_scopes();
    check_types();
    resolve_bodies();
    if (!diags_.empty()) throw ResolveError(std::move(diags_));
    program_.binder_count = next_binder_;
    return std::move(program_);
  }

 private:
  void error(const Span& span, std::string message) { diags_.push_back({span, std::move(message)}); }

  static Span module_span(const std::string& module) {
    Span s;
    s.module = module;
    return s;
  }

  void load_prelude() {
    ParseOptions opts;
    opts.allow_bare_signatures = true;
    auto decls = parse_module("Prelude", prelude_source(), opts);
    for (auto& t : kPrimitiveTypes) program_.type_arity[t] = 0;

    // list constructors come first so that patterns can refer to them by name
    ConstructorInfo nil{"[]", "[]", {"a"}, {}, true};
    TypeExpr list_a;
    list_a.kind = TypeExprKind::List;
    list_a.args.push_back(type_var("a"));
    ConstructorInfo cons{":", "[]", {"a"}, {type_var("a"), list_a}, true};
    program_.constructors.push_back(nil);
    program_.constructors.push_back(cons);

    for (auto& d : decls) {
      if (d.kind == DeclKind::Data) {
        program_.type_arity[d.name.name] = d.type_params.size();
        for (auto& c : d.constructors)
          program_.constructors.push_back({c.name, d.name.name, d.type_params, c.fields, true});
      } else if (d.kind == DeclKind::Signature) {
        program_.builtins.push_back({d.name.name, d.type});
      }
    }
    for (std::size_t i = 0; i < program_.builtins.size(); ++i) builtin_index_[program_.builtins[i].name] = i;
  }

  void check_modules(const std::vector<ImportEdge>& edges) {
    std::map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < program_.modules.size(); ++i) {
      auto& m = program_.modules[i];
      if (!ids.emplace(m.id, i).second) error(module_span(m.id), "duplicate module '" + m.id + "'");
    }
    auto add_import = [&](std::size_t importer, const std::string& target, const Span& span) {
      if (!ids.count(target)) {
        error(span, "unknown module '" + target + "'");
        return;
      }
      auto& imports = program_.modules[importer].imports;
      if (std::find(imports.begin(), imports.end(), target) == imports.end()) imports.push_back(target);
    };
    for (std::size_t i = 0; i < program_.modules.size(); ++i)
      for (const auto& d : program_.modules[i].decls)
        if (d.kind == DeclKind::Import) add_import(i, d.name.name, d.span);
    for (const auto& e : edges) {
      auto it = ids.find(e.importer);
      if (it == ids.end()) {
        error(module_span(e.importer), "unknown module '" + e.importer + "' in import edge");
        continue;
      }
      add_import(it->second, e.imported, module_span(e.importer));
    }
    // cycle detection
    std::vector<int> color(program_.modules.size(), 0);
    std::function<bool(std::size_t)> visit = [&](std::size_t i) {
      color[i] = 1;
      for (const auto& target : program_.modules[i].imports) {
        auto j = ids.at(target);
        if (color[j] == 1) return true;
        if (color[j] == 0 && visit(j)) return true;
      }
      color[i] = 2;
      return false;
    };
    for (std::size_t i = 0; i < program_.modules.size(); ++i) {
      if (color[i] == 0 && visit(i)) {
        error(module_span(program_.modules[i].id),
              "cyclic import involving module '" + program_.modules[i].id + "'");
        break;
      }
    }
  }

  void collect_types() {
    std::map<std::string, Span> ctor_spans;
    for (auto& m : program_.modules) {
      for (auto& d : m.decls) {
        if (d.kind != DeclKind::Data) continue;
        if (program_.type_arity.count(d.name.name)) {
          error(d.name.span, "duplicate type '" + d.name.name + "'");
          continue;
        }
        program_.type_arity[d.name.name] = d.type_params.size();
        for (auto& c : d.constructors) {
          bool clash = std::any_of(program_.constructors.begin(), program_.constructors.end(),
                                   [&](const ConstructorInfo& ci) { return ci.name == c.name; });
          if (clash || c.name == "True" || c.name == "False") {
            error(c.span, "duplicate constructor '" + c.name + "'");
            continue;
          }
          program_.constructors.push_back({c.name, d.name.name, d.type_params, c.fields, false});
        }
      }
    }
  }

  void collect_values() {
    for (std::size_t mi = 0; mi < program_.modules.size(); ++mi) {
      auto& m = program_.modules[mi];
      std::map<std::string, std::size_t> local;
      for (std::size_t di = 0; di < m.decls.size(); ++di) {
        const auto& d = m.decls[di];
        if (d.kind != DeclKind::Value) continue;
        if (local.count(d.name.name)) {
          error(d.name.span, "duplicate definition of '" + d.name.name + "'");
          continue;
        }
        local[d.name.name] = program_.values.size();
        program_.values.push_back({mi, di, std::nullopt});
      }
      for (std::size_t di = 0; di < m.decls.size(); ++di) {
        const auto& d = m.decls[di];
        if (d.kind != DeclKind::Signature) continue;
        auto it = local.find(d.name.name);
        if (it == local.end()) {
          error(d.span, "type signature for '" + d.name.name + "' lacks an accompanying binding");
          continue;
        }
        auto& v = program_.values[it->second];
        if (v.signature) {
          error(d.span, "duplicate type signature for '" + d.name.name + "'");
          continue;
        }
        v.signature = di;
      }
    }
  }

  void build_scopes() {
    scopes_.resize(program_.modules.size());
    for (std::size_t vi = 0; vi < program_.values.size(); ++vi) {
      const auto& v = program_.values[vi];
      scopes_[v.module][program_.value_decl(vi).name.name] = vi;
    }
    auto own = scopes_;
    for (std::size_t mi = 0; mi < program_.modules.size(); ++mi) {
      for (const auto& target : program_.modules[mi].imports) {
        auto ti = *program_.module_index(target);
        for (const auto& [name, vi] : own[ti]) {
          auto [it, inserted] = scopes_[mi].emplace(name, vi);
          if (!inserted && it->second != vi) {
            const auto& a = program_.value_decl(it->second);
            const auto& b = program_.value_decl(vi);
            error(a.name.span, "duplicate definition of '" + name + "' (also defined in module '" +
                                   b.name.span.module + "')");
          }
        }
      }
    }
  }

  void check_type(const TypeExpr& t, const std::vector<std::string>* allowed_vars) {
    switch (t.kind) {
      case TypeExprKind::Var:
        if (allowed_vars && std::find(allowed_vars->begin(), allowed_vars->end(), t.name) == allowed_vars->end())
          error(t.span, "type variable '" + t.name + "' is not a parameter of the data type");
        break;
      case TypeExprKind::Con: {
        auto it = program_.type_arity.find(t.name);
        if (it == program_.type_arity.end()) {
          error(t.span, "unknown type '" + t.name + "'");
        } else if (it->second != t.args.size()) {
          error(t.span, "type '" + t.name + "' expects " + std::to_string(it->second) + " argument(s), given " +
                            std::to_string(t.args.size()));
        }
        break;
      }
      default:
        break;
    }
    for (const auto& a : t.args) check_type(a, allowed_vars);
  }

  void check_types() {
    for (auto& m : program_.modules) {
      for (auto& d : m.decls) {
        if (d.kind == DeclKind::Signature) check_type(d.type, nullptr);
        if (d.kind == DeclKind::Data)
          for (auto& c : d.constructors)
            for (auto& f : c.fields) check_type(f, &d.type_params);
      }
    }
  }

  // --- expressions ---

  void bind(Binder& b) {
    b.id = next_binder_++;
    if (b.name != "_") locals_.push_back({b.name, b.id});
  }

  void resolve_bodies() {
    for (std::size_t vi = 0; vi < program_.values.size(); ++vi) {
      const auto& v = program_.values[vi];
      auto& d = program_.modules[v.module].decls[v.decl];
      current_module_ = v.module;
      d.name.id = next_binder_++;
      locals_.clear();
      for (auto& p : d.params) bind(p);
      resolve(d.body);
    }
  }

  std::optional<std::size_t> find_constructor(const std::string& name) const {
    for (std::size_t i = 0; i < program_.constructors.size(); ++i)
      if (program_.constructors[i].name == name) return i;
    return std::nullopt;
  }

  void resolve(Expr& e) {
    switch (e.kind) {
      case ExprKind::Var: {
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
          if (it->first == e.text) {
            e.ref = {RefKind::Local, it->second};
            return;
          }
        }
        const auto& scope = scopes_[current_module_];
        if (auto it = scope.find(e.text); it != scope.end()) {
          e.ref = {RefKind::Global, it->second};
          return;
        }
        if (auto it = builtin_index_.find(e.text); it != builtin_index_.end()) {
          e.ref = {RefKind::Builtin, it->second};
          return;
        }
        error(e.span, "variable not in scope: '" + e.text + "'");
        return;
      }
      case ExprKind::Ctor: {
        if (auto c = find_constructor(e.text)) {
          e.ref = {RefKind::Constructor, *c};
        } else {
          error(e.span, "data constructor not in scope: '" + e.text + "'");
        }
        return;
      }
      case ExprKind::Lambda: {
        auto mark = locals_.size();
        for (auto& p : e.params) bind(p);
        resolve(e.children[0]);
        locals_.resize(mark);
        return;
      }
      case ExprKind::Let: {
        auto mark = locals_.size();
        for (auto& b : e.bindings) bind(b.name);
        for (auto& b : e.bindings) {
          auto inner = locals_.size();
          for (auto& p : b.params) bind(p);
          resolve(b.body);
          locals_.resize(inner);
        }
        resolve(e.children[0]);
        locals_.resize(mark);
        return;
      }
      case ExprKind::Case: {
        resolve(e.children[0]);
        for (auto& alt : e.alts) {
          auto mark = locals_.size();
          auto& p = alt.pattern;
          if (p.kind == PatternKind::Ctor) {
            if (auto c = find_constructor(p.text)) {
              p.ref = {RefKind::Constructor, *c};
              auto arity = program_.constructors[*c].fields.size();
              if (arity != p.vars.size())
                error(p.span, "constructor '" + p.text + "' should have " + std::to_string(arity) +
                                  " argument(s) in pattern, but has " + std::to_string(p.vars.size()));
            } else {
              error(p.head_span, "data constructor not in scope: '" + p.text + "'");
            }
          }
          for (auto& b : p.vars) bind(b);
          resolve(alt.body);
          locals_.resize(mark);
        }
        return;
      }
      default:
        for (auto& c : e.children) resolve(c);
        return;
    }
  }

  Program program_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, std::size_t> builtin_index_;
  std::vector<std::map<std::string, std::size_t>> scopes_;
  std::vector<std::pair<std::string, std::uint32_t>> locals_;
  std::size_t current_module_ = 0;
  std::uint32_t next_binder_ = 0;
};

}  // namespace

Program resolve_program(const std::vector<SourceModule>& modules, const std::vector<ImportEdge>& imports) {
  return Resolver().run(modules, imports);
}

}  // namespace typecause
