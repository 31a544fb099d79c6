#include "typecause/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace typecause {

std::vector<std::size_t> ConstraintSystem::soft_owned_by(const DeclKey& key) const {
  std::vector<std::size_t> out;
  for (const auto& c : soft)
    if (c.owner == key) out.push_back(c.id);
  return out;
}

std::optional<std::size_t> ConstraintSystem::group_of(TVar var) const {
  if (var >= template_tvars) return std::nullopt;
  auto it = std::upper_bound(groups.begin(), groups.end(), var,
                             [](TVar v, const TemplateGroup& g) { return v < g.tvar_begin; });
  if (it == groups.begin()) return std::nullopt;
  --it;
  if (var >= it->tvar_end) return std::nullopt;
  return static_cast<std::size_t>(it - groups.begin());
}

std::vector<TVar> ConstraintSystem::copies_of(TVar var, std::size_t limit) const {
  std::vector<TVar> out{var};
  auto g = group_of(var);
  if (!g || *g >= instance_bases.size()) return out;
  for (auto base : instance_bases[*g]) {
    if (out.size() >= limit) break;
    out.push_back(base + (var - groups[*g].tvar_begin));
  }
  return out;
}

namespace {

// Upper bound on expanded equations; instantiation is exponential in the
// depth of chains of polymorphic uses.
constexpr std::size_t kMaxExpandedEquations = 4'000'000;

TypeTerm rename(const TypeTerm& t, TVar begin, TVar end, TVar base) {
  if (t.is_var()) {
    TVar id = t.var_id();
    return (id >= begin && id < end) ? TypeTerm::var(base + (id - begin)) : t;
  }
  std::vector<TypeTerm> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(rename(a, begin, end, base));
  return TypeTerm::con(t.name(), std::move(args));
}

class Generator {
 public:
  explicit Generator(const Program& program) : program_(program) {}

  ConstraintSystem run() {
    compute_groups();
    binder_tvars_.assign(program_.binder_count, 0);
    templates_.resize(program_.values.size());
    for (std::size_t vi = 0; vi < program_.values.size(); ++vi) {
      const auto& d = program_.value_decl(vi);
      templates_[vi].value = vi;
      templates_[vi].key = key_of(vi);
      templates_[vi].span = d.span;
    }
    group_pending_.resize(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g) generate_group(g);
    return finalize();
  }

 private:
  DeclKey key_of(std::size_t value) const {
    const auto& v = program_.values[value];
    return {program_.modules[v.module].id, program_.value_decl(value).name.name};
  }

  // --- strongly connected components of the value dependency graph ---

  static void collect_globals(const Expr& e, std::vector<std::size_t>& out) {
    if (e.kind == ExprKind::Var && e.ref.kind == RefKind::Global) out.push_back(e.ref.index);
    for (const auto& c : e.children) collect_globals(c, out);
    for (const auto& b : e.bindings) collect_globals(b.body, out);
    for (const auto& a : e.alts) collect_globals(a.body, out);
  }

  void compute_groups() {
    std::size_t n = program_.values.size();
    std::vector<std::vector<std::size_t>> deps(n);
    for (std::size_t i = 0; i < n; ++i) {
      collect_globals(program_.value_decl(i).body, deps[i]);
      std::sort(deps[i].begin(), deps[i].end());
      deps[i].erase(std::unique(deps[i].begin(), deps[i].end()), deps[i].end());
    }
    // Tarjan's algorithm; components come out callees-first.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0;
    group_of_.assign(n, 0);
    std::function<void(std::size_t)> connect = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (auto w : deps[v]) {
        if (index[w] < 0) {
          connect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        for (auto m : members) group_of_[m] = groups_.size();
        TemplateGroup g;
        g.members = std::move(members);
        groups_.push_back(std::move(g));
      }
    };
    for (std::size_t i = 0; i < n; ++i)
      if (index[i] < 0) connect(i);
  }

  // --- constraint construction ---

  TVar fresh() { return next_tvar_++; }

  std::size_t add(Hardness h, Origin origin, bool structural, TypeTerm lhs, TypeTerm rhs, const Span& span,
                  TVar subject) {
    Constraint c;
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    c.spans = {span};
    c.span_subjects = {subject};
    c.owner = templates_[current_value_].key;
    c.subject = subject;
    c.hardness = h;
    c.origin = origin;
    c.structural = structural;
    c.seq = seq_++;
    if (origin == Origin::Signature) c.signature_of = current_value_;
    pending_.push_back(std::move(c));
    is_link_.push_back(false);
    std::size_t index = pending_.size() - 1;
    group_pending_[current_group_].push_back(index);
    templates_[current_value_].body_pending.push_back(index);
    return index;
  }

  std::size_t soft(Origin origin, bool structural, TypeTerm lhs, TypeTerm rhs, const Span& span, TVar subject) {
    return add(Hardness::Soft, origin, structural, std::move(lhs), std::move(rhs), span, subject);
  }

  std::size_t hard(TypeTerm lhs, TypeTerm rhs, const Span& span, TVar subject) {
    return add(Hardness::Hard, Origin::Plumbing, false, std::move(lhs), std::move(rhs), span, subject);
  }

  void add_binder(const Binder& b, TVar tvar, BinderKind kind) {
    if (b.id < binder_tvars_.size()) binder_tvars_[b.id] = tvar;
    binders_.push_back({b.name, b.span, tvar, templates_[current_value_].key, kind});
  }

  /// Instantiates a library or constructor type with fresh flexible variables.
  TypeTerm instantiate(const TypeExpr& t, std::map<std::string, TVar>& vars) {
    switch (t.kind) {
      case TypeExprKind::Var: {
        auto [it, inserted] = vars.emplace(t.name, 0);
        if (inserted) it->second = fresh();
        return TypeTerm::var(it->second);
      }
      case TypeExprKind::Con: {
        if (t.name == "String") return TypeTerm::list(TypeTerm::con("Char"));
        std::vector<TypeTerm> args;
        for (const auto& a : t.args) args.push_back(instantiate(a, vars));
        return TypeTerm::con(t.name, std::move(args));
      }
      case TypeExprKind::Fn:
        return TypeTerm::fn(instantiate(t.args[0], vars), instantiate(t.args[1], vars));
      case TypeExprKind::List:
        return TypeTerm::list(instantiate(t.args[0], vars));
      case TypeExprKind::Tuple: {
        std::vector<TypeTerm> elems;
        for (const auto& a : t.args) elems.push_back(instantiate(a, vars));
        return TypeTerm::tuple(std::move(elems));
      }
    }
    return TypeTerm::var(fresh());
  }

  TypeTerm constructor_type(const ConstructorInfo& c) {
    std::map<std::string, TVar> vars;
    std::vector<TypeTerm> params;
    for (const auto& p : c.type_params) {
      TVar v = fresh();
      vars[p] = v;
      params.push_back(TypeTerm::var(v));
    }
    std::vector<TypeTerm> fields;
    for (const auto& f : c.fields) fields.push_back(instantiate(f, vars));
    TypeTerm result = c.type_name == kListCon ? TypeTerm::list(params.at(0))
                                              : TypeTerm::con(c.type_name, std::move(params));
    return TypeTerm::fn(fields, std::move(result));
  }

  static TypeTerm literal_type(ExprKind kind) {
    switch (kind) {
      case ExprKind::IntLit: return TypeTerm::con("Int");
      case ExprKind::FloatLit: return TypeTerm::con("Float");
      case ExprKind::CharLit: return TypeTerm::con("Char");
      case ExprKind::StringLit: return TypeTerm::list(TypeTerm::con("Char"));
      default: return TypeTerm::con("Bool");
    }
  }

  void generate_group(std::size_t g) {
    current_group_ = g;
    auto& group = groups_[g];
    group.tvar_begin = next_tvar_;
    for (auto m : group.members) {
      current_value_ = m;
      templates_[m].group = g;
      templates_[m].result = fresh();
      add_binder(program_.value_decl(m).name, templates_[m].result, BinderKind::TopLevel);
    }
    for (auto m : group.members) generate_decl(m);
    group.tvar_end = next_tvar_;
  }

  void generate_decl(std::size_t value) {
    current_value_ = value;
    auto& tmpl = templates_[value];
    const Decl& d = program_.value_decl(value);
    if (d.params.empty()) {
      gen_expr(d.body, tmpl.result);
    } else {
      std::vector<TypeTerm> param_types;
      for (const auto& p : d.params) {
        TVar pv = fresh();
        tmpl.params.push_back(pv);
        add_binder(p, pv, BinderKind::Parameter);
        param_types.push_back(TypeTerm::var(pv));
      }
      TVar body = fresh();
      hard(TypeTerm::var(tmpl.result), TypeTerm::fn(param_types, TypeTerm::var(body)), d.name.span, tmpl.result);
      gen_expr(d.body, body);
    }
    if (const Decl* sig = program_.signature_decl(value)) {
      TVar annotated = fresh();
      std::map<std::string, TVar> rigid;
      gen_type(sig->type, annotated, rigid);
      hard(TypeTerm::var(tmpl.result), TypeTerm::var(annotated), sig->name.span, tmpl.result);
    }
  }

  void gen_type(const TypeExpr& t, TVar v, std::map<std::string, TVar>& rigid) {
    TypeTerm shape;
    bool structural = !t.args.empty();
    switch (t.kind) {
      case TypeExprKind::Var: {
        auto [it, inserted] = rigid.emplace(t.name, 0);
        if (inserted) {
          it->second = fresh();
          rigid_names_[it->second] = t.name;
        }
        shape = TypeTerm::var(it->second);
        break;
      }
      case TypeExprKind::Con: {
        if (t.name == "String" && t.args.empty()) {
          shape = TypeTerm::list(TypeTerm::con("Char"));
          break;
        }
        std::vector<TypeTerm> args;
        for (const auto& a : t.args) {
          TVar av = fresh();
          gen_type(a, av, rigid);
          args.push_back(TypeTerm::var(av));
        }
        shape = TypeTerm::con(t.name, std::move(args));
        break;
      }
      case TypeExprKind::Fn: {
        TVar a = fresh();
        TVar r = fresh();
        gen_type(t.args[0], a, rigid);
        gen_type(t.args[1], r, rigid);
        shape = TypeTerm::fn(TypeTerm::var(a), TypeTerm::var(r));
        break;
      }
      case TypeExprKind::List: {
        TVar e = fresh();
        gen_type(t.args[0], e, rigid);
        shape = TypeTerm::list(TypeTerm::var(e));
        break;
      }
      case TypeExprKind::Tuple: {
        std::vector<TypeTerm> elems;
        for (const auto& a : t.args) {
          TVar ev = fresh();
          gen_type(a, ev, rigid);
          elems.push_back(TypeTerm::var(ev));
        }
        shape = TypeTerm::tuple(std::move(elems));
        break;
      }
    }
    soft(Origin::Signature, structural, TypeTerm::var(v), std::move(shape), t.span, v);
  }

  void gen_var(const Expr& e, TVar v) {
    switch (e.ref.kind) {
      case RefKind::Local:
        soft(Origin::Expression, false, TypeTerm::var(v), TypeTerm::var(binder_tvars_.at(e.ref.index)), e.span, v);
        return;
      case RefKind::Global: {
        std::size_t target = e.ref.index;
        if (group_of_[target] == current_group_) {
          // monomorphic use inside a recursive group
          soft(Origin::Expression, false, TypeTerm::var(v), TypeTerm::var(templates_[target].result), e.span, v);
          return;
        }
        TVar inst = fresh();
        soft(Origin::Expression, false, TypeTerm::var(v), TypeTerm::var(inst), e.span, v);
        Instantiation call;
        call.group = group_of_[target];
        call.member = target;
        call.result = inst;
        call.owner = templates_[current_value_].key;
        call.span = e.span;
        call.seq = seq_++;
        call.link = add(Hardness::Hard, Origin::Plumbing, false, TypeTerm::var(inst),
                        TypeTerm::var(templates_[target].result), e.span, inst);
        is_link_.back() = true;
        // links are expanded per instantiation, not as group equations
        group_pending_[current_group_].pop_back();
        groups_[current_group_].calls.push_back(std::move(call));
        return;
      }
      case RefKind::Builtin: {
        std::map<std::string, TVar> vars;
        auto t = instantiate(program_.builtins[e.ref.index].type, vars);
        soft(Origin::Expression, false, TypeTerm::var(v), std::move(t), e.span, v);
        return;
      }
      default:
        throw std::logic_error("unresolved variable '" + e.text + "' reached constraint generation");
    }
  }

  void gen_expr(const Expr& e, TVar v) {
    switch (e.kind) {
      case ExprKind::IntLit:
      case ExprKind::FloatLit:
      case ExprKind::CharLit:
      case ExprKind::StringLit:
      case ExprKind::BoolLit:
        soft(Origin::Expression, false, TypeTerm::var(v), literal_type(e.kind), e.span, v);
        return;
      case ExprKind::Var:
        gen_var(e, v);
        return;
      case ExprKind::Ctor: {
        auto t = constructor_type(program_.constructors.at(e.ref.index));
        soft(Origin::Expression, false, TypeTerm::var(v), std::move(t), e.span, v);
        return;
      }
      case ExprKind::Lambda: {
        std::vector<TypeTerm> params;
        for (const auto& p : e.params) {
          TVar pv = fresh();
          add_binder(p, pv, BinderKind::Lambda);
          params.push_back(TypeTerm::var(pv));
        }
        TVar body = fresh();
        gen_expr(e.children[0], body);
        soft(Origin::Expression, true, TypeTerm::var(v), TypeTerm::fn(params, TypeTerm::var(body)), e.span, v);
        return;
      }
      case ExprKind::Apply: {
        TVar fn = fresh();
        std::vector<TypeTerm> args;
        gen_expr(e.children[0], fn);
        for (std::size_t i = 1; i < e.children.size(); ++i) {
          TVar a = fresh();
          gen_expr(e.children[i], a);
          args.push_back(TypeTerm::var(a));
        }
        soft(Origin::Expression, true, TypeTerm::var(fn), TypeTerm::fn(args, TypeTerm::var(v)), e.span, v);
        return;
      }
      case ExprKind::Let: {
        for (const auto& b : e.bindings) add_binder(b.name, fresh(), BinderKind::Let);
        for (const auto& b : e.bindings) {
          TVar x = binder_tvars_.at(b.name.id);
          if (b.params.empty()) {
            gen_expr(b.body, x);
            continue;
          }
          std::vector<TypeTerm> params;
          for (const auto& p : b.params) {
            TVar pv = fresh();
            add_binder(p, pv, BinderKind::Parameter);
            params.push_back(TypeTerm::var(pv));
          }
          TVar body = fresh();
          hard(TypeTerm::var(x), TypeTerm::fn(params, TypeTerm::var(body)), b.name.span, x);
          gen_expr(b.body, body);
        }
        gen_expr(e.children[0], v);
        return;
      }
      case ExprKind::If: {
        TVar c = fresh(), t = fresh(), f = fresh();
        gen_expr(e.children[0], c);
        gen_expr(e.children[1], t);
        gen_expr(e.children[2], f);
        soft(Origin::Expression, true, TypeTerm::tuple({TypeTerm::var(c), TypeTerm::var(t), TypeTerm::var(f)}),
             TypeTerm::tuple({TypeTerm::con("Bool"), TypeTerm::var(v), TypeTerm::var(v)}), e.span, v);
        return;
      }
      case ExprKind::List: {
        TVar elem = fresh();
        if (e.children.empty()) {
          soft(Origin::Expression, false, TypeTerm::var(v), TypeTerm::list(TypeTerm::var(elem)), e.span, v);
          return;
        }
        std::vector<TypeTerm> lhs{TypeTerm::var(v)};
        std::vector<TypeTerm> rhs{TypeTerm::list(TypeTerm::var(elem))};
        for (const auto& c : e.children) {
          TVar ev = fresh();
          gen_expr(c, ev);
          lhs.push_back(TypeTerm::var(ev));
          rhs.push_back(TypeTerm::var(elem));
        }
        soft(Origin::Expression, true, TypeTerm::tuple(std::move(lhs)), TypeTerm::tuple(std::move(rhs)), e.span, v);
        return;
      }
      case ExprKind::Tuple: {
        std::vector<TypeTerm> elems;
        for (const auto& c : e.children) {
          TVar ev = fresh();
          gen_expr(c, ev);
          elems.push_back(TypeTerm::var(ev));
        }
        soft(Origin::Expression, true, TypeTerm::var(v), TypeTerm::tuple(std::move(elems)), e.span, v);
        return;
      }
      case ExprKind::Case: {
        TVar scrutinee = fresh();
        gen_expr(e.children[0], scrutinee);
        for (const auto& alt : e.alts) {
          gen_pattern(alt.pattern, scrutinee);
          gen_expr(alt.body, v);
        }
        return;
      }
    }
  }

  void gen_pattern(const Pattern& p, TVar scrutinee) {
    switch (p.kind) {
      case PatternKind::Wildcard:
        return;
      case PatternKind::Var: {
        TVar x = fresh();
        add_binder(p.vars[0], x, BinderKind::Pattern);
        hard(TypeTerm::var(x), TypeTerm::var(scrutinee), p.span, x);
        return;
      }
      case PatternKind::Literal:
        soft(Origin::Pattern, false, TypeTerm::var(scrutinee), literal_type(p.literal_kind), p.span, scrutinee);
        return;
      case PatternKind::Ctor: {
        TVar head = fresh();
        auto t = constructor_type(program_.constructors.at(p.ref.index));
        soft(Origin::Pattern, false, TypeTerm::var(head), std::move(t), p.head_span, head);
        std::vector<TypeTerm> fields;
        for (const auto& b : p.vars) {
          TVar x = fresh();
          add_binder(b, x, BinderKind::Pattern);
          fields.push_back(TypeTerm::var(x));
        }
        soft(Origin::Pattern, true, TypeTerm::var(head), TypeTerm::fn(fields, TypeTerm::var(scrutinee)), p.span,
             scrutinee);
        return;
      }
      case PatternKind::Tuple: {
        std::vector<TypeTerm> elems;
        for (const auto& b : p.vars) {
          TVar x = fresh();
          add_binder(b, x, BinderKind::Pattern);
          elems.push_back(TypeTerm::var(x));
        }
        soft(Origin::Pattern, true, TypeTerm::var(scrutinee), TypeTerm::tuple(std::move(elems)), p.span, scrutinee);
        return;
      }
    }
  }

  // --- finalization ---

  ConstraintSystem finalize() {
    ConstraintSystem sys;
    std::vector<ConstraintRef> refs(pending_.size());
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      auto& list = pending_[i].hardness == Hardness::Soft ? sys.soft : sys.hard;
      refs[i] = {pending_[i].hardness, list.size()};
      pending_[i].id = list.size();
      list.push_back(pending_[i]);
    }
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      for (auto pi : group_pending_[g]) groups_[g].equations.push_back({refs[pi], pending_[pi].lhs, pending_[pi].rhs});
      for (auto& call : groups_[g].calls) call.link = refs[call.link].id;
    }
    for (auto& t : templates_) {
      DeclTemplate out;
      out.value = t.value;
      out.key = t.key;
      out.span = t.span;
      out.result = t.result;
      out.params = t.params;
      out.group = t.group;
      for (auto pi : t.body_pending) out.body.push_back(refs[pi]);
      sys.templates.push_back(std::move(out));
    }
    sys.groups = std::move(groups_);
    sys.binders = std::move(binders_);
    sys.rigid_names = std::move(rigid_names_);
    sys.template_tvars = next_tvar_;
    expand_all(sys);
    return sys;
  }

  static void expand(const ConstraintSystem& sys, std::size_t g, TVar base, std::vector<Equation>& out,
                     TVar& counter, std::vector<std::vector<TVar>>& bases) {
    const auto& group = sys.groups[g];
    for (const auto& eq : group.equations)
      out.push_back({eq.ref, rename(eq.lhs, group.tvar_begin, group.tvar_end, base),
                     rename(eq.rhs, group.tvar_begin, group.tvar_end, base)});
    for (const auto& call : group.calls) {
      const auto& callee = sys.groups[call.group];
      TVar callee_base = counter;
      counter += callee.tvar_end - callee.tvar_begin;
      bases[call.group].push_back(callee_base);
      expand(sys, call.group, callee_base, out, counter, bases);
      TVar linked = callee_base + (sys.templates[call.member].result - callee.tvar_begin);
      TVar local = call.result - group.tvar_begin + base;
      out.push_back({{Hardness::Hard, call.link}, TypeTerm::var(local), TypeTerm::var(linked)});
      if (out.size() > kMaxExpandedEquations)
        throw std::length_error("program too large: polymorphic instantiation exceeds the equation limit");
    }
  }

  static void expand_all(ConstraintSystem& sys) {
    TVar counter = sys.template_tvars;
    std::vector<Equation> out;
    std::vector<std::vector<TVar>> bases(sys.groups.size());
    for (std::size_t g = 0; g < sys.groups.size(); ++g)
      expand(sys, g, sys.groups[g].tvar_begin, out, counter, bases);
    sys.equations = std::move(out);
    sys.instance_bases = std::move(bases);
    sys.tvar_count = counter;
  }

  struct TemplateDraft {
    std::size_t value = 0;
    DeclKey key;
    Span span;
    TVar result = 0;
    std::vector<TVar> params;
    std::vector<std::size_t> body_pending;
    std::size_t group = 0;
  };

  const Program& program_;
  std::vector<TemplateGroup> groups_;
  std::vector<std::size_t> group_of_;
  std::vector<TemplateDraft> templates_;
  std::vector<std::vector<std::size_t>> group_pending_;
  std::vector<Constraint> pending_;
  std::vector<bool> is_link_;
  std::vector<TVar> binder_tvars_;
  std::vector<BinderInfo> binders_;
  std::map<TVar, std::string> rigid_names_;
  std::size_t current_group_ = 0;
  std::size_t current_value_ = 0;
  std::size_t seq_ = 0;
  TVar next_tvar_ = 0;
};

/// Rewrites every soft reference through `soft_map`; hard ids are kept.
void remap_soft(ConstraintSystem& sys, const std::vector<ConstraintRef>& soft_map) {
  auto fix = [&](ConstraintRef& r) {
    if (r.hardness == Hardness::Soft) r = soft_map[r.id];
  };
  for (auto& g : sys.groups)
    for (auto& eq : g.equations) fix(eq.ref);
  for (auto& eq : sys.equations) fix(eq.ref);
  for (auto& t : sys.templates) {
    for (auto& r : t.body) fix(r);
    std::vector<ConstraintRef> unique;
    for (auto& r : t.body)
      if (std::find(unique.begin(), unique.end(), r) == unique.end()) unique.push_back(r);
    t.body = std::move(unique);
  }
}

}  // namespace

ConstraintSystem generate(const Program& program) { return Generator(program).run(); }

ConstraintSystem merge_signature_constraints(const ConstraintSystem& system) {
  ConstraintSystem out = system;
  std::map<std::size_t, std::size_t> count;
  for (const auto& c : system.soft)
    if (c.signature_of) ++count[*c.signature_of];

  std::vector<Constraint> soft;
  std::vector<ConstraintRef> map(system.soft.size());
  std::map<std::size_t, std::size_t> merged_at;
  for (const auto& c : system.soft) {
    if (!c.signature_of || count[*c.signature_of] < 2) {
      map[c.id] = {Hardness::Soft, soft.size()};
      soft.push_back(c);
      soft.back().id = soft.size() - 1;
      continue;
    }
    auto [it, first] = merged_at.emplace(*c.signature_of, soft.size());
    if (first) {
      Constraint m = c;
      m.id = soft.size();
      m.lhs = TypeTerm::tuple({c.lhs});
      m.rhs = TypeTerm::tuple({c.rhs});
      m.structural = false;
      soft.push_back(std::move(m));
    } else {
      auto& m = soft[it->second];
      auto lhs = m.lhs.args();
      auto rhs = m.rhs.args();
      lhs.push_back(c.lhs);
      rhs.push_back(c.rhs);
      m.lhs = TypeTerm::tuple(std::move(lhs));
      m.rhs = TypeTerm::tuple(std::move(rhs));
      // Nodes come children first, so the last one is the whole annotation.
      m.spans = c.spans;
      m.span_subjects = c.span_subjects;
      m.subject = c.subject;
    }
    map[c.id] = {Hardness::Soft, it->second};
  }
  out.soft = std::move(soft);
  remap_soft(out, map);
  return out;
}

ConstraintSystem mark_structural_hard(const ConstraintSystem& system) {
  ConstraintSystem out = system;
  std::vector<Constraint> soft;
  std::vector<ConstraintRef> map(system.soft.size());
  for (const auto& c : system.soft) {
    if (c.structural) {
      Constraint h = c;
      h.hardness = Hardness::Hard;
      h.id = out.hard.size();
      map[c.id] = {Hardness::Hard, h.id};
      out.hard.push_back(std::move(h));
    } else {
      map[c.id] = {Hardness::Soft, soft.size()};
      soft.push_back(c);
      soft.back().id = soft.size() - 1;
    }
  }
  out.soft = std::move(soft);
  remap_soft(out, map);
  return out;
}

ConstraintSystem build_constraints(const Program& program, const GenerationOptions& options) {
  ConstraintSystem sys = generate(program);
  if (options.merge_signatures) sys = merge_signature_constraints(sys);
  if (options.structural_hard) sys = mark_structural_hard(sys);
  return sys;
}

// --- dump ---

namespace {

std::string atom(const std::string& name) {
  if (name == kArrowCon) return "fn";
  if (name == kListCon) return "list";
  if (is_tuple_con(name)) return "tuple";
  std::string out = name;
  out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

void clause_term(const TypeTerm& t, const std::map<TVar, std::string>& rigid, std::ostream& os) {
  if (t.is_var()) {
    if (auto it = rigid.find(t.var_id()); it != rigid.end())
      os << "sk_" << it->second << t.var_id();
    else
      os << 'V' << t.var_id();
    return;
  }
  os << atom(t.name());
  if (t.args().empty()) return;
  os << '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ", ";
    clause_term(t.args()[i], rigid, os);
  }
  os << ')';
}

}  // namespace

std::string dump_clauses(const ConstraintSystem& system) {
  std::ostringstream os;
  for (const auto& t : system.templates) {
    os << t.key.name << "/2:";
    if (t.key.module.size()) os << "  % module " << t.key.module;
    os << '\n';
    struct Line {
      std::size_t seq;
      std::string text;
    };
    std::vector<Line> lines;
    for (const auto& r : t.body) {
      const auto& c = system.constraint(r);
      std::ostringstream ls;
      ls << "  ";
      clause_term(c.lhs, system.rigid_names, ls);
      ls << " = ";
      clause_term(c.rhs, system.rigid_names, ls);
      ls << "    % " << (r.hardness == Hardness::Soft ? "soft s" : "hard h") << r.id;
      for (const auto& s : c.spans) ls << ' ' << s.to_string();
      lines.push_back({c.seq, ls.str()});
    }
    for (const auto& call : system.groups[t.group].calls) {
      if (!(call.owner == t.key)) continue;
      std::ostringstream ls;
      ls << "  " << system.templates[call.member].key.name << "(V" << call.result << ", _)    % instance, link h"
         << call.link << ' ' << call.span.to_string();
      lines.push_back({call.seq, ls.str()});
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.seq < b.seq; });
    for (const auto& l : lines) os << l.text << '\n';
  }
  os << "type_check/0:\n";
  for (const auto& t : system.templates) os << "  " << t.key.name << "(_, _)\n";
  return os.str();
}

}  // namespace typecause
