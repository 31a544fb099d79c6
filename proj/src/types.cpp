#include "typecause/types.hpp"

#include <utility>

namespace typecause {

std::string tuple_con(std::size_t arity) { return "(," + std::to_string(arity) + ")"; }

bool is_tuple_con(const std::string& name) { return name.size() > 3 && name.rfind("(,", 0) == 0; }

TypeTerm TypeTerm::var(TVar id) {
  TypeTerm t;
  t.is_var_ = true;
  t.id_ = id;
  return t;
}

TypeTerm TypeTerm::con(std::string name, std::vector<TypeTerm> args) {
  TypeTerm t;
  t.is_var_ = false;
  t.name_ = std::move(name);
  t.args_ = std::move(args);
  return t;
}

TypeTerm TypeTerm::fn(TypeTerm arg, TypeTerm result) {
  return con(kArrowCon, {std::move(arg), std::move(result)});
}

TypeTerm TypeTerm::fn(const std::vector<TypeTerm>& args, TypeTerm result) {
  TypeTerm t = std::move(result);
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = fn(*it, std::move(t));
  return t;
}

TypeTerm TypeTerm::list(TypeTerm elem) { return con(kListCon, {std::move(elem)}); }

TypeTerm TypeTerm::tuple(std::vector<TypeTerm> elems) {
  auto name = tuple_con(elems.size());
  return con(std::move(name), std::move(elems));
}

void TypeTerm::collect_vars(std::vector<TVar>& out) const {
  if (is_var_) {
    out.push_back(id_);
    return;
  }
  for (const auto& a : args_) a.collect_vars(out);
}

bool TypeTerm::occurs(TVar id) const {
  if (is_var_) return id_ == id;
  for (const auto& a : args_)
    if (a.occurs(id)) return true;
  return false;
}

TypeRenderer::TypeRenderer(const std::map<TVar, std::string>* rigid_names)
    : rigid_names_(rigid_names) {
  if (rigid_names_)
    for (const auto& [id, name] : *rigid_names_) reserved_.insert(name);
}

std::string TypeRenderer::name_for(TVar id) {
  if (rigid_names_) {
    if (auto it = rigid_names_->find(id); it != rigid_names_->end()) return it->second;
  }
  if (auto it = assigned_.find(id); it != assigned_.end()) return it->second;
  std::string name;
  do {
    std::size_t n = next_++;
    name = std::string(1, static_cast<char>('a' + n % 26));
    if (n >= 26) name += std::to_string(n / 26);
  } while (reserved_.count(name));
  assigned_.emplace(id, name);
  return name;
}

// prec: 0 = top, 1 = left of arrow, 2 = constructor argument
void TypeRenderer::render_into(const TypeTerm& term, std::string& out, int prec) {
  if (term.is_var()) {
    out += name_for(term.var_id());
    return;
  }
  const auto& name = term.name();
  const auto& args = term.args();
  if (name == kArrowCon && args.size() == 2) {
    if (prec > 0) out += '(';
    render_into(args[0], out, 1);
    out += " -> ";
    render_into(args[1], out, 0);
    if (prec > 0) out += ')';
    return;
  }
  if (name == kListCon && args.size() == 1) {
    out += '[';
    render_into(args[0], out, 0);
    out += ']';
    return;
  }
  if (is_tuple_con(name)) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      render_into(args[i], out, 0);
    }
    out += ')';
    return;
  }
  bool parens = prec > 1 && !args.empty();
  if (parens) out += '(';
  out += name;
  for (const auto& a : args) {
    out += ' ';
    render_into(a, out, 2);
  }
  if (parens) out += ')';
}

std::string TypeRenderer::render(const TypeTerm& term) {
  std::string out;
  render_into(term, out, 0);
  return out;
}

}  // namespace typecause
