#include "typecause/solver.hpp"

#include <stdexcept>

namespace typecause {

Solver::Solver(const ConstraintSystem& system) {
  nodes_.resize(system.tvar_count);
  // Rigid signature variables are constants within their own template.
  for (const auto& [var, name] : system.rigid_names) {
    if (var >= nodes_.size()) continue;
    auto symbol = static_cast<std::int32_t>(symbols_.size());
    symbols_.push_back("'" + name + "#" + std::to_string(var));
    rigid_var_.push_back(var);
    nodes_[var].symbol = symbol;
  }
  soft_eqs_.resize(system.soft.size());
  std::vector<Pair> hard;
  for (const auto& eq : system.equations) {
    Pair p{compile(eq.lhs), compile(eq.rhs)};
    if (eq.ref.hardness == Hardness::Soft)
      soft_eqs_.at(eq.ref.id).push_back(p);
    else
      hard.push_back(p);
  }
  base_parent_.resize(nodes_.size());
  for (std::uint32_t i = 0; i < base_parent_.size(); ++i) base_parent_[i] = i;
  hard_ok_ = unify(base_parent_, hard) && acyclic(base_parent_);
}

std::uint32_t Solver::compile(const TypeTerm& t) {
  if (t.is_var()) {
    if (t.var_id() >= nodes_.size()) throw std::out_of_range("type variable outside the system");
    return t.var_id();
  }
  auto [it, inserted] = symbol_ids_.emplace(t.name(), static_cast<std::int32_t>(symbols_.size()));
  if (inserted) {
    symbols_.push_back(t.name());
    rigid_var_.push_back(std::nullopt);
  }
  std::vector<std::uint32_t> kids;
  kids.reserve(t.args().size());
  for (const auto& a : t.args()) kids.push_back(compile(a));
  Node n;
  n.symbol = it->second;
  n.first_child = static_cast<std::uint32_t>(children_.size());
  n.arity = static_cast<std::uint32_t>(kids.size());
  children_.insert(children_.end(), kids.begin(), kids.end());
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t Solver::find(std::vector<std::uint32_t>& parent, std::uint32_t n) {
  std::uint32_t root = n;
  while (parent[root] != root) root = parent[root];
  while (parent[n] != root) {
    std::uint32_t next = parent[n];
    parent[n] = root;
    n = next;
  }
  return root;
}

bool Solver::unify(std::vector<std::uint32_t>& parent, std::vector<Pair>& work) const {
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    a = find(parent, a);
    b = find(parent, b);
    if (a == b) continue;
    const Node& na = nodes_[a];
    const Node& nb = nodes_[b];
    if (na.symbol < 0) {
      parent[a] = b;
      continue;
    }
    if (nb.symbol < 0) {
      parent[b] = a;
      continue;
    }
    if (na.symbol != nb.symbol || na.arity != nb.arity) return false;
    parent[a] = b;
    for (std::uint32_t i = 0; i < na.arity; ++i)
      work.emplace_back(children_[na.first_child + i], children_[nb.first_child + i]);
  }
  return true;
}

// Occurs check: the quotient graph over class representatives must be acyclic.
bool Solver::acyclic(std::vector<std::uint32_t>& parent) const {
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> color(nodes_.size(), White);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;  // node, next child
  for (std::uint32_t start = 0; start < nodes_.size(); ++start) {
    std::uint32_t r = find(parent, start);
    if (color[r] != White || nodes_[r].symbol < 0) continue;
    color[r] = Grey;
    stack.emplace_back(r, 0);
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const Node& n = nodes_[node];
      if (next == n.arity) {
        color[node] = Black;
        stack.pop_back();
        continue;
      }
      std::uint32_t child = find(parent, children_[n.first_child + next]);
      ++next;
      if (color[child] == Grey) return false;
      if (color[child] == White && nodes_[child].symbol >= 0) {
        color[child] = Grey;
        stack.emplace_back(child, 0);
      }
    }
  }
  return true;
}

bool Solver::run(const SoftIds& enabled, std::vector<std::uint32_t>& parent) const {
  ++queries_;
  if (!hard_ok_) return false;
  parent = base_parent_;
  std::vector<Pair> work;
  for (auto id : enabled) {
    const auto& eqs = soft_eqs_.at(id);
    work.insert(work.end(), eqs.begin(), eqs.end());
    if (!unify(parent, work)) return false;
  }
  return acyclic(parent);
}

bool Solver::satisfiable(const SoftIds& enabled) const {
  std::vector<std::uint32_t> parent;
  return run(enabled, parent);
}

std::optional<Solution> Solver::solve(const SoftIds& enabled) const {
  std::vector<std::uint32_t> parent;
  if (!run(enabled, parent)) return std::nullopt;
  return Solution(this, std::move(parent));
}

std::uint32_t Solution::find(std::uint32_t n) const {
  while (parent_[n] != n) n = parent_[n];
  return n;
}

TypeTerm Solution::build(std::uint32_t node, std::vector<std::uint8_t>& visiting) const {
  std::uint32_t r = find(node);
  const auto& n = solver_->nodes_[r];
  if (n.symbol < 0) return TypeTerm::var(r);
  if (const auto& rigid = solver_->rigid_var_[n.symbol]) return TypeTerm::var(*rigid);
  if (visiting[r]) throw std::logic_error("cyclic solution");
  visiting[r] = 1;
  std::vector<TypeTerm> args;
  for (std::uint32_t i = 0; i < n.arity; ++i)
    args.push_back(build(solver_->children_[n.first_child + i], visiting));
  visiting[r] = 0;
  return TypeTerm::con(solver_->symbols_[n.symbol], std::move(args));
}

TypeTerm Solution::resolve(TVar var) const {
  std::vector<std::uint8_t> visiting(parent_.size(), 0);
  return build(var, visiting);
}

TypeTerm Solution::apply(const TypeTerm& term) const {
  if (term.is_var()) return resolve(term.var_id());
  std::vector<TypeTerm> args;
  for (const auto& a : term.args()) args.push_back(apply(a));
  return TypeTerm::con(term.name(), std::move(args));
}

}  // namespace typecause
