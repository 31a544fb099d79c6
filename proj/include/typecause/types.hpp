#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace typecause {

/// Type variable identifier. Unique per generation run.
using TVar = std::uint32_t;

// Reserved constructor names for the built-in type shapes.
inline constexpr const char* kArrowCon = "->";
inline constexpr const char* kListCon = "[]";

/// Name of the k-ary tuple constructor, e.g. "(,2)".
std::string tuple_con(std::size_t arity);
bool is_tuple_con(const std::string& name);

/// A first-order type term: either a type variable or a constructor applied
/// to argument terms. Functions, lists and tuples are ordinary constructors.
class TypeTerm {
 public:
  TypeTerm() = default;  // the variable 0

  static TypeTerm var(TVar id);
  static TypeTerm con(std::string name, std::vector<TypeTerm> args = {});
  static TypeTerm fn(TypeTerm arg, TypeTerm result);
  static TypeTerm fn(const std::vector<TypeTerm>& args, TypeTerm result);
  static TypeTerm list(TypeTerm elem);
  static TypeTerm tuple(std::vector<TypeTerm> elems);

  bool is_var() const noexcept { return is_var_; }
  TVar var_id() const noexcept { return id_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<TypeTerm>& args() const noexcept { return args_; }

  bool is_arrow() const { return !is_var_ && name_ == kArrowCon && args_.size() == 2; }

  /// Appends every variable occurring in the term, in left-to-right order.
  void collect_vars(std::vector<TVar>& out) const;
  bool occurs(TVar id) const;

  friend bool operator==(const TypeTerm&, const TypeTerm&) = default;

 private:
  bool is_var_ = true;
  TVar id_ = 0;
  std::string name_;
  std::vector<TypeTerm> args_;
};

/// Renders type terms in source syntax. Unbound variables get canonical
/// names a, b, c, ... in order of first appearance across all calls made on
/// the same renderer. Rigid variables (from signatures) keep their names.
class TypeRenderer {
 public:
  TypeRenderer() = default;
  explicit TypeRenderer(const std::map<TVar, std::string>* rigid_names);

  std::string render(const TypeTerm& term);

 private:
  std::string name_for(TVar id);
  void render_into(const TypeTerm& term, std::string& out, int prec);

  const std::map<TVar, std::string>* rigid_names_ = nullptr;
  std::set<std::string> reserved_;
  std::map<TVar, std::string> assigned_;
  std::size_t next_ = 0;
};

}  // namespace typecause
