#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgnp/program.hpp"

namespace kgnp {

/// Variable store with an undo trail. Slots are indexed by VarId and grow on
/// demand, so renamed clause variables need no registration.
class Bindings {
 public:
  explicit Bindings(bool occurs_check = true) : occurs_check_(occurs_check) {}

  bool occurs_check() const { return occurs_check_; }
  const TermPtr* lookup(VarId v) const;
  void bind(VarId v, TermPtr value);

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  /// Follows variable chains at the top level only.
  TermPtr deref(const TermPtr& t) const;
  /// Applies the substitution everywhere.
  TermPtr resolve(const TermPtr& t) const;

 private:
  bool occurs_check_;
  std::vector<TermPtr> slots_;
  std::vector<VarId> trail_;
};

/// Most general unifier of two terms, extending `b` in place. On failure the
/// caller restores `b` with undo(mark).
bool unify_terms(const TermPtr& x, const TermPtr& y, Bindings& b);

/// Goals unify when their predicates do. Returns the extended bindings.
std::optional<Bindings> unify(const Goal& p, const Goal& q, const Bindings& b);

enum class CompRel { Eq, Larger, Smaller, LargerEq, SmallerEq };
const char* to_string(CompRel r);

/// Comparative predicate names (eq, larger, smaller, larger-eq, smaller-eq)
/// plus program aliases. Names match case-insensitively, ignoring `-` and `_`.
class ComparativeRegistry {
 public:
  ComparativeRegistry();
  /// Throws DataError for an unknown target relation.
  void add_alias(std::string_view alias, std::string_view relation);
  void add_aliases(const Program& p);
  std::optional<CompRel> lookup(std::string_view predicate) const;

 private:
  std::vector<std::pair<std::string, CompRel>> names_;
};

/// The set of values a comparative fact admits, e.g. larger 90 is (90, inf).
struct Interval {
  double lo, hi;
  bool lo_open, hi_open;
};
Interval interval_of(CompRel r, double v);
bool contains(const Interval& outer, const Interval& inner);

/// `fact` (e.g. Eq(age(wang), 75)) entails `goal` (e.g. Larger(age(X), 70))
/// when the first arguments unify and the fact's interval lies inside the
/// goal's. Units must agree unless one side has none. Throws TypeError when
/// either second argument is not a number after substitution.
std::optional<Bindings> comparative_unify(const Goal& fact, const Goal& goal, const Bindings& b,
                                          const ComparativeRegistry& reg);

/// Same test on raw terms, extending `b` in place.
bool comparative_unify_terms(const TermPtr& fact, const TermPtr& goal, Bindings& b, const ComparativeRegistry& reg);

}  // namespace kgnp
