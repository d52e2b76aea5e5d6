#include "kgnp/unify.hpp"

#include <limits>

#include "kgnp/error.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

const TermPtr* Bindings::lookup(VarId v) const {
  if (v >= slots_.size() || !slots_[v]) return nullptr;
  return &slots_[v];
}

void Bindings::bind(VarId v, TermPtr value) {
  if (v >= slots_.size()) slots_.resize(std::max<std::size_t>(v + 1, slots_.size() * 2));
  slots_[v] = std::move(value);
  trail_.push_back(v);
}

void Bindings::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    slots_[trail_.back()].reset();
    trail_.pop_back();
  }
}

TermPtr Bindings::deref(const TermPtr& t) const {
  TermPtr cur = t;
  while (cur->is_var()) {
    const TermPtr* next = lookup(cur->var);
    if (!next) break;
    cur = *next;
  }
  return cur;
}

TermPtr Bindings::resolve(const TermPtr& t) const {
  TermPtr cur = deref(t);
  if (!cur->is_compound()) return cur;
  std::vector<TermPtr> args;
  args.reserve(cur->args.size());
  bool changed = false;
  for (const auto& a : cur->args) {
    args.push_back(resolve(a));
    changed = changed || args.back() != a;
  }
  if (!changed) return cur;
  return make_compound(cur->name, std::move(args));
}

namespace {

bool occurs(VarId v, const TermPtr& t, const Bindings& b) {
  TermPtr cur = b.deref(t);
  if (cur->is_var()) return cur->var == v;
  for (const auto& a : cur->args)
    if (occurs(v, a, b)) return true;
  return false;
}

bool units_agree(const Term& a, const Term& b) { return a.unit.empty() || b.unit.empty() || a.unit == b.unit; }

}  // namespace

bool unify_terms(const TermPtr& x, const TermPtr& y, Bindings& b) {
  TermPtr a = b.deref(x), c = b.deref(y);
  if (a == c) return true;
  if (a->is_var()) {
    if (c->is_var() && c->var == a->var) return true;
    if (b.occurs_check() && occurs(a->var, c, b)) return false;
    b.bind(a->var, c);
    return true;
  }
  if (c->is_var()) {
    if (b.occurs_check() && occurs(c->var, a, b)) return false;
    b.bind(c->var, a);
    return true;
  }
  if (a->kind != c->kind) return false;
  switch (a->kind) {
    case TermKind::Atom: return a->name == c->name;
    case TermKind::Number: return a->number == c->number && units_agree(*a, *c);
    case TermKind::Compound:
      if (a->name != c->name || a->args.size() != c->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!unify_terms(a->args[i], c->args[i], b)) return false;
      return true;
    case TermKind::Variable: break;
  }
  return false;
}

std::optional<Bindings> unify(const Goal& p, const Goal& q, const Bindings& b) {
  if (p.kind != GoalKind::Call || q.kind != GoalKind::Call) return std::nullopt;
  Bindings out = b;
  if (!unify_terms(p.term, q.term, out)) return std::nullopt;
  return out;
}

const char* to_string(CompRel r) {
  switch (r) {
    case CompRel::Eq: return "eq";
    case CompRel::Larger: return "larger";
    case CompRel::Smaller: return "smaller";
    case CompRel::LargerEq: return "larger-eq";
    case CompRel::SmallerEq: return "smaller-eq";
  }
  return "?";
}

namespace {

std::string fold(std::string_view name) {
  std::string out;
  for (char c : lowercase(name))
    if (c != '-' && c != '_') out += c;
  return out;
}

}  // namespace

ComparativeRegistry::ComparativeRegistry() {
  for (CompRel r : {CompRel::Eq, CompRel::Larger, CompRel::Smaller, CompRel::LargerEq, CompRel::SmallerEq})
    names_.emplace_back(fold(to_string(r)), r);
}

void ComparativeRegistry::add_alias(std::string_view alias, std::string_view relation) {
  auto r = lookup(relation);
  if (!r) throw DataError("comparative alias '" + std::string(alias) + "' names unknown relation '" +
                          std::string(relation) + "'");
  auto key = fold(alias);
  for (auto& [name, rel] : names_)
    if (name == key) {
      rel = *r;
      return;
    }
  names_.emplace_back(key, *r);
}

void ComparativeRegistry::add_aliases(const Program& p) {
  for (const auto& a : p.comparatives) add_alias(a.name, a.relation);
}

std::optional<CompRel> ComparativeRegistry::lookup(std::string_view predicate) const {
  auto key = fold(predicate);
  for (const auto& [name, rel] : names_)
    if (name == key) return rel;
  return std::nullopt;
}

Interval interval_of(CompRel r, double v) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (r) {
    case CompRel::Eq: return {v, v, false, false};
    case CompRel::Larger: return {v, inf, true, true};
    case CompRel::Smaller: return {-inf, v, true, true};
    case CompRel::LargerEq: return {v, inf, false, true};
    case CompRel::SmallerEq: return {-inf, v, true, false};
  }
  return {v, v, false, false};
}

bool contains(const Interval& outer, const Interval& inner) {
  bool lo_ok = outer.lo < inner.lo || (outer.lo == inner.lo && (!outer.lo_open || inner.lo_open));
  bool hi_ok = inner.hi < outer.hi || (outer.hi == inner.hi && (!outer.hi_open || inner.hi_open));
  return lo_ok && hi_ok;
}

bool comparative_unify_terms(const TermPtr& fact, const TermPtr& goal, Bindings& b, const ComparativeRegistry& reg) {
  TermPtr f = b.deref(fact), g = b.deref(goal);
  if (!f->is_compound() || !g->is_compound() || f->arity() != 2 || g->arity() != 2) return false;
  auto fr = reg.lookup(f->name), gr = reg.lookup(g->name);
  if (!fr || !gr) return false;
  TermPtr fv = b.resolve(f->args[1]), gv = b.resolve(g->args[1]);
  if (!fv->is_number() || !gv->is_number())
    throw TypeError("comparison needs numbers, got " + to_string(*fv) + " and " + to_string(*gv));
  if (!units_agree(*fv, *gv)) return false;
  if (!contains(interval_of(*gr, gv->number), interval_of(*fr, fv->number))) return false;
  return unify_terms(f->args[0], g->args[0], b);
}

std::optional<Bindings> comparative_unify(const Goal& fact, const Goal& goal, const Bindings& b,
                                          const ComparativeRegistry& reg) {
  if (fact.kind != GoalKind::Call || goal.kind != GoalKind::Call) return std::nullopt;
  Bindings out = b;
  if (!is_ground(*out.resolve(fact.term))) return std::nullopt;
  if (!comparative_unify_terms(fact.term, goal.term, out, reg)) return std::nullopt;
  return out;
}

}  // namespace kgnp
