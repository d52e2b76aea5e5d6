#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace kgnp {

using VarId = std::uint32_t;

enum class TermKind { Variable, Atom, Number, Compound };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind = TermKind::Atom;
  std::string name;  // variable display name, atom symbol or functor
  double number = 0;
  std::string unit;  // "%", "kg", ... ; empty for plain numbers
  VarId var = 0;
  std::vector<TermPtr> args;

  bool is_var() const { return kind == TermKind::Variable; }
  bool is_atom() const { return kind == TermKind::Atom; }
  bool is_number() const { return kind == TermKind::Number; }
  bool is_compound() const { return kind == TermKind::Compound; }
  bool is_callable() const { return is_atom() || is_compound(); }
  std::size_t arity() const { return args.size(); }
};

TermPtr make_var(VarId id, std::string name = {});
TermPtr make_atom(std::string name);
TermPtr make_number(double value, std::string unit = {});
TermPtr make_compound(std::string functor, std::vector<TermPtr> args);
TermPtr make_list(const std::vector<TermPtr>& items, TermPtr tail = nullptr);

/// Elements of a proper `[a, b, ...]` list; false for anything else.
bool list_items(const TermPtr& t, std::vector<TermPtr>& out);

bool is_ground(const Term& t);
bool occurs_in(VarId v, const Term& t);
void collect_vars(const TermPtr& t, std::vector<TermPtr>& out);

/// Structural identity. Variables are equal when their ids match.
bool same_term(const Term& a, const Term& b);

/// Standard order: variables < numbers < atoms < compounds.
int compare_terms(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return compare_terms(*a, *b) < 0; }
};

/// Adds `offset` to every variable id.
TermPtr shift_vars(const TermPtr& t, VarId offset);

/// Canonical source text; parses back to the same term.
std::string to_string(const Term& t);
inline std::string to_string(const TermPtr& t) { return t ? to_string(*t) : std::string("<null>"); }

/// Text of an atom as it must be written in source (quoted when needed).
std::string atom_text(std::string_view name);
std::string functor_text(std::string_view name);

/// True for names that lex as variables: uppercase or `_` initial.
bool variable_name(std::string_view name);

/// Name/arity key, e.g. "in-class/2".
std::string indicator(const Term& t);

}  // namespace kgnp
