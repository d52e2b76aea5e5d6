// Helpers shared by the built-in installers. Not part of the public headers.
#pragma once

#include <string>

#include "kgnp/engine.hpp"
#include "kgnp/error.hpp"

namespace kgnp::builtin {

inline std::string display_text(const TermPtr& t) { return t->is_atom() ? t->name : to_string(*t); }

inline const Term* ground_or_null(const TermPtr& t) { return is_ground(*t) ? t.get() : nullptr; }

inline TermPtr rdf(const Triplet& t) { return make_compound("RDF", {t.head, make_atom(t.relation), t.tail}); }

// RDF(h, r, t), Vec(h, r, t), or any 3-argument compound standing for a triplet.
inline bool triplet_parts(const TermPtr& t, TermPtr& h, TermPtr& r, TermPtr& tail) {
  if (!t->is_compound() || t->arity() != 3) return false;
  h = t->args[0];
  r = t->args[1];
  tail = t->args[2];
  return true;
}

inline double as_number(const TermPtr& t, const char* what) {
  if (!t->is_number()) throw TypeError(std::string(what) + " needs a number, got " + to_string(t));
  return t->number;
}

// Enumerates visible triplets matching (h, r, t) over the call's graphs.
template <typename F>
Outcome for_each_triplet(BuiltinCall& c, const TermPtr& h, const TermPtr& r, const TermPtr& t, F&& visit) {
  const TermPtr hv = c.evaluate(h), rv = c.evaluate(r), tv = c.evaluate(t);
  std::string rel;
  if (rv->is_atom()) rel = rv->name;
  for (const auto& view : c.graphs()) {
    const auto idx = view.graph->candidates(ground_or_null(hv), rel.empty() ? nullptr : &rel, ground_or_null(tv));
    for (std::size_t i : idx) {
      const Triplet& tr = view.graph->triplets[i];
      if (!c.visible(view, tr)) continue;
      Outcome o = visit(view, tr);
      if (!o.more()) return o;
    }
  }
  return {};
}

/// Prints the vector form of every visible triplet matching `pattern`, a
/// Vec(h, r, t) term, then proves the goal with `pattern` bound to it.
Outcome output_vectors(BuiltinCall& c, const TermPtr& pattern, const TermPtr& target);

}  // namespace kgnp::builtin
