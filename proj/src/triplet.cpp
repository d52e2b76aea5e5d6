#include "kgnp/triplet.hpp"

#include "kgnp/program.hpp"

namespace kgnp {

bool same_triplet(const Triplet& a, const Triplet& b) {
  return a.relation == b.relation && same_term(*a.head, *b.head) && same_term(*a.tail, *b.tail);
}

std::string to_string(const Triplet& t) {
  return "(" + to_string(*t.head) + ", " + atom_text(t.relation) + ", " + to_string(*t.tail) + ")";
}

Goal triplet_as_predicate(const Triplet& t) {
  Goal g;
  g.kind = GoalKind::Call;
  g.term = make_compound(t.relation, {t.head, t.tail});
  return g;
}

}  // namespace kgnp
