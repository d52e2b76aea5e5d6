#include "kgnp/annotation.hpp"

#include <algorithm>

#include "kgnp/error.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

Tuple neutral_tuple(AnnotationMode mode, std::size_t n) {
  return Tuple(n, mode == AnnotationMode::Fuzzy ? 0.0 : 1.0);
}

Tuple combine(AnnotationMode mode, const Tuple& a, const Tuple& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() != b.size())
    throw Error("annotation length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  Tuple out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = mode == AnnotationMode::Fuzzy ? std::max(a[i], b[i]) : a[i] * b[i];
  return out;
}

Tuple propagate_annotation(const Tuple& head_static, const std::vector<Tuple>& body_dynamic, AnnotationMode mode) {
  Tuple acc = head_static;
  for (const auto& t : body_dynamic) acc = combine(mode, acc, t);
  return acc;
}

TupleOrder compare_tuples(const Tuple& x, const Tuple& y) {
  if (x.empty() || y.empty()) return TupleOrder::Incomparable;
  if (x.size() != y.size())
    throw Error("annotation length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  bool le = true, ge = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    le = le && x[i] <= y[i];
    ge = ge && x[i] >= y[i];
  }
  if (le && ge) return TupleOrder::Eq;
  if (le) return TupleOrder::Le;
  if (ge) return TupleOrder::Ge;
  return TupleOrder::Incomparable;
}

const char* to_string(TupleOrder o) {
  switch (o) {
    case TupleOrder::Le: return "le";
    case TupleOrder::Ge: return "ge";
    case TupleOrder::Eq: return "eq";
    case TupleOrder::Incomparable: return "incomparable";
  }
  return "?";
}

Tuple annotation_values(const Annotation& a, const Program& concepts) {
  Tuple out;
  out.reserve(a.elements.size());
  for (const auto& e : a.elements) {
    if (e->is_number()) {
      out.push_back(e->number);
    } else if (e->is_atom()) {
      auto v = concepts.concept_value(e->name);
      if (!v) throw DataError("undeclared concept '" + e->name + "'");
      out.push_back(*v);
    } else {
      throw TypeError("annotation element " + to_string(*e) + " is not a number or concept");
    }
  }
  return out;
}

std::string display_tuple(const Tuple& t, AnnotationMode mode, const Program& concepts) {
  std::string out = mode == AnnotationMode::Fuzzy ? "f(" : "p(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    std::string text = format_number(t[i]);
    for (const auto& c : concepts.concepts)
      if (c.value == t[i]) {
        text = atom_text(c.name);
        break;
      }
    out += text;
  }
  return out + ")";
}

}  // namespace kgnp
