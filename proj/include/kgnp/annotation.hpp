#pragma once

#include <string>
#include <vector>

#include "kgnp/program.hpp"

namespace kgnp {

/// Numeric form of an annotation. An empty tuple stands for an unknown one.
using Tuple = std::vector<double>;

enum class TupleOrder { Le, Ge, Eq, Incomparable };

/// All zeros for fuzzy mode, all ones for probabilistic mode.
Tuple neutral_tuple(AnnotationMode mode, std::size_t n);

/// Elementwise max (fuzzy) or product (probabilistic). Empty tuples act as
/// the neutral element. Throws Error on a length mismatch.
Tuple combine(AnnotationMode mode, const Tuple& a, const Tuple& b);

Tuple propagate_annotation(const Tuple& head_static, const std::vector<Tuple>& body_dynamic, AnnotationMode mode);

/// Componentwise order. Unknown (empty) tuples are incomparable; different
/// lengths throw Error.
TupleOrder compare_tuples(const Tuple& x, const Tuple& y);
const char* to_string(TupleOrder o);

/// Maps concept elements through the program's anchors. Variables must be
/// resolved to numbers or concepts by the caller first.
Tuple annotation_values(const Annotation& a, const Program& concepts);

/// Numbers are printed as-is unless they equal a concept anchor, in which
/// case the concept name is shown.
std::string display_tuple(const Tuple& t, AnnotationMode mode, const Program& concepts);

}  // namespace kgnp
