#pragma once

#include <string>

#include "kgnp/term.hpp"

namespace kgnp {

struct Triplet {
  TermPtr head;
  std::string relation;
  TermPtr tail;
};

bool same_triplet(const Triplet& a, const Triplet& b);

/// `(head, relation, tail)` in triple-file syntax.
std::string to_string(const Triplet& t);

}  // namespace kgnp
