#pragma once

#include <string>
#include <string_view>

#include "kgnp/program.hpp"

namespace kgnp {

/// Throws SyntaxError (line, column) on malformed text, on mixed fuzzy and
/// probabilistic annotations, on undeclared concepts and on references to
/// undefined data lists.
Program parse_program(std::string_view text);
Program parse_program_file(const std::string& path);

/// `? [#(G1, G2)#] goal, goal ; goal .`
Query parse_query(std::string_view text);

/// Ground term syntax used by triple files and session files: every
/// identifier is an atom, whatever its case.
TermPtr parse_ground_term(std::string_view text);

std::string print_program(const Program& p);
std::string print_rule(const Rule& r);
std::string print_goal(const Goal& g);
std::string print_conjunction(const Conjunction& c);
std::string print_query(const Query& q);
std::string print_annotation(const Annotation& a);

}  // namespace kgnp
