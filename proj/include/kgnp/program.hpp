#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgnp/term.hpp"

namespace kgnp {

enum class AnnotationMode { Fuzzy, Probabilistic };

/// Written `@f(...)` or `@p(...)`. Elements are numbers in [0, 1], concept
/// atoms declared in a `Concepts:` section, or rule variables.
struct Annotation {
  AnnotationMode mode = AnnotationMode::Fuzzy;
  std::vector<TermPtr> elements;
};

enum class GoalKind { Call, Fail, Disjunction, Cut, Not };

struct Goal;
using Conjunction = std::vector<Goal>;

struct Goal {
  GoalKind kind = GoalKind::Call;
  TermPtr term;  // Call: the predicate; Fail: the bound (number or variable) or null
  std::optional<Annotation> annotation;
  std::vector<std::string> sources;        // `#(A, B)#` prefix; empty inherits the caller's
  std::vector<Conjunction> alternatives;   // Disjunction branches; Not holds one conjunction
  std::size_t line = 0;
};

struct Rule {
  TermPtr head;
  std::optional<Annotation> annotation;
  std::vector<Conjunction> body;  // disjunction of conjunctions; empty for facts
  std::vector<std::string> origin;  // `#G#` written before the whole clause
  std::string emba;                 // enclosing `EMBA: name { ... }` block, if any
  std::size_t var_count = 0;
  std::vector<std::string> var_names;  // indexed by VarId
  std::size_t line = 0;

  bool is_fact() const { return body.empty(); }
};

struct DataList {
  std::string name;
  std::vector<TermPtr> values;
};

struct ConceptAnchor {
  std::string name;
  double value = 0;
};

struct ComparativeAlias {
  std::string name;
  std::string relation;  // one of eq, larger, smaller, larger-eq, smaller-eq
};

struct Program {
  std::vector<Rule> rules;  // rules and non-ground facts, in source order
  std::vector<Rule> data;   // ground facts, in source order
  std::vector<DataList> data_lists;
  std::vector<ConceptAnchor> concepts;
  std::vector<ComparativeAlias> comparatives;
  std::optional<AnnotationMode> mode;
  std::size_t annotation_arity = 0;

  const DataList* find_list(std::string_view name) const;
  std::optional<double> concept_value(std::string_view name) const;
  std::vector<std::string> emba_algorithms() const;
  bool empty() const {
    return rules.empty() && data.empty() && data_lists.empty() && concepts.empty() && comparatives.empty();
  }
};

struct Query {
  Conjunction goals;
  std::vector<std::string> sources;
  std::size_t var_count = 0;
  std::vector<std::string> var_names;
};

struct Triplet;

/// `(h, r, t)` read as the predicate `r(h, t)`.
Goal triplet_as_predicate(const Triplet& t);

bool same_annotation(const std::optional<Annotation>& a, const std::optional<Annotation>& b);
bool same_goal(const Goal& a, const Goal& b);
bool same_rule(const Rule& a, const Rule& b);
bool same_program(const Program& a, const Program& b);

}  // namespace kgnp
