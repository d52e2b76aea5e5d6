#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgnp/kg_store.hpp"
#include "kgnp/program.hpp"

namespace kgnp::acceptance {

/// Naive bottom-up evaluation of definite programs: apply every rule to the
/// facts known so far until a round adds nothing. Shares no code with the
/// engine beyond the term and program types.
class ReferenceResolver {
 public:
  /// Rules must be definite and range-restricted; `true` is the only
  /// built-in understood. Disjunctive bodies become separate rules.
  void add_program(const Program& p);
  void add_graph(const KnowledgeGraph& g);
  void saturate();

  /// Answers as "X = a, Y = b" (query variable order), "yes" when the
  /// query has no named variables.
  std::set<std::string> answers(const Query& q) const;
  std::size_t fact_count() const { return keys_.size(); }

 private:
  struct Clause {
    TermPtr head;
    std::vector<TermPtr> body;
  };
  using Subst = std::map<VarId, TermPtr>;

  void add_fact(const TermPtr& f);
  void join(const std::vector<TermPtr>& body, std::size_t i, Subst& s, std::vector<Subst>& out) const;

  std::vector<Clause> rules_;
  std::map<std::string, std::vector<TermPtr>> facts_;  // by name/arity
  std::set<std::string> keys_;
};

}  // namespace kgnp::acceptance
