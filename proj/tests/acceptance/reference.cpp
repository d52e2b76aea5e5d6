#include "reference.hpp"

#include "kgnp/error.hpp"

namespace kgnp::acceptance {
namespace {

using Subst = std::map<VarId, TermPtr>;

bool ground_equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Atom:
      return a.name == b.name;
    case TermKind::Number:
      return a.number == b.number && a.unit == b.unit;
    case TermKind::Compound:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!ground_equal(*a.args[i], *b.args[i])) return false;
      return true;
    case TermKind::Variable:
      break;
  }
  return false;
}

// One-way matching of a pattern against a ground term.
bool match(const TermPtr& pattern, const TermPtr& ground, Subst& s) {
  if (pattern->is_var()) {
    auto it = s.find(pattern->var);
    if (it != s.end()) return ground_equal(*it->second, *ground);
    s.emplace(pattern->var, ground);
    return true;
  }
  if (pattern->kind != ground->kind) return false;
  if (!pattern->is_compound()) return ground_equal(*pattern, *ground);
  if (pattern->name != ground->name || pattern->args.size() != ground->args.size()) return false;
  for (std::size_t i = 0; i < pattern->args.size(); ++i)
    if (!match(pattern->args[i], ground->args[i], s)) return false;
  return true;
}

TermPtr substitute(const TermPtr& t, const Subst& s) {
  if (t->is_var()) {
    auto it = s.find(t->var);
    if (it == s.end()) throw Error("reference resolver: unbound head variable " + t->name);
    return it->second;
  }
  if (!t->is_compound()) return t;
  std::vector<TermPtr> args;
  for (const auto& a : t->args) args.push_back(substitute(a, s));
  return make_compound(t->name, std::move(args));
}

std::string key_of(const Term& t) { return t.name + "/" + std::to_string(t.args.size()); }

bool is_true(const Term& t) { return t.is_atom() && t.name == "true"; }

}  // namespace

void ReferenceResolver::add_program(const Program& p) {
  for (const auto& f : p.data) add_fact(f.head);
  for (const auto& r : p.rules) {
    if (r.body.empty()) {
      rules_.push_back({r.head, {}});
      continue;
    }
    for (const auto& conj : r.body) {
      Clause c{r.head, {}};
      for (const auto& g : conj) {
        if (g.kind != GoalKind::Call || !g.sources.empty() || g.annotation)
          throw Error("reference resolver: only plain calls are supported");
        if (!is_true(*g.term)) c.body.push_back(g.term);
      }
      rules_.push_back(std::move(c));
    }
  }
}

void ReferenceResolver::add_graph(const KnowledgeGraph& g) {
  for (const auto& t : g.triplets) add_fact(make_compound(t.relation, {t.head, t.tail}));
}

void ReferenceResolver::add_fact(const TermPtr& f) {
  if (keys_.insert(to_string(*f)).second) facts_[key_of(*f)].push_back(f);
}

void ReferenceResolver::join(const std::vector<TermPtr>& body, std::size_t i, Subst& s,
                             std::vector<Subst>& out) const {
  if (i == body.size()) {
    out.push_back(s);
    return;
  }
  auto it = facts_.find(key_of(*body[i]));
  if (it == facts_.end()) return;
  for (const auto& f : it->second) {
    Subst next = s;
    if (match(body[i], f, next)) join(body, i + 1, next, out);
  }
}

void ReferenceResolver::saturate() {
  for (;;) {
    std::vector<TermPtr> fresh;
    for (const auto& c : rules_) {
      std::vector<Subst> found;
      Subst s;
      join(c.body, 0, s, found);
      for (const auto& m : found) {
        TermPtr h = substitute(c.head, m);
        if (!keys_.count(to_string(*h))) fresh.push_back(h);
      }
    }
    if (fresh.empty()) return;
    for (const auto& f : fresh) add_fact(f);
  }
}

std::set<std::string> ReferenceResolver::answers(const Query& q) const {
  std::vector<TermPtr> body;
  for (const auto& g : q.goals) {
    if (g.kind != GoalKind::Call) throw Error("reference resolver: only plain calls are supported");
    if (!is_true(*g.term)) body.push_back(g.term);
  }
  std::vector<Subst> found;
  Subst s;
  join(body, 0, s, found);
  std::set<std::string> out;
  for (const auto& m : found) {
    std::string text;
    for (VarId v = 0; v < q.var_names.size(); ++v) {
      const std::string& name = q.var_names[v];
      if (name.empty() || name[0] == '_') continue;
      if (!text.empty()) text += ", ";
      text += name + " = " + to_string(*m.at(v));
    }
    out.insert(text.empty() ? "yes" : text);
  }
  return out;
}

}  // namespace kgnp::acceptance
