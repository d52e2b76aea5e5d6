#include "kgnp/engine.hpp"

#include <pthread.h>

#include <algorithm>
#include <cctype>
#include <exception>
#include <iostream>
#include <unordered_map>

#include "kgnp/error.hpp"
#include "kgnp/parser.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

std::string normalize_builtin_name(std::string_view name) {
  bool word = std::any_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
  if (!word) return std::string(name);
  std::string out;
  for (char c : lowercase(name))
    if (c != '-' && c != '_') out += c;
  return out;
}

std::string Solution::bindings_text() const {
  if (bindings.empty()) return "yes";
  std::string out;
  for (const auto& [name, value] : bindings) {
    if (!out.empty()) out += ", ";
    out += name + " = " + to_string(value);
  }
  return out;
}

// ----- session state -----

const MTuple* SessionState::record(std::string_view id) const {
  if (by_id_.size() != dataset.size()) {
    by_id_.clear();
    for (std::size_t i = 0; i < dataset.size(); ++i) by_id_.emplace(dataset[i].id, i);
  }
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &dataset[it->second];
}

const std::vector<std::size_t>& SessionState::sample() const {
  const std::size_t n = sample_n == 0 ? dataset.size() : sample_n;
  if (!sample_ready_ || sample_key_ != std::make_pair(n, seed)) {
    sample_ = sample_indices(dataset.size(), n, seed);
    sample_key_ = {n, seed};
    sample_ready_ = true;
  }
  return sample_;
}

void SessionState::reset_dataset(std::vector<MTuple> tuples) {
  dataset = std::move(tuples);
  by_id_.clear();
  sample_ready_ = false;
}

// ----- engine internals -----

namespace detail {

struct Ctx {
  const KnowledgeGraph* home = nullptr;  // graph whose local program is running
  const Program* program = nullptr;
  std::shared_ptr<const std::vector<std::string>> sources;  // null: default sources
  std::string_view rule;                                    // head name of the enclosing rule
  std::uint64_t cut_barrier = 0;
  std::size_t depth = 0;
};

}  // namespace detail

using detail::Ctx;
using Cont = std::function<Outcome(const Tuple&)>;

namespace {

struct Frame {
  std::uint64_t barrier;
  std::size_t fails = 0;
};

struct Source {
  const KnowledgeGraph* graph;
  bool routed;    // through the graph's local program
  bool explicit_; // named by a directive rather than defaulted
};

struct ProgramIndex {
  std::unordered_map<std::string, std::vector<std::size_t>> data, rules;
  bool defines(const std::string& key) const { return data.count(key) || rules.count(key); }
};

std::string key_of(std::string_view name, std::size_t arity) { return std::string(name) + "/" + std::to_string(arity); }

struct BuiltinEntry {
  int arity;
  BuiltinFn fn;
  bool statistics;
};

struct FunctionEntry {
  int arity;
  FunctionFn fn;
  bool statistics;
};

}  // namespace

struct Engine::Impl {
  Engine& self;
  const KGNetwork& net;
  std::shared_ptr<const Program> session;
  EngineOptions opts;
  SessionState state;
  ComparativeRegistry registry;
  AnnotationMode mode = AnnotationMode::Fuzzy;
  std::ostream* out = &std::cout;

  std::unordered_map<std::string, std::vector<BuiltinEntry>> builtins;
  std::unordered_map<std::string, std::vector<FunctionEntry>> functions;
  std::unordered_map<const Program*, ProgramIndex> indexes;

  Bindings b;
  VarId next_var = 0;
  std::uint64_t next_barrier = 0;
  std::vector<std::string> trace;

  Impl(Engine& e, const KGNetwork& n, std::shared_ptr<const Program> s, EngineOptions o)
      : self(e), net(n), session(std::move(s)), opts(o) {
    if (!session) session = std::make_shared<Program>();
    registry.add_aliases(*session);
    std::optional<AnnotationMode> m = session->mode;
    for (const auto& g : net.graphs()) {
      if (!g->local_program) continue;
      registry.add_aliases(*g->local_program);
      const auto& lm = g->local_program->mode;
      if (!lm) continue;
      if (m && *m != *lm)
        throw DataError("graph " + g->name + ": local program mixes fuzzy and probabilistic annotations with the session");
      m = lm;
    }
    if (m) mode = *m;
  }

  std::uint64_t barrier() { return ++next_barrier; }

  const ProgramIndex& index_of(const Program& p) {
    auto it = indexes.find(&p);
    if (it != indexes.end()) return it->second;
    ProgramIndex pi;
    for (std::size_t i = 0; i < p.data.size(); ++i)
      pi.data[key_of(p.data[i].head->name, p.data[i].head->arity())].push_back(i);
    for (std::size_t i = 0; i < p.rules.size(); ++i)
      pi.rules[key_of(p.rules[i].head->name, p.rules[i].head->arity())].push_back(i);
    return indexes.emplace(&p, std::move(pi)).first->second;
  }

  // ----- sources -----

  std::vector<Source> active_sources(const Ctx& ctx) const {
    std::vector<Source> out;
    if (ctx.sources && !ctx.sources->empty()) {
      for (const auto& name : *ctx.sources) {
        const KnowledgeGraph* g = net.find(name);
        bool routed = false;
        if (!g) {
          const std::string_view n = name;
          if (n.size() > 4 && lowercase(n.substr(n.size() - 4)) == "-lpp") g = net.find(n.substr(0, n.size() - 4));
          if (!g) throw EngineError("unknown graph '" + name + "' in directive");
          routed = true;
        }
        if (g == ctx.home) continue;
        if (ctx.home && !net.linked(ctx.home->name, g->name))
          throw LinkMissing("graph " + ctx.home->name + " has no call link to " + g->name);
        routed = routed || g->policy.lpp_only;
        out.push_back({g, routed, true});
      }
      return out;
    }
    for (const auto& g : net.graphs()) {
      if (g.get() == ctx.home || g->policy.lpp_only) continue;
      if (ctx.home && !net.linked(ctx.home->name, g->name)) continue;
      out.push_back({g.get(), false, false});
    }
    return out;
  }

  std::optional<std::size_t> loop_cap(const Ctx& ctx) const {
    std::optional<std::size_t> cap;
    auto take = [&](const KnowledgeGraph& g) {
      if (auto c = g.policy.loop_cap(ctx.rule)) cap = cap ? std::min(*cap, *c) : *c;
    };
    if (ctx.home) take(*ctx.home);
    for (const auto& s : active_sources(ctx)) take(*s.graph);
    return cap;
  }

  // ----- annotations -----

  Tuple values_of(const Annotation& a, VarId offset, const Program& concepts) {
    Annotation r{a.mode, {}};
    for (const auto& e : a.elements) {
      TermPtr v = b.resolve(shift_vars(e, offset));
      if (v->is_var()) throw TypeError("annotation variable " + v->name + " is unbound");
      r.elements.push_back(v);
    }
    return annotation_values(r, concepts);
  }

  // ----- built-in lookup -----

  const BuiltinEntry* find_builtin(const std::string& norm, std::size_t arity) const {
    auto it = builtins.find(norm);
    if (it == builtins.end()) return nullptr;
    for (const auto& e : it->second)
      if (e.arity == static_cast<int>(arity)) return &e;
    for (const auto& e : it->second)
      if (e.arity < 0) return &e;
    return nullptr;
  }

  const FunctionEntry* find_function(const std::string& norm, std::size_t arity) const {
    auto it = functions.find(norm);
    if (it == functions.end()) return nullptr;
    for (const auto& e : it->second)
      if (e.arity == static_cast<int>(arity) || e.arity < 0) return &e;
    return nullptr;
  }

  // ----- tracing -----

  Outcome traced(const Cont& k, const Tuple& t, const std::function<std::string()>& step) {
    if (!opts.trace) return k(t);
    trace.push_back(step());
    Outcome o = k(t);
    trace.pop_back();
    return o;
  }

  // ----- fact matching -----

  bool comparative_candidate(const TermPtr& goal, bool goal_comparative, const std::string& fact_rel,
                             const TermPtr& fact_value) const {
    if (!goal_comparative || !fact_value->is_number() || !registry.lookup(fact_rel)) return false;
    return b.resolve(goal->args[1])->is_number();
  }

  Outcome try_fact(const TermPtr& fact, const TermPtr& goal, bool standard, bool comparative, const Tuple& tuple,
                   const Cont& k, const std::string* graph) {
    const std::size_t mark = b.mark();
    bool ok = standard && unify_terms(fact, goal, b);
    if (!ok) {
      b.undo(mark);
      ok = comparative && comparative_unify_terms(fact, goal, b, registry);
    }
    Outcome o;
    if (ok)
      o = traced(k, tuple, [&] { return "fact " + to_string(fact) + (graph ? " @" + *graph : std::string()); });
    b.undo(mark);
    return o;
  }

  // Triplets of one graph read as `relation(head, tail)` facts.
  Outcome triplet_facts(const KnowledgeGraph& g, bool owner, const TermPtr& goal, bool goal_comparative,
                        const Cont& k, bool& known) {
    const std::string& name = goal->name;
    std::vector<std::size_t> cand;
    if (goal_comparative) {
      for (std::size_t i = 0; i < g.triplets.size(); ++i) {
        const auto& r = g.triplets[i].relation;
        if (r == name || registry.lookup(r)) cand.push_back(i);
      }
      known = true;
    } else {
      TermPtr h = b.resolve(goal->args[0]), t = b.resolve(goal->args[1]);
      cand = g.candidates(is_ground(*h) ? h.get() : nullptr, &name, is_ground(*t) ? t.get() : nullptr);
      known = known || !cand.empty() || !g.candidates(nullptr, &name, nullptr).empty();
    }
    const Tuple none;
    for (std::size_t i : cand) {
      const Triplet& tr = g.triplets[i];
      if (!owner && hidden_by_policy(g, tr)) continue;
      TermPtr fact = make_compound(tr.relation, {tr.head, tr.tail});
      const bool standard = tr.relation == name;
      const bool comparative = comparative_candidate(goal, goal_comparative, tr.relation, tr.tail);
      Outcome o = try_fact(fact, goal, standard, comparative, none, k, &g.name);
      if (!o.more()) return o;
    }
    return {};
  }

  // ----- resolution -----

  Outcome call(const TermPtr& goal_in, const Ctx& ctx, const Cont& k) {
    TermPtr goal = b.deref(goal_in);
    if (goal->is_var()) throw TypeError("goal is an unbound variable");
    if (goal->is_number()) throw TypeError("goal " + to_string(goal) + " is not callable");
    if (ctx.depth > opts.max_depth)
      throw DepthExceeded("depth limit " + std::to_string(opts.max_depth) + " exceeded at " + indicator(*goal));

    const std::string& name = goal->name;
    const std::size_t arity = goal->arity();
    const std::string key = key_of(name, arity);
    const std::vector<Source> sources = active_sources(ctx);
    const ProgramIndex& pi = index_of(*ctx.program);
    const bool defined = pi.defines(key);
    bool known = defined;

    // A goal sent only to local programs is theirs to answer.
    const bool only_routed = !sources.empty() && std::all_of(sources.begin(), sources.end(), [](const Source& s) { return s.routed; });
    if (!defined && only_routed) return routed_calls(goal, ctx, sources, k, key);

    if (!defined) {
      std::string norm = normalize_builtin_name(name);
      const BuiltinEntry* entry = find_builtin(norm, arity);
      if (!entry && norm.size() > 3 && norm.ends_with("lpp")) {
        if (const BuiltinEntry* base = find_builtin(norm.substr(0, norm.size() - 3), arity)) {
          if (!ctx.home) throw AccessDenied(name + " is only callable from a graph's local program");
          entry = base;
          norm.resize(norm.size() - 3);
        }
      }
      if (entry) {
        std::vector<GraphView> views;
        if (ctx.home) views.push_back({ctx.home, true});
        for (const auto& s : sources) {
          if (s.routed) continue;
          if (s.graph->policy.function_blocklist.count(norm)) {
            if (s.explicit_) throw AccessDenied(name + " is blocked on graph " + s.graph->name);
            continue;
          }
          views.push_back({s.graph, false});
        }
        BuiltinCall call(self, goal, ctx, std::move(views), k);
        if (entry->statistics)
          for (std::size_t i = 0; i < arity; ++i) call.check_statistics(*call.arg(i));
        Outcome o = entry->fn(call);
        if (!o.more()) return o;
        return routed_calls(goal, ctx, sources, k, key);
      }
    }

    const bool comparative = arity == 2 && registry.lookup(name).has_value();
    known = known || comparative;
    const Program& prog = *ctx.program;

    // (1) local data
    if (auto it = pi.data.find(key); it != pi.data.end() || comparative) {
      auto visit = [&](std::size_t i) -> Outcome {
        const Rule& f = prog.data[i];
        const bool standard = f.head->name == name && f.head->arity() == arity;
        const bool comp = f.head->arity() == 2 && comparative_candidate(goal, comparative, f.head->name, f.head->args[1]);
        if (!standard && !comp) return {};
        Tuple t = f.annotation ? values_of(*f.annotation, 0, prog) : Tuple{};
        return try_fact(f.head, goal, standard, comp, t, k, nullptr);
      };
      if (comparative) {
        for (std::size_t i = 0; i < prog.data.size(); ++i)
          if (Outcome o = visit(i); !o.more()) return o;
      } else {
        for (std::size_t i : it->second)
          if (Outcome o = visit(i); !o.more()) return o;
      }
    }

    // (2) the partner graph's triplets
    if (ctx.home && arity == 2)
      if (Outcome o = triplet_facts(*ctx.home, true, goal, comparative, k, known); !o.more()) return o;

    // (3) local rules
    if (auto it = pi.rules.find(key); it != pi.rules.end()) {
      for (std::size_t i : it->second) {
        const Rule& r = prog.rules[i];
        const VarId offset = next_var;
        next_var += static_cast<VarId>(r.var_count);
        const std::size_t mark = b.mark();
        Outcome o;
        bool committed = false;
        if (unify_terms(shift_vars(r.head, offset), goal, b)) o = run_rule(r, offset, ctx, k, committed);
        b.undo(mark);
        next_var = offset;
        if (!o.more()) return o;
        if (committed) return {};
      }
    }

    // (4) called graphs
    for (const auto& s : sources) {
      if (s.routed) {
        known = true;
        if (Outcome o = route(goal, ctx, *s.graph, k, key); !o.more()) return o;
      } else if (arity == 2) {
        if (Outcome o = triplet_facts(*s.graph, false, goal, comparative, k, known); !o.more()) return o;
      }
    }

    if (!known) throw UnknownPredicate("unknown predicate " + key);
    return {};
  }

  Outcome routed_calls(const TermPtr& goal, const Ctx& ctx, const std::vector<Source>& sources, const Cont& k,
                       const std::string& key) {
    for (const auto& s : sources)
      if (s.routed)
        if (Outcome o = route(goal, ctx, *s.graph, k, key); !o.more()) return o;
    return {};
  }

  // Runs the goal inside the graph's local program, which must define it.
  Outcome route(const TermPtr& goal, const Ctx& ctx, const KnowledgeGraph& g, const Cont& k, const std::string& key) {
    if (!g.local_program) throw AccessDenied("graph " + g.name + " accepts calls only through a local program, and has none");
    if (!index_of(*g.local_program).defines(key))
      throw AccessDenied("local program of " + g.name + " does not offer " + key);
    Ctx inner{&g, g.local_program.get(), nullptr, ctx.rule, ctx.cut_barrier, ctx.depth + 1};
    return call(goal, inner, k);
  }

  Outcome run_rule(const Rule& r, VarId offset, const Ctx& ctx, const Cont& k, bool& committed) {
    const std::uint64_t cb = barrier();
    Ctx inner{ctx.home, ctx.program, ctx.sources, r.head->name, cb, ctx.depth + 1};
    if (!r.origin.empty()) inner.sources = std::make_shared<const std::vector<std::string>>(r.origin);
    const Program& prog = *ctx.program;
    Cont finish = [&](const Tuple& body) -> Outcome {
      Tuple head = r.annotation ? values_of(*r.annotation, offset, prog) : Tuple{};
      return k(combine(mode, head, body));
    };
    if (opts.trace)
      trace.push_back("rule " + to_string(b.resolve(shift_vars(r.head, offset))) + " (line " + std::to_string(r.line) + ")");
    Outcome result;
    if (r.is_fact()) {
      result = finish({});
    } else {
      for (const auto& alt : r.body) {
        Frame f{barrier()};
        Outcome o = solve_conj(alt, 0, {}, offset, inner, f, finish);
        if (o.kind == Outcome::Cut && o.barrier == f.barrier) continue;
        if (o.kind == Outcome::Cut && o.barrier == cb) {
          committed = true;
          break;
        }
        if (!o.more()) {
          result = o;
          break;
        }
      }
    }
    if (opts.trace) trace.pop_back();
    return result;
  }

  Ctx with_sources(const Ctx& ctx, const Goal& g) const {
    if (g.sources.empty()) return ctx;
    Ctx c = ctx;
    c.sources = std::make_shared<const std::vector<std::string>>(g.sources);
    return c;
  }

  Outcome solve_conj(const Conjunction& conj, std::size_t i, const Tuple& acc, VarId offset, const Ctx& ctx, Frame& frame,
                     const Cont& k) {
    if (i == conj.size()) return k(acc);
    const Goal& g = conj[i];
    auto next = [&](const Tuple& proof) -> Outcome {
      Tuple t = proof;
      if (g.annotation) t = combine(mode, values_of(*g.annotation, offset, *ctx.program), t);
      return solve_conj(conj, i + 1, combine(mode, acc, t), offset, ctx, frame, k);
    };
    switch (g.kind) {
      case GoalKind::Call: {
        const Ctx gctx = with_sources(ctx, g);
        return call(shift_vars(g.term, offset), gctx, next);
      }
      case GoalKind::Cut: {
        Outcome o = solve_conj(conj, i + 1, acc, offset, ctx, frame, k);
        return o.more() ? Outcome::cut(ctx.cut_barrier) : o;
      }
      case GoalKind::Fail: {
        std::optional<std::size_t> bound;
        if (g.term) {
          TermPtr n = b.resolve(shift_vars(g.term, offset));
          if (!n->is_number() || n->number < 1 || n->number != static_cast<double>(static_cast<std::size_t>(n->number)))
            throw TypeError("Fail bound must be a positive integer, got " + to_string(n));
          bound = static_cast<std::size_t>(n->number);
        }
        if (auto cap = loop_cap(ctx)) bound = bound ? std::min(*bound, *cap) : *cap;
        ++frame.fails;
        if (bound && frame.fails >= *bound) return Outcome::cut(frame.barrier);
        return {};
      }
      case GoalKind::Disjunction: {
        const Ctx gctx = with_sources(ctx, g);
        for (const auto& alt : g.alternatives) {
          Frame f{barrier()};
          Outcome o = solve_conj(alt, 0, {}, offset, gctx, f, next);
          if (o.kind == Outcome::Cut && o.barrier == f.barrier) continue;
          if (!o.more()) return o;
        }
        return {};
      }
      case GoalKind::Not: {
        Ctx inner = with_sources(ctx, g);
        const std::uint64_t found = barrier();
        inner.cut_barrier = barrier();
        Frame f{barrier()};
        const std::size_t mark = b.mark();
        const VarId saved = next_var;
        const Cont stop = [&](const Tuple&) { return Outcome::cut(found); };
        Outcome o = solve_conj(g.alternatives.front(), 0, {}, offset, inner, f, stop);
        b.undo(mark);
        next_var = saved;
        if (o.kind == Outcome::Cut && o.barrier == found) return {};
        if (o.kind == Outcome::Halt) return o;
        if (o.kind == Outcome::Cut && o.barrier != inner.cut_barrier && o.barrier != f.barrier) return o;
        return solve_conj(conj, i + 1, acc, offset, ctx, frame, k);
      }
    }
    return {};
  }

  // ----- evaluation -----

  TermPtr evaluate(BuiltinCall& call, const TermPtr& t) {
    TermPtr r = b.resolve(t);
    if (r->is_atom()) {
      if (auto it = state.registers.find(r->name); it != state.registers.end()) return make_number(it->second);
      return r;
    }
    if (!r->is_compound()) return r;
    const FunctionEntry* fn = find_function(normalize_builtin_name(r->name), r->arity());
    if (!fn) return r;
    std::vector<TermPtr> args;
    args.reserve(r->arity());
    for (const auto& a : r->args) args.push_back(evaluate(call, a));
    if (fn->statistics)
      for (const auto& a : args) call.check_statistics(*a);
    return fn->fn(call, args);
  }

  // ----- entry point -----

  std::size_t solve(const Query& q, const std::function<bool(const Solution&)>& on_solution) {
    b = Bindings(opts.occurs_check);
    next_var = static_cast<VarId>(q.var_count);
    trace.clear();
    Ctx root{nullptr, session.get(), nullptr, {}, barrier(), 0};
    if (!q.sources.empty()) root.sources = std::make_shared<const std::vector<std::string>>(q.sources);
    std::size_t count = 0;
    Cont done = [&](const Tuple& t) -> Outcome {
      Solution s;
      for (std::size_t v = 0; v < q.var_count && v < q.var_names.size(); ++v) {
        const std::string& n = q.var_names[v];
        if (n.empty() || n[0] == '_') continue;
        s.bindings.emplace_back(n, b.resolve(make_var(static_cast<VarId>(v), n)));
      }
      s.annotation = t;
      if (session->annotation_arity && s.annotation.empty())
        s.annotation = neutral_tuple(mode, session->annotation_arity);
      s.trace = trace;
      ++count;
      if (!on_solution(s)) return Outcome::halt();
      if (opts.max_solutions && count >= opts.max_solutions) return Outcome::halt();
      return {};
    };
    Frame f{barrier()};
    solve_conj(q.goals, 0, {}, 0, root, f, done);
    return count;
  }
};

// ----- BuiltinCall -----

TermPtr BuiltinCall::arg(std::size_t i) const { return engine_.impl_->b.resolve(goal_->args.at(i)); }

TermPtr BuiltinCall::value(std::size_t i) { return evaluate(goal_->args.at(i)); }

double BuiltinCall::number(std::size_t i) {
  TermPtr v = value(i);
  if (!v->is_number()) throw TypeError(name() + ": argument " + std::to_string(i + 1) + " must be a number, got " + to_string(v));
  return v->number;
}

std::string BuiltinCall::symbol(std::size_t i) const {
  TermPtr v = arg(i);
  if (v->is_atom()) return v->name;
  if (v->is_number()) return format_number(v->number);
  throw TypeError(name() + ": argument " + std::to_string(i + 1) + " must be a name, got " + to_string(v));
}

Outcome BuiltinCall::succeed() {
  auto& impl = *engine_.impl_;
  return impl.traced(k_, {}, [&] { return "builtin " + to_string(impl.b.resolve(goal_)); });
}

Outcome BuiltinCall::unify(const TermPtr& a, const TermPtr& b) { return unify({{a, b}}); }

Outcome BuiltinCall::unify(const std::vector<std::pair<TermPtr, TermPtr>>& pairs) {
  auto& bind = engine_.impl_->b;
  const std::size_t mark = bind.mark();
  Outcome o;
  bool ok = true;
  for (const auto& [x, y] : pairs)
    if (!unify_terms(x, y, bind)) {
      ok = false;
      break;
    }
  if (ok) o = succeed();
  bind.undo(mark);
  return o;
}

TermPtr BuiltinCall::evaluate(const TermPtr& t) { return engine_.impl_->evaluate(*this, t); }

const KnowledgeGraph* BuiltinCall::home() const { return ctx_.home; }
const Program& BuiltinCall::program() const { return *ctx_.program; }

bool BuiltinCall::visible(const GraphView& v, const Triplet& t) const { return v.owner || !hidden_by_policy(*v.graph, t); }

bool BuiltinCall::visible_member(const GraphView& v, const GraphClass& c, const Term& member) const {
  if (v.owner) return true;
  const auto& p = v.graph->policy;
  if (mentions_blocked(p, member)) return false;
  for (const auto& rule : p.group_rules) {
    if (rule.mode != GroupMode::DenyRead) continue;
    if (rule.group == c.name || v.graph->in_class(member, rule.group)) return false;
  }
  return true;
}

void BuiltinCall::check_statistics(const Term& t) const {
  for (const auto& g : engine_.network().graphs()) {
    if (g.get() == ctx_.home) continue;
    if (statistics_denied(*g, t))
      throw AccessDenied(name() + ": statistics over protected members of " + g->name + " are denied");
  }
}

std::ostream& BuiltinCall::out() { return *engine_.impl_->out; }
SessionState& BuiltinCall::state() { return engine_.impl_->state; }
Engine& BuiltinCall::engine() { return engine_; }

// ----- Engine -----

Engine::Engine(const KGNetwork& net, std::shared_ptr<const Program> session, EngineOptions options)
    : impl_(std::make_unique<Impl>(*this, net, std::move(session), options)) {
  install_core_builtins(*this);
  install_vector_builtins(*this);
}

Engine::~Engine() = default;

EngineOptions& Engine::options() { return impl_->opts; }
const KGNetwork& Engine::network() const { return impl_->net; }
const Program& Engine::session_program() const { return *impl_->session; }
SessionState& Engine::state() { return impl_->state; }
const ComparativeRegistry& Engine::comparatives() const { return impl_->registry; }
AnnotationMode Engine::mode() const { return impl_->mode; }
void Engine::set_output(std::ostream& out) { impl_->out = &out; }
std::ostream& Engine::output() { return *impl_->out; }

void Engine::register_builtin(std::string_view name, int arity, BuiltinFn fn, bool statistics) {
  auto& list = impl_->builtins[normalize_builtin_name(name)];
  std::erase_if(list, [&](const BuiltinEntry& e) { return e.arity == arity; });
  list.push_back({arity, std::move(fn), statistics});
}

void Engine::register_function(std::string_view name, int arity, FunctionFn fn, bool statistics) {
  auto& list = impl_->functions[normalize_builtin_name(name)];
  std::erase_if(list, [&](const FunctionEntry& e) { return e.arity == arity; });
  list.push_back({arity, std::move(fn), statistics});
}

bool Engine::has_builtin(std::string_view name, std::size_t arity) const {
  return impl_->find_builtin(normalize_builtin_name(name), arity) != nullptr;
}

namespace {

// Deep left recursion in continuation-passing style needs far more stack
// than the default 8 MiB, so queries run on a thread with a large one.
void run_on_large_stack(const std::function<void()>& fn) {
  struct Job {
    const std::function<void()>* fn;
    std::exception_ptr error;
  } job{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t(1) << 30);
  pthread_t thread;
  auto entry = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    try {
      (*j->fn)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  const int rc = pthread_create(&thread, &attr, entry, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace

std::size_t Engine::solve(const Query& q, const std::function<bool(const Solution&)>& on_solution) {
  std::size_t n = 0;
  run_on_large_stack([&] { n = impl_->solve(q, on_solution); });
  return n;
}

std::vector<Solution> Engine::solve_all(const Query& q) {
  std::vector<Solution> out;
  solve(q, [&](const Solution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace kgnp
