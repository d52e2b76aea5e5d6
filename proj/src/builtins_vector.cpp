// Vector-space built-ins: vector graphs, embedding spaces and kNN.

#include <cmath>
#include <ostream>

#include "builtin_support.hpp"
#include "kgnp/embedding.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

namespace {

using namespace builtin;

TermPtr list_of(std::span<const double> v) {
  std::vector<TermPtr> items;
  items.reserve(v.size());
  for (double x : v) items.push_back(make_number(x));
  return make_list(items);
}

std::vector<double> vector_of(const TermPtr& t, const std::string& who) {
  std::vector<TermPtr> items;
  if (!list_items(t, items)) throw TypeError(who + " needs a vector, got " + to_string(t));
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& x : items) {
    if (!x->is_number()) throw TypeError(who + ": vector component " + to_string(x) + " is not a number");
    out.push_back(x->number);
  }
  return out;
}

void same_size(const std::vector<double>& a, const std::vector<double>& b, const std::string& who) {
  if (a.size() != b.size())
    throw TypeError(who + ": vectors of dimension " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

// A symbol's vector in the first graph of the call that holds one and lets
// the caller see it.
const std::vector<double>* symbol_vector(BuiltinCall& c, const Term& sym, const KnowledgeGraph** where = nullptr) {
  for (const auto& v : c.graphs()) {
    if (!v.owner && mentions_blocked(v.graph->policy, sym)) continue;
    if (const auto* vec = v.graph->vector_of(sym)) {
      if (where) *where = v.graph;
      return vec;
    }
  }
  return nullptr;
}

// Triplet vectors are stored per symbol; a triplet has a vector form when
// all three of its symbols do.
bool triplet_vectors(const KnowledgeGraph& g, const Triplet& t, const std::vector<double>* out[3]) {
  out[0] = g.vector_of(*t.head);
  out[1] = g.vector_of(*make_atom(t.relation));
  out[2] = g.vector_of(*t.tail);
  return out[0] && out[1] && out[2];
}

std::shared_ptr<EmbeddingSpace> space_of(BuiltinCall& c, const TermPtr& name) {
  if (!name->is_atom()) throw TypeError(c.name() + " needs a space name, got " + to_string(name));
  auto& spaces = c.state().spaces;
  auto it = spaces.find(name->name);
  if (it == spaces.end()) throw EngineError(c.name() + ": no vector space '" + name->name + "'");
  return it->second;
}

std::size_t count_arg(BuiltinCall& c, std::size_t i, const char* what) {
  const double v = c.number(i);
  if (v < 1 || v != std::floor(v)) throw TypeError(c.name() + ": " + what + " must be a positive integer, got " + format_number(v));
  return static_cast<std::size_t>(v);
}

std::string id_text(const TermPtr& t) {
  if (t->is_atom()) return t->name;
  if (t->is_number()) return format_number(t->number);
  throw TypeError("record reference must be an id, got " + to_string(t));
}

// Data(X): a record of the session dataset by id, or a list of raw values.
MTuple record_arg(BuiltinCall& c, const TermPtr& t, const EmbeddingSpace& s) {
  TermPtr inner = t;
  if (t->is_compound() && t->arity() == 1 && normalize_builtin_name(t->name) == "data") inner = c.evaluate(t->args[0]);
  std::vector<TermPtr> items;
  if (list_items(inner, items)) {
    MTuple rec;
    rec.id = "query";
    if (items.size() != s.m())
      throw TypeError(c.name() + ": expected " + std::to_string(s.m()) + " values, got " + std::to_string(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i)
      rec.triplets.push_back({make_atom(rec.id), s.attributes[i].name, make_number(as_number(items[i], "Data"))});
    return rec;
  }
  const std::string id = id_text(inner);
  const MTuple* rec = c.state().record(id);
  if (!rec) throw EngineError(c.name() + ": no record '" + id + "' in the session dataset");
  return *rec;
}

Label label_of(BuiltinCall& c, const std::string& id) {
  for (const auto& [name, space] : c.state().spaces)
    if (const HHEntry* e = space->find(id)) return e->label;
  if (const MTuple* rec = c.state().record(id)) return rec->label;
  throw EngineError("Positive: no label known for '" + id + "'");
}

Outcome vector_op(BuiltinCall& c, double (*op)(double, double)) {
  const auto a = vector_of(c.value(0), c.name()), b = vector_of(c.value(1), c.name());
  same_size(a, b, c.name());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return c.unify(c.goal()->args[2], list_of(out));
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

void install_vector_graph(Engine& e) {
  // VEC(X, Y, Z) evaluates to Vec of the three symbol vectors once ground.
  e.register_function("VEC", 3, [](BuiltinCall& c, const std::vector<TermPtr>& a) -> TermPtr {
    for (const auto& x : a)
      if (!is_ground(*x)) return make_compound("VEC", a);
    std::vector<TermPtr> parts;
    for (const auto& x : a) {
      std::vector<TermPtr> items;
      if (list_items(x, items)) {
        parts.push_back(x);
        continue;
      }
      const auto* v = symbol_vector(c, *x);
      if (!v) throw EngineError("VEC: no vector for " + to_string(x));
      parts.push_back(list_of(*v));
    }
    return make_compound("VEC", parts);
  });

  for (auto [name, pos] : {std::pair{"V-Head", 0}, std::pair{"V-Relation", 1}, std::pair{"V-Tail", 2}}) {
    auto part = [pos, name](const TermPtr& w) {
      if (!w->is_compound() || w->arity() != 3 || normalize_builtin_name(w->name) != "vec")
        throw TypeError(std::string(name) + " needs a triplet vector, got " + to_string(w));
      vector_of(w->args[pos], name);
      return w->args[pos];
    };
    e.register_function(name, 1, [part](BuiltinCall&, const std::vector<TermPtr>& a) { return part(a[0]); });
    e.register_builtin(name, 2, [part](BuiltinCall& c) { return c.unify(c.goal()->args[1], part(c.value(0))); });
  }

  // Euclidean, matching the definition given for a conventional space.
  e.register_function("V-distance", 2, [](BuiltinCall& c, const std::vector<TermPtr>& a) {
    const auto x = vector_of(a[0], c.name()), y = vector_of(a[1], c.name());
    same_size(x, y, "V-distance");
    return make_number(euclidean(x, y));
  });
  e.register_builtin("V-distance", 3, [](BuiltinCall& c) {
    const auto x = vector_of(c.value(0), c.name()), y = vector_of(c.value(1), c.name());
    same_size(x, y, "V-distance");
    return c.unify(c.goal()->args[2], make_number(euclidean(x, y)));
  });
  e.register_builtin("V-add", 3, [](BuiltinCall& c) { return vector_op(c, [](double a, double b) { return a + b; }); });
  e.register_builtin("V-sub", 3, [](BuiltinCall& c) { return vector_op(c, [](double a, double b) { return a - b; }); });
  e.register_builtin("V-mul", 3, [](BuiltinCall& c) { return vector_op(c, [](double a, double b) { return a * b; }); });
  e.register_builtin("V-scale", 3, [](BuiltinCall& c) {
    auto v = vector_of(c.value(0), c.name());
    const double k = c.number(1);
    for (double& x : v) x *= k;
    return c.unify(c.goal()->args[2], list_of(v));
  });
  e.register_builtin("V-dot", 3, [](BuiltinCall& c) {
    const auto a = vector_of(c.value(0), c.name()), b = vector_of(c.value(1), c.name());
    same_size(a, b, c.name());
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return c.unify(c.goal()->args[2], make_number(acc));
  });

  // Output-V(Vec(h, r, t)) or Output-V(h, r, t).
  e.register_builtin("Output-V", -1, [](BuiltinCall& c) -> Outcome {
    if (c.arity() == 1) {
      TermPtr w = c.arg(0);
      if (!w->is_compound() || w->arity() != 3) throw TypeError("Output-V needs Vec(h, r, t), got " + to_string(w));
      return output_vectors(c, w, c.goal()->args[0]);
    }
    if (c.arity() != 3) throw TypeError("Output-V takes Vec(h, r, t) or three arguments");
    const auto& a = c.goal()->args;
    return output_vectors(c, make_compound("VEC", {c.arg(0), c.arg(1), c.arg(2)}), make_compound("VEC", {a[0], a[1], a[2]}));
  });

  // T-to-V(X, Y, Z, T): X's vector Y in space or vector graph Z, built by T.
  e.register_builtin("T-to-V", 4, [](BuiltinCall& c) -> Outcome {
    const TermPtr x = c.value(0), z = c.arg(2);
    const auto& a = c.goal()->args;
    for (const auto& [name, space] : c.state().spaces) {
      if (z->is_atom() && z->name != name) continue;
      if (!z->is_atom() && !z->is_var()) return {};
      std::vector<double> v;
      if (x->is_compound() && normalize_builtin_name(x->name) == "data") {
        if (space->hh.empty() || space->hh.front().rows.empty()) continue;
        v = construct_virtual_vector(*space, record_arg(c, x, *space), 1).r;
      } else if (x->is_atom() || x->is_number()) {
        const HHEntry* e = space->find(id_text(x));
        if (!e) continue;
        v = e->combined;
      } else {
        continue;
      }
      if (Outcome o = c.unify({{a[1], list_of(v)}, {a[2], make_atom(name)}, {a[3], make_atom(to_string(space->provenance))}});
          !o.more())
        return o;
    }
    if (!is_ground(*x)) return {};
    for (const auto& view : c.graphs()) {
      if (z->is_atom() && z->name != view.graph->name) continue;
      if (!view.owner && mentions_blocked(view.graph->policy, *x)) continue;
      const auto* v = view.graph->vector_of(*x);
      if (!v) continue;
      if (Outcome o = c.unify({{a[1], list_of(*v)}, {a[2], make_atom(view.graph->name)}, {a[3], make_atom("imported")}});
          !o.more())
        return o;
    }
    return {};
  });

  // V-to-T(Y, X, Z, T): the stored unit whose vector is Y.
  e.register_builtin("V-to-T", 4, [](BuiltinCall& c) -> Outcome {
    const auto y = vector_of(c.value(0), c.name());
    const TermPtr z = c.arg(2);
    const auto& a = c.goal()->args;
    auto close = [&](std::span<const double> v) {
      if (v.size() != y.size()) return false;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i] - y[i]) > 1e-6 * std::max(1.0, std::abs(y[i]))) return false;
      return true;
    };
    for (const auto& [name, space] : c.state().spaces) {
      if (z->is_atom() && z->name != name) continue;
      for (const auto& e : space->hh) {
        if (!close(e.combined)) continue;
        if (Outcome o = c.unify({{a[1], make_atom(e.id)}, {a[2], make_atom(name)}, {a[3], make_atom(to_string(space->provenance))}});
            !o.more())
          return o;
      }
    }
    for (const auto& view : c.graphs()) {
      if (z->is_atom() && z->name != view.graph->name) continue;
      for (const auto& [sym, v] : view.graph->vectors) {
        if (!close(v)) continue;
        if (Outcome o = c.unify({{a[1], make_atom(sym)}, {a[2], make_atom(view.graph->name)}, {a[3], make_atom("imported")}});
            !o.more())
          return o;
      }
    }
    return {};
  });
}

void install_spaces(Engine& e) {
  // Embed(Algorithm, Dataset, Space, n)
  e.register_builtin("Embed", 4, [](BuiltinCall& c) {
    const std::string algo = normalize_builtin_name(c.symbol(0));
    const std::string data = c.symbol(1);
    const std::string name = c.symbol(2);
    auto& st = c.state();
    if (lowercase(data) != lowercase(st.dataset_name))
      throw EngineError("Embed: no dataset '" + data + "' (loaded: " + st.dataset_name + ")");
    if (st.dataset.empty()) throw EngineError("Embed: no dataset loaded");
    EmbedConfig config;
    config.n = count_arg(c, 3, "dimension");
    if (st.seed) config.seed = st.seed;
    EmbeddingSpace s;
    if (algo == "transmeth") s = train_transmeth(st.dataset, st.schema, config);
    else if (algo == "transcmeth") s = train_transcmeth(st.dataset, st.schema, config);
    else throw EngineError("Embed: unknown algorithm '" + c.symbol(0) + "'");
    st.spaces[name] = std::make_shared<EmbeddingSpace>(std::move(s));
    return c.succeed();
  }, true);

  // Construct(Data(X), Space, J, R)
  e.register_builtin("Construct", 4, [](BuiltinCall& c) {
    auto s = space_of(c, c.arg(1));
    const MTuple rec = record_arg(c, c.arg(0), *s);
    const auto vv = construct_virtual_vector(*s, rec, count_arg(c, 2, "J"));
    return c.unify(c.goal()->args[3], list_of(vv.r));
  }, true);

  // Nearest(R, Space, K, S): S lists the ids of the K nearest stored tuples.
  e.register_builtin("Nearest", 4, [](BuiltinCall& c) {
    auto s = space_of(c, c.arg(1));
    const auto r = vector_of(c.value(0), c.name());
    std::vector<TermPtr> ids;
    for (std::size_t i : nearest(*s, r, count_arg(c, 2, "K"))) ids.push_back(make_atom(s->hh[i].id));
    return c.unify(c.goal()->args[3], make_list(ids));
  }, true);

  e.register_builtin("Positive", 2, [](BuiltinCall& c) {
    std::vector<TermPtr> items, kept;
    if (!list_items(c.value(0), items)) throw TypeError("Positive needs a list of ids, got " + to_string(c.arg(0)));
    for (const auto& x : items)
      if (label_of(c, id_text(x)) == Label::Positive) kept.push_back(x);
    return c.unify(c.goal()->args[1], make_list(kept));
  }, true);

  // cnn(Space, X, V): X's vector in an imported space; enumerates when X is unbound.
  e.register_builtin("cnn", 3, [](BuiltinCall& c) -> Outcome {
    auto s = space_of(c, c.arg(0));
    const TermPtr x = c.arg(1);
    const auto& a = c.goal()->args;
    if (!x->is_var()) {
      const HHEntry* e = s->find(id_text(x));
      return e ? c.unify(a[2], list_of(e->combined)) : Outcome{};
    }
    for (const auto& e : s->hh)
      if (Outcome o = c.unify({{a[1], make_atom(e.id)}, {a[2], list_of(e.combined)}}); !o.more()) return o;
    return {};
  }, true);
}

}  // namespace

Outcome builtin::output_vectors(BuiltinCall& c, const TermPtr& pattern, const TermPtr& target) {
  TermPtr h, r, t;
  triplet_parts(pattern, h, r, t);
  return for_each_triplet(c, h, r, t, [&](const GraphView& v, const Triplet& tr) -> Outcome {
    const std::vector<double>* vecs[3];
    if (!triplet_vectors(*v.graph, tr, vecs)) return {};
    const TermPtr form = make_compound(pattern->name, {tr.head, make_atom(tr.relation), tr.tail});
    Bindings probe(false);
    if (!unify_terms(pattern, form, probe)) return {};
    c.out() << to_string(tr) << " @" << v.graph->name << " " << to_string(list_of(*vecs[0])) << " "
            << to_string(list_of(*vecs[1])) << " " << to_string(list_of(*vecs[2])) << "\n";
    return c.unify(target, form);
  });
}

void install_vector_builtins(Engine& e) {
  install_vector_graph(e);
  install_spaces(e);
}

}  // namespace kgnp
