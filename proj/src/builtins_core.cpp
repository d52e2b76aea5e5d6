// Graph, arithmetic and statistics built-ins.

#include <cmath>
#include <ostream>

#include "builtin_support.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

namespace {

using namespace builtin;

bool same_class_name(std::string_view a, std::string_view b) { return lowercase(a) == lowercase(b); }

std::size_t list_length(const TermPtr& t, const char* what) {
  std::vector<TermPtr> items;
  if (!list_items(t, items)) throw TypeError(std::string(what) + " needs a list, got " + to_string(t));
  return items.size();
}

std::size_t rule_index(BuiltinCall& c, const TermPtr& j) {
  const auto& rules = c.state().bad_spec.rules;
  if (j->is_atom())
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (rules[i].name == j->name) return i;
  double v = as_number(j, "attribute index");
  if (v < 1 || v > static_cast<double>(rules.size()) || v != std::floor(v))
    throw TypeError("attribute index " + format_number(v) + " outside 1.." + std::to_string(rules.size()));
  return static_cast<std::size_t>(v) - 1;
}

const MTuple& record_of(BuiltinCall& c, const TermPtr& t) {
  std::string id = t->is_number() ? format_number(t->number) : t->is_atom() ? t->name : std::string();
  if (id.empty()) throw TypeError("record reference must be an id, got " + to_string(t));
  const MTuple* rec = c.state().record(id);
  if (!rec) throw EngineError("no record '" + id + "' in the session dataset");
  return *rec;
}

std::vector<std::vector<double>>& buffer_of(BuiltinCall& c, const std::string& name) {
  auto& buf = c.state().buffers[name];
  buf.resize(c.state().bad_spec.rules.size());
  return buf;
}

Outcome compare(BuiltinCall& c, bool (*op)(double, double)) {
  return op(c.number(0), c.number(1)) ? c.succeed() : Outcome{};
}

void install_logic(Engine& e) {
  e.register_builtin("true", 0, [](BuiltinCall& c) { return c.succeed(); });
  e.register_builtin("=", 2, [](BuiltinCall& c) { return c.unify(c.goal()->args[0], c.goal()->args[1]); });
  e.register_builtin("\\=", 2, [](BuiltinCall& c) {
    Bindings probe(false);
    return unify_terms(c.arg(0), c.arg(1), probe) ? Outcome{} : c.succeed();
  });
  e.register_builtin("is", 2, [](BuiltinCall& c) {
    TermPtr v = c.value(1);
    if (!v->is_number()) throw TypeError("is: cannot evaluate " + to_string(c.arg(1)));
    return c.unify(c.goal()->args[0], v);
  });
  e.register_builtin("<", 2, [](BuiltinCall& c) { return compare(c, [](double a, double b) { return a < b; }); });
  e.register_builtin(">", 2, [](BuiltinCall& c) { return compare(c, [](double a, double b) { return a > b; }); });
  e.register_builtin("=<", 2, [](BuiltinCall& c) { return compare(c, [](double a, double b) { return a <= b; }); });
  e.register_builtin(">=", 2, [](BuiltinCall& c) { return compare(c, [](double a, double b) { return a >= b; }); });

  // in-data(List, X): X ranges over a Data list. An unbound first argument
  // names the list by its variable name, as in in-data(Attribute, A).
  e.register_builtin("in-data", 2, [](BuiltinCall& c) -> Outcome {
    TermPtr l = c.arg(0);
    const std::string name = l->name;
    const DataList* list = c.program().find_list(name);
    if (!list) list = c.engine().session_program().find_list(name);
    if (!list) throw EngineError("in-data: no data list '" + name + "'");
    for (const auto& v : list->values)
      if (Outcome o = c.unify(c.goal()->args[1], v); !o.more()) return o;
    return {};
  });

  auto arith = [&e](const char* op, double (*f)(double, double)) {
    e.register_function(op, 2, [f, op](BuiltinCall&, const std::vector<TermPtr>& a) {
      return make_number(f(as_number(a[0], op), as_number(a[1], op)));
    });
  };
  arith("+", [](double a, double b) { return a + b; });
  arith("-", [](double a, double b) { return a - b; });
  arith("*", [](double a, double b) { return a * b; });
  arith("/", [](double a, double b) { return a / b; });
  e.register_function("-", 1, [](BuiltinCall&, const std::vector<TermPtr>& a) {
    return make_number(-as_number(a[0], "-"));
  });
  e.register_function("Quotient", 2, [](BuiltinCall&, const std::vector<TermPtr>& a) {
    return make_number(as_number(a[0], "Quotient") / as_number(a[1], "Quotient"));
  });
  e.register_builtin("Divide", 3, [](BuiltinCall& c) {
    return c.unify(c.goal()->args[2], make_number(c.number(0) / c.number(1)));
  });
  e.register_function("Size", 1, [](BuiltinCall&, const std::vector<TermPtr>& a) {
    return make_number(static_cast<double>(list_length(a[0], "Size")));
  });
  e.register_function("Volume", 1, [](BuiltinCall&, const std::vector<TermPtr>& a) {
    return make_number(static_cast<double>(list_length(a[0], "Volume")));
  }, true);
}

void install_graph(Engine& e) {
  for (auto [name, pos] : {std::pair{"Head", 0}, std::pair{"Relation", 1}, std::pair{"Tail", 2}}) {
    e.register_function(name, 1, [pos, name](BuiltinCall&, const std::vector<TermPtr>& a) {
      TermPtr parts[3];
      if (!triplet_parts(a[0], parts[0], parts[1], parts[2]))
        throw TypeError(std::string(name) + " needs a triplet, got " + to_string(a[0]));
      return parts[pos];
    });
    e.register_builtin(name, 2, [pos, name](BuiltinCall& c) {
      TermPtr w = c.value(0), parts[3];
      if (!triplet_parts(w, parts[0], parts[1], parts[2]))
        throw TypeError(std::string(name) + " needs a triplet, got " + to_string(w));
      return c.unify(c.goal()->args[1], parts[pos]);
    });
  }

  e.register_builtin("Tr1", 1, [](BuiltinCall& c) -> Outcome {
    TermPtr w = c.arg(0), h = w, r = w, t = w;
    if (!w->is_var() && !triplet_parts(w, h, r, t)) return {};
    return for_each_triplet(c, h, r, t, [&](const GraphView&, const Triplet& tr) {
      return c.unify(c.goal()->args[0], rdf(tr));
    });
  });
  e.register_builtin("Tr2", 3, [](BuiltinCall& c) {
    const auto& a = c.goal()->args;
    return for_each_triplet(c, a[0], a[1], a[2], [&](const GraphView&, const Triplet& tr) {
      return c.unify({{a[0], tr.head}, {a[1], make_atom(tr.relation)}, {a[2], tr.tail}});
    });
  });

  e.register_builtin("Output", 1, [](BuiltinCall& c) -> Outcome {
    TermPtr w = c.arg(0), h, r, t;
    if (w->is_compound() && normalize_builtin_name(w->name) == "vec" && w->arity() == 3)
      return output_vectors(c, w, c.goal()->args[0]);
    if (w->is_compound() && normalize_builtin_name(w->name) == "rdf" && triplet_parts(w, h, r, t)) {
      return for_each_triplet(c, h, r, t, [&](const GraphView& v, const Triplet& tr) -> Outcome {
        Bindings probe(false);
        if (!unify_terms(c.arg(0), rdf(tr), probe)) return {};
        c.out() << to_string(tr) << " @" << v.graph->name << "\n";
        return c.unify(c.goal()->args[0], rdf(tr));
      });
    }
    c.out() << display_text(c.value(0)) << "\n";
    return c.succeed();
  });
  e.register_builtin("Print", 1, [](BuiltinCall& c) {
    c.out() << display_text(c.value(0)) << "\n";
    return c.succeed();
  });

  // Class and schema membership. Class names compare case-insensitively so
  // that Person and person name the same class.
  e.register_builtin("In-class", 2, [](BuiltinCall& c) -> Outcome {
    const TermPtr cls = c.arg(1);
    for (const auto& v : c.graphs())
      for (const auto& gc : v.graph->classes) {
        if (cls->is_atom() && !same_class_name(cls->name, gc.name)) continue;
        if (!cls->is_atom() && !cls->is_var()) return {};
        for (const auto& m : gc.members) {
          if (!c.visible_member(v, gc, *m)) continue;
          TermPtr name = cls->is_var() ? make_atom(gc.name) : cls;
          if (Outcome o = c.unify({{c.goal()->args[0], m}, {c.goal()->args[1], name}}); !o.more()) return o;
        }
      }
    return {};
  });
  e.register_builtin("Is-class-of", 3, [](BuiltinCall& c) -> Outcome {
    const TermPtr cls = c.arg(1), g = c.arg(2);
    for (const auto& v : c.graphs()) {
      if (g->is_atom() && g->name != v.graph->name) continue;
      for (const auto& gc : v.graph->classes) {
        if (cls->is_atom() && !same_class_name(cls->name, gc.name)) continue;
        for (const auto& m : gc.members) {
          if (!c.visible_member(v, gc, *m)) continue;
          const auto& a = c.goal()->args;
          if (Outcome o = c.unify({{a[0], m}, {a[1], make_atom(gc.name)}, {a[2], make_atom(v.graph->name)}}); !o.more())
            return o;
        }
      }
    }
    return {};
  });
  e.register_builtin("Is-class", 2, [](BuiltinCall& c) -> Outcome {
    for (const auto& v : c.graphs())
      for (const auto& gc : v.graph->classes) {
        bool denied = false;
        if (!v.owner)
          for (const auto& r : v.graph->policy.group_rules)
            denied = denied || (r.mode == GroupMode::DenyRead && r.group == gc.name);
        if (denied) continue;
        TermPtr cls = c.arg(0);
        TermPtr name = cls->is_atom() && same_class_name(cls->name, gc.name) ? cls : make_atom(gc.name);
        const auto& a = c.goal()->args;
        if (Outcome o = c.unify({{a[0], name}, {a[1], make_atom(v.graph->name)}}); !o.more()) return o;
      }
    return {};
  });
  e.register_builtin("Is-schema", 2, [](BuiltinCall& c) -> Outcome {
    for (const auto& v : c.graphs())
      for (const auto& [schema, rels] : v.graph->schemas) {
        const auto& a = c.goal()->args;
        if (Outcome o = c.unify({{a[0], make_atom(schema)}, {a[1], make_atom(v.graph->name)}}); !o.more()) return o;
      }
    return {};
  });
}

void install_statistics(Engine& e) {
  e.register_builtin("Input", 1, [](BuiltinCall& c) -> Outcome {
    auto& st = c.state();
    if (st.dataset.empty()) throw EngineError("Input: no dataset loaded");
    for (std::size_t idx : st.sample()) {
      TermPtr id = make_atom(st.dataset[idx].id);
      c.check_statistics(*id);
      if (Outcome o = c.unify(c.goal()->args[0], id); !o.more()) return o;
    }
    return {};
  }, true);
  e.register_builtin("Positive", 1, [](BuiltinCall& c) {
    return record_of(c, c.arg(0)).label == Label::Positive ? c.succeed() : Outcome{};
  }, true);
  for (const char* name : {"Count", "Increase"}) {
    e.register_builtin(name, 1, [](BuiltinCall& c) {
      c.state().registers[c.symbol(0)] += 1;
      return c.succeed();
    });
  }
  e.register_builtin("Transform", 2, [](BuiltinCall& c) {
    const MTuple& rec = record_of(c, c.arg(0));
    const auto& st = c.state();
    std::vector<TermPtr> pairs;
    for (const auto& r : st.bad_spec.rules)
      pairs.push_back(make_compound("pair", {make_atom(r.name),
                                             make_number(derived_value(rec, st.schema, r.attribute, st.bad_spec.bmi))}));
    return c.unify(c.goal()->args[1], make_list(pairs));
  }, true);
  e.register_builtin("Distribute", 2, [](BuiltinCall& c) {
    std::vector<TermPtr> items;
    if (!list_items(c.arg(0), items)) throw TypeError("Distribute needs a list of pairs");
    auto& buf = buffer_of(c, c.symbol(1));
    for (const auto& p : items) {
      if (!p->is_compound() || p->arity() != 2) throw TypeError("Distribute: not a pair: " + to_string(p));
      buf[rule_index(c, p->args[0])].push_back(as_number(p->args[1], "Distribute"));
    }
    return c.succeed();
  }, true);
  e.register_builtin("Filter", 1, [](BuiltinCall& c) {
    auto& buf = buffer_of(c, c.symbol(0));
    const auto& rules = c.state().bad_spec.rules;
    for (std::size_t j = 0; j < rules.size(); ++j)
      std::erase_if(buf[j], [&](double v) { return !bad_value(rules[j], v); });
    return c.succeed();
  }, true);
  e.register_function("Buffer", 2, [](BuiltinCall& c, const std::vector<TermPtr>& a) {
    if (!a[0]->is_atom()) throw TypeError("Buffer needs a buffer name, got " + to_string(a[0]));
    const auto& list = buffer_of(c, a[0]->name)[rule_index(c, a[1])];
    std::vector<TermPtr> items;
    for (double v : list) items.push_back(make_number(v));
    return make_list(items);
  }, true);
  e.register_function("Attribute-Name", 1, [](BuiltinCall& c, const std::vector<TermPtr>& a) {
    return make_atom(c.state().bad_spec.rules[rule_index(c, a[0])].name);
  });
  // Display(B, I, J): one "name: rate" line per bad rule from J on.
  e.register_builtin("Display", 3, [](BuiltinCall& c) {
    auto& buf = buffer_of(c, c.symbol(0));
    const double total = c.number(1);
    const auto& rules = c.state().bad_spec.rules;
    for (std::size_t j = rule_index(c, c.value(2)); j < rules.size(); ++j)
      c.out() << rules[j].name << ": " << format_number(static_cast<double>(buf[j].size()) / total) << "\n";
    return c.succeed();
  }, true);
}

}  // namespace

void install_core_builtins(Engine& e) {
  install_logic(e);
  install_graph(e);
  install_statistics(e);
}

}  // namespace kgnp
