#include <regex>
#include <set>

#include "harness.hpp"
#include "kgnp/error.hpp"
#include "kgnp/network.hpp"
#include "kgnp/util.hpp"

namespace kgnp::acceptance {
namespace {

std::string entity(std::size_t i) { return "e" + std::string(i < 10 ? "0" : "") + std::to_string(i); }

std::set<std::string> tokens(const std::string& text) {
  static const std::regex word("[A-Za-z0-9_]+");
  std::set<std::string> out;
  for (std::sregex_iterator it(text.begin(), text.end(), word), end; it != end; ++it) out.insert(it->str());
  return out;
}

std::string vec_text(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s + "]";
}

// Random people and places; some people are civilians. Rows printed for a
// snapshot must be exactly the civilian's triplets with their vectors.
std::string civil_only_toy(Rng& rng, std::size_t round) {
  const std::size_t people = 6;
  std::string person_triples, vector_triples;
  std::set<std::string> civil;
  for (std::size_t i = 0; i < people; ++i) {
    const std::string p = "p" + std::to_string(i);
    person_triples += "(" + p + ", worksAt, clinic)\nclass(Person, " + p + ")\n";
    vector_triples += "(" + p + ", near, place" + std::to_string(uniform_index(rng, 3)) + ")\n";
    if (uniform_index(rng, 2)) {
      civil.insert(p);
      vector_triples += "class(civil, " + p + ")\n";
    }
  }
  std::vector<std::string> symbols = {"near", "owns", "visits", "place0", "place1", "place2"};
  for (std::size_t i = 0; i < people; ++i) symbols.push_back("p" + std::to_string(i));
  const std::size_t edges = 4 + uniform_index(rng, 12);
  for (std::size_t k = 0; k < edges; ++k) {
    const std::string h = "p" + std::to_string(uniform_index(rng, people));
    const std::string t = uniform_index(rng, 2) ? "p" + std::to_string(uniform_index(rng, people))
                                                : "place" + std::to_string(uniform_index(rng, 3));
    vector_triples += "(" + h + ", " + symbols[uniform_index(rng, 3)] + ", " + t + ")\n";
  }
  for (const auto& s : symbols)
    vector_triples += "vec(" + s + ", " + format_number(double(uniform_index(rng, 100)) / 10) + ", " +
                      format_number(double(uniform_index(rng, 100)) / 10) + ")\n";

  KGNetwork net;
  net.add_graph(parse_triples(person_triples, "KG"));
  KnowledgeGraph v = parse_triples(vector_triples, "KG-V");
  v.local_program = std::make_shared<const Program>(parse_program_file(data_path("kgv_lpp.kgnpl")));
  v.policy.lpp_only = true;
  const KnowledgeGraph& vg = net.add_graph(std::move(v));
  auto session = std::make_shared<const Program>(parse_program_file(data_path("snapshot_v.kgnpl")));

  for (std::size_t i = 0; i < people; ++i) {
    const std::string p = "p" + std::to_string(i);
    std::vector<std::string> want;
    auto emit = [&](const Triplet& t) {
      want.push_back(to_string(t) + " @KG-V " + vec_text(*vg.vector_of(*t.head)) + " " +
                     vec_text(*vg.vector_of(*make_atom(t.relation))) + " " + vec_text(*vg.vector_of(*t.tail)));
    };
    if (civil.count(p)) {
      for (const auto& t : vg.triplets)
        if (t.head->name == p) emit(t);
      for (const auto& t : vg.triplets)
        if (t.tail->name == p) emit(t);
    }
    auto got = run_query(net, session, "? Snapshot(" + p + ").");
    if (!got.answers.empty() || lines_of(got.printed) != want)
      return "toy " + std::to_string(round) + ": snapshot of " + p + (civil.count(p) ? " (civil)" : "") +
             " printed " + std::to_string(lines_of(got.printed).size()) + " rows, expected " +
             std::to_string(want.size());
  }
  return {};
}

}  // namespace

Verdict ac12_kgnf() {
  Rng rng(12);
  const std::size_t nets = 100, per_net = 100, entities = 30;
  auto session = std::make_shared<const Program>(
      parse_program("g1(X) <- Output(RDF(X, Y, Z)), Fail.\n"
                    "g2(X) <- Output(RDF(U, V, X)), Fail.\n"
                    "snap(X) <- g1(X) ; g2(X).\n"));
  std::size_t queries = 0, denied = 0, rows = 0;
  for (std::size_t n = 0; n < nets; ++n) {
    std::string triples;
    std::vector<std::set<std::string>> classes(3);
    for (std::size_t e = 0; e < entities; ++e)
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (uniform_index(rng, 10) < 3) {
          classes[c].insert(entity(e));
          triples += "class(k" + std::to_string(c) + ", " + entity(e) + ")\n";
        }
    for (std::size_t t = 0; t < 120; ++t)
      triples += "(" + entity(uniform_index(rng, entities)) + ", r" + std::to_string(uniform_index(rng, 4)) + ", " +
                 entity(uniform_index(rng, entities)) + ")\n";
    KnowledgeGraph g = parse_triples(triples, "G");

    std::set<std::string> forbidden;
    const std::size_t blocked = uniform_index(rng, 4);
    for (std::size_t b = 0; b < blocked; ++b) {
      const std::string e = entity(uniform_index(rng, entities));
      g.policy.entity_blocklist.push_back(make_atom(e));
      forbidden.insert(e);
    }
    if (uniform_index(rng, 3)) {
      const std::size_t c = uniform_index(rng, classes.size());
      g.policy.group_rules.push_back({"k" + std::to_string(c), GroupMode::DenyRead});
      forbidden.insert(classes[c].begin(), classes[c].end());
    }
    const std::size_t cap1 = 1 + uniform_index(rng, 12), cap2 = 1 + uniform_index(rng, 12);
    g.policy.loop_caps = {{"g1", cap1}, {"g2", cap2}};
    const bool lpp_only = uniform_index(rng, 20) == 0;
    g.policy.lpp_only = lpp_only;
    KGNetwork net;
    net.add_graph(std::move(g));

    for (std::size_t q = 0; q < per_net; ++q) {
      const std::string who = entity(uniform_index(rng, entities));
      const std::string rel = "r" + std::to_string(uniform_index(rng, 4));
      std::string query;
      std::size_t cap = 0;
      switch (uniform_index(rng, 7)) {
        case 0: query = "? " + rel + "(X, Y)."; break;
        case 1: query = "? " + rel + "(" + who + ", Y)."; break;
        case 2: query = "? " + rel + "(X, " + who + ")."; break;
        case 3: query = "? in-class(X, k" + std::to_string(uniform_index(rng, 3)) + ")."; break;
        case 4: query = "? g1(" + who + ")."; cap = cap1; break;
        case 5: query = "? g2(" + who + ")."; cap = cap2; break;
        default: query = "? snap(" + who + ")."; cap = cap1 + cap2; break;
      }
      ++queries;
      RunResult r;
      try {
        r = run_query(net, session, query);
      } catch (const EngineError& e) {
        // a graph reachable only through its local program is invisible here
        if (!lpp_only) return fail(query + " threw: " + e.what());
        ++denied;
        continue;
      }
      std::string seen = r.printed;
      for (const auto& a : r.answers) seen += "\n" + a;
      for (const auto& tok : tokens(seen))
        if (forbidden.count(tok)) return fail(query + " leaked " + tok);
      const std::size_t printed = lines_of(r.printed).size();
      if (cap && printed > cap)
        return fail(query + " printed " + std::to_string(printed) + " rows over a cap of " + std::to_string(cap));
      rows += printed + r.answers.size();
    }
  }

  for (std::size_t round = 0; round < 20; ++round)
    if (auto problem = civil_only_toy(rng, round); !problem.empty()) return fail(problem);
  return pass(std::to_string(queries) + " policed queries (" + std::to_string(denied) + " refused, " +
              std::to_string(rows) + " rows and answers) leak nothing and respect caps; 20 civil-only toys exact");
}

}  // namespace kgnp::acceptance
