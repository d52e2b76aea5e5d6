#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kgnp/engine.hpp"
#include "kgnp/kg_store.hpp"
#include "kgnp/parser.hpp"

namespace kgnp::test {

inline std::string data_path(const std::string& name) { return std::string(KGNP_DATA_DIR) + "/" + name; }

inline std::shared_ptr<const Program> program(const std::string& text) {
  return std::make_shared<const Program>(parse_program(text));
}

inline KGNetwork single_graph(const std::string& triples, const std::string& name = "KG") {
  KGNetwork net;
  net.add_graph(parse_triples(triples, name));
  return net;
}

// Bindings text of every answer, in order; printed output goes to `printed`.
inline std::vector<std::string> answers(const KGNetwork& net, const std::string& prog, const std::string& query,
                                        std::string* printed = nullptr, EngineOptions opts = {}) {
  Engine e(net, program(prog), opts);
  std::ostringstream out;
  e.set_output(out);
  std::vector<std::string> got;
  e.solve(parse_query(query), [&](const Solution& s) {
    got.push_back(s.bindings_text());
    return true;
  });
  if (printed) *printed = out.str();
  return got;
}

inline std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace kgnp::test
