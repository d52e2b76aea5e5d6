#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "kgnp/argumentation.hpp"
#include "kgnp/cli.hpp"
#include "kgnp/embedding.hpp"
#include "kgnp/engine.hpp"
#include "kgnp/error.hpp"
#include "kgnp/network.hpp"
#include "kgnp/parser.hpp"
#include "kgnp/synthetic.hpp"

namespace py = pybind11;
using namespace kgnp;

namespace {

py::dict run(const std::string& program, const std::string& query, const std::optional<std::string>& network,
             std::size_t max_solutions) {
  NetworkConfig cfg;
  if (network) cfg = load_network(*network);
  auto prog = std::make_shared<const Program>(parse_program(program));
  EngineOptions opts;
  opts.max_solutions = max_solutions;
  Engine e(cfg.network, prog, opts);
  attach(e, cfg);
  std::ostringstream out;
  e.set_output(out);
  std::vector<Solution> all;
  {
    py::gil_scoped_release release;
    all = e.solve_all(parse_query(query));
  }
  py::list answers;
  for (const auto& s : all) {
    py::dict row;
    for (const auto& [name, value] : s.bindings) row[py::str(name)] = to_string(value);
    answers.append(row);
  }
  py::dict result;
  result["answers"] = answers;
  result["output"] = out.str();
  return result;
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

py::dict train_and_evaluate(const std::string& train_csv, const std::string& test_csv, std::size_t dimension,
                            std::size_t epochs, std::uint64_t seed, std::size_t j, std::size_t k) {
  const DatasetSchema schema = DatasetSchema::cardio();
  auto train = ingest_mtuples_text(train_csv, schema, "<train>");
  auto test = ingest_mtuples_text(test_csv, schema, "<test>");
  EmbedConfig cfg;
  cfg.n = dimension;
  cfg.epochs = epochs;
  cfg.seed = seed;
  EvalReport rep;
  {
    py::gil_scoped_release release;
    EmbeddingSpace s = train_transmeth(train, schema, cfg);
    rep = evaluate(s, test, j, k);
  }
  py::dict d;
  d["accuracy"] = rep.accuracy();
  d["classified"] = rep.classified;
  d["rejected"] = rep.rejected;
  return d;
}

py::dict rates(const std::string& csv, std::size_t sample, std::uint64_t seed) {
  const DatasetSchema schema = DatasetSchema::cardio();
  RateReport r = bad_attribute_rates(ingest_mtuples_text(csv, schema), schema, BadSpec::cardio(), sample, seed);
  py::dict d;
  d["sampled"] = r.sampled;
  d["positives"] = r.positives;
  d["rates"] = r.rates;
  return d;
}

bool compare_sets(const std::vector<std::string>& s1, const std::vector<std::string>& s2, const std::string& order,
                  const std::string& mode) {
  std::vector<Element> a, b;
  for (const auto& x : s1) a.push_back(make_element(x));
  for (const auto& x : s2) b.push_back(make_element(x));
  ElementOrder o = parse_order(order);
  return poset_compare(a, b, o, parse_set_order(mode));
}

}  // namespace

PYBIND11_MODULE(_kgnp, m) {
  m.doc() = "Bindings for the kgnp core library.";
  py::register_exception<Error>(m, "Error");

  m.def("parse_program", [](const std::string& text) { return print_program(parse_program(text)); },
        py::arg("text"), "Parses a program and returns its canonical text.");
  m.def("run", &run, py::arg("program"), py::arg("query"), py::arg("network") = py::none(),
        py::arg("max_solutions") = 0,
        "Solves a query; returns {'answers': [{var: term}], 'output': printed text}.");
  m.def("cli", &cli, py::arg("args"), "Runs a kgnp subcommand; returns (exit code, stdout, stderr).");
  m.def("synthetic_cardio_csv", &synthetic_cardio_csv, py::arg("count"), py::arg("seed"),
        py::arg("separation") = 1.0, py::arg("first_id") = 1);
  m.def("train_and_evaluate", &train_and_evaluate, py::arg("train_csv"), py::arg("test_csv"),
        py::arg("dimension") = 64, py::arg("epochs") = 100, py::arg("seed") = 1, py::arg("j") = 5,
        py::arg("k") = 10);
  m.def("bad_attribute_rates", &rates, py::arg("csv"), py::arg("sample") = 0, py::arg("seed") = 1);
  m.def("poset_compare", &compare_sets, py::arg("s1"), py::arg("s2"), py::arg("order") = "",
        py::arg("mode") = "angelic");
  m.def("gain", &gain, py::arg("acc_1"), py::arg("acc_p"), py::arg("time_1"), py::arg("time_p"));
}
