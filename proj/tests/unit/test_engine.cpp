#include <gtest/gtest.h>

#include "kgnp/error.hpp"
#include "kgnp/network.hpp"
#include "support.hpp"

using namespace kgnp;
using kgnp::test::answers;

namespace {

const char* kTen = "(a, r, 1)\n(a, r, 2)\n(a, r, 3)\n(a, r, 4)\n(a, r, 5)\n(a, r, 6)\n(a, r, 7)\n(a, r, 8)\n(a, r, 9)\n(a, r, 10)\n";

}  // namespace

TEST(Engine, SnapshotPrintsHeadTripletsThenTailTriplets) {
  NetworkConfig cfg = load_network(test::data_path("zhang.toml"));
  Engine e(cfg.network, cfg.session);
  std::ostringstream out;
  e.set_output(out);
  EXPECT_EQ(e.solve(parse_query("? Snapshot('Zhang_Yimou')."), [](const Solution&) { return true; }), 0u);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> got;
  while (std::getline(lines, line)) got.push_back(line);
  ASSERT_EQ(got.size(), 15u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(got[i].rfind("('Zhang_Yimou',", 0), 0u) << got[i];
  for (int i = 10; i < 15; ++i) EXPECT_NE(got[i].find(", 'Zhang_Yimou') @KG"), std::string::npos) << got[i];
}

TEST(Engine, SnapshotGuardRejectsNonPersons) {
  NetworkConfig cfg = load_network(test::data_path("zhang.toml"));
  Engine e(cfg.network, cfg.session);
  std::ostringstream out;
  e.set_output(out);
  e.solve(parse_query("? Snapshot('Hero')."), [](const Solution&) { return true; });
  EXPECT_EQ(out.str(), "");
}

TEST(Engine, BoundedFailStopsAfterN) {
  auto net = test::single_graph(kTen);
  std::string printed;
  answers(net, "loop <- r(a, X), Print(X), Fail(3).", "? loop.", &printed);
  EXPECT_EQ(printed, "1\n2\n3\n");
}

TEST(Engine, UnboundedFailExhaustsChoicePoints) {
  auto net = test::single_graph(kTen);
  std::string printed;
  answers(net, "loop <- r(a, X), Print(X), Fail.", "? loop.", &printed);
  EXPECT_EQ(test::count_lines(printed), 10u);
}

TEST(Engine, EachDisjunctOwnsItsFailCounter) {
  auto net = test::single_graph(kTen);
  std::string printed;
  answers(net, "loop <- r(a, X), Print(X), Fail(2) ; r(a, Y), Print(Y), Fail(4).", "? loop.", &printed);
  EXPECT_EQ(printed, "1\n2\n1\n2\n3\n4\n");
}

TEST(Engine, ClauseOrderIsDataThenTripletsThenRules) {
  KGNetwork net;
  KnowledgeGraph g = parse_triples("(a, r, from_graph)\n", "KG");
  g.local_program = test::program("r(a, from_rule) <- true.\nData: r(a, from_data).");
  net.add_graph(std::move(g));
  auto got = answers(net, "", "? #KG-LPP# r(a, X).");
  EXPECT_EQ(got, (std::vector<std::string>{"X = from_data", "X = from_graph", "X = from_rule"}));
}

TEST(Engine, SessionRulesComeBeforeGraphs) {
  auto net = test::single_graph("(a, r, from_graph)\n");
  auto got = answers(net, "r(a, from_rule) <- true.", "? r(a, X).");
  EXPECT_EQ(got, (std::vector<std::string>{"X = from_rule", "X = from_graph"}));
}

TEST(Engine, ComparativeUnificationOverData) {
  KGNetwork net;
  const char* prog =
      "Send-to(X, icu) <- Get-disease(X, abc), Larger(age(X), 70).\n"
      "Data: Eq(age(wang), 75).\n"
      "Data: Get-disease(wang, abc).\n"
      "Data: Get-disease(liang, abc).\n"
      "Data: Eq(age(liang), 65).\n";
  EXPECT_EQ(answers(net, prog, "? Send-to(X, icu)."), std::vector<std::string>{"X = wang"});
}

TEST(Engine, ComparativeUnificationOverTriplets) {
  auto net = test::single_graph("(age(wang), eq, 75)\n");
  EXPECT_EQ(answers(net, "", "? larger(age(X), 70)."), std::vector<std::string>{"X = wang"});
}

TEST(Engine, UnknownPredicate) {
  KGNetwork net;
  EXPECT_THROW(answers(net, "", "? nowhere(x)."), UnknownPredicate);
}

TEST(Engine, DepthLimit) {
  KGNetwork net;
  EngineOptions opts;
  opts.max_depth = 50;
  EXPECT_THROW(answers(net, "p(X) <- p(X).", "? p(a).", nullptr, opts), DepthExceeded);
}

TEST(Engine, MaxSolutions) {
  auto net = test::single_graph(kTen);
  EngineOptions opts;
  opts.max_solutions = 4;
  EXPECT_EQ(answers(net, "", "? r(a, X).", nullptr, opts).size(), 4u);
}

TEST(Engine, CutAndNegation) {
  auto net = test::single_graph(kTen);
  EXPECT_EQ(answers(net, "first(X) <- r(a, X), !.", "? first(X)."), std::vector<std::string>{"X = 1"});
  EXPECT_EQ(answers(net, "", "? r(a, X), not(r(a, 11)).").size(), 10u);
  EXPECT_TRUE(answers(net, "", "? not(r(a, 1)).").empty());
}

TEST(Engine, FuzzyAnnotationsTakeTheMaximum) {
  KGNetwork net;
  Engine e(net, test::program("p @f(0.2, 0.5) <- q, s.\nq @f(0.7, 0.1).\ns @f(0.3, 0.9)."));
  auto sols = e.solve_all(parse_query("? p."));
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(sols[0].annotation, (Tuple{0.7, 0.9}));
}

TEST(Engine, ProbabilisticAnnotationsMultiply) {
  KGNetwork net;
  Engine e(net, test::program("p @p(1) <- q, s.\nq @p(0.5).\ns @p(0.4)."));
  auto sols = e.solve_all(parse_query("? p."));
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_DOUBLE_EQ(sols[0].annotation.at(0), 0.2);
}

TEST(Engine, SourcesRestrictTripletLookup) {
  KGNetwork net;
  net.add_graph(parse_triples("(a, r, one)\n", "G1"));
  net.add_graph(parse_triples("(a, r, two)\n", "G2"));
  EXPECT_EQ(answers(net, "", "? #G2# r(a, X)."), std::vector<std::string>{"X = two"});
  EXPECT_EQ(answers(net, "", "? r(a, X).").size(), 2u);
}

TEST(Engine, LinksGateCallsBetweenGraphs) {
  KGNetwork net;
  KnowledgeGraph g1 = parse_triples("(a, r, one)\n", "G1");
  g1.local_program = test::program("ask(X) <- #G2# r(a, X).");
  net.add_graph(std::move(g1));
  net.add_graph(parse_triples("(a, r, two)\n", "G2"));
  EXPECT_THROW(answers(net, "", "? #G1-LPP# ask(X)."), LinkMissing);
  net.add_link("G1", "G2");
  // the partner graph is always read first, then the called one
  EXPECT_EQ(answers(net, "", "? #G1-LPP# ask(X)."), (std::vector<std::string>{"X = one", "X = two"}));
}

TEST(Engine, VectorSnapshotAdmitsOnlyCivilians) {
  NetworkConfig cfg = load_network(test::data_path("kgnf.toml"));
  auto rows = [&](const std::string& who) {
    Engine e(cfg.network, cfg.session);
    std::ostringstream out;
    e.set_output(out);
    e.solve(parse_query("? Snapshot('" + who + "')."), [](const Solution&) { return true; });
    return out.str();
  };
  EXPECT_EQ(test::count_lines(rows("Li")), 2u);
  EXPECT_EQ(test::count_lines(rows("Wang")), 3u);
  EXPECT_EQ(rows("Zhao"), "");
}

TEST(Engine, LppOnlyGraphRefusesDirectReads) {
  NetworkConfig cfg = load_network(test::data_path("kgnf.toml"));
  Engine e(cfg.network, cfg.session);
  EXPECT_THROW(e.solve_all(parse_query("? #KG-V# livesIn(X, Y).")), AccessDenied);
}

TEST(Engine, PolicyHidesBlockedEntitiesAndCapsLoops) {
  NetworkConfig cfg = load_network(test::data_path("clinic.toml"));
  Engine e(cfg.network, cfg.session);
  std::ostringstream out;
  e.set_output(out);
  e.solve(parse_query("? Snapshot('Dr_Li')."), [](const Solution&) { return true; });
  EXPECT_EQ(test::count_lines(out.str()), 250u);
  EXPECT_EQ(out.str().find("VIP_1"), std::string::npos);
  EXPECT_EQ(out.str().find("Dr_Wang"), std::string::npos);
}

TEST(Engine, StatisticsProgramMatchesDirectCount) {
  auto tuples = ingest_mtuples_text(
      "id;age;gender;height;weight;ap_hi;ap_lo;cholesterol;gluc;smoke;alco;active;cardio\n"
      "1;25000;1;170;90;140;90;2;1;1;0;0;1\n"
      "2;15000;2;180;70;120;70;1;1;0;0;1;1\n"
      "3;23000;1;160;60;150;95;3;2;0;1;1;0\n",
      DatasetSchema::cardio());
  KGNetwork net;
  Engine e(net, std::make_shared<const Program>(parse_program_file(test::data_path("bad_rates.kgnpl"))));
  e.state().reset_dataset(tuples);
  e.state().seed = 1;
  std::ostringstream out;
  e.set_output(out);
  ASSERT_EQ(e.solve_all(parse_query("? job-done.")).size(), 1u);
  EXPECT_EQ(out.str(),
            "age\n0.5\nsystolic\n0.5\ndiastolic\n0.5\ncholesterol\n0.5\nglucose\n0\nsmoke\n0.5\nalcohol\n0\n"
            "physical\n0.5\nbad-bmi\n0.5\n");
}
