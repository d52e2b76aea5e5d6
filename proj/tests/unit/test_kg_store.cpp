#include <gtest/gtest.h>

#include <map>

#include "kgnp/error.hpp"
#include "kgnp/synthetic.hpp"
#include "support.hpp"

using namespace kgnp;

namespace {

const char* kHeader = "id;age;gender;height;weight;ap_hi;ap_lo;cholesterol;gluc;smoke;alco;active;cardio\n";

}  // namespace

TEST(Triples, ParsesTripletsClassesAndComments) {
  KnowledgeGraph g = parse_triples("# toy\n(a, r, b)\n(b, r, \"x, y\")\nclass(Person, a)\nschema(S, r)\n", "G");
  ASSERT_EQ(g.triplets.size(), 2u);
  EXPECT_EQ(to_string(*g.triplets[1].tail), "'x, y'");
  EXPECT_TRUE(g.in_class(*make_atom("a"), "Person"));
  EXPECT_EQ(g.schemas.at("S"), std::vector<std::string>{"r"});
}

TEST(Triples, MalformedLineNamesTheLine) {
  try {
    parse_triples("(a, r, b)\n(a, r)\n", "G", "bad.triples");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.triples:2"), std::string::npos) << e.what();
  }
}

TEST(Triples, DuplicatesAreKept) {
  KnowledgeGraph g = parse_triples("(a, r, b)\n(a, r, b)\n", "G");
  EXPECT_EQ(g.triplets.size(), 2u);
}

TEST(Query, WildcardReturnsEverythingInOrder) {
  KGNetwork net = test::single_graph("(a, r, b)\n(c, s, d)\n(a, s, e)\n");
  auto all = query_triples(net, "KG", {});
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[2].relation, "s");
  auto by_head = query_triples(net, "KG", {make_atom("a"), std::nullopt, nullptr});
  EXPECT_EQ(by_head.size(), 2u);
}

TEST(Query, PolicyFiltersButNeverInvents) {
  KGNetwork net;
  KnowledgeGraph g = parse_triples("(a, r, secret)\n(a, r, b)\n(c, r, d)\nclass(Hidden, c)\n", "KG");
  g.policy.entity_blocklist.push_back(make_atom("secret"));
  g.policy.group_rules.push_back({"Hidden", GroupMode::DenyRead});
  net.add_graph(std::move(g));
  net.add_graph(parse_triples("(x, y, z)\n", "Other"));
  net.add_link("Other", "KG");
  auto seen = query_triples(net, "KG", {}, "Other");
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(to_string(*seen[0].tail), "b");
  EXPECT_THROW(query_triples(net, "Other", {}, "KG"), LinkMissing);
}

TEST(Query, LppOnlyNeedsTheLocalProgram) {
  KGNetwork net;
  KnowledgeGraph g = parse_triples("(a, r, b)\n", "KG");
  g.policy.lpp_only = true;
  net.add_graph(std::move(g));
  EXPECT_THROW(query_triples(net, "KG", {}), AccessDenied);
  EXPECT_EQ(query_triples(net, "KG", {}, kSession, true).size(), 1u);
}

TEST(Snapshot, CapsBoundTheLength) {
  std::string text = "class(Person, e)\n";
  for (int i = 0; i < 300; ++i) text += "(e, r, x" + std::to_string(i) + ")\n(y" + std::to_string(i) + ", r, e)\n";
  KnowledgeGraph g = parse_triples(text, "G");
  SnapshotOptions opts;
  opts.caps = std::make_pair(120, 130);
  auto snap = snapshot({&g}, *make_atom("e"), opts);
  EXPECT_EQ(snap.size(), 250u);
  EXPECT_EQ(snapshot({&g}, *make_atom("e")).size(), 600u);
}

TEST(Snapshot, HeadsBeforeTailsAcrossGraphs) {
  KnowledgeGraph g1 = parse_triples("class(Person, e)\n(x, r, e)\n(e, r, y)\n", "G1");
  KnowledgeGraph g2 = parse_triples("(e, s, z)\n", "G2");
  auto snap = snapshot({&g1, &g2}, *make_atom("e"));
  ASSERT_EQ(snap.size(), 3u);
  EXPECT_EQ(snap[0].graph, "G1");
  EXPECT_EQ(snap[1].graph, "G2");
  EXPECT_EQ(to_string(*snap[2].triplet.head), "x");
}

TEST(Dataset, IngestsRowsIntoElevenTriplets) {
  auto t = ingest_mtuples_text(std::string(kHeader) + "68001;20000;1;170;60;120;80;1;1;0;0;1;1\n", DatasetSchema::cardio());
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].triplets.size(), 11u);
  EXPECT_EQ(t[0].label, Label::Positive);
  EXPECT_EQ(t[0].triplets[3].relation, "weight");
  EXPECT_EQ(t[0].value(3), 60);
}

TEST(Dataset, EmptyBody) { EXPECT_TRUE(ingest_mtuples_text(kHeader, DatasetSchema::cardio()).empty()); }

TEST(Dataset, Errors) {
  const auto s = DatasetSchema::cardio();
  EXPECT_THROW(ingest_mtuples_text("id;age\n1;2\n", s), DataError);
  EXPECT_THROW(ingest_mtuples_text(std::string(kHeader) + "1;x;1;170;60;120;80;1;1;0;0;1;1\n", s), DataError);
  EXPECT_THROW(ingest_mtuples_text(std::string(kHeader) + "1;1;1;170;60;120;80;1;1;0;0;1;1\n1;1;1;170;60;120;80;1;1;0;0;1;1\n", s),
               DataError);
}

TEST(Dataset, CsvRoundTrip) {
  const std::string csv = synthetic_cardio_csv(40, 5);
  const auto tuples = ingest_mtuples_text(csv, DatasetSchema::cardio());
  EXPECT_EQ(mtuples_to_csv(tuples, DatasetSchema::cardio()), csv);
}

TEST(Rates, CountOverPositives) {
  auto t = ingest_mtuples_text(std::string(kHeader) +
                                   "1;25000;1;170;90;140;90;2;1;1;0;0;1\n"
                                   "2;15000;2;180;70;120;70;1;1;0;0;1;1\n"
                                   "3;23000;1;160;60;150;95;3;2;0;1;1;0\n",
                               DatasetSchema::cardio());
  RateReport r = bad_attribute_rates(t, DatasetSchema::cardio(), BadSpec::cardio(), 3, 9);
  EXPECT_EQ(r.positives, 2u);
  std::map<std::string, double> m(r.rates.begin(), r.rates.end());
  EXPECT_EQ(m["age"], 0.5);
  EXPECT_EQ(m["glucose"], 0);
  EXPECT_EQ(m["bad-bmi"], 0.5);
}

TEST(Rates, NoPositives) {
  auto t = ingest_mtuples_text(std::string(kHeader) + "1;25000;1;170;90;140;90;2;1;1;0;0;0\n", DatasetSchema::cardio());
  EXPECT_THROW(bad_attribute_rates(t, DatasetSchema::cardio(), BadSpec::cardio(), 1, 1), DataError);
}

TEST(Rates, DeterministicAndBounded) {
  auto t = synthetic_cardio(500, 3);
  auto a = bad_attribute_rates(t, DatasetSchema::cardio(), BadSpec::cardio(), 200, 11);
  auto b = bad_attribute_rates(t, DatasetSchema::cardio(), BadSpec::cardio(), 200, 11);
  EXPECT_EQ(a.rates, b.rates);
  for (const auto& [name, rate] : a.rates) {
    EXPECT_GE(rate, 0);
    EXPECT_LE(rate, 1);
  }
}
