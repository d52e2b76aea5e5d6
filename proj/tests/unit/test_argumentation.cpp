#include <gtest/gtest.h>

#include "kgnp/argumentation.hpp"
#include "kgnp/error.hpp"
#include "kgnp/util.hpp"
#include "support.hpp"

using namespace kgnp;

namespace {

std::vector<Element> numbers(std::initializer_list<double> xs) {
  std::vector<Element> out;
  for (double x : xs) out.push_back(make_element(format_number(x)));
  return out;
}

}  // namespace

TEST(Elements, PercentagesAreNumbers) {
  Element e = make_element("99%", "cure-rate");
  ASSERT_TRUE(e.number);
  EXPECT_EQ(*e.number, 99);
  EXPECT_EQ(e.unit, "%");
  EXPECT_EQ(normalize_name("Cure  Rate"), "cure-rate");
}

TEST(SetOrders, FourSixAgainstTwoEight) {
  ElementOrder o;
  o.close();
  auto s1 = numbers({4, 6}), s2 = numbers({2, 8});
  EXPECT_TRUE(poset_compare(s1, s2, o, SetOrder::Angelic));
  EXPECT_FALSE(poset_compare(s2, s1, o, SetOrder::Angelic));
  EXPECT_TRUE(poset_compare(s2, s1, o, SetOrder::Demonic));
  EXPECT_FALSE(poset_compare(s1, s2, o, SetOrder::Demonic));
  EXPECT_FALSE(poset_compare(s1, s2, o, SetOrder::Complete));
  EXPECT_FALSE(poset_compare(s2, s1, o, SetOrder::Complete));
}

TEST(SetOrders, EmptySetIsAnError) {
  ElementOrder o;
  o.close();
  EXPECT_THROW(poset_compare({}, numbers({1}), o, SetOrder::Angelic), DataError);
}

TEST(SetOrders, ElementOutsideCarrier) {
  ElementOrder o = parse_order("low <= high\n");
  EXPECT_THROW(poset_compare({make_element("low")}, {make_element("huge")}, o, SetOrder::Angelic), DataError);
}

TEST(Orders, CycleIsRejected) { EXPECT_THROW(parse_order("a <= b\nb <= a\n"), DataError); }

TEST(Orders, MalformedLine) { EXPECT_THROW(parse_order("a < b\n"), DataError); }

TEST(Regimens, OnlyRegimenTwoIsAngelicallyBelow) {
  ElementOrder o = load_order(test::data_path("regimen.order"));
  std::vector<Element> r1{make_element("low"), make_element("very good"), make_element("very good if age < 75")};
  std::vector<Element> r2{make_element("bad for aging patients"), make_element("acceptable"), make_element("good")};
  EXPECT_FALSE(poset_compare(r1, r2, o, SetOrder::Angelic));
  EXPECT_FALSE(poset_compare(r1, r2, o, SetOrder::Demonic));
  EXPECT_FALSE(poset_compare(r2, r1, o, SetOrder::Demonic));
  EXPECT_TRUE(poset_compare(r2, r1, o, SetOrder::Angelic));
}

TEST(Sessions, ParseLabelsAndSides) {
  Session s = parse_session("S1/A1 cure rate (99%) <- take out\nRT1/A4 \xE2\x86\x90 take out;\n");
  ASSERT_EQ(s.arguments.size(), 2u);
  EXPECT_EQ(s.arguments[0].speaker, "S1");
  EXPECT_EQ(s.arguments[0].index, 1u);
  EXPECT_EQ(s.arguments[0].body, std::vector<std::string>{"take-out"});
  EXPECT_TRUE(s.arguments[1].head.empty());
}

TEST(Sessions, Errors) {
  EXPECT_THROW(parse_session("S/A1 <- \n"), DataError);
  EXPECT_THROW(parse_session("S/A2 x <- y\nS/A1 x <- y\n"), DataError);
}

TEST(Sessions, MultiPredicateBodyNamesTheArgument) {
  Session s = parse_session("S/A1 x(1) <- a, b\n");
  try {
    competitor_profiles(s);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("A1"), std::string::npos);
  }
}

TEST(Larynx, ProfilesAndRankings) {
  Session s = load_session(test::data_path("larynx.session"));
  ElementOrder o = load_order(test::data_path("larynx.order"));
  auto profiles = competitor_profiles(s, Merge::LatestWins, o.sorts());
  ASSERT_EQ(profiles.size(), 3u);
  EXPECT_EQ(profiles[2].competitor, "hemi-laryngectomy");
  EXPECT_EQ(profiles[2].characteristics.size(), 2u);

  Ranking plain = rank_competitors(profiles, o);
  EXPECT_EQ(plain.edge_list(), std::vector<std::string>{"hemi-laryngectomy -> radiotherapy"});
  Ranking preferred = rank_competitors(profiles, o, std::string("cure rate"));
  EXPECT_EQ(preferred.edge_list(),
            (std::vector<std::string>{"hemi-laryngectomy -> radiotherapy", "radiotherapy -> take-out"}));
  EXPECT_NE(preferred.to_dot().find("digraph"), std::string::npos);
}

TEST(Ranking, EquivalentCompetitorsMerge) {
  Session s = parse_session("a/1 q(5) <- x\na/2 q(5) <- y\na/3 q(7) <- z\n");
  ElementOrder o;
  o.close();
  Ranking r = rank_competitors(competitor_profiles(s), o);
  ASSERT_EQ(r.nodes.size(), 2u);
  EXPECT_EQ(r.edge_list(), std::vector<std::string>{"x = y -> z"});
}
