#include <array>

#include "harness.hpp"
#include "kgnp/argumentation.hpp"
#include "kgnp/util.hpp"

namespace kgnp::acceptance {
namespace {

constexpr SetOrder kModes[] = {SetOrder::Angelic, SetOrder::Demonic, SetOrder::Complete};

std::vector<Element> numbers(std::initializer_list<double> xs) {
  std::vector<Element> out;
  for (double x : xs) out.push_back(make_element(format_number(x)));
  return out;
}

// A random order on x0..x{size-1}, closed here by Warshall's algorithm.
struct RandomPoset {
  std::size_t size = 0;
  std::array<std::array<bool, 8>, 8> le{};
  ElementOrder order;
};

RandomPoset random_poset(Rng& rng, std::size_t size) {
  RandomPoset p;
  p.size = size;
  std::string text;
  // a random permutation as the topological order keeps it acyclic
  std::vector<std::size_t> rank(size);
  for (std::size_t i = 0; i < size; ++i) rank[i] = i;
  for (std::size_t i = size; i > 1; --i) std::swap(rank[i - 1], rank[uniform_index(rng, i)]);
  for (std::size_t i = 0; i < size; ++i) {
    p.le[i][i] = true;
    text += "element x" + std::to_string(i) + "\n";
  }
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      if (rank[i] < rank[j] && uniform_index(rng, 10) < 3) {
        p.le[i][j] = true;
        text += "x" + std::to_string(i) + " <= x" + std::to_string(j) + "\n";
      }
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        if (p.le[i][k] && p.le[k][j]) p.le[i][j] = true;
  p.order = parse_order(text);
  return p;
}

std::vector<Element> elements_of(unsigned mask) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < 8; ++i)
    if (mask & (1u << i)) out.push_back(make_element("x" + std::to_string(i)));
  return out;
}

// Definition-level evaluation of the three liftings over bitmask sets.
bool oracle(const RandomPoset& p, unsigned s1, unsigned s2, SetOrder mode) {
  auto covered = [&](unsigned from, unsigned to, bool upward) {
    for (std::size_t a = 0; a < p.size; ++a) {
      if (!(from & (1u << a))) continue;
      bool found = false;
      for (std::size_t b = 0; b < p.size && !found; ++b)
        found = (to & (1u << b)) && (upward ? p.le[a][b] : p.le[b][a]);
      if (!found) return false;
    }
    return true;
  };
  const bool angelic = covered(s1, s2, true);   // each u in s1 lies below some v in s2
  const bool demonic = covered(s2, s1, false);  // each v in s2 lies above some u in s1
  return mode == SetOrder::Angelic ? angelic : mode == SetOrder::Demonic ? demonic : angelic && demonic;
}

}  // namespace

Verdict ac11_argumentation() {
  // {4, 6} against {2, 8}
  {
    ElementOrder o;
    o.close();
    auto a = numbers({4, 6}), b = numbers({2, 8});
    const bool want[3][2] = {{true, false}, {false, true}, {false, false}};
    for (std::size_t m = 0; m < 3; ++m)
      if (poset_compare(a, b, o, kModes[m]) != want[m][0] || poset_compare(b, a, o, kModes[m]) != want[m][1])
        return fail(std::string("{4,6}/{2,8} truth table wrong in ") + to_string(kModes[m]) + " mode");
  }

  // Regimens, technical sorts ignored
  {
    Session s = load_session(data_path("regimen.session"));
    ElementOrder o = load_order(data_path("regimen.order"));
    auto profiles = competitor_profiles(s);
    std::vector<Element> r1, r2;
    for (const auto& p : profiles)
      for (const auto& e : p.characteristics) (p.competitor == "regimen1" ? r1 : r2).push_back(make_element(e.value));
    const bool want[3][2] = {{false, true}, {false, false}, {false, false}};  // r1<=r2, r2<=r1
    for (std::size_t m = 0; m < 3; ++m)
      if (poset_compare(r1, r2, o, kModes[m]) != want[m][0] || poset_compare(r2, r1, o, kModes[m]) != want[m][1])
        return fail(std::string("regimen comparison wrong in ") + to_string(kModes[m]) + " mode");
  }

  // Larynx session, without and with cure rate preferred
  {
    Session s = load_session(data_path("larynx.session"));
    ElementOrder o = load_order(data_path("larynx.order"));
    auto profiles = competitor_profiles(s, Merge::LatestWins, o.sorts());
    const std::vector<std::string> plain = {"hemi-laryngectomy -> radiotherapy"};
    const std::vector<std::string> preferred = {"hemi-laryngectomy -> radiotherapy", "radiotherapy -> take-out"};
    if (rank_competitors(profiles, o).edge_list() != plain) return fail("larynx ranking without preference differs");
    if (rank_competitors(profiles, o, std::string("cure rate")).edge_list() != preferred)
      return fail("larynx ranking with cure rate preferred differs");
  }

  // Exhaustive oracle: every pair of sets of size <= 6 over random carriers.
  Rng rng(11);
  std::size_t instances = 0;
  for (std::size_t size = 1; size <= 8; ++size) {
    for (std::size_t trial = 0; trial < 3; ++trial) {
      RandomPoset p = random_poset(rng, size);
      std::vector<unsigned> sets;
      for (unsigned mask = 1; mask < (1u << size); ++mask)
        if (__builtin_popcount(mask) <= 6) sets.push_back(mask);
      std::vector<std::vector<Element>> elems;
      for (unsigned m : sets) elems.push_back(elements_of(m));
      for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = 0; j < sets.size(); ++j)
          for (SetOrder mode : kModes) {
            if (poset_compare(elems[i], elems[j], p.order, mode) != oracle(p, sets[i], sets[j], mode))
              return fail("carrier " + std::to_string(size) + ": " + to_string(mode) + " disagrees with the oracle");
            ++instances;
          }
    }
  }

  // Reflexive, transitive, and not symmetric in general.
  std::array<std::size_t, 3> asymmetric{};
  for (std::size_t c = 0; c < 10000; ++c) {
    RandomPoset p = random_poset(rng, 2 + uniform_index(rng, 7));
    auto pick = [&] {
      unsigned m = 0;
      while (!m || __builtin_popcount(m) > 6) m = static_cast<unsigned>(uniform_index(rng, 1u << p.size));
      return m;
    };
    const unsigned a = pick(), b = pick(), d = pick();
    for (std::size_t m = 0; m < 3; ++m) {
      auto le = [&](unsigned x, unsigned y) { return poset_compare(elements_of(x), elements_of(y), p.order, kModes[m]); };
      if (!le(a, a)) return fail(std::string(to_string(kModes[m])) + " is not reflexive");
      if (le(a, b) && le(b, d) && !le(a, d)) return fail(std::string(to_string(kModes[m])) + " is not transitive");
      const bool complete = le(a, b);
      if (kModes[m] == SetOrder::Complete &&
          complete != (poset_compare(elements_of(a), elements_of(b), p.order, SetOrder::Angelic) &&
                       poset_compare(elements_of(a), elements_of(b), p.order, SetOrder::Demonic)))
        return fail("complete is not angelic and demonic together");
      if (le(a, b) && !le(b, a)) ++asymmetric[m];
    }
  }
  for (std::size_t m = 0; m < 3; ++m)
    if (!asymmetric[m]) return fail(std::string("no asymmetry witness for ") + to_string(kModes[m]));
  return pass("truth table, regimens and larynx rankings exact; " + std::to_string(instances) +
              " exhaustive instances agree; 10000 property cases, asymmetry witnesses " +
              std::to_string(asymmetric[0]) + "/" + std::to_string(asymmetric[1]) + "/" +
              std::to_string(asymmetric[2]));
}

}  // namespace kgnp::acceptance
