#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kgnp {

/// A characteristic value. Percentages and plain numbers compare
/// numerically within a sort; words go through an ElementOrder.
struct Element {
  std::string sort;   // predicate name of the characteristic; empty when unsorted
  std::string value;  // normalized text: lowercase, single spaces
  std::optional<double> number;
  std::string unit;

  std::string text() const;
  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;
};

/// "99%" and "4" become numbers; anything else is a word, guards included.
Element make_element(std::string_view value, std::string_view sort = {});

/// Lowercase, whitespace runs collapsed, spaces in names turned into `-`.
std::string normalize_name(std::string_view text);

struct Argument {
  std::string speaker;
  std::size_t index = 0;
  std::string label;                // as written, e.g. "A5"
  std::vector<Element> head;        // characteristics
  std::vector<std::string> body;    // competitors or conditions
  std::size_t line = 0;
};

struct Session {
  std::vector<Argument> arguments;
};

/// One argument per line: `speaker/index head, ... <- body, ...` (or `←`).
/// Either side may be empty, not both; indices must increase.
Session parse_session(std::string_view text, const std::string& source = "<session>");
Session load_session(const std::string& path);

class ElementOrder {
 public:
  /// Adds u <= v; both become carrier elements.
  void add(const std::string& u, const std::string& v);
  void add_element(const std::string& e);
  void set_sort(const std::string& element, const std::string& sort);
  void declare_sort(const std::string& sort);
  /// Reflexive-transitive closure; DataError when two distinct elements
  /// end up mutually ordered.
  void close();

  bool contains(const Element& e) const;
  /// u <= v. Elements of different sorts are incomparable.
  bool le(const Element& u, const Element& v) const;
  std::string sort_of(const Element& e) const;
  const std::set<std::string>& sorts() const { return sorts_; }
  const std::set<std::string>& elements() const { return elements_; }

 private:
  std::set<std::string> elements_;
  std::set<std::pair<std::string, std::string>> le_;
  std::map<std::string, std::string> sort_of_;
  std::set<std::string> sorts_;
  bool closed_ = false;
};

/// Lines `a <= b`, `sort x : s`, `sorts s1, s2`, `element x`; `#` comments.
ElementOrder parse_order(std::string_view text, const std::string& source = "<order>");
ElementOrder load_order(const std::string& path);

enum class SetOrder { Angelic, Demonic, Complete };
const char* to_string(SetOrder m);
SetOrder parse_set_order(std::string_view text);

/// s1 <= s2 under the chosen lifting. DataError on an empty set or an
/// element outside the order's carrier.
bool poset_compare(const std::vector<Element>& s1, const std::vector<Element>& s2, const ElementOrder& order,
                   SetOrder mode);

enum class Merge { LatestWins, Union };

struct CompetitorProfile {
  std::string competitor;
  std::vector<Element> characteristics;
};

/// Groups head characteristics by competitor, first mention first. With
/// `sorts` non-empty, characteristics of other sorts are left out.
/// Arguments with an empty side are skipped; a multi-predicate body is a
/// DataError naming the argument.
std::vector<CompetitorProfile> competitor_profiles(const Session& s, Merge merge = Merge::LatestWins,
                                                   const std::set<std::string>& sorts = {});

/// Comparison graph: nodes are groups of mutually <= competitors, an edge
/// (a, b) reads "a is below b". Transitively reduced.
struct Ranking {
  std::vector<std::vector<std::string>> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::string node_name(std::size_t i) const;
  /// "a -> b" lines, sorted.
  std::vector<std::string> edge_list() const;
  std::string to_dot() const;
};

Ranking rank_competitors(const std::vector<CompetitorProfile>& profiles, const ElementOrder& order,
                         const std::optional<std::string>& preference = std::nullopt, SetOrder mode = SetOrder::Angelic);

}  // namespace kgnp
