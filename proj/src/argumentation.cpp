#include "kgnp/argumentation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "kgnp/error.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

namespace {

std::string collapse_spaces(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : trim(text)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Splits on commas outside parentheses; empty pieces are dropped.
std::vector<std::string> top_level_items(std::string_view text, const std::string& where) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) throw DataError(where + ": unbalanced ')'");
    if (c == ',' && depth == 0) {
      if (!trim(cur).empty()) out.emplace_back(trim(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (depth != 0) throw DataError(where + ": unbalanced '('");
  if (!trim(cur).empty()) out.emplace_back(trim(cur));
  return out;
}

// `cure rate (99%)` -> sort cure-rate, value 99%; a bare name has no value.
Element characteristic(std::string_view item) {
  const auto open = item.find('(');
  if (open == std::string_view::npos || item.back() != ')') return make_element("", normalize_name(item));
  return make_element(item.substr(open + 1, item.size() - open - 2), normalize_name(item.substr(0, open)));
}

std::size_t trailing_number(std::string_view label) {
  std::size_t end = label.size(), begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(label[begin - 1]))) --begin;
  if (begin == end) return 0;
  return static_cast<std::size_t>(std::stoull(std::string(label.substr(begin))));
}

}  // namespace

std::string normalize_name(std::string_view text) {
  std::string out = collapse_spaces(text);
  std::replace(out.begin(), out.end(), ' ', '-');
  return out;
}

Element make_element(std::string_view value, std::string_view sort) {
  Element e;
  e.sort = std::string(sort);
  e.value = collapse_spaces(value);
  std::string_view v = e.value;
  std::string unit;
  if (!v.empty() && v.back() == '%') {
    unit = "%";
    v.remove_suffix(1);
  }
  if (auto n = parse_number(trim(v))) {
    e.number = *n;
    e.unit = unit;
    e.value = format_number(*n) + unit;
  }
  return e;
}

std::string Element::text() const {
  if (sort.empty()) return value;
  if (value.empty()) return sort;
  return sort + "(" + value + ")";
}

// ----- sessions -----

Session parse_session(std::string_view text, const std::string& source) {
  Session s;
  std::size_t line_no = 0, last = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    while (!line.empty() && (line.back() == ';' || line.back() == '.')) line = trim(line.substr(0, line.size() - 1));

    std::string l(line);
    std::size_t arrow = l.find("<-"), arrow_len = 2;
    if (arrow == std::string::npos) {
      arrow = l.find("\xE2\x86\x90");  // U+2190
      arrow_len = 3;
    }
    if (arrow == std::string::npos) throw DataError(where + ": expected '<-'");

    Argument a;
    a.line = line_no;
    std::string_view head = trim(std::string_view(l).substr(0, arrow));
    const std::string_view body = trim(std::string_view(l).substr(arrow + arrow_len));
    const auto space = head.find_first_of(" \t");
    const std::string_view first = head.substr(0, space);
    if (const auto slash = first.find('/'); slash != std::string_view::npos) {
      a.speaker = std::string(first.substr(0, slash));
      a.label = std::string(first.substr(slash + 1));
      a.index = trailing_number(a.label);
      if (a.label.empty() || a.index == 0) throw DataError(where + ": argument index must end in a positive number");
      head = space == std::string_view::npos ? std::string_view{} : trim(head.substr(space));
    } else {
      a.index = last + 1;
      a.label = std::to_string(a.index);
    }
    if (a.index <= last) throw DataError(where + ": argument index " + a.label + " does not increase");
    last = a.index;

    for (const auto& item : top_level_items(head, where)) a.head.push_back(characteristic(item));
    for (const auto& item : top_level_items(body, where)) a.body.push_back(normalize_name(item));
    if (a.head.empty() && a.body.empty()) throw DataError(where + ": head and body are both empty");
    s.arguments.push_back(std::move(a));
  }
  return s;
}

Session load_session(const std::string& path) { return parse_session(read_file(path), path); }

// ----- element orders -----

void ElementOrder::add(const std::string& u, const std::string& v) {
  add_element(u);
  add_element(v);
  le_.emplace(collapse_spaces(u), collapse_spaces(v));
  closed_ = false;
}

void ElementOrder::add_element(const std::string& e) { elements_.insert(collapse_spaces(e)); }

void ElementOrder::set_sort(const std::string& element, const std::string& sort) {
  add_element(element);
  sort_of_[collapse_spaces(element)] = normalize_name(sort);
  sorts_.insert(normalize_name(sort));
}

void ElementOrder::declare_sort(const std::string& sort) { sorts_.insert(normalize_name(sort)); }

void ElementOrder::close() {
  std::vector<std::string> idx(elements_.begin(), elements_.end());
  const std::size_t n = idx.size();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[idx[i]] = i;
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (const auto& [u, v] : le_) r[pos[u]][pos[v]] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  le_.clear();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!r[i][j]) continue;
      if (i != j && r[j][i]) throw DataError("order is not antisymmetric: " + idx[i] + " and " + idx[j] + " are mutually <=");
      le_.emplace(idx[i], idx[j]);
    }
  closed_ = true;
}

bool ElementOrder::contains(const Element& e) const { return e.number.has_value() || elements_.count(e.value) > 0; }

std::string ElementOrder::sort_of(const Element& e) const {
  if (!e.sort.empty()) return e.sort;
  auto it = sort_of_.find(e.value);
  return it == sort_of_.end() ? std::string() : it->second;
}

bool ElementOrder::le(const Element& u, const Element& v) const {
  if (sort_of(u) != sort_of(v)) return false;
  if (u.number && v.number) return u.unit == v.unit && *u.number <= *v.number;
  if (u.value == v.value) return true;
  if (!closed_) throw Error("element order used before close()");
  return le_.count({u.value, v.value}) > 0;
}

ElementOrder parse_order(std::string_view text, const std::string& source) {
  ElementOrder o;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.starts_with("sorts ")) {
      for (const auto& s : top_level_items(line.substr(6), where)) o.declare_sort(s);
    } else if (line.starts_with("sort ")) {
      const auto colon = line.rfind(':');
      if (colon == std::string_view::npos) throw DataError(where + ": expected 'sort element : sort'");
      const auto e = trim(line.substr(5, colon - 5)), s = trim(line.substr(colon + 1));
      if (e.empty() || s.empty()) throw DataError(where + ": expected 'sort element : sort'");
      o.set_sort(std::string(e), std::string(s));
    } else if (line.starts_with("element ")) {
      o.add_element(std::string(trim(line.substr(8))));
    } else if (const auto le = line.find("<="); le != std::string_view::npos) {
      const auto u = trim(line.substr(0, le)), v = trim(line.substr(le + 2));
      if (u.empty() || v.empty()) throw DataError(where + ": expected 'a <= b'");
      o.add(std::string(u), std::string(v));
    } else {
      throw DataError(where + ": expected 'a <= b', 'sort x : s', 'sorts ...' or 'element x'");
    }
  }
  try {
    o.close();
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
  return o;
}

ElementOrder load_order(const std::string& path) { return parse_order(read_file(path), path); }

// ----- set orders -----

const char* to_string(SetOrder m) {
  switch (m) {
    case SetOrder::Angelic: return "angelic";
    case SetOrder::Demonic: return "demonic";
    case SetOrder::Complete: return "complete";
  }
  return "?";
}

SetOrder parse_set_order(std::string_view text) {
  const std::string t = lowercase(text);
  if (t == "angelic") return SetOrder::Angelic;
  if (t == "demonic") return SetOrder::Demonic;
  if (t == "complete") return SetOrder::Complete;
  throw DataError("mode must be angelic, demonic or complete, got '" + std::string(text) + "'");
}

bool poset_compare(const std::vector<Element>& s1, const std::vector<Element>& s2, const ElementOrder& order,
                   SetOrder mode) {
  if (s1.empty() || s2.empty()) throw DataError("set comparison needs two non-empty sets");
  for (const auto* s : {&s1, &s2})
    for (const auto& e : *s)
      if (!order.contains(e)) throw DataError("element '" + e.text() + "' is outside the order");
  auto covered = [&](const std::vector<Element>& all, const std::vector<Element>& some, bool below) {
    return std::all_of(all.begin(), all.end(), [&](const Element& x) {
      return std::any_of(some.begin(), some.end(),
                         [&](const Element& y) { return below ? order.le(x, y) : order.le(y, x); });
    });
  };
  const bool angelic = mode != SetOrder::Demonic ? covered(s1, s2, true) : true;
  const bool demonic = mode != SetOrder::Angelic ? covered(s2, s1, false) : true;
  return angelic && demonic;
}

// ----- profiles and ranking -----

std::vector<CompetitorProfile> competitor_profiles(const Session& s, Merge merge, const std::set<std::string>& sorts) {
  std::vector<CompetitorProfile> out;
  std::map<std::string, std::size_t> pos;
  for (const auto& a : s.arguments) {
    if (a.head.empty() || a.body.empty()) continue;
    if (a.body.size() != 1)
      throw DataError("argument " + a.label + " (line " + std::to_string(a.line) + ") has " +
                      std::to_string(a.body.size()) + " body predicates; profiles need exactly one");
    auto [it, fresh] = pos.emplace(a.body.front(), out.size());
    if (fresh) out.push_back({a.body.front(), {}});
    auto& chars = out[it->second].characteristics;
    for (const auto& e : a.head) {
      if (!sorts.empty() && !sorts.count(e.sort)) continue;
      if (merge == Merge::LatestWins) std::erase_if(chars, [&](const Element& x) { return x.sort == e.sort; });
      if (std::find(chars.begin(), chars.end(), e) == chars.end()) chars.push_back(e);
    }
  }
  return out;
}

namespace {

// a <= b for two competitors, or nullopt when they are incomparable.
std::optional<bool> below(const std::vector<Element>& a, const std::vector<Element>& b, const ElementOrder& order,
                          SetOrder mode) {
  if (a.empty() || b.empty()) return std::nullopt;
  return poset_compare(a, b, order, mode);
}

}  // namespace

Ranking rank_competitors(const std::vector<CompetitorProfile>& profiles, const ElementOrder& order,
                         const std::optional<std::string>& preference, SetOrder mode) {
  const std::size_t n = profiles.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (profiles[i].competitor == profiles[j].competitor)
        throw DataError("competitor '" + profiles[i].competitor + "' is profiled twice");

  // le[i][j]: competitor i is at or below competitor j.
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  const std::string pref = preference ? normalize_name(*preference) : std::string();
  auto split_pref = [&](const std::vector<Element>& chars, std::vector<Element>& p, std::vector<Element>& rest) {
    for (const auto& e : chars) (e.sort == pref ? p : rest).push_back(e);
  };
  for (std::size_t i = 0; i < n; ++i) {
    le[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = profiles[i].characteristics;
      const auto& b = profiles[j].characteristics;
      if (pref.empty()) {
        le[i][j] = below(a, b, order, mode).value_or(false);
        continue;
      }
      std::vector<Element> pa, ra, pb, rb;
      split_pref(a, pa, ra);
      split_pref(b, pb, rb);
      const auto up = below(pa, pb, order, mode), down = below(pb, pa, order, mode);
      if (!up || !down) continue;
      if (*up && *down) {
        // Tie on the preferred sort: the other characteristics decide.
        if (ra.empty() && rb.empty()) le[i][j] = 1;
        else le[i][j] = below(ra, rb, order, mode).value_or(false);
      } else {
        le[i][j] = *up;
      }
    }
  }

  // Reachability, then equivalence classes of mutual reachability.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = 1;
  Ranking r;
  std::vector<std::size_t> node_of(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    if (node_of[i] != SIZE_MAX) continue;
    node_of[i] = r.nodes.size();
    r.nodes.push_back({profiles[i].competitor});
    for (std::size_t j = i + 1; j < n; ++j)
      if (le[i][j] && le[j][i]) {
        node_of[j] = node_of[i];
        r.nodes.back().push_back(profiles[j].competitor);
      }
  }
  const std::size_t m = r.nodes.size();
  std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (le[i][j] && node_of[i] != node_of[j]) reach[node_of[i]][node_of[j]] = 1;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (!reach[a][b]) continue;
      bool implied = false;
      for (std::size_t c = 0; c < m && !implied; ++c) implied = c != a && c != b && reach[a][c] && reach[c][b];
      if (!implied) r.edges.emplace_back(a, b);
    }
  return r;
}

std::string Ranking::node_name(std::size_t i) const {
  std::vector<std::string> names = nodes.at(i);
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& s : names) out += (out.empty() ? "" : " = ") + s;
  return out;
}

std::vector<std::string> Ranking::edge_list() const {
  std::vector<std::string> out;
  for (const auto& [a, b] : edges) out.push_back(node_name(a) + " -> " + node_name(b));
  std::sort(out.begin(), out.end());
  return out;
}

std::string Ranking::to_dot() const {
  std::ostringstream o;
  o << "digraph ranking {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) o << "  n" << i << " [label=\"" << node_name(i) << "\"];\n";
  for (const auto& [a, b] : edges) o << "  n" << a << " -> n" << b << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace kgnp
