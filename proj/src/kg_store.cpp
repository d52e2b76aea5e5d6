#include "kgnp/kg_store.hpp"

#include <algorithm>

#include "kgnp/error.hpp"
#include "kgnp/parser.hpp"
#include "kgnp/toml_lite.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

std::optional<std::size_t> AccessPolicy::loop_cap(std::string_view rule_name) const {
  if (auto it = loop_caps.find(std::string(rule_name)); it != loop_caps.end()) return it->second;
  if (auto it = loop_caps.find("*"); it != loop_caps.end()) return it->second;
  return std::nullopt;
}

// ----- KnowledgeGraph -----

const GraphClass* KnowledgeGraph::find_class(std::string_view cls) const {
  auto it = class_index_.find(std::string(cls));
  if (it != class_index_.end()) return &classes[it->second];
  for (const auto& c : classes)
    if (c.name == cls) return &c;
  return nullptr;
}

bool KnowledgeGraph::in_class(const Term& entity, std::string_view cls) const {
  auto it = member_classes_.find(to_string(entity));
  if (it != member_classes_.end()) return it->second.count(std::string(cls)) > 0;
  const GraphClass* c = find_class(cls);
  if (!c) return false;
  return std::any_of(c->members.begin(), c->members.end(), [&](const TermPtr& m) { return same_term(*m, entity); });
}

std::vector<std::string> KnowledgeGraph::classes_of(const Term& entity) const {
  std::vector<std::string> out;
  for (const auto& c : classes)
    if (std::any_of(c.members.begin(), c.members.end(), [&](const TermPtr& m) { return same_term(*m, entity); }))
      out.push_back(c.name);
  return out;
}

const std::vector<double>* KnowledgeGraph::vector_of(const Term& symbol) const {
  auto it = vectors.find(to_string(symbol));
  return it == vectors.end() ? nullptr : &it->second;
}

std::vector<std::size_t> KnowledgeGraph::candidates(const Term* head, const std::string* relation,
                                                    const Term* tail) const {
  const std::vector<std::size_t>* best = nullptr;
  static const std::vector<std::size_t> kNone;
  auto consider = [&](const std::unordered_map<std::string, std::vector<std::size_t>>& index, const std::string& key) {
    auto it = index.find(key);
    const auto* list = it == index.end() ? &kNone : &it->second;
    if (!best || list->size() < best->size()) best = list;
  };
  if (head && is_ground(*head)) consider(by_head_, to_string(*head));
  if (relation) consider(by_relation_, *relation);
  if (tail && is_ground(*tail)) consider(by_tail_, to_string(*tail));
  if (best) return *best;
  std::vector<std::size_t> all(triplets.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

void KnowledgeGraph::reindex() {
  by_head_.clear();
  by_relation_.clear();
  by_tail_.clear();
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    by_head_[to_string(*triplets[i].head)].push_back(i);
    by_relation_[triplets[i].relation].push_back(i);
    by_tail_[to_string(*triplets[i].tail)].push_back(i);
  }
  class_index_.clear();
  member_classes_.clear();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    class_index_.emplace(classes[i].name, i);
    for (const auto& m : classes[i].members) member_classes_[to_string(*m)].insert(classes[i].name);
  }
}

// ----- KGNetwork -----

KnowledgeGraph& KGNetwork::add_graph(KnowledgeGraph g) {
  if (find(g.name)) throw DataError("duplicate graph name '" + g.name + "'");
  graphs_.push_back(std::make_unique<KnowledgeGraph>(std::move(g)));
  return *graphs_.back();
}

void KGNetwork::add_link(const std::string& from, const std::string& to) {
  if (!find(from)) throw DataError("link endpoint '" + from + "' is not a graph");
  if (!find(to)) throw DataError("link endpoint '" + to + "' is not a graph");
  links_.emplace(from, to);
}

const KnowledgeGraph* KGNetwork::find(std::string_view name) const {
  for (const auto& g : graphs_)
    if (g->name == name) return g.get();
  return nullptr;
}

KnowledgeGraph* KGNetwork::find(std::string_view name) {
  for (auto& g : graphs_)
    if (g->name == name) return g.get();
  return nullptr;
}

const KnowledgeGraph& KGNetwork::at(std::string_view name) const {
  const auto* g = find(name);
  if (!g) throw EngineError("unknown graph '" + std::string(name) + "'");
  return *g;
}

bool KGNetwork::linked(const std::string& from, const std::string& to) const { return links_.count({from, to}) > 0; }

// ----- triple files -----

namespace {

// Splits on commas outside quotes, parentheses and brackets.
std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      cur += c;
      if (c == '\\' && i + 1 < s.size()) {
        cur += s[++i];
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '\'' || c == '"') quote = c;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(std::string(trim(cur)));
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(std::string(trim(cur)));
  return out;
}

std::string strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

// Fields are ground terms; `60 kg` is a number with a unit; plain multi-word
// text such as `systolic blood pressure` is read as one atom.
TermPtr field_term(const std::string& field) {
  const auto space = field.find_first_of(" \t");
  if (space != std::string::npos) {
    if (auto v = parse_number(field.substr(0, space))) {
      auto unit = std::string(trim(std::string_view(field).substr(space)));
      if (unit.size() >= 2 && (unit.front() == '\'' || unit.front() == '"') && unit.back() == unit.front())
        unit = unit.substr(1, unit.size() - 2);
      return make_number(*v, unit);
    }
  }
  try {
    return parse_ground_term(field);
  } catch (const SyntaxError&) {
    if (field.find_first_of("()[]'\"") != std::string::npos) throw;
    return make_atom(field);
  }
}

std::string field_symbol(const std::string& field) {
  auto t = field_term(field);
  if (!t->is_atom()) throw DataError("expected a symbol, found '" + field + "'");
  return t->name;
}

}  // namespace

KnowledgeGraph parse_triples(std::string_view text, const std::string& name, const std::string& source) {
  KnowledgeGraph g;
  g.name = name;
  struct PendingMember {
    std::size_t line;
    TermPtr member;
  };
  std::vector<PendingMember> pending;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line(trim(strip_comment(raw)));
    if (line.empty()) continue;
    auto fail = [&](const std::string& message) -> DataError {
      return DataError(source + ":" + std::to_string(line_no) + ": " + message);
    };
    try {
      const auto open = line.find('(');
      if (line.back() != ')' || open == std::string::npos) throw fail("expected '(head, relation, tail)'");
      const std::string keyword(trim(std::string_view(line).substr(0, open)));
      auto fields = split_top_level(std::string_view(line).substr(open + 1, line.size() - open - 2));
      if (keyword.empty()) {
        if (fields.size() != 3) throw fail("a triplet has exactly three fields");
        for (const auto& f : fields)
          if (f.empty()) throw fail("empty triplet field");
        g.triplets.push_back({field_term(fields[0]), field_symbol(fields[1]), field_term(fields[2])});
      } else if (keyword == "class") {
        if (fields.size() != 2) throw fail("class(Class, Entity) takes two fields");
        const auto cls = field_symbol(fields[0]);
        auto member = field_term(fields[1]);
        auto it = std::find_if(g.classes.begin(), g.classes.end(), [&](const GraphClass& c) { return c.name == cls; });
        if (it == g.classes.end()) {
          g.classes.push_back({cls, {}});
          it = std::prev(g.classes.end());
        }
        if (std::none_of(it->members.begin(), it->members.end(),
                         [&](const TermPtr& m) { return same_term(*m, *member); }))
          it->members.push_back(member);
        pending.push_back({line_no, member});
      } else if (keyword == "schema") {
        if (fields.empty() || fields[0].empty()) throw fail("schema(Name, relation...) needs a name");
        auto& rels = g.schemas[field_symbol(fields[0])];
        for (std::size_t i = 1; i < fields.size(); ++i) rels.push_back(field_symbol(fields[i]));
      } else if (keyword == "vec") {
        if (fields.size() < 2) throw fail("vec(symbol, x1, ...) needs at least one component");
        std::vector<double> v;
        for (std::size_t i = 1; i < fields.size(); ++i) {
          auto x = parse_number(fields[i]);
          if (!x) throw fail("vector component '" + fields[i] + "' is not a number");
          v.push_back(*x);
        }
        g.vectors[to_string(*field_term(fields[0]))] = std::move(v);
      } else {
        throw fail("unknown directive '" + keyword + "'");
      }
    } catch (const SyntaxError& e) {
      throw DataError(source + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      const std::string what = e.what();
      if (what.rfind(source + ":", 0) == 0) throw;
      throw DataError(source + ":" + std::to_string(line_no) + ": " + what);
    }
  }
  if (g.triplets.empty()) throw DataError(source + ": empty graph");
  for (const auto& p : pending) {
    const bool present = std::any_of(g.triplets.begin(), g.triplets.end(), [&](const Triplet& t) {
      return same_term(*t.head, *p.member) || same_term(*t.tail, *p.member);
    });
    if (!present)
      throw DataError(source + ":" + std::to_string(p.line) + ": class member " + to_string(*p.member) +
                      " does not occur in any triplet");
  }
  g.reindex();
  return g;
}

KnowledgeGraph load_triples(const std::string& path, const std::string& name) {
  return parse_triples(read_file(path), name, path);
}

// ----- policy and queries -----

bool mentions_blocked(const AccessPolicy& policy, const Term& t) {
  for (const auto& b : policy.entity_blocklist)
    if (same_term(*b, t)) return true;
  return std::any_of(t.args.begin(), t.args.end(), [&](const TermPtr& a) { return mentions_blocked(policy, *a); });
}

namespace {

bool mentions_member(const KnowledgeGraph& g, const GraphClass& c, const Term& t) {
  for (const auto& m : c.members)
    if (same_term(*m, t)) return true;
  return std::any_of(t.args.begin(), t.args.end(), [&](const TermPtr& a) { return mentions_member(g, c, *a); });
}

bool matches(const TermPtr& pattern, const TermPtr& value) {
  if (!pattern || pattern->is_var()) return true;
  if (pattern->kind != value->kind) return false;
  if (!pattern->is_compound()) return same_term(*pattern, *value);
  if (pattern->name != value->name || pattern->arity() != value->arity()) return false;
  for (std::size_t i = 0; i < pattern->arity(); ++i)
    if (!matches(pattern->args[i], value->args[i])) return false;
  return true;
}

}  // namespace

bool hidden_by_policy(const KnowledgeGraph& g, const Triplet& t) {
  const auto& p = g.policy;
  if (!p.entity_blocklist.empty()) {
    if (mentions_blocked(p, *t.head) || mentions_blocked(p, *t.tail)) return true;
    for (const auto& b : p.entity_blocklist)
      if (b->is_atom() && b->name == t.relation) return true;
  }
  for (const auto& rule : p.group_rules) {
    if (rule.mode != GroupMode::DenyRead) continue;
    if (const auto* c = g.find_class(rule.group))
      if (mentions_member(g, *c, *t.head) || mentions_member(g, *c, *t.tail)) return true;
    if (auto it = g.schemas.find(rule.group); it != g.schemas.end())
      if (std::find(it->second.begin(), it->second.end(), t.relation) != it->second.end()) return true;
  }
  return false;
}

bool statistics_denied(const KnowledgeGraph& g, const Term& t) {
  for (const auto& rule : g.policy.group_rules) {
    if (rule.mode != GroupMode::DenyStatistics) continue;
    if (const auto* c = g.find_class(rule.group))
      if (mentions_member(g, *c, t)) return true;
    if (auto it = g.schemas.find(rule.group); it != g.schemas.end())
      if (t.is_atom() && std::find(it->second.begin(), it->second.end(), t.name) != it->second.end()) return true;
  }
  return false;
}

std::vector<Triplet> query_triples(const KGNetwork& net, const std::string& graph, const TriplePattern& pattern,
                                   const std::string& requester, bool via_lpp) {
  const KnowledgeGraph& g = net.at(graph);
  if (requester != kSession && requester != graph && !net.linked(requester, graph))
    throw LinkMissing("graph '" + requester + "' has no call link to '" + graph + "'");
  if (g.policy.lpp_only && !via_lpp && requester != graph)
    throw AccessDenied("graph '" + graph + "' can only be read through its local program");
  const bool external = requester != graph;
  std::vector<Triplet> out;
  const Term* head = pattern.head && !pattern.head->is_var() ? pattern.head.get() : nullptr;
  const Term* tail = pattern.tail && !pattern.tail->is_var() ? pattern.tail.get() : nullptr;
  for (std::size_t i : g.candidates(head, pattern.relation ? &*pattern.relation : nullptr, tail)) {
    const Triplet& t = g.triplets[i];
    if (pattern.relation && t.relation != *pattern.relation) continue;
    if (!matches(pattern.head, t.head) || !matches(pattern.tail, t.tail)) continue;
    if (external && hidden_by_policy(g, t)) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<SourcedTriplet> snapshot(const std::vector<const KnowledgeGraph*>& graphs, const Term& entity,
                                     const SnapshotOptions& options) {
  std::vector<SourcedTriplet> out;
  if (!options.guard_class.empty() &&
      std::none_of(graphs.begin(), graphs.end(), [&](const KnowledgeGraph* g) { return g->in_class(entity, options.guard_class); }))
    return out;
  auto pass = [&](bool head_side, std::optional<std::size_t> cap) {
    std::size_t taken = 0;
    for (const auto* g : graphs) {
      for (std::size_t i : head_side ? g->candidates(&entity, nullptr, nullptr) : g->candidates(nullptr, nullptr, &entity)) {
        if (cap && taken >= *cap) return;
        const Triplet& t = g->triplets[i];
        if (!same_term(head_side ? *t.head : *t.tail, entity)) continue;
        out.push_back({g->name, t});
        ++taken;
      }
    }
  };
  pass(true, options.caps ? std::optional(options.caps->first) : std::nullopt);
  pass(false, options.caps ? std::optional(options.caps->second) : std::nullopt);
  return out;
}

// ----- datasets -----

bool AttributeSpec::normal(double raw) const {
  if (finite) return std::find(allowed.begin(), allowed.end(), raw) != allowed.end();
  const double v = scaled(raw);
  return v >= lo && v <= hi;
}

std::optional<std::size_t> DatasetSchema::index_of(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == attribute) return i;
  return std::nullopt;
}

std::vector<double> DatasetSchema::weights() const {
  std::vector<double> w;
  for (const auto& a : attributes) w.push_back(a.weight);
  return w;
}

DatasetSchema DatasetSchema::cardio() {
  DatasetSchema s;
  auto infinite = [](std::string name, std::string column, double lo, double hi, double scale, double weight) {
    AttributeSpec a;
    a.name = std::move(name);
    a.column = std::move(column);
    a.lo = lo;
    a.hi = hi;
    a.scale = scale;
    a.weight = weight;
    return a;
  };
  auto finite = [](std::string name, std::string column, std::vector<double> allowed, double weight) {
    AttributeSpec a;
    a.name = std::move(name);
    a.column = std::move(column);
    a.finite = true;
    a.allowed = std::move(allowed);
    a.weight = weight;
    return a;
  };
  s.attributes = {
      infinite("age", "age", 0, 130, 1.0 / 365.25, 4),
      finite("gender", "gender", {1, 2}, 4),
      infinite("height", "height", 0.5, 2.3, 0.01, 2),
      infinite("weight", "weight", 3, 200, 1, 4),
      infinite("systolic", "ap_hi", 60, 230, 1, 8),
      infinite("diastolic", "ap_lo", 40, 220, 1, 8),
      finite("cholesterol", "cholesterol", {1, 2, 3}, 7),
      finite("glucose", "gluc", {1, 2, 3}, 7),
      finite("smoke", "smoke", {0, 1}, 2),
      finite("alcohol", "alco", {0, 1}, 2),
      finite("activity", "active", {0, 1}, 2),
  };
  return s;
}

DatasetSchema DatasetSchema::from_toml(const toml::Table& t) {
  DatasetSchema s;
  if (auto v = t.get_string("id_column")) s.id_column = *v;
  if (auto v = t.get_string("label_column")) s.label_column = *v;
  if (auto v = t.get_string("delimiter")) {
    if (v->size() != 1) throw DataError("delimiter must be a single character");
    s.delimiter = (*v)[0];
  }
  const auto* attrs = t.get_array("attribute");
  if (!attrs || attrs->empty()) throw DataError("schema needs at least one [[attribute]]");
  for (const auto& entry : *attrs) {
    const auto& a = entry.as_table();
    AttributeSpec spec;
    auto name = a.get_string("name");
    if (!name) throw DataError("attribute without a name");
    spec.name = *name;
    spec.column = a.get_string("column").value_or(spec.name);
    const auto domain = a.get_string("domain").value_or("infinite");
    if (domain != "finite" && domain != "infinite")
      throw DataError("attribute '" + spec.name + "': domain must be finite or infinite");
    spec.finite = domain == "finite";
    if (spec.finite) {
      const auto* values = a.get_array("values");
      if (!values || values->empty()) throw DataError("finite attribute '" + spec.name + "' needs values");
      for (const auto& v : *values) spec.allowed.push_back(v.as_number());
    } else {
      const auto* range = a.get_array("range");
      if (!range || range->size() != 2) throw DataError("attribute '" + spec.name + "' needs range = [lo, hi]");
      spec.lo = (*range)[0].as_number();
      spec.hi = (*range)[1].as_number();
      if (spec.hi <= spec.lo) throw DataError("attribute '" + spec.name + "': empty range");
    }
    spec.scale = a.get_number("scale").value_or(1.0);
    spec.weight = a.get_number("weight").value_or(1.0);
    if (spec.weight <= 0) throw DataError("attribute '" + spec.name + "': weight must be positive");
    s.attributes.push_back(std::move(spec));
  }
  return s;
}

DatasetSchema DatasetSchema::load(const std::string& path) {
  try {
    return from_toml(toml::parse_file(path));
  } catch (const DataError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw DataError(path + ": " + what);
  }
}

std::vector<MTuple> ingest_mtuples_text(std::string_view csv, const DatasetSchema& schema, const std::string& source,
                                        bool require_label) {
  std::vector<MTuple> out;
  const auto lines = split(csv, '\n');
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw DataError(source + ": missing header");
  std::vector<std::string> header;
  for (const auto& h : split(trim(lines[first]), schema.delimiter)) {
    std::string col(trim(h));
    if (col.size() >= 2 && col.front() == '"' && col.back() == '"') col = col.substr(1, col.size() - 2);
    header.push_back(col);
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto id_col = column(schema.id_column);
  if (!id_col) throw DataError(source + ": missing column '" + schema.id_column + "'");
  std::vector<std::size_t> attr_cols;
  for (const auto& a : schema.attributes) {
    auto c = column(a.column);
    if (!c) throw DataError(source + ": missing column '" + a.column + "'");
    attr_cols.push_back(*c);
  }
  const auto label_col = column(schema.label_column);
  if (require_label && !label_col) throw DataError(source + ": missing column '" + schema.label_column + "'");
  std::set<std::string> seen;
  for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto cells = split(trim(lines[ln]), schema.delimiter);
    const std::string where = source + ":" + std::to_string(ln + 1);
    if (cells.size() != header.size())
      throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    MTuple t;
    t.id = std::string(trim(cells[*id_col]));
    if (t.id.empty()) throw DataError(where + ": empty id");
    if (!seen.insert(t.id).second) throw DataError(where + ": duplicate id " + t.id);
    auto head = make_atom(t.id);
    for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
      const auto cell = trim(cells[attr_cols[i]]);
      auto v = parse_number(cell);
      if (!v)
        throw DataError(where + ": record " + t.id + ": column '" + schema.attributes[i].column +
                        "' is not numeric ('" + std::string(cell) + "')");
      t.triplets.push_back({head, schema.attributes[i].name, make_number(*v)});
    }
    if (label_col) {
      const auto cell = trim(cells[*label_col]);
      if (cell == "1")
        t.label = Label::Positive;
      else if (cell == "0")
        t.label = Label::Negative;
      else if (cell.empty() && !require_label)
        t.label = Label::Unknown;
      else
        throw DataError(where + ": record " + t.id + ": label must be 0 or 1, found '" + std::string(cell) + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<MTuple> ingest_mtuples(const std::string& path, const DatasetSchema& schema, bool require_label) {
  return ingest_mtuples_text(read_file(path), schema, path, require_label);
}

std::string mtuples_to_csv(const std::vector<MTuple>& tuples, const DatasetSchema& schema) {
  const std::string d(1, schema.delimiter);
  std::string out = schema.id_column;
  for (const auto& a : schema.attributes) out += d + a.column;
  out += d + schema.label_column + "\n";
  for (const auto& t : tuples) {
    out += t.id;
    for (std::size_t i = 0; i < t.triplets.size(); ++i) out += d + format_number(t.value(i));
    out += d + (t.label == Label::Positive ? "1" : t.label == Label::Negative ? "0" : "");
    out += "\n";
  }
  return out;
}

BadSpec BadSpec::cardio() {
  using Op = BadRule::Op;
  BadSpec s;
  s.rules = {
      {"age", "age", Op::Greater, 60},
      {"systolic", "systolic", Op::Greater, 130},
      {"diastolic", "diastolic", Op::Greater, 80},
      {"cholesterol", "cholesterol", Op::NotEqual, 1},
      {"glucose", "glucose", Op::NotEqual, 1},
      {"smoke", "smoke", Op::Equal, 1},
      {"alcohol", "alcohol", Op::Equal, 1},
      {"physical", "activity", Op::Equal, 0},
      {"bad-bmi", "bmi", Op::Greater, 25},
  };
  return s;
}

double derived_value(const MTuple& t, const DatasetSchema& schema, const std::string& attribute, BmiFormula bmi) {
  auto scaled = [&](const std::string& name) {
    auto i = schema.index_of(name);
    if (!i) throw DataError("schema has no attribute '" + name + "'");
    return schema.attributes[*i].scaled(t.value(*i));
  };
  if (attribute == "bmi") {
    const double h = scaled("height");
    const double w = scaled("weight");
    return bmi == BmiFormula::Standard ? w / (h * h) : h / (w * w);
  }
  return scaled(attribute);
}

bool is_bad(const MTuple& t, const DatasetSchema& schema, const BadRule& rule, BmiFormula bmi) {
  return bad_value(rule, derived_value(t, schema, rule.attribute, bmi));
}

bool bad_value(const BadRule& rule, double v) {
  switch (rule.op) {
    case BadRule::Op::Greater: return v > rule.threshold;
    case BadRule::Op::Less: return v < rule.threshold;
    case BadRule::Op::Equal: return v == rule.threshold;
    case BadRule::Op::NotEqual: return v != rule.threshold;
  }
  return false;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t sample_n, std::uint64_t seed) {
  if (sample_n > population)
    throw DataError("cannot sample " + std::to_string(sample_n) + " records from " + std::to_string(population));
  Rng rng(seed);
  return sample_without_replacement(population, sample_n, rng);
}

RateReport bad_attribute_rates(const std::vector<MTuple>& tuples, const DatasetSchema& schema, const BadSpec& spec,
                               std::size_t sample_n, std::uint64_t seed) {
  RateReport report;
  report.sampled = sample_n;
  std::vector<std::size_t> bad(spec.rules.size(), 0);
  for (std::size_t idx : sample_indices(tuples.size(), sample_n, seed)) {
    const MTuple& t = tuples[idx];
    if (t.label != Label::Positive) continue;
    ++report.positives;
    for (std::size_t r = 0; r < spec.rules.size(); ++r)
      if (is_bad(t, schema, spec.rules[r], spec.bmi)) ++bad[r];
  }
  if (report.positives == 0) throw DataError("no positive samples");
  for (std::size_t r = 0; r < spec.rules.size(); ++r)
    report.rates.emplace_back(spec.rules[r].name,
                              static_cast<double>(bad[r]) / static_cast<double>(report.positives));
  return report;
}

}  // namespace kgnp
