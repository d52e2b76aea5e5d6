#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgnp/program.hpp"
#include "kgnp/triplet.hpp"

namespace kgnp {

namespace toml {
class Table;
}

enum class GroupMode { DenyRead, DenyStatistics };

struct GroupRule {
  std::string group;  // class or schema name
  GroupMode mode = GroupMode::DenyRead;
};

struct AccessPolicy {
  std::vector<TermPtr> entity_blocklist;
  std::vector<GroupRule> group_rules;
  bool lpp_only = false;
  std::set<std::string> function_blocklist;  // normalized builtin names
  std::map<std::string, std::size_t> loop_caps;  // rule head name, or "*", to max iterations

  bool empty() const {
    return entity_blocklist.empty() && group_rules.empty() && !lpp_only && function_blocklist.empty() &&
           loop_caps.empty();
  }
  std::optional<std::size_t> loop_cap(std::string_view rule_name) const;
};

struct GraphClass {
  std::string name;
  std::vector<TermPtr> members;
};

class KnowledgeGraph {
 public:
  std::string name;
  std::vector<Triplet> triplets;
  std::vector<GraphClass> classes;
  std::map<std::string, std::vector<std::string>> schemas;  // schema to its relations
  AccessPolicy policy;
  std::shared_ptr<const Program> local_program;
  std::map<std::string, std::vector<double>> vectors;  // canonical symbol text to vector

  const GraphClass* find_class(std::string_view cls) const;
  bool in_class(const Term& entity, std::string_view cls) const;
  std::vector<std::string> classes_of(const Term& entity) const;
  const std::vector<double>* vector_of(const Term& symbol) const;

  /// Candidate triplet indices for a head/relation/tail key (nullptr = any).
  std::vector<std::size_t> candidates(const Term* head, const std::string* relation, const Term* tail) const;

  /// Must be called after triplets change; load_triples does it.
  void reindex();

 private:
  std::unordered_map<std::string, std::vector<std::size_t>> by_head_, by_relation_, by_tail_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::unordered_map<std::string, std::set<std::string>> member_classes_;
};

inline const std::string kSession = "";  // requester name of the top-level session

class KGNetwork {
 public:
  /// Throws DataError on a duplicate name.
  KnowledgeGraph& add_graph(KnowledgeGraph g);
  /// Throws DataError when an endpoint is not a graph.
  void add_link(const std::string& from, const std::string& to);

  const KnowledgeGraph* find(std::string_view name) const;
  KnowledgeGraph* find(std::string_view name);
  const KnowledgeGraph& at(std::string_view name) const;
  bool linked(const std::string& from, const std::string& to) const;
  const std::vector<std::unique_ptr<KnowledgeGraph>>& graphs() const { return graphs_; }
  const std::set<std::pair<std::string, std::string>>& links() const { return links_; }

 private:
  std::vector<std::unique_ptr<KnowledgeGraph>> graphs_;
  std::set<std::pair<std::string, std::string>> links_;
};

/// Parses triple-file text; `source` names the file in error messages.
KnowledgeGraph parse_triples(std::string_view text, const std::string& name, const std::string& source = "<triples>");
KnowledgeGraph load_triples(const std::string& path, const std::string& name);

struct TriplePattern {
  TermPtr head;                         // null or a variable: wildcard
  std::optional<std::string> relation;  // nullopt: wildcard
  TermPtr tail;
};

/// Deep check: does `t` mention any blocked entity?
bool mentions_blocked(const AccessPolicy& policy, const Term& t);
/// Hidden from external readers by the entity blocklist or a deny-read group.
bool hidden_by_policy(const KnowledgeGraph& g, const Triplet& t);
/// Does `t` mention a member of a deny-statistics class?
bool statistics_denied(const KnowledgeGraph& g, const Term& t);

/// Triplets of `graph` matching `pattern`, in insertion order, after policy
/// filtering for requesters other than the graph's own program. Throws
/// LinkMissing when a graph requester has no link to the graph, and
/// AccessDenied when the graph is lpp_only and `via_lpp` is false.
std::vector<Triplet> query_triples(const KGNetwork& net, const std::string& graph, const TriplePattern& pattern,
                                   const std::string& requester = kSession, bool via_lpp = false);

struct SourcedTriplet {
  std::string graph;
  Triplet triplet;
};

struct SnapshotOptions {
  std::optional<std::pair<std::size_t, std::size_t>> caps;
  std::string guard_class = "Person";  // empty: no class guard
};

/// Head-position triplets across `graphs` in order, then tail-position ones.
std::vector<SourcedTriplet> snapshot(const std::vector<const KnowledgeGraph*>& graphs, const Term& entity,
                                     const SnapshotOptions& options = {});

// ----- multi-triplet datasets -----

enum class Label { Negative, Positive, Unknown };

struct MTuple {
  std::string id;
  std::vector<Triplet> triplets;  // (id, attribute_i, raw value_i)
  Label label = Label::Unknown;

  double value(std::size_t i) const { return triplets[i].tail->number; }
};

struct AttributeSpec {
  std::string name;
  std::string column;
  bool finite = false;
  double lo = 0, hi = 0;        // normal interval (scaled units), infinite domains
  std::vector<double> allowed;  // finite domains
  double scale = 1;             // raw CSV value times scale gives the unit of lo/hi
  double weight = 1;

  double scaled(double raw) const { return raw * scale; }
  bool normal(double raw) const;
};

struct DatasetSchema {
  std::string id_column = "id";
  std::string label_column = "cardio";
  char delimiter = ';';
  std::vector<AttributeSpec> attributes;

  std::size_t m() const { return attributes.size(); }
  std::optional<std::size_t> index_of(std::string_view attribute) const;
  std::vector<double> weights() const;

  /// Eleven attributes of the cardiovascular layout with their normal
  /// intervals and the 4:4:2:4:8:8:7:7:2:2:2 weights.
  static DatasetSchema cardio();
  static DatasetSchema from_toml(const toml::Table& t);
  static DatasetSchema load(const std::string& path);
};

std::vector<MTuple> ingest_mtuples_text(std::string_view csv, const DatasetSchema& schema,
                                        const std::string& source = "<csv>", bool require_label = true);
std::vector<MTuple> ingest_mtuples(const std::string& path, const DatasetSchema& schema, bool require_label = true);
/// Header plus one row per tuple, values in shortest round-trip form.
std::string mtuples_to_csv(const std::vector<MTuple>& tuples, const DatasetSchema& schema);

enum class BmiFormula { Standard, AsPrinted };

struct BadRule {
  enum class Op { Greater, Less, Equal, NotEqual };
  std::string name;
  std::string attribute;  // schema attribute, or "bmi" for the derived index
  Op op = Op::Greater;
  double threshold = 0;  // scaled units
};

struct BadSpec {
  std::vector<BadRule> rules;
  BmiFormula bmi = BmiFormula::Standard;

  /// age > 60, systolic > 130, diastolic > 80, cholesterol != 1, glucose != 1,
  /// smoke = 1, alcohol = 1, physical activity = 0, BMI > 25.
  static BadSpec cardio();
};

double derived_value(const MTuple& t, const DatasetSchema& schema, const std::string& attribute, BmiFormula bmi);
bool is_bad(const MTuple& t, const DatasetSchema& schema, const BadRule& rule, BmiFormula bmi);
bool bad_value(const BadRule& rule, double derived);

struct RateReport {
  std::size_t sampled = 0;
  std::size_t positives = 0;
  std::vector<std::pair<std::string, double>> rates;  // BadSpec order
};

/// Indices drawn by the seeded sampler shared with the Input builtin.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t sample_n, std::uint64_t seed);

/// Throws DataError "no positive samples" when the draw holds no positives.
RateReport bad_attribute_rates(const std::vector<MTuple>& tuples, const DatasetSchema& schema, const BadSpec& spec,
                               std::size_t sample_n, std::uint64_t seed);

}  // namespace kgnp
