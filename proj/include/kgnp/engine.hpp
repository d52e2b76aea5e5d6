#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kgnp/annotation.hpp"
#include "kgnp/kg_store.hpp"
#include "kgnp/program.hpp"
#include "kgnp/unify.hpp"

namespace kgnp {

class EmbeddingSpace;

struct EngineOptions {
  std::size_t max_depth = 10000;
  std::size_t max_solutions = 0;  // 0: unlimited
  bool occurs_check = true;
  bool trace = false;
};

struct Solution {
  std::vector<std::pair<std::string, TermPtr>> bindings;  // named query variables, first-occurrence order
  Tuple annotation;                                       // empty when no program is annotated
  std::vector<std::string> trace;                         // resolution steps, outermost first

  /// "X = a, Y = 3" or "yes" when the query has no named variables.
  std::string bindings_text() const;
};

/// How a branch of the search ended, as reported to whoever started it.
struct Outcome {
  enum Kind : std::uint8_t { Exhausted, Halt, Cut };
  Kind kind = Exhausted;
  std::uint64_t barrier = 0;  // Cut only: the frame that stops unwinding

  static Outcome exhausted() { return {}; }
  static Outcome halt() { return {Halt, 0}; }
  static Outcome cut(std::uint64_t b) { return {Cut, b}; }
  bool more() const { return kind == Exhausted; }
};

/// State the statistics and vector built-ins keep across one session.
struct SessionState {
  std::vector<MTuple> dataset;
  std::string dataset_name = "dataset";  // what Embed's second argument must name
  DatasetSchema schema = DatasetSchema::cardio();
  BadSpec bad_spec = BadSpec::cardio();
  std::size_t sample_n = 0;  // 0: the whole dataset
  std::uint64_t seed = 0;

  std::map<std::string, double> registers;                          // Count/Increase targets
  std::map<std::string, std::vector<std::vector<double>>> buffers;  // one list per bad rule
  std::map<std::string, std::shared_ptr<EmbeddingSpace>> spaces;

  const MTuple* record(std::string_view id) const;
  const std::vector<std::size_t>& sample() const;
  void reset_dataset(std::vector<MTuple> tuples);

 private:
  mutable std::map<std::string, std::size_t, std::less<>> by_id_;
  mutable std::vector<std::size_t> sample_;
  mutable bool sample_ready_ = false;
  mutable std::pair<std::size_t, std::uint64_t> sample_key_{0, 0};
};

struct GraphView {
  const KnowledgeGraph* graph = nullptr;
  bool owner = false;  // the graph's own program is asking: no policy filter
};

/// Lowercase with `-` and `_` removed, so Output-V, outputV and output_v meet.
std::string normalize_builtin_name(std::string_view name);

class Engine;
class BuiltinCall;
using BuiltinFn = std::function<Outcome(BuiltinCall&)>;
using FunctionFn = std::function<TermPtr(BuiltinCall&, const std::vector<TermPtr>& args)>;

namespace detail {
struct Ctx;
}

/// Handle a built-in receives: arguments, continuation, and session services.
class BuiltinCall {
 public:
  const std::string& name() const { return goal_->name; }
  std::size_t arity() const { return goal_->arity(); }
  const TermPtr& goal() const { return goal_; }
  /// Argument with the current substitution applied.
  TermPtr arg(std::size_t i) const;
  /// Argument after evaluating functions, registers and arithmetic.
  TermPtr value(std::size_t i);
  /// Evaluated argument; TypeError unless it is a number.
  double number(std::size_t i);
  /// Register name or atom text of an argument; TypeError otherwise.
  std::string symbol(std::size_t i) const;

  /// Proves the goal once with the neutral annotation.
  Outcome succeed();
  /// Proves the goal once under a = b, undoing the bindings afterwards.
  Outcome unify(const TermPtr& a, const TermPtr& b);
  Outcome unify(const std::vector<std::pair<TermPtr, TermPtr>>& pairs);

  TermPtr evaluate(const TermPtr& t);
  const std::vector<GraphView>& graphs() const { return graphs_; }
  const KnowledgeGraph* home() const;
  const Program& program() const;
  bool visible(const GraphView& v, const Triplet& t) const;
  bool visible_member(const GraphView& v, const GraphClass& c, const Term& member) const;
  /// AccessDenied when a term mentions a deny-statistics member of another graph.
  void check_statistics(const Term& t) const;
  std::ostream& out();
  SessionState& state();
  Engine& engine();

 private:
  friend class Engine;
  BuiltinCall(Engine& e, TermPtr goal, const detail::Ctx& ctx, std::vector<GraphView> graphs,
              const std::function<Outcome(const Tuple&)>& k)
      : engine_(e), goal_(std::move(goal)), ctx_(ctx), graphs_(std::move(graphs)), k_(k) {}

  Engine& engine_;
  TermPtr goal_;
  const detail::Ctx& ctx_;
  std::vector<GraphView> graphs_;
  const std::function<Outcome(const Tuple&)>& k_;
};

class Engine {
 public:
  /// Programs attached to graphs of `net` are used as their local programs.
  Engine(const KGNetwork& net, std::shared_ptr<const Program> session, EngineOptions options = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  EngineOptions& options();
  const KGNetwork& network() const;
  const Program& session_program() const;
  SessionState& state();
  const ComparativeRegistry& comparatives() const;
  AnnotationMode mode() const;

  /// Output, Print and Display write here; defaults to std::cout.
  void set_output(std::ostream& out);
  std::ostream& output();

  /// Arity -1 accepts any arity. Later registrations replace earlier ones.
  void register_builtin(std::string_view name, int arity, BuiltinFn fn, bool statistics = false);
  void register_function(std::string_view name, int arity, FunctionFn fn, bool statistics = false);
  bool has_builtin(std::string_view name, std::size_t arity) const;

  /// Enumerates answers until `on_solution` returns false or max_solutions
  /// is reached; returns the number delivered. Throws DepthExceeded,
  /// AccessDenied, LinkMissing, UnknownPredicate, TypeError.
  std::size_t solve(const Query& q, const std::function<bool(const Solution&)>& on_solution);
  std::vector<Solution> solve_all(const Query& q);

  struct Impl;

 private:
  friend class BuiltinCall;
  std::unique_ptr<Impl> impl_;
};

/// Installs the graph, statistics and arithmetic built-ins.
void install_core_builtins(Engine& e);
/// Installs the vector-space built-ins (Embed, Construct, Nearest, cnn, ...).
void install_vector_builtins(Engine& e);

}  // namespace kgnp
