#pragma once

#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgnp/engine.hpp"
#include "kgnp/parser.hpp"

namespace kgnp::acceptance {

enum class Status { Pass, Fail, Skip };

struct Verdict {
  Status status = Status::Fail;
  std::string detail;
};

inline Verdict pass(std::string detail) { return {Status::Pass, std::move(detail)}; }
inline Verdict fail(std::string detail) { return {Status::Fail, std::move(detail)}; }
inline Verdict skip(std::string detail) { return {Status::Skip, std::move(detail)}; }

inline std::string data_path(const std::string& name) { return std::string(KGNP_DATA_DIR) + "/" + name; }

/// What one query did: its answers as bindings text and what it printed.
struct RunResult {
  std::set<std::string> answers;
  std::string printed;
};

inline RunResult run_query(const KGNetwork& net, std::shared_ptr<const Program> prog, const std::string& query,
                           EngineOptions opts = {}) {
  Engine e(net, std::move(prog), opts);
  std::ostringstream out;
  e.set_output(out);
  RunResult r;
  e.solve(parse_query(query), [&](const Solution& s) {
    r.answers.insert(s.bindings_text());
    return true;
  });
  r.printed = out.str();
  return r;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Verdict ac1_resolution();
Verdict ac2_bounded_fail();
Verdict ac3_comparative();
Verdict ac4_annotations();
Verdict ac5_numerics();
Verdict ac6_knn_oracle();
Verdict ac7_synthetic();
Verdict ac8_cardio();
Verdict ac9_k_sweep();
Verdict ac10_concurrency();
Verdict ac11_argumentation();
Verdict ac12_kgnf();
Verdict ac13_statistics();

/// The cardiovascular CSV, from KGNP_CARDIO_CSV or data/cardio_train.csv.
std::optional<std::string> cardio_csv_path();

/// Rates per bad attribute, counted straight off the CSV text.
std::vector<std::pair<std::string, double>> counted_bad_rates(const std::string& csv,
                                                              const std::vector<std::size_t>& sample,
                                                              std::size_t* positives = nullptr);

}  // namespace kgnp::acceptance
