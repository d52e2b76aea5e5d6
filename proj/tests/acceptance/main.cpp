// Runs every acceptance criterion and prints one line per criterion.
// Exit status is non-zero when any criterion fails; skips do not count.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include "harness.hpp"

using namespace kgnp::acceptance;

int main() {
  struct Entry {
    const char* id;
    const char* title;
    Verdict (*run)();
  };
  const Entry criteria[] = {
      {"AC1", "resolution correctness", ac1_resolution},
      {"AC2", "bounded Fail", ac2_bounded_fail},
      {"AC3", "comparative unification", ac3_comparative},
      {"AC4", "annotation algebra", ac4_annotations},
      {"AC5", "embedding numerics", ac5_numerics},
      {"AC6", "kNN oracle", ac6_knn_oracle},
      {"AC7", "synthetic end-to-end", ac7_synthetic},
      {"AC8", "cardiovascular replication", ac8_cardio},
      {"AC9", "K-sweep trend", ac9_k_sweep},
      {"AC10", "concurrency", ac10_concurrency},
      {"AC11", "argumentation", ac11_argumentation},
      {"AC12", "KGNF policies", ac12_kgnf},
      {"AC13", "statistics pipeline", ac13_statistics},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = fail(std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* status = v.status == Status::Pass ? "PASS" : v.status == Status::Skip ? "SKIP" : "FAIL";
    failures += v.status == Status::Fail;
    std::printf("%-4s %s  %s: %s [%.2f s]\n", c.id, status, c.title, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
