#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "harness.hpp"
#include "kgnp/embedding.hpp"
#include "kgnp/synthetic.hpp"
#include "kgnp/util.hpp"

namespace kgnp::acceptance {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

// The split shared by the end-to-end, K-sweep and concurrency checks.
struct Split {
  std::vector<MTuple> train, test;
};

const Split& synthetic_split() {
  static const Split split = [] {
    auto all = synthetic_cardio(2000, 7);
    Split s;
    s.train.assign(all.begin(), all.begin() + 1800);
    s.test.assign(all.begin() + 1800, all.end());
    return s;
  }();
  return split;
}

struct Trained {
  EmbeddingSpace space;
  double seconds = 0;
};

const Trained& synthetic_space() {
  static const Trained t = [] {
    const auto t0 = std::chrono::steady_clock::now();
    Trained r{train_transmeth(synthetic_split().train, DatasetSchema::cardio(), EmbedConfig{}), 0};
    r.seconds = seconds_since(t0);
    return r;
  }();
  return t;
}

// ----- gradient check helpers -----

std::vector<double> offset(const EmbeddingSpace& s, const EncodedTuple& t) {
  std::vector<double> d(s.n, 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t k = 0; k < s.n; ++k) d[k] += s.weights[i] * s.params[std::size_t(t.rows[i]) * s.n + k];
  for (std::size_t k = 0; k < s.n; ++k) d[k] -= s.params[std::size_t(s.label_row(t.label)) * s.n + k];
  return d;
}

double length(const std::vector<double>& d, Norm norm) {
  double acc = 0;
  for (double x : d) acc += norm == Norm::L1 ? std::abs(x) : x * x;
  return norm == Norm::L1 ? acc : std::sqrt(acc);
}

// Distance from the nearest point where the loss is not differentiable.
double kink_distance(const EmbeddingSpace& s, const EncodedTuple& pos, const EncodedTuple& neg, double margin) {
  auto dp = offset(s, pos), dn = offset(s, neg);
  double gap = std::abs(margin + length(dp, s.norm) - length(dn, s.norm));
  if (s.norm == Norm::L1) {
    for (const auto* d : {&dp, &dn})
      for (double x : *d) gap = std::min(gap, std::abs(x));
  } else {
    gap = std::min({gap, length(dp, Norm::L2), length(dn, Norm::L2)});
  }
  return gap;
}

}  // namespace

Verdict ac5_numerics() {
  auto data = synthetic_cardio(400, 5);
  double worst = 0;
  std::size_t epochs_seen = 0;
  for (Provenance kind : {Provenance::TransMETH, Provenance::TransCMETH}) {
    EmbedConfig cfg;
    cfg.n = 16;
    cfg.epochs = 30;
    cfg.threads = kind == Provenance::TransCMETH ? 2 : 1;
    TrainLog log;
    EmbeddingSpace s = kind == Provenance::TransMETH ? train_transmeth(data, DatasetSchema::cardio(), cfg, &log)
                                                     : train_transcmeth(data, DatasetSchema::cardio(), cfg, &log);
    if (log.norm_error.size() != cfg.epochs)
      return fail(std::string(to_string(kind)) + " logged " + std::to_string(log.norm_error.size()) + " epochs");
    for (double e : log.norm_error) worst = std::max(worst, e);
    for (std::size_t r = 0; r < s.rows(); ++r) {
      double sq = 0;
      for (double x : s.row(static_cast<std::uint32_t>(r))) sq += x * x;
      worst = std::max(worst, std::abs(std::sqrt(sq) - 1.0));
    }
    epochs_seen += log.norm_error.size();
  }
  if (worst > 1e-9) return fail("unit norm off by " + format_number(worst));

  // Central differences on every parameter the pair touches.
  auto small = synthetic_cardio(60, 9);
  Rng rng(55);
  std::size_t points = 0, inactive = 0;
  double worst_rel = 0;
  const std::size_t dims[] = {2, 4, 8};
  for (std::size_t attempt = 0; points < 200 && attempt < 5000; ++attempt) {
    EmbedConfig cfg;
    cfg.n = dims[attempt % 3];
    cfg.norm = attempt % 2 ? Norm::L2 : Norm::L1;
    cfg.seed = 100 + attempt;
    EmbeddingSpace s = initialize(small, DatasetSchema::cardio(), cfg);
    const double margin = 1.0;
    EncodedTuple pos = s.encode(small[uniform_index(rng, small.size())]);
    EncodedTuple neg = corrupt(s, pos, 1 + uniform_index(rng, s.m()), rng);
    if (kink_distance(s, pos, neg, margin) < 1e-4) continue;

    const auto g = margin_loss_gradient(s, pos, neg, margin);
    std::vector<std::uint32_t> touched = pos.rows;
    touched.insert(touched.end(), neg.rows.begin(), neg.rows.end());
    touched.push_back(s.label_row(pos.label));
    touched.push_back(s.label_row(neg.label));
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    std::vector<double> fd(g.size(), 0.0);
    const double h = 1e-6;
    for (std::uint32_t r : touched)
      for (std::size_t k = 0; k < s.n; ++k) {
        double& x = s.params[std::size_t(r) * s.n + k];
        const double keep = x;
        x = keep + h;
        const double up = margin_loss(s, pos, neg, margin);
        x = keep - h;
        const double down = margin_loss(s, pos, neg, margin);
        x = keep;
        fd[std::size_t(r) * s.n + k] = (up - down) / (2 * h);
      }
    double diff = 0, gn = 0, fn = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      diff += (g[i] - fd[i]) * (g[i] - fd[i]);
      gn += g[i] * g[i];
      fn += fd[i] * fd[i];
    }
    if (gn == 0 && fn == 0) {
      ++inactive;
      continue;
    }
    const double rel = std::sqrt(diff) / std::max(std::sqrt(gn), std::sqrt(fn));
    worst_rel = std::max(worst_rel, rel);
    if (rel >= 1e-4)
      return fail("gradient relative error " + format_number(rel) + " at n = " + std::to_string(s.n) + ", " +
                  to_string(s.norm));
    ++points;
  }
  if (points < 200) return fail("only " + std::to_string(points) + " usable gradient points");
  return pass(std::to_string(epochs_seen) + " epochs within 1e-9 of unit norm (worst " + format_number(worst) +
              "); 200 gradient points, worst relative error " + format_number(worst_rel) + " (" +
              std::to_string(inactive) + " flat points skipped)");
}

Verdict ac6_knn_oracle() {
  Rng rng(66);
  std::size_t ks = 0;
  for (std::size_t space = 0; space < 200; ++space) {
    const std::size_t count = 1 + uniform_index(rng, 1000), dim = 1 + uniform_index(rng, 6);
    const bool integral = uniform_index(rng, 2);  // integer grids make ties common
    std::ostringstream vectors, labels;
    for (std::size_t i = 0; i < count; ++i) {
      vectors << "v" << i;
      for (std::size_t k = 0; k < dim; ++k)
        vectors << ' '
                << format_number(integral ? double(uniform_index(rng, 7)) - 3 : uniform_real(rng, -1, 1));
      vectors << '\n';
      labels << "v" << i << ' ' << uniform_index(rng, 2) << '\n';
    }
    EmbeddingSpace s = import_vectors_text(vectors.str(), labels.str(), space % 2 ? Norm::L2 : Norm::L1);
    std::vector<double> r(dim);
    for (double& x : r) x = integral ? double(uniform_index(rng, 7)) - 3 : uniform_real(rng, -1, 1);

    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < s.hh.size(); ++i) {
      double acc = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = r[k] - s.hh[i].combined[k];
        acc += s.norm == Norm::L1 ? std::abs(d) : d * d;
      }
      order.emplace_back(s.norm == Norm::L1 ? acc : std::sqrt(acc), i);
    }
    std::sort(order.begin(), order.end());
    std::size_t positives = 0;
    for (std::size_t k = 1; k <= count; ++k) {
      positives += s.hh[order[k - 1].second].label == Label::Positive;
      const double want = double(positives) / double(k);
      if (knn_chance(s, r, k) != want)
        return fail("space " + std::to_string(space) + ", K = " + std::to_string(k) + ": chance " +
                    format_number(knn_chance(s, r, k)) + ", oracle " + format_number(want));
      ++ks;
    }
    const std::size_t probe = 1 + uniform_index(rng, count);
    auto got = nearest(s, r, probe);
    for (std::size_t i = 0; i < probe; ++i)
      if (got[i] != order[i].second) return fail("space " + std::to_string(space) + ": neighbor order differs");
  }
  return pass("200 spaces, " + std::to_string(ks) + " (space, K) pairs equal the full sort");
}

Verdict ac7_synthetic() {
  const Trained& t = synthetic_space();
  EvalReport rep = evaluate(t.space, synthetic_split().test, 5, 10);
  const std::string detail = "accuracy " + fixed(rep.accuracy()) + " on " + std::to_string(rep.classified) +
                             " classified (" + std::to_string(rep.rejected) + " rejected), trained in " +
                             fixed(t.seconds, 2) + " s";
  if (rep.accuracy() < 0.90) return fail(detail);
  if (t.seconds >= 120) return fail(detail + ", over 2 min");
  return pass(detail);
}

Verdict ac8_cardio() {
  auto path = cardio_csv_path();
  if (!path) return skip("cardiovascular dataset not found (set KGNP_CARDIO_CSV)");
  auto all = ingest_mtuples(*path, DatasetSchema::cardio());
  if (all.size() < 70000) return fail("dataset holds " + std::to_string(all.size()) + " records, need 70000");
  std::vector<MTuple> train(all.begin(), all.begin() + 68000), test(all.begin() + 68000, all.begin() + 70000);
  const auto t0 = std::chrono::steady_clock::now();
  EmbeddingSpace s = train_transmeth(train, DatasetSchema::cardio(), EmbedConfig{});
  EvalReport rep = evaluate(s, test, 5, 10);
  const std::string detail = "accuracy " + fixed(rep.accuracy()) + " (" + std::to_string(rep.rejected) +
                             " rejected) in " + fixed(seconds_since(t0), 1) + " s; logistic baseline 0.7025";
  if (std::abs(rep.accuracy() - 0.708) > 0.03) return fail(detail);
  return pass(detail);
}

Verdict ac9_k_sweep() {
  const EmbeddingSpace& s = synthetic_space().space;
  std::vector<MTuple> chosen;
  for (const auto& m : synthetic_split().test) {
    if (m.label != Label::Positive) continue;
    try {
      construct_virtual_vector(s, m, 5);
    } catch (const DataError&) {
      continue;
    } catch (const EngineError&) {
      continue;
    }
    chosen.push_back(m);
    if (chosen.size() == 10) break;
  }
  if (chosen.size() < 10) return fail("only " + std::to_string(chosen.size()) + " usable positive test records");
  std::vector<double> means;
  std::string trend;
  for (std::size_t k : {5, 10, 20, 30, 40, 50}) {
    double sum = 0;
    for (const auto& m : chosen) sum += classify(s, m, 5, k).chance;
    means.push_back(sum / double(chosen.size()));
    trend += (trend.empty() ? "" : " ") + fixed(means.back(), 3);
  }
  std::size_t inversions = 0;
  for (std::size_t i = 1; i < means.size(); ++i) {
    const double rise = means[i] - means[i - 1];
    if (rise > 1e-12) {
      ++inversions;
      if (rise > 0.01) return fail("mean chance rises by " + fixed(rise, 4) + ": " + trend);
    }
  }
  if (inversions > 1) return fail(std::to_string(inversions) + " inversions: " + trend);
  return pass("mean chance over K = 5..50: " + trend);
}

Verdict ac10_concurrency() {
  const double paper = 6.069032485875707;
  if (gain(0.7080, 0.6875, 6.25, 1.00) != paper)
    return fail("gain(0.7080, 0.6875, 6.25, 1.00) = " + format_number(gain(0.7080, 0.6875, 6.25, 1.00)));
  const double from_seconds = gain(0.7080, 0.6875, 3271, 523.36);
  if (std::abs(from_seconds - paper) > 4e-15 || fixed(from_seconds) != "6.0690")
    return fail("gain(0.7080, 0.6875, 3271, 523.36) = " + format_number(from_seconds));

  const Split& split = synthetic_split();
  auto run = [&](std::size_t p) {
    EmbedConfig cfg;
    cfg.threads = p;
    const auto t0 = std::chrono::steady_clock::now();
    EmbeddingSpace s = train_transcmeth(split.train, DatasetSchema::cardio(), cfg);
    const double secs = seconds_since(t0);
    return std::pair{evaluate(s, split.test, 5, 10).accuracy(), secs};
  };
  const auto [acc1, time1] = run(1);
  const auto [acc8, time8] = run(8);
  const double drop = acc1 - acc8;
  std::string detail = "gain 6.0690 exact; accuracy " + fixed(acc1) + " at p=1, " + fixed(acc8) + " at p=8";
  if (drop > 0.03) return fail(detail + ", drop over 0.03");

  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 8)
    return skip(detail + "; speedup not measured on a " + std::to_string(cores) + "-core host (needs 8)");
  const double speedup = time1 / time8;
  detail += "; speedup " + fixed(speedup, 2) + "x";
  if (speedup < 3.0) return fail(detail);
  return pass(detail);
}

}  // namespace kgnp::acceptance
