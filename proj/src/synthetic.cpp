#include "kgnp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kgnp/util.hpp"

namespace kgnp {

namespace {

// Box-Muller over our own uniform draws keeps the stream toolchain-independent.
double normal(Rng& rng, double mean, double sd) {
  const double u1 = uniform_real(rng, 0, 1), u2 = uniform_real(rng, 0, 1);
  const double z = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300))) * std::cos(2 * std::numbers::pi * u2);
  return mean + sd * z;
}

double mix(double healthy, double sick, double s, bool positive) {
  const double mid = (healthy + sick) / 2, half = (sick - healthy) / 2;
  return mid + (positive ? half : -half) * s;
}

int level(Rng& rng, double p2, double p3) {
  const double u = uniform_real(rng, 0, 1);
  return u < p3 ? 3 : u < p3 + p2 ? 2 : 1;
}

int flag(Rng& rng, double p) { return uniform_real(rng, 0, 1) < p ? 1 : 0; }

}  // namespace

std::string synthetic_cardio_csv(std::size_t count, std::uint64_t seed, double separation, std::size_t first_id) {
  Rng rng(seed);
  std::ostringstream csv;
  csv << "id;age;gender;height;weight;ap_hi;ap_lo;cholesterol;gluc;smoke;alco;active;cardio\n";
  const double s = std::clamp(separation, 0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const bool pos = flag(rng, 0.5) == 1;
    auto clamp_round = [](double v, double lo, double hi) { return std::round(std::clamp(v, lo, hi)); };
    const double age = clamp_round(normal(rng, mix(44, 58, s, pos), 4) * 365.25, 20 * 365.25, 90 * 365.25);
    const int gender = 1 + flag(rng, 0.5);
    const double height = clamp_round(normal(rng, mix(168, 166, s, pos), 6), 140, 200);
    const double weight = clamp_round(normal(rng, mix(68, 84, s, pos), 6), 40, 150);
    const double hi = clamp_round(normal(rng, mix(116, 146, s, pos), 6), 90, 200);
    const double lo = clamp_round(normal(rng, mix(75, 93, s, pos), 4), 50, 130);
    const double p = pos ? 0.5 + 0.5 * s : 0.5 - 0.5 * s;  // chance of the unhealthy reading
    const int chol = level(rng, 0.05 + 0.35 * p, 0.05 + 0.35 * p);
    const int gluc = level(rng, 0.05 + 0.25 * p, 0.05 + 0.25 * p);
    csv << first_id + i << ';' << format_number(age) << ';' << gender << ';' << format_number(height) << ';'
        << format_number(weight) << ';' << format_number(hi) << ';' << format_number(lo) << ';' << chol << ';' << gluc
        << ';' << flag(rng, 0.05 + 0.35 * p) << ';' << flag(rng, 0.05 + 0.25 * p) << ';' << flag(rng, 0.9 - 0.6 * p)
        << ';' << (pos ? 1 : 0) << '\n';
  }
  return csv.str();
}

std::vector<MTuple> synthetic_cardio(std::size_t count, std::uint64_t seed, double separation, std::size_t first_id) {
  return ingest_mtuples_text(synthetic_cardio_csv(count, seed, separation, first_id), DatasetSchema::cardio(),
                             "<synthetic>");
}

}  // namespace kgnp
