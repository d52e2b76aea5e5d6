#include "kgnp/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "kgnp/toml_lite.hpp"

namespace kgnp {

static_assert(std::endian::native == std::endian::little, "space files are written in host byte order");

const char* to_string(Norm n) { return n == Norm::L1 ? "L1" : "L2"; }

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::TransMETH: return "trained-transmeth";
    case Provenance::TransCMETH: return "trained-transcmeth";
    case Provenance::Imported: return "imported";
  }
  return "?";
}

namespace {

Norm parse_norm(const std::string& s) {
  const std::string l = lowercase(s);
  if (l == "l1") return Norm::L1;
  if (l == "l2") return Norm::L2;
  throw DataError("norm must be L1 or L2, got '" + s + "'");
}

Provenance parse_provenance(const std::string& s) {
  for (Provenance p : {Provenance::TransMETH, Provenance::TransCMETH, Provenance::Imported})
    if (s == to_string(p)) return p;
  throw DataError("unknown provenance '" + s + "'");
}

double norm_of(std::span<const double> x, Norm norm) {
  double acc = 0;
  if (norm == Norm::L1) {
    for (double v : x) acc += std::abs(v);
    return acc;
  }
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

// Subgradient of the norm at x.
void norm_grad(std::span<const double> x, Norm norm, std::vector<double>& g) {
  g.assign(x.size(), 0.0);
  if (norm == Norm::L1) {
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = x[k] > 0 ? 1.0 : x[k] < 0 ? -1.0 : 0.0;
    return;
  }
  const double len = norm_of(x, Norm::L2);
  if (len == 0) return;
  for (std::size_t k = 0; k < x.size(); ++k) g[k] = x[k] / len;
}

std::size_t count_of(double c, std::size_t population) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c * static_cast<double>(population))));
}

double load(const double& v) { return std::atomic_ref<double>(const_cast<double&>(v)).load(std::memory_order_relaxed); }

// Unsynchronized read-modify-write: concurrent writers may lose updates.
void add(double& v, double delta) {
  std::atomic_ref<double> ref(v);
  ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
}

}  // namespace

// ----- config -----

void EmbedConfig::validate(std::size_t m) const {
  if (n < 1) throw DataError("dimension n must be at least 1");
  if (!(margin > 0)) throw DataError("margin must be positive");
  if (!(learning_rate > 0)) throw DataError("learning rate must be positive");
  if (!(sampling > 0 && sampling < 1)) throw DataError("sampling coefficient c must lie in (0, 1)");
  if (threads < 1) throw DataError("threads p must be at least 1");
  if (dim_sample > n) throw DataError("dimension sample v must not exceed n");
  if (!weights.empty()) {
    if (weights.size() != m)
      throw DataError("expected " + std::to_string(m) + " weights, got " + std::to_string(weights.size()));
    for (double w : weights)
      if (!(w > 0)) throw DataError("weights must be positive");
  }
  const std::size_t hi = corrupt_max ? corrupt_max : m;
  if (corrupt_min < 1 || hi > m || corrupt_min > hi)
    throw DataError("corruption count range must lie within 1.." + std::to_string(m));
}

EmbedConfig EmbedConfig::from_toml(const toml::Table& t) {
  const toml::Table* e = t.get_table("embedding");
  const toml::Table& src = e ? *e : t;
  EmbedConfig c;
  auto size = [&](const char* key, std::size_t& out) {
    if (auto v = src.get_integer(key)) {
      if (*v < 0) throw DataError(std::string(key) + " must not be negative");
      out = static_cast<std::size_t>(*v);
    }
  };
  size("dimension", c.n);
  size("epochs", c.epochs);
  size("corrupt_min", c.corrupt_min);
  size("corrupt_max", c.corrupt_max);
  size("threads", c.threads);
  size("dim_sample", c.dim_sample);
  if (auto v = src.get_integer("seed")) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = src.get_number("margin")) c.margin = *v;
  if (auto v = src.get_number("learning_rate")) c.learning_rate = *v;
  if (auto v = src.get_number("sampling")) c.sampling = *v;
  if (auto v = src.get_string("norm")) c.norm = parse_norm(*v);
  if (auto v = src.get_bool("positive_only")) c.positive_only = *v;
  if (const auto* w = src.get_array("weights"))
    for (const auto& x : *w) c.weights.push_back(x.as_number());
  return c;
}

EmbedConfig EmbedConfig::load(const std::string& path) { return from_toml(toml::parse_file(path)); }

// ----- space -----

const HHEntry* EmbeddingSpace::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &hh[it->second];
}

std::optional<std::uint32_t> EmbeddingSpace::row_of(std::size_t attribute, double value) const {
  const auto& v = vocab.at(attribute);
  auto it = std::lower_bound(v.begin(), v.end(), value, [](const auto& p, double x) { return p.first < x; });
  if (it == v.end() || it->first != value) return std::nullopt;
  return it->second;
}

EncodedTuple EmbeddingSpace::encode(const MTuple& t) const {
  if (t.triplets.size() != m())
    throw DataError("record " + t.id + " has " + std::to_string(t.triplets.size()) + " attributes, expected " +
                    std::to_string(m()));
  EncodedTuple e;
  e.label = t.label;
  for (std::size_t i = 0; i < m(); ++i) {
    auto r = row_of(i, t.value(i));
    if (!r) throw DataError("unknown triplet (" + t.id + ", " + attributes[i].name + ", " + format_number(t.value(i)) + ")");
    e.rows.push_back(*r);
  }
  return e;
}

std::vector<double> EmbeddingSpace::combined(const std::vector<std::uint32_t>& rs) const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    auto v = row(rs[i]);
    for (std::size_t k = 0; k < n; ++k) out[k] += weights[i] * v[k];
  }
  return out;
}

double EmbeddingSpace::distance(std::span<const double> a, std::span<const double> b) const {
  double acc = 0;
  if (norm == Norm::L1) {
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
    return acc;
  }
  for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(acc);
}

void EmbeddingSpace::reindex() {
  by_id_.clear();
  for (std::size_t i = 0; i < hh.size(); ++i)
    if (!by_id_.emplace(hh[i].id, i).second) throw DataError("duplicate HH id '" + hh[i].id + "'");
  row_pos_.assign(rows(), {SIZE_MAX, SIZE_MAX});
  for (std::size_t a = 0; a < vocab.size(); ++a)
    for (std::size_t p = 0; p < vocab[a].size(); ++p) row_pos_.at(vocab[a][p].second) = {a, p};
  by_value_.assign(m(), {});
  for (std::size_t a = 0; a < m(); ++a) {
    auto& idx = by_value_[a];
    for (std::size_t i = 0; i < hh.size(); ++i)
      if (hh[i].values.size() == m()) idx.emplace_back(hh[i].values[a], static_cast<std::uint32_t>(i));
    std::sort(idx.begin(), idx.end());
  }
}

// ----- initialization and corruption -----

namespace {

EmbeddingSpace initialize_with(const std::vector<MTuple>& data, const DatasetSchema& schema, const EmbedConfig& config,
                               Rng& rng) {
  if (data.empty()) throw DataError("empty dataset");
  config.validate(schema.m());
  EmbeddingSpace s;
  s.n = config.n;
  s.norm = config.norm;
  s.attributes = schema.attributes;
  s.weights = config.weights.empty() ? schema.weights() : config.weights;
  const double total = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
  for (double& w : s.weights) w /= total;

  s.vocab.assign(s.m(), {});
  std::vector<std::map<double, std::uint32_t>> seen(s.m());
  std::uint32_t next = 0;
  for (const auto& t : data) {
    if (t.triplets.size() != s.m()) throw DataError("record " + t.id + " does not match the schema");
    for (std::size_t i = 0; i < s.m(); ++i)
      if (seen[i].emplace(t.value(i), next).second) ++next;
  }
  for (std::size_t i = 0; i < s.m(); ++i) s.vocab[i].assign(seen[i].begin(), seen[i].end());
  s.label_rows[0] = next++;
  s.label_rows[1] = next++;

  s.params.resize(std::size_t(next) * s.n);
  const double bound = 6.0 / std::sqrt(static_cast<double>(s.n));
  for (double& p : s.params) p = uniform_real(rng, -bound, bound);
  s.reindex();
  return s;
}

}  // namespace

EmbeddingSpace initialize(const std::vector<MTuple>& data, const DatasetSchema& schema, const EmbedConfig& config) {
  Rng rng(config.seed);
  return initialize_with(data, schema, config, rng);
}

EncodedTuple corrupt(const EmbeddingSpace& s, const EncodedTuple& t, std::size_t k, Rng& rng) {
  if (k < 1 || k > t.rows.size()) throw DataError("corruption count must lie within 1.." + std::to_string(t.rows.size()));
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (s.vocab[i].size() > 1) eligible.push_back(i);
  if (eligible.size() < k)
    throw DataError("cannot corrupt " + std::to_string(k) + " attributes: only " + std::to_string(eligible.size()) +
                    " have more than one value");
  EncodedTuple out = t;
  for (std::size_t pick : sample_without_replacement(eligible.size(), k, rng)) {
    const std::size_t i = eligible[pick];
    const auto& values = s.vocab[i];
    const std::size_t cur = s.locate(t.rows[i]).second;
    std::size_t r = uniform_index(rng, values.size() - 1);
    if (r >= cur) ++r;
    out.rows[i] = values[r].second;
  }
  out.label = t.label == Label::Positive ? Label::Negative : Label::Positive;
  return out;
}

MTuple corrupt(const EmbeddingSpace& s, const MTuple& t, std::size_t k, Rng& rng) {
  EncodedTuple e = corrupt(s, s.encode(t), k, rng);
  MTuple out = t;
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    auto [a, p] = s.locate(e.rows[i]);
    out.triplets[i].tail = make_number(s.vocab[a][p].first, t.triplets[i].tail->unit);
  }
  out.label = e.label;
  return out;
}

// ----- loss -----

namespace {

void residual(const EmbeddingSpace& s, const EncodedTuple& t, std::vector<double>& x) {
  x.assign(s.n, 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double* v = s.params.data() + std::size_t(t.rows[i]) * s.n;
    for (std::size_t k = 0; k < s.n; ++k) x[k] += s.weights[i] * load(v[k]);
  }
  const double* l = s.params.data() + std::size_t(s.label_row(t.label)) * s.n;
  for (std::size_t k = 0; k < s.n; ++k) x[k] -= load(l[k]);
}

struct Kernel {
  EmbeddingSpace& s;
  double lr, margin;
  bool positive_only;
  std::vector<double> x, y, gx, gy;

  double step(const EncodedTuple& pos, const EncodedTuple& neg, const std::vector<std::size_t>* dims) {
    residual(s, pos, x);
    residual(s, neg, y);
    const double loss = margin + norm_of(x, s.norm) - norm_of(y, s.norm);
    if (loss <= 0) return 0;
    norm_grad(x, s.norm, gx);
    norm_grad(y, s.norm, gy);
    auto apply = [&](std::size_t k) {
      for (std::size_t i = 0; i < pos.rows.size(); ++i)
        add(s.params[std::size_t(pos.rows[i]) * s.n + k], -lr * s.weights[i] * gx[k]);
      add(s.params[std::size_t(s.label_row(pos.label)) * s.n + k], lr * gx[k]);
      if (positive_only) return;
      for (std::size_t i = 0; i < neg.rows.size(); ++i)
        add(s.params[std::size_t(neg.rows[i]) * s.n + k], lr * s.weights[i] * gy[k]);
      add(s.params[std::size_t(s.label_row(neg.label)) * s.n + k], -lr * gy[k]);
    };
    if (dims)
      for (std::size_t k : *dims) apply(k);
    else
      for (std::size_t k = 0; k < s.n; ++k) apply(k);
    return loss;
  }
};

}  // namespace

double margin_loss(const EmbeddingSpace& s, const EncodedTuple& pos, const EncodedTuple& neg, double margin) {
  std::vector<double> x, y;
  residual(s, pos, x);
  residual(s, neg, y);
  return std::max(0.0, margin + norm_of(x, s.norm) - norm_of(y, s.norm));
}

std::vector<double> margin_loss_gradient(const EmbeddingSpace& s, const EncodedTuple& pos, const EncodedTuple& neg,
                                         double margin) {
  std::vector<double> grad(s.params.size(), 0.0), x, y, gx, gy;
  residual(s, pos, x);
  residual(s, neg, y);
  if (margin + norm_of(x, s.norm) - norm_of(y, s.norm) <= 0) return grad;
  norm_grad(x, s.norm, gx);
  norm_grad(y, s.norm, gy);
  for (std::size_t k = 0; k < s.n; ++k) {
    for (std::size_t i = 0; i < pos.rows.size(); ++i) grad[std::size_t(pos.rows[i]) * s.n + k] += s.weights[i] * gx[k];
    grad[std::size_t(s.label_row(pos.label)) * s.n + k] -= gx[k];
    for (std::size_t i = 0; i < neg.rows.size(); ++i) grad[std::size_t(neg.rows[i]) * s.n + k] -= s.weights[i] * gy[k];
    grad[std::size_t(s.label_row(neg.label)) * s.n + k] += gy[k];
  }
  return grad;
}

// ----- training -----

namespace {

void normalize_rows(EmbeddingSpace& s, std::size_t from, std::size_t to) {
  for (std::size_t r = from; r < to; ++r) {
    auto v = s.row(static_cast<std::uint32_t>(r));
    const double len = norm_of(v, Norm::L2);
    if (len > 0)
      for (double& x : v) x /= len;
  }
}

double max_norm_error(const EmbeddingSpace& s) {
  double worst = 0;
  for (std::size_t r = 0; r < s.rows(); ++r)
    worst = std::max(worst, std::abs(norm_of(s.row(static_cast<std::uint32_t>(r)), Norm::L2) - 1.0));
  return worst;
}

std::pair<std::size_t, std::size_t> slice(std::size_t total, std::size_t parts, std::size_t j) {
  const std::size_t base = total / parts, extra = total % parts;
  const std::size_t from = j * base + std::min(j, extra);
  return {from, from + base + (j < extra ? 1 : 0)};
}

EmbeddingSpace train(const std::vector<MTuple>& data, const DatasetSchema& schema, EmbedConfig config,
                     Provenance provenance, TrainLog* log) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  EmbeddingSpace s = initialize_with(data, schema, config, rng);
  s.provenance = provenance;

  std::vector<EncodedTuple> enc;
  std::vector<std::size_t> pos, neg;
  enc.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    enc.push_back(s.encode(data[i]));
    if (data[i].label == Label::Positive) pos.push_back(i);
    else if (data[i].label == Label::Negative) neg.push_back(i);
    else throw DataError("record " + data[i].id + " has no label");
  }
  if (pos.empty()) throw DataError("no positive examples");
  if (neg.empty()) throw DataError("no negative examples");

  const bool concurrent = provenance == Provenance::TransCMETH;
  const std::size_t p = concurrent ? config.threads : 1;
  const std::size_t v = concurrent && config.dim_sample ? config.dim_sample : s.n;
  const bool positive_only = concurrent && config.positive_only;
  const std::size_t b1 = count_of(config.sampling, pos.size()), b2 = count_of(config.sampling, neg.size());
  const std::size_t kmin = config.corrupt_min, kmax = config.corrupt_max ? config.corrupt_max : s.m();

  std::vector<Rng> rngs;
  for (std::size_t j = 1; j < p; ++j) rngs.emplace_back(config.seed ^ (0x9E3779B97F4A7C15ULL * j));
  auto rng_of = [&](std::size_t j) -> Rng& { return j == 0 ? rng : rngs[j - 1]; };

  std::vector<double> loss_sum(p, 0.0);
  std::vector<std::size_t> pairs(p, 0);
  std::size_t phase = 0;
  auto on_phase = [&]() noexcept {
    if (log) {
      if (phase % 2 == 0) {
        log->norm_error.push_back(max_norm_error(s));
      } else {
        const double total = std::accumulate(loss_sum.begin(), loss_sum.end(), 0.0);
        const std::size_t count = std::accumulate(pairs.begin(), pairs.end(), std::size_t{0});
        log->mean_loss.push_back(count ? total / double(count) : 0.0);
      }
    }
    ++phase;
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(p), on_phase);

  auto worker = [&](std::size_t j) {
    Kernel kernel{s, config.learning_rate, config.margin, positive_only, {}, {}, {}, {}};
    Rng& r = rng_of(j);
    const auto [row_from, row_to] = slice(s.rows(), p, j);
    const std::size_t my_b1 = slice(b1, p, j).second - slice(b1, p, j).first;
    const std::size_t my_b2 = slice(b2, p, j).second - slice(b2, p, j).first;
    std::vector<std::size_t> dims;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      normalize_rows(s, row_from, row_to);
      loss_sum[j] = 0;
      pairs[j] = 0;
      sync.arrive_and_wait();
      const std::vector<std::size_t>* dim_ptr = nullptr;
      if (v < s.n) {
        dims = sample_without_replacement(s.n, v, r);
        std::sort(dims.begin(), dims.end());
        dim_ptr = &dims;
      }
      auto run = [&](const std::vector<std::size_t>& pool, std::size_t count) {
        for (std::size_t pick : sample_without_replacement(pool.size(), std::min(count, pool.size()), r)) {
          const EncodedTuple& t = enc[pool[pick]];
          const std::size_t k = kmin + uniform_index(r, kmax - kmin + 1);
          loss_sum[j] += kernel.step(t, corrupt(s, t, k, r), dim_ptr);
          ++pairs[j];
        }
      };
      run(pos, my_b1);
      run(neg, my_b2);
      sync.arrive_and_wait();
    }
    normalize_rows(s, row_from, row_to);
  };

  if (p == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < p; ++j) pool.emplace_back(worker, j);
  }

  s.hh.resize(data.size());
  auto fill = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      HHEntry& e = s.hh[i];
      e.id = data[i].id;
      e.label = data[i].label;
      e.rows = enc[i].rows;
      e.values.reserve(s.m());
      for (std::size_t a = 0; a < s.m(); ++a) e.values.push_back(data[i].value(a));
      e.combined = s.combined(e.rows);
    }
  };
  if (p == 1) {
    fill(0, data.size());
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < p; ++j) {
      auto [from, to] = slice(data.size(), p, j);
      pool.emplace_back(fill, from, to);
    }
  }
  s.reindex();
  if (log) log->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace

EmbeddingSpace train_transmeth(const std::vector<MTuple>& data, const DatasetSchema& schema, EmbedConfig config,
                               TrainLog* log) {
  return train(data, schema, std::move(config), Provenance::TransMETH, log);
}

EmbeddingSpace train_transcmeth(const std::vector<MTuple>& data, const DatasetSchema& schema, EmbedConfig config,
                                TrainLog* log) {
  if (config.threads < 1) throw DataError("threads p must be at least 1");
  return train(data, schema, std::move(config), Provenance::TransCMETH, log);
}

// ----- virtual vectors and kNN -----

namespace {

void check_normal(const AttributeSpec& a, double raw) {
  if (a.normal(raw)) return;
  std::string domain;
  if (a.finite) {
    for (double v : a.allowed) domain += (domain.empty() ? "" : ", ") + format_number(v);
    domain = "{" + domain + "}";
  } else {
    domain = "[" + format_number(a.lo) + ", " + format_number(a.hi) + "]";
  }
  throw AbnormalValue(a.name, "abnormal value for " + a.name + ": " + format_number(a.scaled(raw)) + " outside " + domain);
}

// J entries nearest in value; the candidate set is widened past ties so the
// final (distance, insertion) order is exact.
std::vector<std::uint32_t> nearest_by_value(const EmbeddingSpace& s, std::size_t a, double raw, std::size_t j) {
  const auto& idx = s.by_value(a);
  const AttributeSpec& spec = s.attributes[a];
  const double width = spec.hi > spec.lo ? spec.hi - spec.lo : 1.0;
  auto dist = [&](double v) { return std::abs(spec.scaled(v) - spec.scaled(raw)) / width; };
  std::ptrdiff_t right = std::lower_bound(idx.begin(), idx.end(), std::pair{raw, std::uint32_t{0}}) - idx.begin();
  std::ptrdiff_t left = right - 1;
  std::vector<std::pair<double, std::uint32_t>> cand;
  double last = -1;
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(idx.size());
  while (left >= 0 || right < size) {
    const double dl = left >= 0 ? dist(idx[left].first) : INFINITY;
    const double dr = right < size ? dist(idx[right].first) : INFINITY;
    const double d = std::min(dl, dr);
    if (cand.size() >= j && d > last) break;
    if (dl <= dr) cand.emplace_back(dl, idx[left--].second);
    else cand.emplace_back(dr, idx[right++].second);
    last = d;
  }
  std::sort(cand.begin(), cand.end());
  if (cand.size() > j) cand.resize(j);
  std::vector<std::uint32_t> out;
  for (const auto& c : cand) out.push_back(c.second);
  return out;
}

}  // namespace

VirtualVector construct_virtual_vector(const EmbeddingSpace& s, const MTuple& record, std::size_t j) {
  if (s.hh.empty()) throw DataError("empty space");
  if (j < 1) throw DataError("J must be at least 1");
  if (s.m() == 0 || s.hh.front().rows.empty()) throw EngineError("space holds no local vectors");
  if (record.triplets.size() != s.m())
    throw DataError("record " + record.id + " has " + std::to_string(record.triplets.size()) + " attributes, expected " +
                    std::to_string(s.m()));
  for (std::size_t i = 0; i < s.m(); ++i) check_normal(s.attributes[i], record.value(i));

  VirtualVector vv;
  vv.subject = record.id;
  vv.r.assign(s.n, 0.0);
  vv.contributors.resize(s.m());
  for (std::size_t i = 0; i < s.m(); ++i) {
    const double raw = record.value(i);
    std::vector<std::uint32_t> chosen;
    if (s.attributes[i].finite) {
      const auto& idx = s.by_value(i);
      auto it = std::lower_bound(idx.begin(), idx.end(), std::pair{raw, std::uint32_t{0}});
      for (; it != idx.end() && it->first == raw && chosen.size() < j; ++it) chosen.push_back(it->second);
      if (chosen.empty())
        throw NoFiniteMatch("no stored " + s.attributes[i].name + " triplet equals " + format_number(raw));
    } else {
      chosen = nearest_by_value(s, i, raw, j);
    }
    std::vector<double> avg(s.n, 0.0);
    for (std::uint32_t e : chosen) {
      auto v = s.row(s.hh[e].rows[i]);
      for (std::size_t k = 0; k < s.n; ++k) avg[k] += v[k];
      vv.contributors[i].push_back(s.hh[e].id);
    }
    for (std::size_t k = 0; k < s.n; ++k) vv.r[k] += s.weights[i] * avg[k] / static_cast<double>(chosen.size());
  }
  return vv;
}

std::vector<std::size_t> nearest(const EmbeddingSpace& s, std::span<const double> r, std::size_t k) {
  if (s.hh.empty()) throw DataError("empty space");
  if (k < 1) throw DataError("K must be at least 1");
  if (k > s.hh.size())
    throw DataError("K = " + std::to_string(k) + " exceeds the " + std::to_string(s.hh.size()) + " stored vectors");
  if (r.size() != s.n) throw DataError("vector has dimension " + std::to_string(r.size()) + ", space has " + std::to_string(s.n));
  std::vector<std::pair<double, std::size_t>> d(s.hh.size());
  for (std::size_t i = 0; i < s.hh.size(); ++i) d[i] = {s.distance(r, s.hh[i].combined), i};
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(d[i].second);
  return out;
}

double knn_chance(const EmbeddingSpace& s, std::span<const double> r, std::size_t k) {
  std::size_t positives = 0;
  for (std::size_t i : nearest(s, r, k)) positives += s.hh[i].label == Label::Positive;
  return static_cast<double>(positives) / static_cast<double>(k);
}

Classification classify(const EmbeddingSpace& s, const MTuple& record, std::size_t j, std::size_t k) {
  VirtualVector vv = construct_virtual_vector(s, record, j);
  Classification c;
  c.neighbors = nearest(s, vv.r, k);
  std::size_t positives = 0;
  for (std::size_t i : c.neighbors) positives += s.hh[i].label == Label::Positive;
  c.chance = static_cast<double>(positives) / static_cast<double>(k);
  c.positive = c.chance >= 0.5;
  return c;
}

EvalReport evaluate(const EmbeddingSpace& s, const std::vector<MTuple>& tests, std::size_t j, std::size_t k) {
  EvalReport r;
  for (const auto& t : tests) {
    try {
      Classification c = classify(s, t, j, k);
      ++r.classified;
      r.correct += c.positive == (t.label == Label::Positive);
    } catch (const AbnormalValue&) {
      ++r.rejected;
    } catch (const NoFiniteMatch&) {
      ++r.rejected;
    }
  }
  return r;
}

// ----- import -----

namespace {

std::vector<std::string> fields_of(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == ';') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

template <typename F>
void for_each_line(std::string_view text, const char* source, F&& f) {
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto fields = fields_of(trim(line));
    if (fields.empty()) continue;
    f(fields, std::string(source) + ":" + std::to_string(line_no));
  }
}

}  // namespace

EmbeddingSpace import_vectors_text(std::string_view vectors, std::string_view labels, Norm norm) {
  std::unordered_map<std::string, Label> label_of;
  for_each_line(labels, "labels", [&](const std::vector<std::string>& f, const std::string& where) {
    if (f.size() != 2) throw DataError(where + ": expected `id label`");
    const std::string l = lowercase(f[1]);
    Label lab;
    if (l == "1" || l == "positive") lab = Label::Positive;
    else if (l == "0" || l == "negative") lab = Label::Negative;
    else throw DataError(where + ": label must be 1, 0, positive or negative");
    label_of[f[0]] = lab;
  });
  EmbeddingSpace s;
  s.norm = norm;
  s.provenance = Provenance::Imported;
  for_each_line(vectors, "vectors", [&](const std::vector<std::string>& f, const std::string& where) {
    if (f.size() < 2) throw DataError(where + ": expected `id v1 v2 ...`");
    HHEntry e;
    e.id = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) {
      auto v = parse_number(f[i]);
      if (!v) throw DataError(where + ": '" + f[i] + "' is not a number");
      e.combined.push_back(*v);
    }
    if (s.n == 0) s.n = e.combined.size();
    if (e.combined.size() != s.n)
      throw DataError(where + ": dimension mismatch, expected " + std::to_string(s.n) + ", got " +
                      std::to_string(e.combined.size()));
    auto it = label_of.find(e.id);
    if (it == label_of.end()) throw DataError(where + ": missing label for '" + e.id + "'");
    e.label = it->second;
    s.hh.push_back(std::move(e));
  });
  if (s.hh.empty()) throw DataError("no vectors to import");
  s.reindex();
  return s;
}

EmbeddingSpace import_vectors(const std::string& vectors_path, const std::string& labels_path, Norm norm) {
  return import_vectors_text(read_file(vectors_path), read_file(labels_path), norm);
}

double gain(double acc_1, double acc_p, double time_1, double time_p) {
  if (!(acc_1 > 0 && acc_p > 0 && time_1 > 0 && time_p > 0)) throw DataError("gain needs positive inputs");
  return (acc_p * time_1) / (acc_1 * time_p);
}

// ----- persistence -----

namespace {

constexpr char kMagic[8] = {'K', 'G', 'N', 'P', 'S', 'P', 'C', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& o, T v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_string(std::ostream& o, const std::string& s) {
  put<std::uint32_t>(o, static_cast<std::uint32_t>(s.size()));
  o.write(s.data(), static_cast<std::streamsize>(s.size()));
}

struct Reader {
  std::istream& in;
  const std::string& path;
  template <typename T>
  T get() {
    T v;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DataError(path + ": truncated space file");
    return v;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    std::string s(n, '\0');
    if (!in.read(s.data(), n)) throw DataError(path + ": truncated space file");
    return s;
  }
};

std::uint8_t label_code(Label l) { return l == Label::Negative ? 0 : l == Label::Positive ? 1 : 2; }
Label label_from(std::uint8_t c) { return c == 0 ? Label::Negative : c == 1 ? Label::Positive : Label::Unknown; }

}  // namespace

void EmbeddingSpace::save(const std::string& path) const {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw DataError(path + ": cannot write file");
  nlohmann::json meta;
  meta["n"] = n;
  meta["m"] = m();
  meta["norm"] = to_string(norm);
  meta["provenance"] = to_string(provenance);
  meta["weights"] = weights;
  meta["label_rows"] = {label_rows[0], label_rows[1]};
  auto& attrs = meta["attributes"] = nlohmann::json::array();
  for (const auto& a : attributes)
    attrs.push_back({{"name", a.name}, {"column", a.column}, {"finite", a.finite}, {"lo", a.lo}, {"hi", a.hi},
                     {"allowed", a.allowed}, {"scale", a.scale}, {"weight", a.weight}});
  meta["vocab"] = vocab;

  o.write(kMagic, sizeof kMagic);
  put(o, kVersion);
  put_string(o, meta.dump());
  put<std::uint64_t>(o, rows());
  for (double p : params) put(o, static_cast<float>(p));
  put<std::uint64_t>(o, hh.size());
  std::vector<std::uint64_t> offsets;
  for (const auto& e : hh) {
    offsets.push_back(static_cast<std::uint64_t>(o.tellp()));
    put_string(o, e.id);
    put(o, label_code(e.label));
    put<std::uint32_t>(o, static_cast<std::uint32_t>(e.values.size()));
    for (double v : e.values) put(o, v);
    put<std::uint32_t>(o, static_cast<std::uint32_t>(e.rows.size()));
    for (std::uint32_t r : e.rows) put(o, r);
    put<std::uint32_t>(o, static_cast<std::uint32_t>(e.combined.size()));
    for (double v : e.combined) put(o, static_cast<float>(v));
  }
  put<std::uint64_t>(o, hh.size());
  for (std::size_t i = 0; i < hh.size(); ++i) {
    put_string(o, hh[i].id);
    put(o, offsets[i]);
  }
  if (!o) throw DataError(path + ": write failed");
}

EmbeddingSpace EmbeddingSpace::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  Reader r{in, path};
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw DataError(path + ": not a space file");
  if (const auto v = r.get<std::uint32_t>(); v != kVersion)
    throw DataError(path + ": unsupported space version " + std::to_string(v));
  EmbeddingSpace s;
  try {
    const auto meta = nlohmann::json::parse(r.get_string());
    s.n = meta.at("n").get<std::size_t>();
    s.norm = parse_norm(meta.at("norm").get<std::string>());
    s.provenance = parse_provenance(meta.at("provenance").get<std::string>());
    s.weights = meta.at("weights").get<std::vector<double>>();
    s.label_rows[0] = meta.at("label_rows").at(0).get<std::uint32_t>();
    s.label_rows[1] = meta.at("label_rows").at(1).get<std::uint32_t>();
    for (const auto& a : meta.at("attributes")) {
      AttributeSpec spec;
      spec.name = a.at("name").get<std::string>();
      spec.column = a.at("column").get<std::string>();
      spec.finite = a.at("finite").get<bool>();
      spec.lo = a.at("lo").get<double>();
      spec.hi = a.at("hi").get<double>();
      spec.allowed = a.at("allowed").get<std::vector<double>>();
      spec.scale = a.at("scale").get<double>();
      spec.weight = a.at("weight").get<double>();
      s.attributes.push_back(std::move(spec));
    }
    s.vocab = meta.at("vocab").get<decltype(s.vocab)>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": bad metadata: " + e.what());
  }
  const auto rows = r.get<std::uint64_t>();
  s.params.resize(rows * s.n);
  for (double& p : s.params) p = r.get<float>();
  const auto count = r.get<std::uint64_t>();
  s.hh.resize(count);
  for (auto& e : s.hh) {
    e.id = r.get_string();
    e.label = label_from(r.get<std::uint8_t>());
    e.values.resize(r.get<std::uint32_t>());
    for (double& v : e.values) v = r.get<double>();
    e.rows.resize(r.get<std::uint32_t>());
    for (auto& x : e.rows) {
      x = r.get<std::uint32_t>();
      if (x >= rows) throw DataError(path + ": row index out of range");
    }
    e.combined.resize(r.get<std::uint32_t>());
    for (double& v : e.combined) v = r.get<float>();
    // Trained entries are recomputed so they agree with the stored rows.
    if (!e.rows.empty()) e.combined = s.combined(e.rows);
  }
  s.reindex();
  return s;
}

void EmbeddingSpace::export_jsonl(const std::string& path) const {
  std::ofstream o(path);
  if (!o) throw DataError(path + ": cannot write file");
  nlohmann::json head{{"n", n}, {"m", m()}, {"norm", to_string(norm)}, {"provenance", to_string(provenance)},
                      {"weights", weights}, {"entries", hh.size()}};
  o << head.dump() << "\n";
  for (const auto& e : hh) {
    nlohmann::json j{{"id", e.id},
                     {"label", e.label == Label::Positive ? "positive" : e.label == Label::Negative ? "negative" : "unknown"},
                     {"vector", e.combined}};
    if (!e.values.empty()) j["values"] = e.values;
    o << j.dump() << "\n";
  }
}

}  // namespace kgnp
