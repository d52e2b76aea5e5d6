#include "kgnp/network.hpp"

#include <filesystem>

#include "kgnp/embedding.hpp"
#include "kgnp/engine.hpp"
#include "kgnp/error.hpp"
#include "kgnp/parser.hpp"
#include "kgnp/toml_lite.hpp"

namespace kgnp {

namespace {

std::vector<std::string> strings(const toml::Table& t, const char* key) {
  std::vector<std::string> out;
  const auto* arr = t.get_array(key);
  if (!arr) return out;
  for (const auto& v : *arr) {
    if (!v.is_string()) throw DataError(std::string(key) + " must list strings");
    out.push_back(v.as_string());
  }
  return out;
}

std::string resolve(const std::string& base, const std::string& p) {
  namespace fs = std::filesystem;
  if (p.empty() || fs::path(p).is_absolute() || base.empty()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

std::string required(const toml::Table& t, const char* key, const std::string& where) {
  auto v = t.get_string(key);
  if (!v || v->empty()) throw DataError(where + ": missing '" + key + "'");
  return *v;
}

}  // namespace

AccessPolicy policy_from_toml(const toml::Table& t) {
  AccessPolicy p;
  for (const auto& e : strings(t, "entity_blocklist")) p.entity_blocklist.push_back(parse_ground_term(e));
  for (const auto& g : strings(t, "deny_read")) p.group_rules.push_back({g, GroupMode::DenyRead});
  for (const auto& g : strings(t, "deny_statistics")) p.group_rules.push_back({g, GroupMode::DenyStatistics});
  p.lpp_only = t.get_bool("lpp_only").value_or(false);
  for (const auto& f : strings(t, "function_blocklist")) p.function_blocklist.insert(normalize_builtin_name(f));
  if (const auto* caps = t.get_table("loop_caps")) {
    for (const auto& key : caps->keys()) {
      const auto n = caps->get_integer(key);
      if (!n || *n < 1) throw DataError("loop cap for '" + key + "' must be a positive integer");
      p.loop_caps[key] = static_cast<std::size_t>(*n);
    }
  }
  return p;
}

NetworkConfig network_from_toml(const toml::Table& t, const std::string& base_dir) {
  NetworkConfig cfg;
  const auto* graphs = t.get_array("graph");
  if ((!graphs || graphs->empty()) && !t.get_table("dataset"))
    throw DataError("network needs at least one [[graph]] or a [dataset]");
  static const std::vector<toml::Value> kNone;
  for (const auto& entry : graphs ? *graphs : kNone) {
    const auto& gt = entry.as_table();
    const std::string name = required(gt, "name", "[[graph]]");
    const std::string where = "graph " + name;
    KnowledgeGraph g = load_triples(resolve(base_dir, required(gt, "file", where)), name);
    if (const auto* pol = gt.get_table("policy")) g.policy = policy_from_toml(*pol);
    if (auto prog = gt.get_string("program"))
      g.local_program = std::make_shared<const Program>(parse_program_file(resolve(base_dir, *prog)));
    cfg.network.add_graph(std::move(g));
  }
  if (const auto* links = t.get_array("link"))
    for (const auto& entry : *links) {
      const auto& lt = entry.as_table();
      cfg.network.add_link(required(lt, "from", "[[link]]"), required(lt, "to", "[[link]]"));
    }
  if (const auto* s = t.get_table("session"))
    if (auto prog = s->get_string("program"))
      cfg.session = std::make_shared<const Program>(parse_program_file(resolve(base_dir, *prog)));
  if (const auto* d = t.get_table("dataset")) {
    DatasetConfig dc;
    dc.csv = resolve(base_dir, required(*d, "csv", "[dataset]"));
    if (auto v = d->get_string("name")) dc.name = *v;
    if (auto v = d->get_string("schema")) dc.schema = DatasetSchema::load(resolve(base_dir, *v));
    if (auto v = d->get_integer("sample")) {
      if (*v < 0) throw DataError("[dataset] sample must not be negative");
      dc.sample = static_cast<std::size_t>(*v);
    }
    if (auto v = d->get_integer("seed")) dc.seed = static_cast<std::uint64_t>(*v);
    cfg.dataset = std::move(dc);
  }
  if (const auto* spaces = t.get_array("space"))
    for (const auto& entry : *spaces) {
      const auto& st = entry.as_table();
      cfg.spaces.push_back({required(st, "name", "[[space]]"), resolve(base_dir, required(st, "file", "[[space]]"))});
    }
  return cfg;
}

NetworkConfig load_network(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return network_from_toml(toml::parse_file(path), base);
  } catch (const DataError& e) {
    const std::string what = e.what();
    if (what.find(path) != std::string::npos) throw;
    throw DataError(path + ": " + what);
  }
}

void attach(Engine& engine, const NetworkConfig& config) {
  auto& st = engine.state();
  if (config.dataset) {
    const auto& d = *config.dataset;
    st.schema = d.schema;
    st.dataset_name = d.name;
    st.sample_n = d.sample;
    st.seed = d.seed;
    st.reset_dataset(ingest_mtuples(d.csv, d.schema));
  }
  for (const auto& s : config.spaces)
    st.spaces[s.name] = std::make_shared<EmbeddingSpace>(EmbeddingSpace::load(s.file));
}

}  // namespace kgnp
