#include "kgnp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "kgnp/argumentation.hpp"
#include "kgnp/embedding.hpp"
#include "kgnp/engine.hpp"
#include "kgnp/error.hpp"
#include "kgnp/network.hpp"
#include "kgnp/parser.hpp"
#include "kgnp/synthetic.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("kgnp", sink);
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("KGNP_LOG");
  const std::string level = env ? lowercase(env) : "";
  log->set_level(level == "debug" ? spdlog::level::debug : level == "info" ? spdlog::level::info : spdlog::level::warn);
  return log;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void time_line(std::ostream& out, const char* what, double seconds) {
  out << "# time: " << what << " " << format_number(std::round(seconds * 1e3) / 1e3) << " s\n";
}

DatasetSchema schema_or_default(const std::string& path) {
  return path.empty() ? DatasetSchema::cardio() : DatasetSchema::load(path);
}

// --record is a file path or one CSV row in schema column order, with or
// without the label column.
std::vector<MTuple> read_records(const std::string& record, const DatasetSchema& schema) {
  if (std::filesystem::exists(record)) return ingest_mtuples(record, schema, false);
  const auto fields = split(record, schema.delimiter);
  std::string header = schema.id_column;
  for (const auto& a : schema.attributes) header += std::string(1, schema.delimiter) + a.column;
  if (fields.size() == schema.m() + 2) header += std::string(1, schema.delimiter) + schema.label_column;
  else if (fields.size() != schema.m() + 1)
    throw DataError("--record: expected " + std::to_string(schema.m() + 1) + " fields (id and " +
                    std::to_string(schema.m()) + " attributes), got " + std::to_string(fields.size()));
  return ingest_mtuples_text(header + "\n" + record + "\n", schema, "--record", false);
}

std::string label_text(Label l) {
  return l == Label::Positive ? "positive" : l == Label::Negative ? "negative" : "unknown";
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct Outputs {
  std::ostream& out;
  std::ostream& err;
  std::shared_ptr<spdlog::logger> log;
};

// ----- run -----

struct RunArgs {
  std::string program, network, query, format = "plain", out_file;
  std::size_t max_solutions = 0, max_depth = 10000, sample = 0;
  std::optional<std::uint64_t> seed;
  bool trace = false;
};

int do_run(const RunArgs& a, Outputs& io) {
  Stopwatch clock;
  NetworkConfig net;
  if (!a.network.empty()) net = load_network(a.network);
  std::shared_ptr<const Program> session = net.session;
  if (!a.program.empty()) session = std::make_shared<const Program>(parse_program_file(a.program));
  const Query q = parse_query(a.query);

  EngineOptions opts;
  opts.max_solutions = a.max_solutions;
  opts.max_depth = a.max_depth;
  opts.trace = a.trace;
  Engine engine(net.network, session, opts);
  attach(engine, net);
  if (a.seed) engine.state().seed = *a.seed;
  if (a.sample) engine.state().sample_n = a.sample;

  std::ofstream file;
  std::ostream* sink = &io.out;
  if (!a.out_file.empty()) {
    file.open(a.out_file);
    if (!file) throw DataError(a.out_file + ": cannot write file");
    sink = &file;
  }
  std::ostream& out = *sink;
  engine.set_output(out);
  io.log->debug("query {}", print_query(q));

  const bool annotated = engine.session_program().annotation_arity > 0;
  std::vector<std::string> names;
  for (std::size_t v = 0; v < q.var_names.size(); ++v)
    if (!q.var_names[v].empty() && q.var_names[v][0] != '_') names.push_back(q.var_names[v]);
  if (a.format == "csv") {
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << csv_cell(names[i]);
    if (annotated) out << (names.empty() ? "" : ",") << "annotation";
    out << "\n";
  }
  const std::size_t count = engine.solve(q, [&](const Solution& s) {
    const std::string ann = s.annotation.empty() ? "" : display_tuple(s.annotation, engine.mode(), engine.session_program());
    if (a.format == "csv") {
      for (std::size_t i = 0; i < s.bindings.size(); ++i) out << (i ? "," : "") << csv_cell(to_string(s.bindings[i].second));
      if (annotated) out << (s.bindings.empty() ? "" : ",") << csv_cell(ann);
      out << "\n";
    } else if (a.format == "json") {
      nlohmann::json j;
      j["bindings"] = nlohmann::json::object();
      for (const auto& [name, value] : s.bindings) j["bindings"][name] = to_string(value);
      if (!ann.empty()) j["annotation"] = ann;
      if (a.trace) j["trace"] = s.trace;
      out << j.dump() << "\n";
    } else {
      if (a.trace)
        for (const auto& step : s.trace) out << "  via " << step << "\n";
      out << s.bindings_text() << (ann.empty() ? "" : " " + ann) << "\n";
    }
    return true;
  });
  if (a.format == "plain" && count == 0) out << "no\n";
  io.log->info("{} solution(s)", count);
  time_line(io.out, "run", clock.seconds());
  return kExitOk;
}

// ----- train / classify / import / sweep -----

struct TrainArgs {
  std::string data, schema, config, out_file, jsonl, algorithm, loss_log;
  std::optional<std::size_t> threads, dim_sample, epochs, dimension, holdout;
  std::optional<std::uint64_t> seed;
  std::size_t j = 10, k = 5;
};

int do_train(const TrainArgs& a, Outputs& io) {
  const DatasetSchema schema = schema_or_default(a.schema);
  EmbedConfig cfg = a.config.empty() ? EmbedConfig{} : EmbedConfig::load(a.config);
  if (a.threads) cfg.threads = *a.threads;
  if (a.dim_sample) cfg.dim_sample = *a.dim_sample;
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.dimension) cfg.n = *a.dimension;
  if (a.seed) cfg.seed = *a.seed;
  std::vector<MTuple> data = ingest_mtuples(a.data, schema);
  std::vector<MTuple> test;
  if (a.holdout) {
    if (*a.holdout >= data.size()) throw DataError("--holdout must leave training records");
    test.assign(data.end() - static_cast<std::ptrdiff_t>(*a.holdout), data.end());
    data.resize(data.size() - *a.holdout);
  }
  std::string algo = a.algorithm.empty() ? (cfg.threads > 1 || cfg.dim_sample ? "transcmeth" : "transmeth") : lowercase(a.algorithm);
  io.log->info("training {} on {} records, n={}, p={}", algo, data.size(), cfg.n, cfg.threads);
  TrainLog log;
  EmbeddingSpace s;
  if (algo == "transmeth") s = train_transmeth(data, schema, cfg, &log);
  else if (algo == "transcmeth") s = train_transcmeth(data, schema, cfg, &log);
  else throw DataError("--algorithm must be transmeth or transcmeth");
  s.save(a.out_file);
  if (!a.jsonl.empty()) s.export_jsonl(a.jsonl);
  if (!a.loss_log.empty()) {
    std::ofstream o(a.loss_log);
    if (!o) throw DataError(a.loss_log + ": cannot write file");
    o << "epoch,mean_loss,norm_error\n";
    for (std::size_t e = 0; e < log.mean_loss.size(); ++e)
      o << e << "," << format_number(log.mean_loss[e]) << "," << format_number(log.norm_error[e]) << "\n";
  }
  io.out << "space " << a.out_file << ": " << s.hh.size() << " entries, " << s.rows() << " vectors, n=" << s.n << ", "
         << to_string(s.provenance) << "\n";
  time_line(io.out, "train", log.seconds);
  if (!test.empty()) {
    Stopwatch clock;
    const EvalReport r = evaluate(s, test, a.j, a.k);
    io.out << "holdout " << test.size() << ": classified " << r.classified << ", rejected " << r.rejected
           << ", accuracy " << format_number(r.accuracy()) << "\n";
    time_line(io.out, "evaluate", clock.seconds());
  }
  return kExitOk;
}

struct ClassifyArgs {
  std::string space, record, schema;
  std::size_t j = 10, k = 5;
};

int do_classify(const ClassifyArgs& a, Outputs& io) {
  const EmbeddingSpace s = EmbeddingSpace::load(a.space);
  for (const auto& rec : read_records(a.record, schema_or_default(a.schema))) {
    try {
      const Classification c = classify(s, rec, a.j, a.k);
      io.out << rec.id << ": chance " << format_number(c.chance) << ", " << (c.positive ? "positive" : "negative");
      if (rec.label != Label::Unknown) io.out << " (labelled " << label_text(rec.label) << ")";
      io.out << "\n";
    } catch (const AbnormalValue& e) {
      io.out << rec.id << ": rejected, " << e.what() << "\n";
    } catch (const NoFiniteMatch& e) {
      io.out << rec.id << ": rejected, " << e.what() << "\n";
    }
  }
  return kExitOk;
}

int do_import(const std::string& vectors, const std::string& labels, const std::string& norm, const std::string& out_file,
              Outputs& io) {
  const std::string n = lowercase(norm);
  if (n != "l1" && n != "l2") throw DataError("--norm must be L1 or L2");
  const EmbeddingSpace s = import_vectors(vectors, labels, n == "l1" ? Norm::L1 : Norm::L2);
  s.save(out_file);
  io.out << "space " << out_file << ": " << s.hh.size() << " imported vectors, n=" << s.n << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string space, records, schema;
  std::size_t j = 5;
  std::vector<std::size_t> ks{5, 10, 20, 30, 40, 50};
};

int do_sweep(const SweepArgs& a, Outputs& io) {
  const EmbeddingSpace s = EmbeddingSpace::load(a.space);
  const auto records = read_records(a.records, schema_or_default(a.schema));
  std::vector<std::optional<VirtualVector>> vv;
  for (const auto& r : records) {
    try {
      vv.push_back(construct_virtual_vector(s, r, a.j));
    } catch (const AbnormalValue& e) {
      io.log->warn("{}: {}", r.id, e.what());
      vv.push_back(std::nullopt);
    } catch (const NoFiniteMatch& e) {
      io.log->warn("{}: {}", r.id, e.what());
      vv.push_back(std::nullopt);
    }
  }
  io.out << "K";
  for (const auto& r : records) io.out << "," << csv_cell(r.id);
  io.out << ",average\n";
  for (std::size_t k : a.ks) {
    io.out << k;
    double sum = 0;
    std::size_t n = 0;
    for (const auto& v : vv) {
      if (!v) {
        io.out << ",NA";
        continue;
      }
      const double c = knn_chance(s, v->r, k);
      sum += c;
      ++n;
      io.out << "," << format_number(c);
    }
    io.out << "," << (n ? format_number(sum / double(n)) : "NA") << "\n";
  }
  return kExitOk;
}

// ----- stats / argue / gain -----

struct StatsArgs {
  std::string data, schema, bmi = "standard";
  std::size_t sample = 5000;
  std::uint64_t seed = kDefaultSeed;
};

int do_stats(const StatsArgs& a, Outputs& io) {
  const DatasetSchema schema = schema_or_default(a.schema);
  const auto tuples = ingest_mtuples(a.data, schema);
  BadSpec spec = BadSpec::cardio();
  if (a.bmi == "as-printed") spec.bmi = BmiFormula::AsPrinted;
  else if (a.bmi != "standard") throw DataError("--bmi must be standard or as-printed");
  const std::size_t n = a.sample == 0 ? tuples.size() : a.sample;
  if (n > tuples.size())
    throw DataError("--sample " + std::to_string(n) + " exceeds the " + std::to_string(tuples.size()) + " records");
  RateReport r = bad_attribute_rates(tuples, schema, spec, n, a.seed);
  io.out << "sampled " << r.sampled << ", positives I = " << r.positives << "\n";
  auto rates = r.rates;
  std::stable_sort(rates.begin(), rates.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  for (const auto& [name, rate] : rates) io.out << name << ": " << format_number(rate) << "\n";
  return kExitOk;
}

struct ArgueArgs {
  std::string session, order, prefer, mode = "angelic", merge = "latest-wins", dot;
  bool ignore_sorts = false;
};

int do_argue(const ArgueArgs& a, Outputs& io) {
  const Session s = load_session(a.session);
  const ElementOrder order = load_order(a.order);
  Merge merge;
  if (a.merge == "latest-wins") merge = Merge::LatestWins;
  else if (a.merge == "union") merge = Merge::Union;
  else throw DataError("--merge must be latest-wins or union");
  auto profiles = competitor_profiles(s, merge, a.ignore_sorts ? std::set<std::string>{} : order.sorts());
  if (a.ignore_sorts)
    for (auto& p : profiles)
      for (auto& e : p.characteristics) e.sort.clear();
  for (const auto& p : profiles) {
    io.out << p.competitor << ": {";
    for (std::size_t i = 0; i < p.characteristics.size(); ++i) io.out << (i ? ", " : "") << p.characteristics[i].text();
    io.out << "}\n";
  }
  std::optional<std::string> pref;
  if (!a.prefer.empty()) pref = a.prefer;
  const Ranking r = rank_competitors(profiles, order, pref, parse_set_order(a.mode));
  for (const auto& e : r.edge_list()) io.out << e << "\n";
  if (!a.dot.empty()) {
    std::ofstream o(a.dot);
    if (!o) throw DataError(a.dot + ": cannot write file");
    o << r.to_dot();
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Outputs io{out, err, make_logger(err)};
  CLI::App app{"Logic programming over knowledge graph networks", "kgnp"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Solve a query over a program and a graph network");
  run_cmd->add_option("program", run.program, "Session program (.kgnpl); overrides the network's")->check(CLI::ExistingFile);
  run_cmd->add_option("--network", run.network, "Network file (TOML)")->check(CLI::ExistingFile);
  run_cmd->add_option("--query,-q", run.query, "Query text, e.g. \"? Snapshot(e).\"")->required();
  run_cmd->add_option("--max-solutions", run.max_solutions, "Stop after N answers (0: all)");
  run_cmd->add_option("--max-depth", run.max_depth, "Resolution depth limit");
  run_cmd->add_option("--seed", run.seed, "Sampling seed for Input");
  run_cmd->add_option("--sample", run.sample, "Records Input draws (0: all)");
  run_cmd->add_option("--format", run.format, "plain, csv or json")->check(CLI::IsMember({"plain", "csv", "json"}));
  run_cmd->add_option("--out", run.out_file, "Write answers and printed output here");
  run_cmd->add_flag("--trace", run.trace, "Show the resolution steps of each answer");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Embed a multi-triplet dataset");
  train_cmd->add_option("--data", train.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--schema", train.schema, "Schema file (default: cardiovascular layout)")->check(CLI::ExistingFile);
  train_cmd->add_option("--config", train.config, "Training config (TOML)")->check(CLI::ExistingFile);
  train_cmd->add_option("--algorithm", train.algorithm, "transmeth or transcmeth");
  train_cmd->add_option("--threads,-p", train.threads, "Workers p");
  train_cmd->add_option("--dim-sample,-v", train.dim_sample, "Dimensions each worker updates per loop");
  train_cmd->add_option("--epochs", train.epochs, "Training loops");
  train_cmd->add_option("--dimension,-n", train.dimension, "Vector dimension");
  train_cmd->add_option("--seed", train.seed, "Random seed");
  train_cmd->add_option("--holdout", train.holdout, "Evaluate on the last N records instead of training on them");
  train_cmd->add_option("-J", train.j, "Neighbours per attribute for holdout evaluation");
  train_cmd->add_option("-K", train.k, "Neighbours for holdout evaluation");
  train_cmd->add_option("--jsonl", train.jsonl, "Also export the space as JSON lines");
  train_cmd->add_option("--loss-log", train.loss_log, "Per-epoch loss CSV");
  train_cmd->add_option("--out", train.out_file, "Space file to write")->required();

  ClassifyArgs cls;
  auto* cls_cmd = app.add_subcommand("classify", "Classify records against a trained space");
  cls_cmd->add_option("--space", cls.space, "Space file")->required()->check(CLI::ExistingFile);
  cls_cmd->add_option("--record", cls.record, "CSV file, or one row: id;v1;...;vm")->required();
  cls_cmd->add_option("--schema", cls.schema, "Schema file")->check(CLI::ExistingFile);
  cls_cmd->add_option("-J", cls.j, "Stored triplets averaged per attribute");
  cls_cmd->add_option("-K", cls.k, "Nearest neighbours");

  std::string vec_file, label_file, norm = "L2", import_out;
  auto* imp_cmd = app.add_subcommand("import-vectors", "Build a space from precomputed vectors");
  imp_cmd->add_option("--vectors", vec_file, "Lines `id v1 v2 ...`")->required()->check(CLI::ExistingFile);
  imp_cmd->add_option("--labels", label_file, "Lines `id label`")->required()->check(CLI::ExistingFile);
  imp_cmd->add_option("--norm", norm, "L1 or L2");
  imp_cmd->add_option("--out", import_out, "Space file to write")->required();

  ArgueArgs argue;
  auto* argue_cmd = app.add_subcommand("argue", "Rank competitors of a consultation session");
  argue_cmd->add_option("--session", argue.session, "Session file")->required()->check(CLI::ExistingFile);
  argue_cmd->add_option("--order", argue.order, "Element order file")->required()->check(CLI::ExistingFile);
  argue_cmd->add_option("--prefer", argue.prefer, "Preferred sort, e.g. cure-rate");
  argue_cmd->add_option("--mode", argue.mode, "angelic, demonic or complete")
      ->check(CLI::IsMember({"angelic", "demonic", "complete"}));
  argue_cmd->add_option("--merge", argue.merge, "latest-wins or union")->check(CLI::IsMember({"latest-wins", "union"}));
  argue_cmd->add_option("--dot", argue.dot, "Write the comparison graph in DOT");
  argue_cmd->add_flag("--ignore-sorts", argue.ignore_sorts, "Compare values across sorts (the order alone decides)");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Bad-attribute rates over sampled positives");
  stats_cmd->add_option("--data", stats.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--schema", stats.schema, "Schema file")->check(CLI::ExistingFile);
  stats_cmd->add_option("--sample", stats.sample, "Records drawn (0: all)");
  stats_cmd->add_option("--seed", stats.seed, "Sampling seed");
  stats_cmd->add_option("--bmi", stats.bmi, "standard or as-printed")->check(CLI::IsMember({"standard", "as-printed"}));

  SweepArgs sweep;
  std::string k_list;
  auto* sweep_cmd = app.add_subcommand("sweep-k", "kNN chance per record over a list of K");
  sweep_cmd->add_option("--space", sweep.space, "Space file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--records", sweep.records, "CSV of test records")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--schema", sweep.schema, "Schema file")->check(CLI::ExistingFile);
  sweep_cmd->add_option("-J", sweep.j, "Stored triplets averaged per attribute");
  sweep_cmd->add_option("-K", k_list, "Comma-separated K values (default 5,10,20,30,40,50)");

  std::size_t synth_count = 2000;
  std::uint64_t synth_seed = kDefaultSeed;
  double separation = 1.0;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a two-cluster synthetic dataset in the cardiovascular layout");
  synth_cmd->add_option("--count", synth_count, "Records");
  synth_cmd->add_option("--seed", synth_seed, "Random seed");
  synth_cmd->add_option("--separation", separation, "Cluster gap, 0 to 1")->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--out", synth_out, "CSV to write (default: stdout)");

  std::vector<double> gain_args;
  auto* gain_cmd = app.add_subcommand("gain", "Accuracy-weighted speedup of a concurrent run");
  gain_cmd->add_option("values", gain_args, "acc_1 acc_p time_1 time_p")->required()->expected(4);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return do_run(run, io);
    if (*train_cmd) return do_train(train, io);
    if (*cls_cmd) return do_classify(cls, io);
    if (*imp_cmd) return do_import(vec_file, label_file, norm, import_out, io);
    if (*argue_cmd) return do_argue(argue, io);
    if (*stats_cmd) return do_stats(stats, io);
    if (*sweep_cmd) {
      if (!k_list.empty()) {
        sweep.ks.clear();
        for (const auto& f : split(k_list, ',')) {
          auto v = parse_number(trim(f));
          if (!v || *v < 1 || *v != std::floor(*v)) {
            err << "usage error: -K expects positive integers, got '" << f << "'\n";
            return kExitUsage;
          }
          sweep.ks.push_back(static_cast<std::size_t>(*v));
        }
      }
      return do_sweep(sweep, io);
    }
    if (*synth_cmd) {
      const std::string csv = synthetic_cardio_csv(synth_count, synth_seed, separation);
      if (synth_out.empty()) {
        out << csv;
      } else {
        std::ofstream o(synth_out);
        if (!o) throw DataError(synth_out + ": cannot write file");
        o << csv;
      }
      return kExitOk;
    }
    if (*gain_cmd) {
      out << format_number(gain(gain_args[0], gain_args[1], gain_args[2], gain_args[3])) << "\n";
      return kExitOk;
    }
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const EngineError& e) {
    err << "engine error: " << e.what() << "\n";
    return kExitEngine;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEngine;
  }
  return kExitUsage;
}

}  // namespace kgnp
