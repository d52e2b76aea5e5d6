#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgnp/error.hpp"
#include "kgnp/kg_store.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

namespace toml {
class Table;
}

enum class Norm { L1, L2 };
enum class Provenance { TransMETH, TransCMETH, Imported };
const char* to_string(Norm n);
const char* to_string(Provenance p);

struct EmbedConfig {
  std::size_t n = 64;
  std::vector<double> weights;  // empty: the dataset schema's weights
  double margin = 1.0;
  double learning_rate = 0.001;
  Norm norm = Norm::L1;
  double sampling = 0.04;  // c: minibatch fraction of each label class
  std::size_t epochs = 100;
  std::uint64_t seed = 1;
  std::size_t corrupt_min = 1;
  std::size_t corrupt_max = 0;  // 0: m
  std::size_t threads = 1;      // p
  std::size_t dim_sample = 0;   // v; 0: n
  bool positive_only = true;    // concurrent variant renews only the sampled tuple's vectors

  /// Throws DataError on out-of-range fields.
  void validate(std::size_t m) const;
  /// Reads an optional [embedding] table; missing keys keep the defaults.
  static EmbedConfig from_toml(const toml::Table& t);
  static EmbedConfig load(const std::string& path);
};

/// A record of the hash index HH.
struct HHEntry {
  std::string id;
  Label label = Label::Unknown;
  std::vector<double> values;         // raw attribute values; empty for imported spaces
  std::vector<std::uint32_t> rows;    // local vector rows; empty for imported spaces
  std::vector<double> combined;       // sum of w_i t_i, or the imported vector
};

/// Attribute triplets of a tuple as parameter rows, plus its label.
struct EncodedTuple {
  std::vector<std::uint32_t> rows;
  Label label = Label::Unknown;
};

class EmbeddingSpace {
 public:
  std::size_t n = 0;
  Norm norm = Norm::L1;
  Provenance provenance = Provenance::TransMETH;
  std::vector<AttributeSpec> attributes;
  std::vector<double> weights;  // normalized, one per attribute
  std::vector<double> params;   // row-major, rows() x n
  std::vector<std::vector<std::pair<double, std::uint32_t>>> vocab;  // per attribute, sorted by tail value
  std::uint32_t label_rows[2] = {0, 0};                // negative, positive
  std::vector<HHEntry> hh;

  std::size_t m() const { return attributes.size(); }
  std::size_t rows() const { return n ? params.size() / n : 0; }
  std::span<const double> row(std::uint32_t r) const { return {params.data() + std::size_t(r) * n, n}; }
  std::span<double> row(std::uint32_t r) { return {params.data() + std::size_t(r) * n, n}; }
  std::uint32_t label_row(Label l) const { return label_rows[l == Label::Positive ? 1 : 0]; }

  const HHEntry* find(std::string_view id) const;
  std::optional<std::uint32_t> row_of(std::size_t attribute, double value) const;
  /// Attribute and vocab position of a local-vector row.
  std::pair<std::size_t, std::size_t> locate(std::uint32_t row) const { return row_pos_.at(row); }
  /// HH indices sorted by the attribute's raw value, ties by insertion order.
  const std::vector<std::pair<double, std::uint32_t>>& by_value(std::size_t attribute) const {
    return by_value_.at(attribute);
  }
  /// Throws DataError "unknown triplet" for a value never seen in training.
  EncodedTuple encode(const MTuple& t) const;
  std::vector<double> combined(const std::vector<std::uint32_t>& rows) const;
  double distance(std::span<const double> a, std::span<const double> b) const;
  /// Must follow any change to vocab or hh.
  void reindex();

  /// Binary layout: "KGNPSPC\0", version, JSON metadata, float32 rows,
  /// HH entries, then an id to byte-offset index.
  void save(const std::string& path) const;
  static EmbeddingSpace load(const std::string& path);
  /// One JSON object per line: a header, then every HH entry.
  void export_jsonl(const std::string& path) const;

 private:
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::pair<std::size_t, std::size_t>> row_pos_;
  std::vector<std::vector<std::pair<double, std::uint32_t>>> by_value_;
};

struct TrainLog {
  std::vector<double> mean_loss;   // per epoch, over the epoch's pairs
  std::vector<double> norm_error;  // per epoch, max |‖t‖ - 1| right after normalization
  double seconds = 0;
};

/// Vocabulary scan plus uniform(-6/sqrt(n), 6/sqrt(n)) draws from `seed`.
EmbeddingSpace initialize(const std::vector<MTuple>& data, const DatasetSchema& schema, const EmbedConfig& config);

/// Copy of `t` with `k` attribute rows swapped for other values of the same
/// attribute and the label flipped. Attributes with one value are skipped;
/// DataError when fewer than k can change.
EncodedTuple corrupt(const EmbeddingSpace& s, const EncodedTuple& t, std::size_t k, Rng& rng);
MTuple corrupt(const EmbeddingSpace& s, const MTuple& t, std::size_t k, Rng& rng);

/// [margin + d(sum w_i t_i - l) - d(sum w_i t'_i - l')]+
double margin_loss(const EmbeddingSpace& s, const EncodedTuple& pos, const EncodedTuple& neg, double margin);
/// Dense subgradient over params (same layout).
std::vector<double> margin_loss_gradient(const EmbeddingSpace& s, const EncodedTuple& pos, const EncodedTuple& neg,
                                         double margin);

EmbeddingSpace train_transmeth(const std::vector<MTuple>& data, const DatasetSchema& schema, EmbedConfig config,
                               TrainLog* log = nullptr);
EmbeddingSpace train_transcmeth(const std::vector<MTuple>& data, const DatasetSchema& schema, EmbedConfig config,
                                TrainLog* log = nullptr);

class AbnormalValue : public DataError {
 public:
  AbnormalValue(const std::string& attribute, const std::string& msg) : DataError(msg), attribute_(attribute) {}
  const std::string& attribute() const { return attribute_; }

 private:
  std::string attribute_;
};

class NoFiniteMatch : public EngineError {
 public:
  using EngineError::EngineError;
};

struct VirtualVector {
  std::vector<double> r;
  std::vector<std::vector<std::string>> contributors;  // per attribute, HH ids averaged
  std::string subject;
};

/// Throws AbnormalValue for a value outside its normal interval and
/// NoFiniteMatch when a finite attribute has no stored equal value.
VirtualVector construct_virtual_vector(const EmbeddingSpace& s, const MTuple& record, std::size_t j);

/// HH indices of the k combined vectors nearest to r, ties by insertion order.
std::vector<std::size_t> nearest(const EmbeddingSpace& s, std::span<const double> r, std::size_t k);
double knn_chance(const EmbeddingSpace& s, std::span<const double> r, std::size_t k);

struct Classification {
  double chance = 0;
  bool positive = false;  // chance >= 0.5
  std::vector<std::size_t> neighbors;
};
Classification classify(const EmbeddingSpace& s, const MTuple& record, std::size_t j, std::size_t k);

struct EvalReport {
  std::size_t classified = 0, rejected = 0, correct = 0;
  double accuracy() const { return classified ? double(correct) / double(classified) : 0.0; }
};
/// Records whose values are abnormal or unmatched count as rejected.
EvalReport evaluate(const EmbeddingSpace& s, const std::vector<MTuple>& tests, std::size_t j, std::size_t k);

/// Vector lines `id v1 v2 ...` (spaces or commas), label lines `id label`
/// with label 1/0 or positive/negative. `#` starts a comment.
EmbeddingSpace import_vectors(const std::string& vectors_path, const std::string& labels_path, Norm norm = Norm::L2);
EmbeddingSpace import_vectors_text(std::string_view vectors, std::string_view labels, Norm norm = Norm::L2);

/// (acc_p / acc_1) * (time_1 / time_p), evaluated as (acc_p * time_1) / (acc_1 * time_p).
double gain(double acc_1, double acc_p, double time_1, double time_p);

}  // namespace kgnp
