#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pdsynth/rng.hpp"
#include "pdsynth/schema.hpp"

namespace pdsynth {

// One encoded row; values[i] indexes attribute i's value list.
struct Record {
  std::vector<Value> values;

  bool operator==(const Record& other) const = default;
};

// Immutable after construction; rows live in one flat buffer so the privacy
// test can scan them without pointer chasing.
class Dataset {
 public:
  explicit Dataset(const Schema& schema) : schema_(&schema) {}

  const Schema& schema() const { return *schema_; }
  std::size_t size() const { return n_; }
  std::size_t width() const { return schema_->attribute_count(); }

  std::span<const Value> row(std::size_t r) const {
    return {cells_.data() + r * width(), width()};
  }
  Record record(std::size_t r) const;

  void append(std::span<const Value> values);
  void append(const Record& rec) { append(std::span<const Value>(rec.values)); }
  void reserve(std::size_t rows) { cells_.reserve(rows * width()); }

 private:
  const Schema* schema_;
  std::vector<Value> cells_;
  std::size_t n_ = 0;
};

struct LoadStats {
  std::size_t loaded = 0;
  std::size_t dropped = 0;  // rows with unknown or missing cells
};

// CSV with a header row naming schema attributes (any column order). Cells
// that do not match a schema label drop the whole row.
Dataset load_dataset(const std::string& path, const Schema& schema,
                     LoadStats* stats = nullptr);
Dataset parse_dataset(std::istream& in, const Schema& schema,
                      const std::string& origin_name,
                      LoadStats* stats = nullptr);

// Header in schema order, then one decoded row per record.
void write_dataset(const Dataset& data, std::ostream& out);
void write_dataset_header(const Schema& schema, std::ostream& out);
void write_record(const Schema& schema, std::span<const Value> row,
                  std::ostream& out);

struct PartitionFractions {
  double synthesis = 0.57;
  double structure = 0.215;
  double parameter = 0.215;
};

struct Partition {
  Dataset synthesis;
  Dataset structure;
  Dataset parameter;
};

// Assigns each record independently to one of the three subsets (or to none
// when the fractions sum below one). Reproducible from the rng state.
Partition partition_dataset(const Dataset& data,
                            const PartitionFractions& fractions, Rng& rng);

}  // namespace pdsynth
