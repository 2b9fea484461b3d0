#include "pdsynth/dataset.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "pdsynth/errors.hpp"

namespace pdsynth {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) {
    // Strip surrounding whitespace and a trailing CR from CRLF files.
    const auto a = cur.find_first_not_of(" \t\r");
    const auto b = cur.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? "" : cur.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

Record Dataset::record(std::size_t r) const {
  const auto v = row(r);
  return Record{{v.begin(), v.end()}};
}

void Dataset::append(std::span<const Value> values) {
  if (values.size() != width()) {
    throw InputError("dataset: record width does not match schema");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= schema_->attribute(i).cardinality()) {
      throw InputError("dataset: value out of range for attribute " +
                       schema_->attribute(i).name);
    }
  }
  cells_.insert(cells_.end(), values.begin(), values.end());
  ++n_;
}

Dataset parse_dataset(std::istream& in, const Schema& schema,
                      const std::string& origin_name, LoadStats* stats) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError("dataset " + origin_name + ": empty file");
  }
  const auto header = split_csv_line(line);
  const std::size_t m = schema.attribute_count();
  if (header.size() != m) {
    throw InputError("dataset " + origin_name + ": header has " +
                     std::to_string(header.size()) + " columns, schema has " +
                     std::to_string(m));
  }
  // Column -> schema attribute mapping; header order is free.
  std::vector<std::size_t> col_to_attr(m);
  std::vector<bool> seen(m, false);
  for (std::size_t c = 0; c < m; ++c) {
    const auto a = schema.index_of(header[c]);
    if (a == Schema::npos || seen[a]) {
      throw InputError("dataset " + origin_name + ": header column '" +
                       header[c] + "' does not match the schema");
    }
    col_to_attr[c] = a;
    seen[a] = true;
  }

  Dataset data(schema);
  LoadStats local;
  std::vector<Value> rowbuf(m);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != m) {
      ++local.dropped;
      continue;
    }
    bool ok = true;
    for (std::size_t c = 0; c < m; ++c) {
      const Value v = schema.encode(col_to_attr[c], cells[c]);
      if (v == Schema::kInvalidValue) {
        ok = false;
        break;
      }
      rowbuf[col_to_attr[c]] = v;
    }
    if (!ok) {
      ++local.dropped;
      continue;
    }
    data.append(rowbuf);
    ++local.loaded;
  }
  if (local.loaded == 0) {
    throw InputError("dataset " + origin_name + ": no valid rows");
  }
  if (stats) *stats = local;
  return data;
}

Dataset load_dataset(const std::string& path, const Schema& schema,
                     LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw InputError("dataset: cannot open " + path);
  return parse_dataset(in, schema, path, stats);
}

void write_dataset_header(const Schema& schema, std::ostream& out) {
  for (std::size_t i = 0; i < schema.attribute_count(); ++i) {
    if (i) out << ",";
    out << schema.attribute(i).name;
  }
  out << "\n";
}

void write_record(const Schema& schema, std::span<const Value> row,
                  std::ostream& out) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ",";
    out << schema.decode(i, row[i]);
  }
  out << "\n";
}

void write_dataset(const Dataset& data, std::ostream& out) {
  write_dataset_header(data.schema(), out);
  for (std::size_t r = 0; r < data.size(); ++r) {
    write_record(data.schema(), data.row(r), out);
  }
}

Partition partition_dataset(const Dataset& data,
                            const PartitionFractions& fractions, Rng& rng) {
  const double fs = fractions.synthesis;
  const double ft = fractions.structure;
  const double fp = fractions.parameter;
  if (fs < 0 || ft < 0 || fp < 0 || fs + ft + fp > 1.0 + 1e-12) {
    throw InputError("partition: fractions must be nonnegative and sum to <= 1");
  }
  Partition out{Dataset(data.schema()), Dataset(data.schema()),
                Dataset(data.schema())};
  for (std::size_t r = 0; r < data.size(); ++r) {
    const double u = rng.next_unit();
    if (u < fs) {
      out.synthesis.append(data.row(r));
    } else if (u < fs + ft) {
      out.structure.append(data.row(r));
    } else if (u < fs + ft + fp) {
      out.parameter.append(data.row(r));
    }
    // otherwise the record is discarded
  }
  return out;
}

}  // namespace pdsynth
