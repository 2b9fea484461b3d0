#include "pdsynth/schema.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pdsynth/errors.hpp"

namespace pdsynth {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("schema: cannot parse number '" + s + "' in " + what);
  }
}

// Buckets of the form [origin + i*width, origin + (i+1)*width). A label
// exactly on a boundary opens the next bucket, so width 10 from 17 puts 26
// in bucket 0 and 27 in bucket 1.
void build_fixed_width(AttributeSpec& attr) {
  auto& b = attr.buckets;
  if (b.width <= 0.0) throw InputError("schema: bucket width must be positive");
  b.assignment.resize(attr.values.size());
  Value max_bucket = 0;
  for (std::size_t v = 0; v < attr.values.size(); ++v) {
    const double x = parse_number(attr.values[v], "attribute " + attr.name);
    if (x < b.origin) {
      throw InputError("schema: value '" + attr.values[v] + "' of attribute " +
                       attr.name + " lies below bucketizer origin");
    }
    const auto idx = static_cast<Value>(std::floor((x - b.origin) / b.width));
    b.assignment[v] = idx;
    max_bucket = std::max(max_bucket, idx);
  }
  b.bucket_count = static_cast<Value>(max_bucket + 1);
}

void validate_buckets(const AttributeSpec& attr) {
  const auto& b = attr.buckets;
  if (b.bucket_count == 0 || b.bucket_count > attr.cardinality()) {
    throw InputError("schema: attribute " + attr.name +
                     " has invalid bucket count");
  }
  if (b.assignment.size() != attr.values.size()) {
    throw InputError("schema: attribute " + attr.name +
                     " bucket assignment is not total");
  }
  std::vector<bool> hit(b.bucket_count, false);
  for (Value idx : b.assignment) {
    if (idx >= b.bucket_count) {
      throw InputError("schema: attribute " + attr.name +
                       " assigns a value outside its bucket range");
    }
    hit[idx] = true;
  }
  if (!std::all_of(hit.begin(), hit.end(), [](bool h) { return h; })) {
    throw InputError("schema: attribute " + attr.name +
                     " leaves an empty bucket (not surjective)");
  }
}

}  // namespace

Schema::Schema(std::vector<AttributeSpec> attributes)
    : attributes_(std::move(attributes)) {
  if (attributes_.size() < 2) {
    throw InputError("schema: need at least two attributes");
  }
  encoders_.resize(attributes_.size());
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    auto& attr = attributes_[i];
    if (attr.values.size() < 2) {
      throw InputError("schema: attribute " + attr.name +
                       " must have cardinality >= 2");
    }
    if (attr.values.size() > 60000) {
      throw InputError("schema: attribute " + attr.name + " is too wide");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (attributes_[j].name == attr.name) {
        throw InputError("schema: duplicate attribute name " + attr.name);
      }
    }
    if (attr.buckets.mode == BucketMode::Identity) {
      attr.buckets.assignment.resize(attr.values.size());
      for (std::size_t v = 0; v < attr.values.size(); ++v) {
        attr.buckets.assignment[v] = static_cast<Value>(v);
      }
      attr.buckets.bucket_count = attr.cardinality();
    } else if (attr.buckets.mode == BucketMode::FixedWidth) {
      build_fixed_width(attr);
    }
    validate_buckets(attr);
    auto& enc = encoders_[i];
    for (std::size_t v = 0; v < attr.values.size(); ++v) {
      if (!enc.emplace(attr.values[v], static_cast<Value>(v)).second) {
        throw InputError("schema: attribute " + attr.name +
                         " repeats value label '" + attr.values[v] + "'");
      }
    }
  }
}

std::size_t Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return npos;
}

Value Schema::encode(std::size_t attr, const std::string& label) const {
  const auto& enc = encoders_[attr];
  const auto it = enc.find(label);
  return it == enc.end() ? kInvalidValue : it->second;
}

const std::string& Schema::decode(std::size_t attr, Value v) const {
  return attributes_[attr].values[v];
}

Value Schema::bucket_of(std::size_t attr, Value v) const {
  return attributes_[attr].buckets.assignment[v];
}

Value Schema::bucket_count(std::size_t attr) const {
  return attributes_[attr].buckets.bucket_count;
}

Schema parse_schema(std::istream& in, const std::string& origin_name) {
  std::vector<AttributeSpec> attrs;
  AttributeSpec cur;
  bool open = false;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw InputError("schema " + origin_name + ":" + std::to_string(lineno) +
                     ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find_first_of(" \t");
    const std::string key = sp == std::string::npos ? line : line.substr(0, sp);
    const std::string rest =
        sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    if (key == "attribute") {
      if (open) fail("missing 'end' before new attribute");
      if (rest.empty()) fail("attribute needs a name");
      cur = AttributeSpec{};
      cur.name = rest;
      open = true;
    } else if (key == "values") {
      if (!open) fail("'values' outside attribute block");
      cur.values = split(rest, ',');
      if (cur.values.empty() || (cur.values.size() == 1 && cur.values[0].empty()))
        fail("empty value list");
    } else if (key == "bucketizer") {
      if (!open) fail("'bucketizer' outside attribute block");
      if (rest == "identity") {
        cur.buckets.mode = BucketMode::Identity;
      } else if (rest.rfind("width:", 0) == 0) {
        cur.buckets.mode = BucketMode::FixedWidth;
        for (const auto& part : split(rest, ',')) {
          if (part.rfind("width:", 0) == 0) {
            cur.buckets.width = parse_number(part.substr(6), cur.name);
          } else if (part.rfind("origin:", 0) == 0) {
            cur.buckets.origin = parse_number(part.substr(7), cur.name);
          } else {
            fail("unknown bucketizer field '" + part + "'");
          }
        }
      } else if (rest.rfind("explicit:", 0) == 0) {
        cur.buckets.mode = BucketMode::Explicit;
        if (cur.values.empty()) fail("'values' must precede explicit bucketizer");
        cur.buckets.assignment.assign(cur.values.size(), Schema::kInvalidValue);
        Value max_bucket = 0;
        for (const auto& pair : split(rest.substr(9), ',')) {
          const auto eq = pair.find('=');
          if (eq == std::string::npos) fail("explicit entry needs label=bucket");
          const std::string label = trim(pair.substr(0, eq));
          const auto it =
              std::find(cur.values.begin(), cur.values.end(), label);
          if (it == cur.values.end()) fail("unknown value label '" + label + "'");
          const auto b = static_cast<Value>(
              parse_number(trim(pair.substr(eq + 1)), cur.name));
          cur.buckets.assignment[it - cur.values.begin()] = b;
          max_bucket = std::max(max_bucket, b);
        }
        for (std::size_t v = 0; v < cur.values.size(); ++v) {
          if (cur.buckets.assignment[v] == Schema::kInvalidValue) {
            fail("value '" + cur.values[v] + "' has no bucket");
          }
        }
        cur.buckets.bucket_count = static_cast<Value>(max_bucket + 1);
      } else {
        fail("unknown bucketizer '" + rest + "'");
      }
    } else if (key == "end") {
      if (!open) fail("stray 'end'");
      attrs.push_back(std::move(cur));
      open = false;
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (open) throw InputError("schema " + origin_name + ": unterminated block");
  return Schema(std::move(attrs));
}

Schema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("schema: cannot open " + path);
  return parse_schema(in, path);
}

void write_schema(const Schema& schema, std::ostream& out) {
  for (const auto& attr : schema.attributes()) {
    out << "attribute " << attr.name << "\n";
    out << "values ";
    for (std::size_t v = 0; v < attr.values.size(); ++v) {
      if (v) out << ",";
      out << attr.values[v];
    }
    out << "\n";
    switch (attr.buckets.mode) {
      case BucketMode::Identity:
        out << "bucketizer identity\n";
        break;
      case BucketMode::FixedWidth:
        out << "bucketizer width:" << attr.buckets.width
            << ",origin:" << attr.buckets.origin << "\n";
        break;
      case BucketMode::Explicit: {
        out << "bucketizer explicit:";
        for (std::size_t v = 0; v < attr.values.size(); ++v) {
          if (v) out << ",";
          out << attr.values[v] << "=" << attr.buckets.assignment[v];
        }
        out << "\n";
        break;
      }
    }
    out << "end\n";
  }
}

}  // namespace pdsynth
