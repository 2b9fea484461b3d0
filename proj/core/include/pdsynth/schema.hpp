#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdsynth {

using Value = std::uint16_t;

enum class BucketMode { Identity, FixedWidth, Explicit };

// Maps each value index of an attribute onto a coarser bucket index. Used
// only while learning; records keep their raw values everywhere else.
struct BucketSpec {
  BucketMode mode = BucketMode::Identity;
  double width = 0.0;   // FixedWidth only
  double origin = 0.0;  // FixedWidth only
  std::vector<Value> assignment;  // value index -> bucket index, total
  Value bucket_count = 0;
};

struct AttributeSpec {
  std::string name;
  std::vector<std::string> values;  // ordered labels; index == encoded value
  BucketSpec buckets;

  Value cardinality() const { return static_cast<Value>(values.size()); }
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSpec> attributes);

  std::size_t attribute_count() const { return attributes_.size(); }
  const AttributeSpec& attribute(std::size_t i) const { return attributes_[i]; }
  const std::vector<AttributeSpec>& attributes() const { return attributes_; }

  // Index of a named attribute, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const std::string& name) const;

  // Encoded value for a cell label, or npos-like sentinel kInvalidValue.
  static constexpr Value kInvalidValue = static_cast<Value>(-1);
  Value encode(std::size_t attr, const std::string& label) const;
  const std::string& decode(std::size_t attr, Value v) const;

  Value bucket_of(std::size_t attr, Value v) const;
  Value bucket_count(std::size_t attr) const;

 private:
  std::vector<AttributeSpec> attributes_;
  std::vector<std::unordered_map<std::string, Value>> encoders_;
};

// Parses the schema text format: one block per attribute,
//
//   attribute <name>
//   values <label>,<label>,...
//   bucketizer identity | width:<w>,origin:<o> | explicit:<label>=<b>,...
//   end
//
// Lines beginning with '#' are comments. The bucketizer line is optional and
// defaults to identity.
Schema load_schema(const std::string& path);
Schema parse_schema(std::istream& in, const std::string& origin_name);

void write_schema(const Schema& schema, std::ostream& out);

}  // namespace pdsynth
