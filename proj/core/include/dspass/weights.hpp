#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dspass {

/// One named parameter array with its declared shape.
struct ParamEntry {
  std::vector<std::uint32_t> shape;
  std::vector<float> data;

  std::size_t element_count() const {
    std::size_t n = 1;
    for (std::uint32_t d : shape) n *= d;
    return n;
  }
  bool operator==(const ParamEntry&) const = default;
};

/// Named parameter table covering every convolution, normalization and
/// fully-connected layer of a network definition. Keys iterate in name
/// order; the serialized container preserves insertion order separately.
class NetworkWeights {
 public:
  void add(const std::string& name, std::vector<std::uint32_t> shape,
           std::vector<float> data);
  bool contains(const std::string& name) const;
  const ParamEntry& at(const std::string& name) const;
  ParamEntry& at(const std::string& name);
  std::size_t size() const { return order_.size(); }
  const std::vector<std::string>& names() const { return order_; }

  bool operator==(const NetworkWeights& o) const {
    return order_ == o.order_ && table_ == o.table_;
  }

  /// Container layout (little-endian): magic "DSPW", version u32, count u32;
  /// per entry: name length u16 + UTF-8 name, rank u8, dims u32 x rank, raw
  /// 32-bit floats. Round-trips bit-exactly.
  void save(const std::string& path) const;
  static NetworkWeights load(const std::string& path);

 private:
  std::vector<std::string> order_;
  std::map<std::string, ParamEntry> table_;
};

}  // namespace dspass
