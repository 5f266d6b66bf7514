#include "dspass/weights.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "dspass/error.hpp"

namespace dspass {

namespace {

constexpr char kMagic[4] = {'D', 'S', 'P', 'W'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms unsupported");

template <typename T>
void put_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
  }
  out.append(reinterpret_cast<char*>(b), sizeof(T));
}

class Cursor {
 public:
  Cursor(const std::string& buf, const std::string& path)
      : buf_(buf), path_(path) {}

  template <typename T>
  T get_le() {
    need(sizeof(T));
    unsigned char b[sizeof(T)];
    std::memcpy(b, buf_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
        std::swap(b[i], b[sizeof(T) - 1 - i]);
      }
    }
    T v;
    std::memcpy(&v, b, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string get_bytes(std::size_t n) {
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void get_floats(float* dst, std::size_t count) {
    need(count * sizeof(float));
    std::memcpy(dst, buf_.data() + pos_, count * sizeof(float));
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < count; ++i) {
        char* p = reinterpret_cast<char*>(dst + i);
        std::swap(p[0], p[3]);
        std::swap(p[1], p[2]);
      }
    }
    pos_ += count * sizeof(float);
  }

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > buf_.size()) {
      throw FormatError("truncated weight container " + path_, pos_);
    }
  }
  const std::string& buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void NetworkWeights::add(const std::string& name,
                         std::vector<std::uint32_t> shape,
                         std::vector<float> data) {
  if (name.empty() || name.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw InvalidInput("parameter name empty or too long");
  }
  ParamEntry e{std::move(shape), std::move(data)};
  if (e.element_count() != e.data.size()) {
    throw InvalidInput("parameter '" + name + "' data length " +
                       std::to_string(e.data.size()) +
                       " does not match its shape");
  }
  if (table_.count(name)) {
    throw InvalidInput("duplicate parameter '" + name + "'");
  }
  order_.push_back(name);
  table_.emplace(name, std::move(e));
}

bool NetworkWeights::contains(const std::string& name) const {
  return table_.count(name) != 0;
}

const ParamEntry& NetworkWeights::at(const std::string& name) const {
  auto it = table_.find(name);
  if (it == table_.end()) {
    throw InvalidInput("missing parameter '" + name + "'");
  }
  return it->second;
}

ParamEntry& NetworkWeights::at(const std::string& name) {
  auto it = table_.find(name);
  if (it == table_.end()) {
    throw InvalidInput("missing parameter '" + name + "'");
  }
  return it->second;
}

void NetworkWeights::save(const std::string& path) const {
  std::string out;
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(order_.size()));
  for (const std::string& name : order_) {
    const ParamEntry& e = table_.at(name);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.append(name);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(e.shape.size()));
    for (std::uint32_t d : e.shape) put_le<std::uint32_t>(out, d);
    std::size_t float_bytes = e.data.size() * sizeof(float);
    if constexpr (std::endian::native == std::endian::little) {
      out.append(reinterpret_cast<const char*>(e.data.data()), float_bytes);
    } else {
      for (float f : e.data) put_le<float>(out, f);
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write weight container: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to weight container: " + path);
}

NetworkWeights NetworkWeights::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open weight container: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  Cursor cur(buf, path);

  std::string magic = cur.get_bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw FormatError("bad magic in weight container " + path, 0);
  }
  std::uint32_t version = cur.get_le<std::uint32_t>();
  if (version != kVersion) {
    throw FormatError("unsupported weight container version " +
                          std::to_string(version) + " in " + path,
                      4);
  }
  std::uint32_t count = cur.get_le<std::uint32_t>();

  NetworkWeights w;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::size_t name_off = cur.pos();
    std::uint16_t name_len = cur.get_le<std::uint16_t>();
    if (name_len == 0) {
      throw FormatError("empty parameter name in " + path, name_off);
    }
    std::string name = cur.get_bytes(name_len);
    std::uint8_t rank = cur.get_le<std::uint8_t>();
    std::vector<std::uint32_t> shape(rank);
    std::size_t elems = 1;
    for (int d = 0; d < rank; ++d) {
      shape[d] = cur.get_le<std::uint32_t>();
      elems *= shape[d];
    }
    std::vector<float> data(elems);
    cur.get_floats(data.data(), elems);
    w.add(name, std::move(shape), std::move(data));
  }
  if (!cur.at_end()) {
    throw FormatError("trailing bytes after last entry in " + path,
                      cur.pos());
  }
  return w;
}

}  // namespace dspass
