#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace npalg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A database constant: an uninterpreted symbol, an integer, or a text value.
/// Constants of different kinds are never equal. The total order
/// (integer < text < symbol, then value order within a kind) exists only to
/// give relations a deterministic iteration order.
class Constant {
 public:
  enum class Kind { Int, Text, Symbol };

  static Constant integer(std::int64_t v) { return Constant(Kind::Int, v, {}); }
  static Constant text(std::string v) { return Constant(Kind::Text, 0, std::move(v)); }
  static Constant symbol(std::string v) { return Constant(Kind::Symbol, 0, std::move(v)); }

  Kind kind() const { return kind_; }
  bool is_int() const { return kind_ == Kind::Int; }

  std::int64_t as_int() const {
    if (kind_ != Kind::Int) throw Error("constant is not an integer: " + to_string());
    return int_;
  }
  const std::string& as_string() const { return str_; }

  bool operator==(const Constant& o) const {
    return kind_ == o.kind_ && int_ == o.int_ && str_ == o.str_;
  }
  bool operator!=(const Constant& o) const { return !(*this == o); }
  bool operator<(const Constant& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_;
    if (kind_ == Kind::Int) return int_ < o.int_;
    return str_ < o.str_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Int: return std::to_string(int_);
      case Kind::Text: return "\"" + str_ + "\"";
      default: return str_;
    }
  }

  std::size_t hash() const {
    std::size_t h = std::hash<int>()(static_cast<int>(kind_));
    h ^= std::hash<std::int64_t>()(int_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>()(str_) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

 private:
  Constant(Kind k, std::int64_t i, std::string s) : kind_(k), int_(i), str_(std::move(s)) {}
  Kind kind_;
  std::int64_t int_;
  std::string str_;
};

using Tuple = std::vector<Constant>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const {
    std::size_t h = t.size();
    for (const auto& c : t) h ^= c.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace npalg
