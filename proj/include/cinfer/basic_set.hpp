#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cinfer {

// Subset of a basic set, bit i <-> the i-th variable of the base.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint32_t bits) : bits_(bits) {}

  static constexpr Subset empty() { return Subset{}; }
  static constexpr Subset singleton(int i) { return Subset{std::uint32_t{1} << i}; }
  static constexpr Subset full(int n) {
    return Subset{n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1};
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(Subset other) const { return (bits_ & other.bits_) == 0; }

  constexpr Subset operator|(Subset o) const { return Subset{bits_ | o.bits_}; }
  constexpr Subset operator&(Subset o) const { return Subset{bits_ & o.bits_}; }
  constexpr Subset operator-(Subset o) const { return Subset{bits_ & ~o.bits_}; }
  constexpr Subset& operator|=(Subset o) { bits_ |= o.bits_; return *this; }
  constexpr Subset& operator&=(Subset o) { bits_ &= o.bits_; return *this; }
  constexpr auto operator<=>(const Subset&) const = default;

  // Complement relative to a base of n variables.
  constexpr Subset complement(int n) const { return full(n) - *this; }

  std::vector<int> elements() const {
    std::vector<int> out;
    for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

 private:
  std::uint32_t bits_ = 0;
};

inline bool pairwise_disjoint(std::initializer_list<Subset> sets) {
  std::uint32_t seen = 0;
  for (Subset s : sets) {
    if (seen & s.bits()) return false;
    seen |= s.bits();
  }
  return true;
}

// Ordered list of distinct variable labels.
class BasicSet {
 public:
  static constexpr int kMaxSize = 24;

  BasicSet() = default;
  explicit BasicSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("basic set must be non-empty");
    if (static_cast<int>(names_.size()) > kMaxSize)
      throw std::invalid_argument("basic set too large");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw std::invalid_argument("empty variable label");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j])
          throw std::invalid_argument("duplicate variable label '" + names_[i] + "'");
    }
  }
  BasicSet(std::initializer_list<const char*> names)
      : BasicSet(std::vector<std::string>(names.begin(), names.end())) {}

  // x, y, z, u: the labels used throughout the four-variable examples.
  static BasicSet xyzu() { return BasicSet{"x", "y", "z", "u"}; }

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  Subset all() const { return Subset::full(size()); }
  std::size_t power_set_size() const { return std::size_t{1} << names_.size(); }

  std::optional<int> find(std::string_view label) const {
    for (int i = 0; i < size(); ++i)
      if (names_[static_cast<std::size_t>(i)] == label) return i;
    return std::nullopt;
  }
  int index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw std::invalid_argument("unknown variable '" + std::string(label) + "'");
  }

  bool contains(Subset s) const { return s.subset_of(all()); }
  void check(Subset s) const {
    if (!contains(s)) throw std::out_of_range("subset mask out of range of the basic set");
  }

  Subset subset(std::initializer_list<std::string_view> labels) const {
    Subset s;
    for (auto l : labels) s |= Subset::singleton(index_of(l));
    return s;
  }
  Subset subset_of_labels(const std::vector<std::string>& labels) const {
    Subset s;
    for (const auto& l : labels) s |= Subset::singleton(index_of(l));
    return s;
  }

  // Labels concatenated in base order; "" for the empty set.
  std::string label(Subset s) const {
    std::string out;
    for (int i : s.elements()) out += names_[static_cast<std::size_t>(i)];
    return out;
  }

  // Inverse of label(): splits a concatenation of labels in any order.
  Subset parse_label(std::string_view text) const {
    Subset s;
    while (!text.empty()) {
      int best = -1;
      std::size_t best_len = 0;
      for (int i = 0; i < size(); ++i) {
        const auto& n = names_[static_cast<std::size_t>(i)];
        if (n.size() > best_len && text.substr(0, n.size()) == n) {
          best = i;
          best_len = n.size();
        }
      }
      if (best < 0)
        throw std::invalid_argument("cannot split subset label at '" + std::string(text) + "'");
      s |= Subset::singleton(best);
      text.remove_prefix(best_len);
    }
    return s;
  }

  bool operator==(const BasicSet&) const = default;

 private:
  std::vector<std::string> names_;
};

}  // namespace cinfer
