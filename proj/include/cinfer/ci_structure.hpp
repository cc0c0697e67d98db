#pragma once

#include "cinfer/basic_set.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cinfer {

// Ordered triplet (X,Y|Z) of subsets; a CI statement X _||_ Y | Z.
struct Triplet {
  Subset x, y, z;

  bool is_disjoint() const { return pairwise_disjoint({x, y, z}); }
  bool is_elementary() const { return is_disjoint() && x.size() == 1 && y.size() == 1; }
  Triplet swapped() const { return {y, x, z}; }
  auto operator<=>(const Triplet&) const = default;
};

// Elementary triplet (i,j|K), stored canonically with i < j.
class ElementaryTriplet {
 public:
  ElementaryTriplet(int i, int j, Subset k) : i_(std::min(i, j)), j_(std::max(i, j)), k_(k) {
    if (i == j) throw std::invalid_argument("elementary triplet needs two distinct variables");
    if (k.contains(i) || k.contains(j))
      throw std::invalid_argument("conditioning set of an elementary triplet must avoid i and j");
  }

  int i() const { return i_; }
  int j() const { return j_; }
  Subset k() const { return k_; }
  Triplet as_triplet() const { return {Subset::singleton(i_), Subset::singleton(j_), k_}; }

  auto operator<=>(const ElementaryTriplet&) const = default;

 private:
  int i_, j_;
  Subset k_;
};

// Frozen bit layout: canonical triplets sorted by (i, j, K as integer).
class TripletIndex {
 public:
  static constexpr int kMaxVariables = 10;

  explicit TripletIndex(int n) : n_(n) {
    if (n < 1 || n > kMaxVariables) throw std::invalid_argument("unsupported basic set size");
    lookup_.assign(static_cast<std::size_t>(n) * n << n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Subset rest = Subset::full(n) - Subset::singleton(i) - Subset::singleton(j);
        for (std::uint32_t k = 0; k < (1u << n); ++k) {
          if (!Subset(k).subset_of(rest)) continue;
          const int bit = static_cast<int>(triplets_.size());
          triplets_.emplace_back(i, j, Subset(k));
          lookup_[slot(i, j, k)] = bit;
          lookup_[slot(j, i, k)] = bit;
        }
      }
  }

  static const TripletIndex& of(int n) {
    static const std::vector<TripletIndex> table = [] {
      std::vector<TripletIndex> t;
      for (int m = 1; m <= kMaxVariables; ++m) t.emplace_back(m);
      return t;
    }();
    if (n < 1 || n > kMaxVariables) throw std::invalid_argument("unsupported basic set size for CI structures");
    return table[static_cast<std::size_t>(n - 1)];
  }

  int variables() const { return n_; }
  int size() const { return static_cast<int>(triplets_.size()); }
  const ElementaryTriplet& at(int bit) const { return triplets_.at(static_cast<std::size_t>(bit)); }
  const std::vector<ElementaryTriplet>& triplets() const { return triplets_; }

  int bit(int i, int j, Subset k) const {
    const int b = lookup_[slot(i, j, k.bits())];
    if (b < 0) throw std::invalid_argument("not an elementary triplet");
    return b;
  }
  int bit(const ElementaryTriplet& t) const { return bit(t.i(), t.j(), t.k()); }

 private:
  std::size_t slot(int i, int j, std::uint32_t k) const {
    return ((static_cast<std::size_t>(i) * n_ + j) << n_) + k;
  }

  int n_;
  std::vector<ElementaryTriplet> triplets_;
  std::vector<int> lookup_;
};

// Elementary parts of (X,Y|Z): (i,j|K) for i in X, j in Y, Z <= K <= XYZ \ {i,j}.
inline std::vector<ElementaryTriplet> expand_to_elementary(Triplet t) {
  if (!t.is_disjoint()) throw std::invalid_argument("expand_to_elementary needs pairwise disjoint sets");
  std::set<ElementaryTriplet> out;
  const Subset all = t.x | t.y | t.z;
  for (int i : t.x.elements())
    for (int j : t.y.elements()) {
      const Subset free = all - t.z - Subset::singleton(i) - Subset::singleton(j);
      // enumerate subsets of `free`
      std::uint32_t f = free.bits();
      std::uint32_t sub = 0;
      do {
        out.emplace(i, j, t.z | Subset(sub));
        sub = (sub - f) & f;
      } while (sub != 0);
    }
  return {out.begin(), out.end()};
}

// Set of canonical elementary triplets over a basic set.
class CIStructure {
 public:
  CIStructure() = default;
  explicit CIStructure(BasicSet base) : base_(std::move(base)) {
    words_.assign(static_cast<std::size_t>((index().size() + 63) / 64), 0);
  }

  static CIStructure full(const BasicSet& base) {
    CIStructure s(base);
    for (int b = 0; b < s.capacity(); ++b) s.set_bit(b);
    return s;
  }
  // n = 4 only: bit b of `mask` is triplet b of the frozen layout.
  static CIStructure from_mask(const BasicSet& base, std::uint64_t mask) {
    CIStructure s(base);
    if (s.capacity() > 64) throw std::invalid_argument("mask form needs at most 64 triplets");
    if (s.capacity() < 64 && (mask >> s.capacity()) != 0)
      throw std::invalid_argument("mask has bits beyond the triplet count");
    s.words_[0] = mask;
    return s;
  }

  const BasicSet& base() const { return base_; }
  const TripletIndex& index() const { return TripletIndex::of(base_.size()); }
  int capacity() const { return index().size(); }

  std::uint64_t mask() const {
    if (capacity() > 64) throw std::logic_error("structure does not fit a 64-bit mask");
    return words_.empty() ? 0 : words_[0];
  }

  bool test_bit(int b) const { return (words_[static_cast<std::size_t>(b) / 64] >> (b % 64)) & 1u; }
  void set_bit(int b) { words_[static_cast<std::size_t>(b) / 64] |= std::uint64_t{1} << (b % 64); }
  void reset_bit(int b) { words_[static_cast<std::size_t>(b) / 64] &= ~(std::uint64_t{1} << (b % 64)); }

  bool contains(const ElementaryTriplet& t) const { return test_bit(index().bit(t)); }
  void insert(const ElementaryTriplet& t) { set_bit(index().bit(t)); }
  void erase(const ElementaryTriplet& t) { reset_bit(index().bit(t)); }

  // Disjoint compound statement holds iff its whole elementary expansion does.
  bool contains(const Triplet& t) const {
    for (const auto& e : expand_to_elementary(t))
      if (!contains(e)) return false;
    return true;
  }
  void insert(const Triplet& t) {
    for (const auto& e : expand_to_elementary(t)) insert(e);
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const { return count() == 0; }

  std::vector<ElementaryTriplet> members() const {
    std::vector<ElementaryTriplet> out;
    for (int b = 0; b < capacity(); ++b)
      if (test_bit(b)) out.push_back(index().at(b));
    return out;
  }

  bool subset_of(const CIStructure& o) const {
    check_same_base(o);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  // Image under the variable permutation i -> perm[i].
  CIStructure permuted(const std::vector<int>& perm) const {
    CIStructure out(base_);
    for (int b = 0; b < capacity(); ++b) {
      if (!test_bit(b)) continue;
      const auto& t = index().at(b);
      Subset k;
      for (int v : t.k().elements()) k |= Subset::singleton(perm[static_cast<std::size_t>(v)]);
      out.insert(ElementaryTriplet(perm[static_cast<std::size_t>(t.i())], perm[static_cast<std::size_t>(t.j())], k));
    }
    return out;
  }

  void check_same_base(const CIStructure& o) const {
    if (!(base_ == o.base_)) throw std::invalid_argument("CI structures over different basic sets");
  }

  bool operator==(const CIStructure& o) const { return base_ == o.base_ && words_ == o.words_; }
  bool operator<(const CIStructure& o) const {
    return std::lexicographical_compare(words_.rbegin(), words_.rend(), o.words_.rbegin(), o.words_.rend());
  }

 private:
  BasicSet base_;
  std::vector<std::uint64_t> words_;
};

inline CIStructure meet(const CIStructure& a, const CIStructure& b) {
  a.check_same_base(b);
  CIStructure out(a.base());
  for (int bit = 0; bit < a.capacity(); ++bit)
    if (a.test_bit(bit) && b.test_bit(bit)) out.set_bit(bit);
  return out;
}

// All images of `s` under variable permutations, deduplicated and sorted.
inline std::vector<CIStructure> orbit(const CIStructure& s) {
  std::vector<int> perm(static_cast<std::size_t>(s.base().size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<CIStructure> out;
  do {
    out.push_back(s.permuted(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- textual statements: "x _||_ y z | u" -----------------------------------

inline std::string format_vars(const BasicSet& base, Subset s) {
  std::string out;
  for (int i : s.elements()) {
    if (!out.empty()) out += ' ';
    out += base.name(i);
  }
  return out;
}

inline std::string format_statement(const BasicSet& base, const Triplet& t) {
  std::string out = format_vars(base, t.x) + " _||_ " + format_vars(base, t.y) + " |";
  if (!t.z.is_empty()) out += " " + format_vars(base, t.z);
  return out;
}

inline std::string format_statement(const BasicSet& base, const ElementaryTriplet& t) {
  return format_statement(base, t.as_triplet());
}

namespace detail {
inline Subset parse_var_list(const BasicSet& base, std::string_view text) {
  std::istringstream in{std::string(text)};
  Subset s;
  std::string tok;
  while (in >> tok) {
    const Subset v = Subset::singleton(base.index_of(tok));
    if (!s.disjoint(v)) throw std::invalid_argument("variable '" + tok + "' repeated in statement");
    s |= v;
  }
  return s;
}
}  // namespace detail

// Parses "<vars> _||_ <vars> | <vars>" with space-separated names; the
// conditioning part may be empty (or the "| ..." part omitted).
inline Triplet parse_statement(const BasicSet& base, std::string_view text) {
  const auto sep = text.find("_||_");
  if (sep == std::string_view::npos)
    throw std::invalid_argument("statement '" + std::string(text) + "' lacks '_||_'");
  const std::string_view lhs = text.substr(0, sep);
  std::string_view rest = text.substr(sep + 4);
  std::string_view rhs = rest, cond;
  if (const auto bar = rest.find('|'); bar != std::string_view::npos) {
    rhs = rest.substr(0, bar);
    cond = rest.substr(bar + 1);
  }
  return {detail::parse_var_list(base, lhs), detail::parse_var_list(base, rhs), detail::parse_var_list(base, cond)};
}

}  // namespace cinfer
