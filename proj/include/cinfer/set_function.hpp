#pragma once

#include "cinfer/basic_set.hpp"
#include "cinfer/ci_structure.hpp"
#include "cinfer/rational.hpp"

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cinfer {

template <typename T>
constexpr double default_tolerance() {
  return NumericTraits<T>::exact ? 0.0 : 1e-9;
}

// Real-valued function on the power set of a basic set, indexed by Subset.
template <typename T>
class SetFunction {
 public:
  using value_type = T;

  SetFunction() = default;
  explicit SetFunction(BasicSet base) : base_(std::move(base)), values_(base_.power_set_size(), T(0)) {}
  SetFunction(BasicSet base, const std::function<T(Subset)>& f) : SetFunction(std::move(base)) {
    for (std::size_t s = 0; s < values_.size(); ++s) values_[s] = f(Subset(static_cast<std::uint32_t>(s)));
  }

  static SetFunction zero(const BasicSet& base) { return SetFunction(base); }

  // Indicator of the supersets of {i}.
  static SetFunction up_indicator(const BasicSet& base, int i) {
    return SetFunction(base, [i](Subset s) { return T(s.contains(i) ? 1 : 0); });
  }

  // Basis vector delta_T of R^{P(N)}.
  static SetFunction indicator(const BasicSet& base, Subset t) {
    return SetFunction(base, [t](Subset s) { return T(s == t ? 1 : 0); });
  }

  const BasicSet& base() const { return base_; }
  const std::vector<T>& values() const { return values_; }

  const T& operator()(Subset s) const {
    base_.check(s);
    return values_[s.bits()];
  }
  void set(Subset s, T v) {
    base_.check(s);
    values_[s.bits()] = std::move(v);
  }

  SetFunction& operator+=(const SetFunction& o) {
    check_same_base(o);
    for (std::size_t s = 0; s < values_.size(); ++s) values_[s] += o.values_[s];
    return *this;
  }
  SetFunction& operator-=(const SetFunction& o) {
    check_same_base(o);
    for (std::size_t s = 0; s < values_.size(); ++s) values_[s] -= o.values_[s];
    return *this;
  }
  SetFunction& operator*=(const T& c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  friend SetFunction operator+(SetFunction a, const SetFunction& b) { return a += b; }
  friend SetFunction operator-(SetFunction a, const SetFunction& b) { return a -= b; }
  friend SetFunction operator*(const T& c, SetFunction a) { return a *= c; }

  bool operator==(const SetFunction&) const = default;

  template <typename U>
  SetFunction<U> convert() const {
    SetFunction<U> out(base_);
    for (std::size_t s = 0; s < values_.size(); ++s) {
      if constexpr (std::is_same_v<U, double>)
        out.set(Subset(static_cast<std::uint32_t>(s)), to_double(values_[s]));
      else
        out.set(Subset(static_cast<std::uint32_t>(s)), U(values_[s]));
    }
    return out;
  }

  void check_same_base(const SetFunction& o) const {
    if (!(base_ == o.base_)) throw std::invalid_argument("set functions over different basic sets");
  }

 private:
  BasicSet base_;
  std::vector<T> values_;
};

// h(XZ) + h(YZ) - h(XYZ) - h(Z); any triplet, disjoint or not.
template <typename T>
T delta(const SetFunction<T>& h, Subset x, Subset y, Subset z) {
  return h(x | z) + h(y | z) - h(x | y | z) - h(z);
}

template <typename T>
T delta(const SetFunction<T>& h, const Triplet& t) {
  return delta(h, t.x, t.y, t.z);
}

inline void require_disjoint_xyzu(Subset x, Subset y, Subset z, Subset u) {
  if (!pairwise_disjoint({x, y, z, u}))
    throw std::invalid_argument("Ingleton expression needs pairwise disjoint X, Y, Z, U");
}

// Ingleton expression for (X,Y|Z,U).
template <typename T>
T ingleton(const SetFunction<T>& h, Subset x, Subset y, Subset z, Subset u) {
  require_disjoint_xyzu(x, y, z, u);
  return -h(x | y) + h(x | z) + h(x | u) + h(y | z) + h(y | u) + h(z | u)  //
         - h(z) - h(u) - h(x | z | u) - h(y | z | u);
}

struct SignedDelta {
  int sign;  // +1 or -1
  Triplet triplet;
};

// Right-hand side of the k-th rewriting of the Ingleton expression as four
// difference terms (three added, one subtracted).
inline std::array<SignedDelta, 4> mask_terms(int k, Subset x, Subset y, Subset z, Subset u) {
  const Subset none;
  switch (k) {
    case 1:
      return {{{+1, {z, u, x}}, {+1, {z, u, y}}, {+1, {x, y, none}}, {-1, {z, u, none}}}};
    case 2:
      return {{{+1, {z, u, y}}, {+1, {x, z, u}}, {+1, {x, y, none}}, {-1, {x, z, none}}}};
    case 3:
      return {{{+1, {x, y, z}}, {+1, {x, z, u}}, {+1, {z, u, y}}, {-1, {x, z, y}}}};
    case 4:
      return {{{+1, {x, y, z}}, {+1, {x, y, u}}, {+1, {z, u, x | y}}, {-1, {x, y, z | u}}}};
    case 5:
      return {{{+1, {x, y, z}}, {+1, {x, z, u}}, {+1, {z, u, x | y}}, {-1, {x, z, y | u}}}};
    default:
      throw std::invalid_argument("mask index must be in 1..5");
  }
}

template <typename T>
T mask_form(const SetFunction<T>& h, int k, Subset x, Subset y, Subset z, Subset u) {
  require_disjoint_xyzu(x, y, z, u);
  T sum(0);
  for (const auto& term : mask_terms(k, x, y, z, u)) {
    if (term.sign > 0)
      sum += delta(h, term.triplet);
    else
      sum -= delta(h, term.triplet);
  }
  return sum;
}

template <typename T>
struct CheckWitness {
  bool ok = true;
  std::optional<Triplet> violating_triplet;
  T value{};
};

// Checks h(empty) = 0, every elementary inequality Delta(i,j|K) >= 0 and every
// Delta(i,i|N\i) >= 0; these generate all Shannon inequalities. With
// `exhaustive` every triplet (X,Y|Z) of subsets is checked instead.
template <typename T>
CheckWitness<T> is_polymatroid(const SetFunction<T>& h, double tol = default_tolerance<T>(),
                               bool exhaustive = false) {
  using Tr = NumericTraits<T>;
  const int n = h.base().size();
  const Subset all = h.base().all();
  CheckWitness<T> w;
  const T at_empty = h(Subset{});
  if (!Tr::is_zero(at_empty, tol)) {
    w.ok = false;
    w.violating_triplet = Triplet{};
    w.value = at_empty < T(0) ? at_empty : T(-at_empty);
    return w;
  }
  auto check = [&](const Triplet& t) {
    T v = delta(h, t);
    if (Tr::is_negative(v, tol)) {
      w.ok = false;
      w.violating_triplet = t;
      w.value = v;
      return false;
    }
    return true;
  };
  if (exhaustive) {
    const std::uint32_t m = std::uint32_t{1} << n;
    for (std::uint32_t x = 0; x < m; ++x)
      for (std::uint32_t y = 0; y < m; ++y)
        for (std::uint32_t z = 0; z < m; ++z)
          if (!check({Subset(x), Subset(y), Subset(z)})) return w;
    return w;
  }
  for (int i = 0; i < n; ++i) {
    const Subset si = Subset::singleton(i);
    if (!check({si, si, all - si})) return w;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Subset rest = all - Subset::singleton(i) - Subset::singleton(j);
      std::uint32_t sub = 0;
      do {
        if (!check({Subset::singleton(i), Subset::singleton(j), Subset(sub)})) return w;
        sub = (sub - rest.bits()) & rest.bits();
      } while (sub != 0);
    }
  return w;
}

template <typename T>
bool is_matroid(const SetFunction<T>& h, double tol = default_tolerance<T>()) {
  if (!is_polymatroid(h, tol).ok) return false;
  for (std::uint32_t s = 0; s < h.base().power_set_size(); ++s) {
    const T& v = h(Subset(s));
    if (!NumericTraits<T>::is_integer(v)) return false;
    if (v < T(0) || v > T(Subset(s).size())) return false;
  }
  return true;
}

// Delta h(i,i|N\i) = h(N) - h(N\i).
template <typename T>
T tightness_gap(const SetFunction<T>& h, int i) {
  const Subset si = Subset::singleton(i);
  return delta(h, si, si, h.base().all() - si);
}

template <typename T>
bool is_tight(const SetFunction<T>& h, double tol = default_tolerance<T>()) {
  for (int i = 0; i < h.base().size(); ++i)
    if (!NumericTraits<T>::is_zero(tightness_gap(h, i), tol)) return false;
  return true;
}

template <typename T>
SetFunction<T> tighten(const SetFunction<T>& h, double tol = default_tolerance<T>()) {
  if (!is_polymatroid(h, tol).ok) throw std::invalid_argument("tighten needs a polymatroid");
  SetFunction<T> out = h;
  for (int i = 0; i < h.base().size(); ++i)
    out -= tightness_gap(h, i) * SetFunction<T>::up_indicator(h.base(), i);
  return out;
}

// Elementary triplets (i,j|K) with |Delta h(i,j|K)| <= tol.
template <typename T>
CIStructure induced_ci_structure_of_rank(const SetFunction<T>& h, double tol = default_tolerance<T>()) {
  CIStructure s(h.base());
  const auto& idx = s.index();
  for (int b = 0; b < idx.size(); ++b)
    if (NumericTraits<T>::is_zero(delta(h, idx.at(b).as_triplet()), tol)) s.set_bit(b);
  return s;
}

// The rank function h_xy over {x,y,z,u}: 4 on xy and N, |S|+1 elsewhere, 0 on the empty set.
inline SetFunction<Rational> rank_hxy(const BasicSet& base = BasicSet::xyzu()) {
  if (base.size() != 4) throw std::invalid_argument("h_xy is defined over four variables");
  const Subset xy = Subset::singleton(0) | Subset::singleton(1);
  return SetFunction<Rational>(base, [&](Subset s) {
    if (s.is_empty()) return Rational(0);
    if (s == xy || s == base.all()) return Rational(4);
    return Rational(s.size() + 1);
  });
}

}  // namespace cinfer
