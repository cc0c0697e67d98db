#pragma once

#include "cinfer/basic_set.hpp"
#include "cinfer/ci_structure.hpp"
#include "cinfer/rational.hpp"
#include "cinfer/set_function.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cinfer {

// Value index per variable, in the variable order of the owning space.
using Configuration = std::vector<int>;

std::string format_configuration(const Configuration& c);

class SampleSpace {
 public:
  SampleSpace() = default;
  SampleSpace(BasicSet base, std::vector<int> cardinalities)
      : base_(std::move(base)), cards_(std::move(cardinalities)) {
    if (static_cast<int>(cards_.size()) != base_.size())
      throw std::invalid_argument("one cardinality per variable is required");
    for (int c : cards_)
      if (c < 1) throw std::invalid_argument("variable cardinality must be at least 1");
  }

  const BasicSet& base() const { return base_; }
  int size() const { return base_.size(); }
  const std::vector<int>& cardinalities() const { return cards_; }
  int cardinality(int i) const { return cards_.at(static_cast<std::size_t>(i)); }

  bool valid(const Configuration& c) const {
    if (c.size() != cards_.size()) return false;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] < 0 || c[i] >= cards_[i]) return false;
    return true;
  }

  // Sub-space for the variables of `s`, in base order.
  SampleSpace restrict_to(Subset s) const {
    std::vector<std::string> names;
    std::vector<int> cards;
    for (int i : s.elements()) {
      names.push_back(base_.name(i));
      cards.push_back(cards_[static_cast<std::size_t>(i)]);
    }
    return SampleSpace(BasicSet(std::move(names)), std::move(cards));
  }

  bool operator==(const SampleSpace&) const = default;

 private:
  BasicSet base_;
  std::vector<int> cards_;
};

// Marginal density keyed by the sub-configuration of a subset's variables.
using MarginalTable = std::map<Configuration, Rational>;

class DominanceError : public std::domain_error {
 public:
  explicit DominanceError(Configuration witness)
      : std::domain_error("reference density vanishes at configuration " + format_configuration(witness) +
                          " where the first density is positive"),
        witness_(std::move(witness)) {}
  const Configuration& witness() const { return witness_; }

 private:
  Configuration witness_;
};

// Exact discrete distribution: sparse rational density over a sample space.
class JointDistribution {
 public:
  JointDistribution() = default;
  JointDistribution(SampleSpace space, std::map<Configuration, Rational> density)
      : space_(std::move(space)) {
    Rational total = 0;
    for (auto& [config, p] : density) {
      if (!space_.valid(config))
        throw std::invalid_argument("configuration " + format_configuration(config) + " outside the sample space");
      if (p < 0) throw std::invalid_argument("negative probability at " + format_configuration(config));
      if (p == 0) continue;
      total += p;
      density_.emplace(config, p);
    }
    if (total != 1)
      throw std::invalid_argument("density sums to " + format_rational(total) + ", expected 1");
  }

  static JointDistribution uniform(const SampleSpace& space) {
    std::map<Configuration, Rational> d;
    std::size_t count = 1;
    for (int c : space.cardinalities()) count *= static_cast<std::size_t>(c);
    Configuration cfg(static_cast<std::size_t>(space.size()), 0);
    for (std::size_t k = 0; k < count; ++k) {
      d[cfg] = Rational(1, static_cast<long>(count));
      for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (++cfg[i] < space.cardinality(static_cast<int>(i))) break;
        cfg[i] = 0;
      }
    }
    return JointDistribution(space, std::move(d));
  }

  static JointDistribution point_mass(const SampleSpace& space, Configuration at) {
    return JointDistribution(space, {{std::move(at), Rational(1)}});
  }

  const SampleSpace& space() const { return space_; }
  const BasicSet& base() const { return space_.base(); }
  const std::map<Configuration, Rational>& density() const { return density_; }
  std::size_t support_size() const { return density_.size(); }

  Rational prob(const Configuration& c) const {
    auto it = density_.find(c);
    return it == density_.end() ? Rational(0) : it->second;
  }

  // Marginal density as a table over the sub-configurations of `s`.
  MarginalTable table(Subset s) const {
    base().check(s);
    const auto vars = s.elements();
    MarginalTable out;
    Configuration key(vars.size());
    for (const auto& [config, p] : density_) {
      for (std::size_t k = 0; k < vars.size(); ++k) key[k] = config[static_cast<std::size_t>(vars[k])];
      out[key] += p;
    }
    return out;
  }

  bool operator==(const JointDistribution&) const = default;

 private:
  SampleSpace space_;
  std::map<Configuration, Rational> density_;
};

inline std::string format_configuration(const Configuration& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(c[i]);
  }
  return out + ")";
}

// Memoised marginal tables of one distribution, one per subset.
class MarginalCache {
 public:
  explicit MarginalCache(const JointDistribution& p)
      : p_(&p), tables_(p.base().power_set_size()) {}

  const MarginalTable& operator()(Subset s) const {
    auto& slot = tables_.at(s.bits());
    if (!slot) slot = std::make_unique<MarginalTable>(p_->table(s));
    return *slot;
  }
  const JointDistribution& distribution() const { return *p_; }

 private:
  const JointDistribution* p_;
  mutable std::vector<std::unique_ptr<MarginalTable>> tables_;
};

inline JointDistribution marginal(const JointDistribution& p, Subset a) {
  p.base().check(a);
  if (a.is_empty()) throw std::invalid_argument("marginal onto the empty set is not a distribution over a basic set");
  auto t = p.table(a);
  return JointDistribution(p.space().restrict_to(a), std::map<Configuration, Rational>(t.begin(), t.end()));
}

namespace detail {
// Positions of the variables of `sub` within the ordered variable list of `whole`.
inline std::vector<std::size_t> positions_within(Subset whole, Subset sub) {
  std::vector<std::size_t> out;
  const auto w = whole.elements();
  for (int v : sub.elements())
    out.push_back(static_cast<std::size_t>(std::find(w.begin(), w.end(), v) - w.begin()));
  return out;
}

inline Configuration project(const Configuration& c, const std::vector<std::size_t>& pos) {
  Configuration out(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) out[k] = c[pos[k]];
  return out;
}
}  // namespace detail

// Exact test of p_XYZ * p_Z = p_XZ * p_YZ at every configuration. X, Y, Z may
// overlap; X == Y expresses functional dependence of X on Z.
inline bool is_ci(const MarginalCache& cache, Subset x, Subset y, Subset z) {
  const auto& base = cache.distribution().base();
  base.check(x | y | z);
  const Subset a = x | z, b = y | z, j = a | b, shared = a & b;
  const auto& pa = cache(a);
  const auto& pb = cache(b);
  const auto& pj = cache(j);
  const auto& pz = cache(z);

  const auto a_shared = detail::positions_within(a, shared);
  const auto b_shared = detail::positions_within(b, shared);
  const auto a_z = detail::positions_within(a, z);
  const auto j_vars = j.elements();
  const auto a_vars = a.elements();
  const auto b_vars = b.elements();

  std::multimap<Configuration, const std::pair<const Configuration, Rational>*> b_by_shared;
  for (const auto& row : pb) b_by_shared.emplace(detail::project(row.first, b_shared), &row);

  Configuration joined(j_vars.size());
  for (const auto& [ca, qa] : pa) {
    const auto key = detail::project(ca, a_shared);
    const auto zkey = detail::project(ca, a_z);
    const Rational& qz = pz.at(zkey);
    auto [lo, hi] = b_by_shared.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      const auto& [cb, qb] = *it->second;
      for (std::size_t k = 0; k < j_vars.size(); ++k) {
        const int v = j_vars[k];
        if (a.contains(v))
          joined[k] = ca[static_cast<std::size_t>(std::find(a_vars.begin(), a_vars.end(), v) - a_vars.begin())];
        else
          joined[k] = cb[static_cast<std::size_t>(std::find(b_vars.begin(), b_vars.end(), v) - b_vars.begin())];
      }
      auto jt = pj.find(joined);
      const Rational lhs = jt == pj.end() ? Rational(0) : jt->second * qz;
      if (lhs != qa * qb) return false;
    }
  }
  return true;
}

inline bool is_ci(const JointDistribution& p, Subset x, Subset y, Subset z) {
  MarginalCache cache(p);
  return is_ci(cache, x, y, z);
}

inline bool is_ci(const JointDistribution& p, const Triplet& t) { return is_ci(p, t.x, t.y, t.z); }

// Entropy (natural log) of a marginal table.
inline double entropy_of(const MarginalTable& t) {
  double h = 0;
  for (const auto& [c, p] : t) {
    if (p == 0) continue;
    const double q = to_double(p);
    h -= q * std::log(q);
  }
  return h;
}

inline SetFunction<double> entropy_function(const JointDistribution& p) {
  MarginalCache cache(p);
  SetFunction<double> h(p.base());
  for (std::uint32_t s = 1; s < p.base().power_set_size(); ++s) h.set(Subset(s), entropy_of(cache(Subset(s))));
  return h;
}

// D(Q || R) = sum over q > 0 of q ln(q / r); R must dominate Q.
inline double kl_divergence(const JointDistribution& q, const JointDistribution& r) {
  if (!(q.space() == r.space())) throw std::invalid_argument("KL divergence needs a common sample space");
  double d = 0;
  for (const auto& [c, qc] : q.density()) {
    const Rational rc = r.prob(c);
    if (rc == 0) throw DominanceError(c);
    d += to_double(qc) * std::log(to_double(Rational(qc / rc)));
  }
  return d;
}

// Same distribution with the variables listed in `order` (a permutation of its labels).
inline JointDistribution reorder(const JointDistribution& p, const std::vector<std::string>& order) {
  if (static_cast<int>(order.size()) != p.base().size())
    throw std::invalid_argument("reorder needs every variable exactly once");
  std::vector<std::size_t> src;
  std::vector<int> cards;
  for (const auto& name : order) {
    src.push_back(static_cast<std::size_t>(p.base().index_of(name)));
    cards.push_back(p.space().cardinality(static_cast<int>(src.back())));
  }
  SampleSpace space(BasicSet(order), cards);
  std::map<Configuration, Rational> d;
  for (const auto& [c, pc] : p.density()) d[detail::project(c, src)] = pc;
  return JointDistribution(space, std::move(d));
}

// Conditional product of consonant Q over AC and R over BC. Variables are
// matched by label: C = shared labels, A = Q-only, B = R-only. The result lists
// Q's variables first, then the R-only ones.
inline JointDistribution conditional_product(const JointDistribution& q, const JointDistribution& r) {
  const auto& qb = q.base();
  const auto& rb = r.base();
  Subset q_shared, r_shared, r_only;
  for (int i = 0; i < rb.size(); ++i) {
    if (auto k = qb.find(rb.name(i))) {
      r_shared |= Subset::singleton(i);
      q_shared |= Subset::singleton(*k);
      if (q.space().cardinality(*k) != r.space().cardinality(i))
        throw std::invalid_argument("non-consonant inputs: sample spaces of '" + rb.name(i) + "' differ");
    } else {
      r_only |= Subset::singleton(i);
    }
  }
  if (q_shared == qb.all()) throw std::invalid_argument("conditional product needs a non-empty A");
  if (r_only.is_empty()) throw std::invalid_argument("conditional product needs a non-empty B");

  // shared variables in R's order, mapped to positions in Q
  std::vector<std::size_t> q_c, r_c;
  for (int i : r_shared.elements()) {
    r_c.push_back(static_cast<std::size_t>(i));
    q_c.push_back(static_cast<std::size_t>(qb.index_of(rb.name(i))));
  }
  std::map<Configuration, Rational> qc_marg, rc_marg;
  for (const auto& [c, p] : q.density()) qc_marg[detail::project(c, q_c)] += p;
  for (const auto& [c, p] : r.density()) rc_marg[detail::project(c, r_c)] += p;
  if (qc_marg != rc_marg) throw std::invalid_argument("non-consonant inputs: marginals on the shared variables differ");

  std::vector<std::string> names = qb.names();
  std::vector<int> cards = q.space().cardinalities();
  std::vector<std::size_t> r_b;
  for (int i : r_only.elements()) {
    names.push_back(rb.name(i));
    cards.push_back(r.space().cardinality(i));
    r_b.push_back(static_cast<std::size_t>(i));
  }
  SampleSpace space(BasicSet(names), cards);

  std::multimap<Configuration, const std::pair<const Configuration, Rational>*> r_by_c;
  for (const auto& row : r.density()) r_by_c.emplace(detail::project(row.first, r_c), &row);

  std::map<Configuration, Rational> d;
  for (const auto& [ca, pa] : q.density()) {
    const auto key = detail::project(ca, q_c);
    const Rational& pc = rc_marg.at(key);
    auto [lo, hi] = r_by_c.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      Configuration joined = ca;
      for (std::size_t k : r_b) joined.push_back(it->second->first[k]);
      d[std::move(joined)] = pa * it->second->second / pc;
    }
  }
  return JointDistribution(space, std::move(d));
}

// Conditional product of P's marginals on AC and BC, listed in P's variable order.
inline JointDistribution conditional_product(const JointDistribution& p, Subset a, Subset b, Subset c) {
  if (!pairwise_disjoint({a, b, c})) throw std::invalid_argument("A, B, C must be pairwise disjoint");
  if (a.is_empty() || b.is_empty()) throw std::invalid_argument("conditional product needs non-empty A and B");
  auto prod = conditional_product(marginal(p, a | c), marginal(p, b | c));
  std::vector<std::string> order;
  for (int i : (a | b | c).elements()) order.push_back(p.base().name(i));
  return reorder(prod, order);
}

// Product construction with per-variable spaces Y_i x Z_i, value index y * |Z_i| + z.
inline JointDistribution lattice_product(const JointDistribution& q, const JointDistribution& r) {
  if (!(q.base() == r.base())) throw std::invalid_argument("lattice product needs identical basic sets");
  std::vector<int> cards;
  for (int i = 0; i < q.base().size(); ++i) cards.push_back(q.space().cardinality(i) * r.space().cardinality(i));
  SampleSpace space(q.base(), cards);
  std::map<Configuration, Rational> d;
  for (const auto& [cy, py] : q.density())
    for (const auto& [cz, pz] : r.density()) {
      Configuration c(cy.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = cy[i] * r.space().cardinality(static_cast<int>(i)) + cz[i];
      d[std::move(c)] = py * pz;
    }
  return JointDistribution(space, std::move(d));
}

inline std::string fresh_label(const BasicSet& base, const std::string& stem = "w") {
  if (!base.find(stem)) return stem;
  for (int k = 1;; ++k) {
    auto candidate = stem + std::to_string(k);
    if (!base.find(candidate)) return candidate;
  }
}

// Extends P restricted to ABC by the intersection variable W whose values are
// the classes of the transitive closure of "same b or same c" on the support
// of the BC-marginal. W is appended as the last variable.
inline JointDistribution double_markov_extend(const JointDistribution& p, Subset a, Subset b, Subset c) {
  if (!pairwise_disjoint({a, b, c})) throw std::invalid_argument("A, B, C must be pairwise disjoint");
  MarginalCache cache(p);
  if (!is_ci(cache, a, b, c) || !is_ci(cache, a, c, b))
    throw std::invalid_argument("double Markov extension needs A _||_ B | C and A _||_ C | B");

  const Subset abc = a | b | c;
  if (abc.is_empty()) throw std::invalid_argument("double Markov extension needs a non-empty A, B or C");
  const auto base_p = p.base();
  std::vector<std::string> names;
  for (int i : abc.elements()) names.push_back(base_p.name(i));
  const std::string w_name = fresh_label(base_p);
  names.push_back(w_name);

  const auto b_pos = b.elements();
  const auto c_pos = c.elements();
  auto proj = [](const Configuration& cfg, const std::vector<int>& vars) {
    Configuration out;
    for (int v : vars) out.push_back(cfg[static_cast<std::size_t>(v)]);
    return out;
  };

  // union-find over support pairs (b, c)
  std::map<std::pair<Configuration, Configuration>, int> pair_id;
  for (const auto& [cfg, pr] : p.density()) pair_id.emplace(std::make_pair(proj(cfg, b_pos), proj(cfg, c_pos)), 0);
  std::vector<int> parent(pair_id.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  auto unite = [&](int u, int v) {
    u = find(u);
    v = find(v);
    if (u != v) parent[static_cast<std::size_t>(std::max(u, v))] = std::min(u, v);
  };
  {
    int k = 0;
    std::map<Configuration, int> first_with_b, first_with_c;
    for (auto& [key, id] : pair_id) {
      id = k++;
      if (auto [it, fresh] = first_with_b.emplace(key.first, id); !fresh) unite(id, it->second);
      if (auto [it, fresh] = first_with_c.emplace(key.second, id); !fresh) unite(id, it->second);
    }
  }
  std::map<int, int> class_index;
  for (const auto& [key, id] : pair_id) class_index.emplace(find(id), static_cast<int>(class_index.size()));

  std::vector<int> cards;
  for (int i : abc.elements()) cards.push_back(p.space().cardinality(i));
  cards.push_back(static_cast<int>(class_index.size()));
  SampleSpace space(BasicSet(names), cards);

  const auto abc_vars = abc.elements();
  std::map<Configuration, Rational> d;
  for (const auto& [cfg, pr] : p.density()) {
    Configuration ext = proj(cfg, abc_vars);
    ext.push_back(class_index.at(find(pair_id.at({proj(cfg, b_pos), proj(cfg, c_pos)}))));
    d[std::move(ext)] += pr;
  }
  return JointDistribution(space, std::move(d));
}

// Exact standard CI structure: all elementary triplets that hold.
inline CIStructure induced_ci_structure(const JointDistribution& p) {
  MarginalCache cache(p);
  CIStructure s(p.base());
  const auto& idx = s.index();
  for (int bit = 0; bit < idx.size(); ++bit) {
    const auto t = idx.at(bit).as_triplet();
    if (is_ci(cache, t.x, t.y, t.z)) s.set_bit(bit);
  }
  return s;
}

}  // namespace cinfer
