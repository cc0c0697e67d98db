#pragma once

#include "cinfer/catalog.hpp"
#include "cinfer/ci_structure.hpp"
#include "cinfer/distribution.hpp"
#include "cinfer/json_io.hpp"
#include "cinfer/rules.hpp"
#include "cinfer/set_function.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cinfer {

// Placeholder permutation: placeholder p is replaced by placeholder perm[p] (X=0, Y=1, Z=2, U=3).
using PlaceholderMap = std::array<int, 4>;
inline constexpr PlaceholderMap kIdentityMap{0, 1, 2, 3};
// [X,Z] <-> [Y,U]
inline constexpr PlaceholderMap kSwapMap{1, 0, 3, 2};

inline Subset apply_map(Subset s, const PlaceholderMap& m) {
  Subset out;
  for (int p : s.elements()) out |= Subset::singleton(m[static_cast<std::size_t>(p)]);
  return out;
}
inline Triplet apply_map(const Triplet& t, const PlaceholderMap& m) {
  return {apply_map(t.x, m), apply_map(t.y, m), apply_map(t.z, m)};
}

// Equality of CI statements up to exchanging the two sides.
inline bool same_statement(const Triplet& a, const Triplet& b) {
  return a.z == b.z && ((a.x == b.x && a.y == b.y) || (a.x == b.y && a.y == b.x));
}
inline Triplet normalized(const Triplet& t) { return t.y < t.x ? t.swapped() : t; }

inline bool same_statement_multiset(std::vector<Triplet> a, std::vector<Triplet> b) {
  if (a.size() != b.size()) return false;
  for (auto& t : a) t = normalized(t);
  for (auto& t : b) t = normalized(t);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

struct ConditionalIngletonRule {
  std::string id;                  // 1cI..5cI, or cI2 / cI4
  int base_rule;                   // 1..5
  PlaceholderMap substitution;     // identity, or the swap for cI2 / cI4
  std::array<Triplet, 2> premises; // over placeholders, substitution applied
};

inline const std::vector<ConditionalIngletonRule>& conditional_ingleton_rules() {
  static const std::vector<ConditionalIngletonRule> rules = [] {
    const auto& ph = placeholders();
    auto st = [&](const char* s) { return parse_statement(ph, s); };
    return std::vector<ConditionalIngletonRule>{
        {"1cI", 1, kIdentityMap, {st("X _||_ Y |"), st("X _||_ Y | Z")}},
        {"2cI", 2, kIdentityMap, {st("X _||_ Y | Z"), st("Y _||_ U | Z")}},
        {"3cI", 3, kIdentityMap, {st("X _||_ Z | U"), st("X _||_ U | Z")}},
        {"4cI", 4, kIdentityMap, {st("X _||_ Z | U"), st("Z _||_ U | X")}},
        {"5cI", 5, kIdentityMap, {st("X _||_ Z | U"), st("Y _||_ Z | U")}},
    };
  }();
  return rules;
}

// "1cI".."5cI", or the swapped versions "cI2" and "cI4".
inline ConditionalIngletonRule conditional_ingleton_rule(std::string_view id) {
  for (const auto& r : conditional_ingleton_rules())
    if (r.id == id) return r;
  if (id == "cI2" || id == "cI4") {
    auto r = conditional_ingleton_rules()[id == "cI2" ? 1 : 3];
    r.id = std::string(id);
    r.substitution = kSwapMap;
    for (auto& p : r.premises) p = apply_map(p, kSwapMap);
    return r;
  }
  throw std::invalid_argument("unknown conditional Ingleton rule '" + std::string(id) + "'");
}

inline ConditionalIngletonRule conditional_ingleton_rule(int id) {
  if (id < 1 || id > 5) throw std::invalid_argument("conditional Ingleton rule id must be in 1..5");
  return conditional_ingleton_rules()[static_cast<std::size_t>(id - 1)];
}

// Images of X, Y, Z, U.
using Assignment = std::array<Subset, 4>;

inline Triplet assign(const Triplet& pattern, const Assignment& a) {
  auto sub = [&](Subset s) {
    Subset out;
    for (int p : s.elements()) out |= a[static_cast<std::size_t>(p)];
    return out;
  };
  return {sub(pattern.x), sub(pattern.y), sub(pattern.z)};
}

struct ConditionalIngletonReport {
  bool premises_hold;
  double ingleton_value;
};

inline ConditionalIngletonReport check_conditional_ingleton(const JointDistribution& p,
                                                            const ConditionalIngletonRule& rule,
                                                            const Assignment& a) {
  for (Subset s : a)
    if (s.is_empty()) throw std::invalid_argument("conditional Ingleton check needs non-empty X, Y, Z, U");
  require_disjoint_xyzu(a[0], a[1], a[2], a[3]);
  MarginalCache cache(p);
  bool hold = true;
  for (const auto& prem : rule.premises) {
    const Triplet t = assign(prem, a);
    hold = hold && is_ci(cache, t.x, t.y, t.z);
  }
  const auto h = entropy_function(p);
  return {hold, ingleton(h, a[0], a[1], a[2], a[3])};
}

inline Assignment singleton_assignment() {
  return {Subset::singleton(0), Subset::singleton(1), Subset::singleton(2), Subset::singleton(3)};
}

// ---- counterexamples ---------------------------------------------------------------

struct CounterexampleReport {
  std::string id;
  std::vector<CheckResult> checks;
  double ingleton_value = 0;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

// 32 ln 2 + 30 ln 3 - 10 ln 5 + 7 ln 7 - 22 ln 11
inline double example5_closed_form() {
  return 32 * std::log(2.0) + 30 * std::log(3.0) - 10 * std::log(5.0) + 7 * std::log(7.0) - 22 * std::log(11.0);
}

inline CounterexampleReport verify_counterexample(const Catalog& catalog, int id) {
  if (id < 1 || id > 5) throw std::invalid_argument("counterexample id must be in 1..5");
  const auto& e = catalog.get("EX" + std::to_string(id));
  CounterexampleReport r;
  r.id = e.id;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const auto& p = *e.distribution;
  const BasicSet& base = p.base();
  const Assignment a = singleton_assignment();

  for (const auto& t : e.claimed_statements) add("holds: " + format_statement(base, t), is_ci(p, t));

  const auto h = entropy_function(p);
  r.ingleton_value = ingleton(h, a[0], a[1], a[2], a[3]);

  for (const auto& claim : e.ingleton_masks) {
    const auto terms = mask_terms(claim.mask, a[0], a[1], a[2], a[3]);
    const std::string tag = "(M." + std::to_string(claim.mask) + ")";
    bool vanish = true;
    for (const auto& term : terms)
      if (term.sign > 0) vanish = vanish && is_ci(p, term.triplet);
    add(tag + " positive terms vanish exactly", vanish);
    add(tag + " negative term is " + format_statement(base, claim.negative_term),
        same_statement(terms[3].triplet, claim.negative_term));
    const double neg = delta(h, claim.negative_term);
    add(tag + " ingleton = -Delta", std::abs(r.ingleton_value + neg) <= 1e-9,
        std::to_string(r.ingleton_value) + " vs " + std::to_string(-neg));
    add(tag + " form agrees", std::abs(mask_form(h, claim.mask, a[0], a[1], a[2], a[3]) - r.ingleton_value) <= 1e-12);
  }

  if (id <= 4) {
    add("ingleton < -1e-3", r.ingleton_value < -1e-3, std::to_string(r.ingleton_value));
  } else {
    add("induced structure is exactly the two listed statements", induced_ci_structure(p) == *e.structure);
    const double sixteen = 16 * r.ingleton_value;
    add("16 * ingleton matches the closed form", std::abs(sixteen - example5_closed_form()) <= 1e-9,
        std::to_string(sixteen));
    add("16 * ingleton ~ -0.0876256", std::abs(sixteen - (-0.0876256)) <= 1e-6);
    if (e.raw.contains("xzu_marginal")) {
      const auto table = p.table(base.subset({"x", "z", "u"}));
      std::vector<Rational> got;
      // rows in (x, z, u) lexicographic order
      for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
          for (int u = 0; u < 2; ++u) {
            auto it = table.find({x, z, u});
            got.push_back(it == table.end() ? Rational(0) : it->second);
          }
      bool same = true;
      const auto& want = e.raw.at("xzu_marginal");
      for (std::size_t k = 0; k < got.size(); ++k) same = same && parse_rational(want[k].get<std::string>()) == got[k];
      add("XZU marginal", same);
    }
  }
  return r;
}

struct SixthFailureReport {
  bool premises_hold;
  double ingleton_value;
  bool counterexample() const { return premises_hold && ingleton_value < 0; }
};

// Premise pair {X _||_ Z | U, Y _||_ U | Z} on a distribution over x, y, z, u.
inline SixthFailureReport check_sixth_failure(const JointDistribution& p) {
  const auto& ph = placeholders();
  const auto a = singleton_assignment();
  MarginalCache cache(p);
  bool hold = true;
  for (const char* s : {"X _||_ Z | U", "Y _||_ U | Z"}) {
    const Triplet t = assign(parse_statement(ph, s), a);
    hold = hold && is_ci(cache, t.x, t.y, t.z);
  }
  const auto h = entropy_function(p);
  return {hold, ingleton(h, a[0], a[1], a[2], a[3])};
}

inline SixthFailureReport check_sixth_failure(const Catalog& catalog) {
  return check_sixth_failure(*catalog.get("EX5").distribution);
}

// ---- derivation schemas -----------------------------------------------------------

struct SchemaPremise {
  Triplet statement;
  bool overbraced = false;
  bool underlined = false;
};

struct ExtensionIdentity {
  std::array<Triplet, 2> terms;
  Triplet result;
};

struct DerivationSchema {
  std::string target;  // I1..I19
  std::string rule;    // 1cI..5cI, cI2, cI4
  int mask = 1;
  PlaceholderMap substitution = kIdentityMap;
  std::vector<SchemaPremise> premises;
  Triplet conclusion;
  std::optional<ExtensionIdentity> extension;
};

inline DerivationSchema derivation_from_json(const Json& j) {
  const auto& ph = placeholders();
  DerivationSchema d;
  d.target = detail::as_string(detail::require(j, "target", "schema"), "schema.target");
  const std::string where = "schema " + d.target;
  d.rule = detail::as_string(detail::require(j, "rule", where), where + ".rule");
  d.mask = detail::require(j, "mask", where).get<int>();
  if (d.mask < 1 || d.mask > 5) throw InputError(where + ".mask: must be in 1..5");
  if (j.contains("substitution"))
    for (const auto& [k, v] : j.at("substitution").items())
      d.substitution[static_cast<std::size_t>(ph.index_of(k))] = ph.index_of(v.get<std::string>());
  auto st = [&](const Json& s) { return detail::wrap(where, [&] { return parse_statement(ph, s.get<std::string>()); }); };
  for (const auto& p : detail::require(j, "premises", where))
    d.premises.push_back({st(p.at("statement")), p.value("overbraced", false), p.value("underlined", false)});
  d.conclusion = st(detail::require(j, "conclusion", where));
  if (j.contains("extension") && !j.at("extension").is_null()) {
    const auto& x = j.at("extension");
    d.extension = ExtensionIdentity{{st(x.at("terms").at(0)), st(x.at("terms").at(1))}, st(x.at("result"))};
  }
  return d;
}

inline std::vector<DerivationSchema> load_derivations(const std::string& data_dir = default_data_dir()) {
  const auto j = read_json_file((std::filesystem::path(data_dir) / "derivations.json").string());
  std::vector<DerivationSchema> out;
  for (const auto& e : j) out.push_back(derivation_from_json(e));
  return out;
}

struct DerivationCheck {
  bool ok = true;
  std::string failure;  // first failing step
};

namespace detail {
// Runs `f` on every basis indicator delta_T over the placeholders.
template <typename F>
bool on_indicator_basis(F&& f) {
  const auto& ph = placeholders();
  for (std::uint32_t t = 0; t < ph.power_set_size(); ++t)
    if (!f(SetFunction<Rational>::indicator(ph, Subset(t)))) return false;
  return true;
}
}  // namespace detail

inline DerivationCheck check_derivation(const DerivationSchema& d) {
  const auto fail = [](std::string why) { return DerivationCheck{false, std::move(why)}; };
  const Assignment a = singleton_assignment();
  if (d.mask < 1 || d.mask > 5) return fail("mask out of range");

  // (a) the mask is an identity for the Ingleton expression
  if (!detail::on_indicator_basis([&](const SetFunction<Rational>& h) {
        return mask_form(h, d.mask, a[0], a[1], a[2], a[3]) == ingleton(h, a[0], a[1], a[2], a[3]);
      }))
    return fail("mask identity");

  // (b) overbraced premises are the rule's premises
  ConditionalIngletonRule rule;
  try {
    rule = conditional_ingleton_rule(d.rule);
  } catch (const std::invalid_argument&) {
    return fail("unknown rule");
  }
  if (rule.substitution != d.substitution) return fail("substitution does not match the rule version");
  std::vector<Triplet> over, under, all;
  for (const auto& p : d.premises) {
    all.push_back(p.statement);
    if (p.overbraced) over.push_back(p.statement);
    if (p.underlined) under.push_back(p.statement);
  }
  if (!same_statement_multiset(over, {rule.premises[0], rule.premises[1]})) return fail("overbraced premises");

  // (c) underlined premises are the positive mask terms, the conclusion its negative term
  const auto terms = mask_terms(d.mask, a[0], a[1], a[2], a[3]);
  std::vector<Triplet> plus;
  for (const auto& t : terms)
    if (t.sign > 0) plus.push_back(t.triplet);
  if (!same_statement_multiset(under, plus)) return fail("underlined premises");
  if (!same_statement(terms[3].triplet, d.conclusion)) return fail("conclusion is not the negative mask term");
  if (!detail::on_indicator_basis([&](const SetFunction<Rational>& h) {
        Rational rhs = -delta(h, d.conclusion);
        for (const auto& u : under) rhs += delta(h, u);
        return rhs == ingleton(h, a[0], a[1], a[2], a[3]);
      }))
    return fail("ingleton = sum of underlined - conclusion");

  // (d) extension identity
  Triplet final_conclusion = d.conclusion;
  if (d.extension) {
    const auto& x = *d.extension;
    if (!same_statement(x.terms[0], d.conclusion)) return fail("extension does not start from the conclusion");
    if (std::none_of(all.begin(), all.end(), [&](const Triplet& t) { return same_statement(t, x.terms[1]); }))
      return fail("extension term is not a premise");
    if (!detail::on_indicator_basis([&](const SetFunction<Rational>& h) {
          return delta(h, x.terms[0]) + delta(h, x.terms[1]) == delta(h, x.result);
        }))
      return fail("extension identity");
    final_conclusion = x.result;
  }

  // the record proves exactly the listed implication
  const InferenceRule* target = nullptr;
  for (const auto& r : rule_table())
    if (r.id == d.target) target = &r;
  if (!target || target->family != RuleFamily::Implication) return fail("unknown target implication");
  if (!same_statement_multiset(all, target->premises)) return fail("premises differ from the implication");
  if (target->conclusions.size() != 1 || !same_statement(target->conclusions[0], final_conclusion))
    return fail("conclusion differs from the implication");
  return {};
}

inline bool verify_derivation(const DerivationSchema& d) { return check_derivation(d).ok; }

// Three single-field corruptions: mask k -> k % 5 + 1, another rule, one premise altered.
inline std::array<DerivationSchema, 3> mutations(const DerivationSchema& d) {
  std::array<DerivationSchema, 3> m{d, d, d};
  m[0].mask = d.mask % 5 + 1;
  static const std::vector<std::string> ids{"1cI", "2cI", "3cI", "4cI", "5cI", "cI2", "cI4"};
  auto it = std::find(ids.begin(), ids.end(), d.rule);
  m[1].rule = ids[static_cast<std::size_t>((it - ids.begin() + 1) % static_cast<long>(ids.size()))];
  // move the first premise's conditioning to the other free placeholder
  auto& t = m[2].premises[0].statement;
  const Subset free = Subset::full(4) - t.x - t.y - t.z;
  t.z = t.z.is_empty() ? Subset::singleton(free.elements().front()) : free;
  return m;
}

// ---- random premise-enforcing distributions --------------------------------------------

using Rng = std::mt19937_64;

inline JointDistribution random_distribution(const SampleSpace& space, Rng& rng, bool full_support = false) {
  std::size_t count = 1;
  for (int c : space.cardinalities()) count *= static_cast<std::size_t>(c);
  std::uniform_int_distribution<int> w(full_support ? 1 : 0, 6);
  std::vector<long> weights(count);
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : weights) total += (x = w(rng));
  }
  std::map<Configuration, Rational> d;
  Configuration cfg(static_cast<std::size_t>(space.size()), 0);
  for (std::size_t k = 0; k < count; ++k) {
    if (weights[k]) d[cfg] = Rational(weights[k], total);
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      if (++cfg[i] < space.cardinality(static_cast<int>(i))) break;
      cfg[i] = 0;
    }
  }
  return JointDistribution(space, std::move(d));
}

namespace detail {
inline SampleSpace random_space(const std::vector<std::string>& names, Rng& rng) {
  std::uniform_int_distribution<int> card(2, 3);
  std::vector<int> cards;
  for (std::size_t k = 0; k < names.size(); ++k) cards.push_back(card(rng));
  return SampleSpace(BasicSet(names), cards);
}

// Adds a variable with a random conditional distribution given all existing ones.
inline JointDistribution attach_child(const JointDistribution& q, const std::string& name, Rng& rng) {
  std::vector<std::string> names = q.base().names();
  names.push_back(name);
  std::vector<int> cards = q.space().cardinalities();
  const int c = std::uniform_int_distribution<int>(2, 3)(rng);
  cards.push_back(c);
  std::uniform_int_distribution<int> w(0, 6);
  std::map<Configuration, Rational> d;
  for (const auto& [cfg, p] : q.density()) {
    std::vector<long> weights(static_cast<std::size_t>(c));
    long total = 0;
    while (total == 0) {
      total = 0;
      for (auto& x : weights) total += (x = w(rng));
    }
    for (int v = 0; v < c; ++v) {
      if (!weights[static_cast<std::size_t>(v)]) continue;
      Configuration ext = cfg;
      ext.push_back(v);
      d[ext] = p * Rational(weights[static_cast<std::size_t>(v)], total);
    }
  }
  return JointDistribution(SampleSpace(BasicSet(names), cards), std::move(d));
}

// Q adjusted so that its marginal on the shared variables equals R's.
inline JointDistribution match_marginal(const JointDistribution& q, const JointDistribution& r) {
  Subset shared_q, shared_r;
  for (int i = 0; i < q.base().size(); ++i)
    if (auto k = r.base().find(q.base().name(i))) {
      shared_q |= Subset::singleton(i);
      shared_r |= Subset::singleton(*k);
    }
  const auto qc = q.table(shared_q);
  const auto rc = r.table(shared_r);
  const auto pos = positions_within(q.base().all(), shared_q);
  std::map<Configuration, Rational> d;
  for (const auto& [cfg, p] : q.density()) {
    const auto key = project(cfg, pos);
    auto it = rc.find(key);
    if (it != rc.end()) d[cfg] = p / qc.at(key) * it->second;
  }
  return JointDistribution(q.space(), std::move(d));
}

// A _||_ BC | W with W a function of B and of C: W uniform-ish on {0,1}, B and C
// take 4 values encoding (W, own noise).
inline JointDistribution shared_w_triple(const std::string& a, const std::string& b, const std::string& c, Rng& rng) {
  const auto pw = random_distribution(SampleSpace(BasicSet{"w"}, {2}), rng, true);
  std::map<Configuration, Rational> d;
  std::array<JointDistribution, 2> pa, pb, pc;
  for (int w = 0; w < 2; ++w) {
    pa[static_cast<std::size_t>(w)] = random_distribution(SampleSpace(BasicSet{"t"}, {2}), rng);
    pb[static_cast<std::size_t>(w)] = random_distribution(SampleSpace(BasicSet{"t"}, {2}), rng);
    pc[static_cast<std::size_t>(w)] = random_distribution(SampleSpace(BasicSet{"t"}, {2}), rng);
  }
  for (int w = 0; w < 2; ++w)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) {
          const auto k = static_cast<std::size_t>(w);
          const Rational p = pw.prob({w}) * pa[k].prob({x}) * pb[k].prob({y}) * pc[k].prob({z});
          if (p != 0) d[{x, 2 * w + y, 2 * w + z}] = p;
        }
  return JointDistribution(SampleSpace(BasicSet(std::vector<std::string>{a, b, c}), {2, 4, 4}), std::move(d));
}

inline JointDistribution product_split(const std::vector<std::string>& left, const std::vector<std::string>& right,
                                       const std::vector<std::string>& shared, Rng& rng) {
  std::vector<std::string> ln = left, rn = right;
  ln.insert(ln.end(), shared.begin(), shared.end());
  rn.insert(rn.end(), shared.begin(), shared.end());
  const auto r = random_distribution(random_space(rn, rng), rng);
  if (shared.empty()) return conditional_product(random_distribution(random_space(ln, rng), rng), r);
  // the left factor needs the shared cardinalities of r
  std::vector<int> cards;
  std::uniform_int_distribution<int> card(2, 3);
  for (const auto& n : ln) {
    if (auto k = r.base().find(n))
      cards.push_back(r.space().cardinality(*k));
    else
      cards.push_back(card(rng));
  }
  const auto q = random_distribution(SampleSpace(BasicSet(ln), cards), rng, true);
  return conditional_product(match_marginal(q, r), r);
}
}  // namespace detail

// Random distribution over x, y, z, u (base order) satisfying a statement that implies
// both premises of rule `id` (1..5) for (X,Y,Z,U) = (x,y,z,u). Rules 3 and 4 alternate
// between an unconditional independence and a shared functional variable.
inline JointDistribution random_premise_distribution(int id, Rng& rng, int variant = 0) {
  const std::vector<std::string> order{"x", "y", "z", "u"};
  JointDistribution p;
  switch (id) {
    case 1:  // X _||_ YZU
      p = detail::product_split({"x"}, {"y", "z", "u"}, {}, rng);
      break;
    case 2:  // Y _||_ XU | Z
      p = detail::product_split({"y"}, {"x", "u"}, {"z"}, rng);
      break;
    case 3:  // X _||_ ZU, or X _||_ ZU | W with W a function of Z and of U
      p = variant % 2 ? detail::attach_child(detail::shared_w_triple("x", "z", "u", rng), "y", rng)
                      : detail::attach_child(detail::product_split({"x"}, {"z", "u"}, {}, rng), "y", rng);
      break;
    case 4:  // Z _||_ XU, or Z _||_ XU | W with W a function of X and of U
      p = variant % 2 ? detail::attach_child(detail::shared_w_triple("z", "x", "u", rng), "y", rng)
                      : detail::attach_child(detail::product_split({"z"}, {"x", "u"}, {}, rng), "y", rng);
      break;
    case 5:  // Z _||_ XY | U
      p = detail::product_split({"z"}, {"x", "y"}, {"u"}, rng);
      break;
    default:
      throw std::invalid_argument("conditional Ingleton rule id must be in 1..5");
  }
  return reorder(p, order);
}

}  // namespace cinfer
