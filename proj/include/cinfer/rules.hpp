#pragma once

#include "cinfer/basic_set.hpp"
#include "cinfer/ci_structure.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cinfer {

// Placeholders used by every rule pattern.
inline const BasicSet& placeholders() {
  static const BasicSet p{"X", "Y", "Z", "U"};
  return p;
}

enum class RuleFamily { Semigraphoid, Equivalence, Implication };

// An abstract CI property: premises => conclusions (or <=> when bidirectional)
// over the placeholders X, Y, Z, U; compound sets allowed ("X _||_ Y Z | U").
struct InferenceRule {
  std::string id;
  RuleFamily family;
  std::vector<Triplet> premises;
  std::vector<Triplet> conclusions;
  bool bidirectional = false;
  std::string text;
};

namespace detail {
inline std::vector<Triplet> parse_conjunction(std::string_view text) {
  std::vector<Triplet> out;
  while (true) {
    const auto amp = text.find('&');
    out.push_back(parse_statement(placeholders(), text.substr(0, amp)));
    if (amp == std::string_view::npos) break;
    text.remove_prefix(amp + 1);
  }
  return out;
}

inline InferenceRule make_rule(std::string id, RuleFamily family, std::string text) {
  InferenceRule r{std::move(id), family, {}, {}, false, std::move(text)};
  std::string_view t = r.text;
  std::size_t arrow = t.find("<=>");
  std::size_t width = 3;
  if (arrow != std::string_view::npos) {
    r.bidirectional = true;
  } else {
    arrow = t.find("=>");
    width = 2;
    if (arrow == std::string_view::npos) throw std::logic_error("rule text without arrow: " + r.text);
  }
  r.premises = parse_conjunction(t.substr(0, arrow));
  r.conclusions = parse_conjunction(t.substr(arrow + width));
  return r;
}
}  // namespace detail

// The 27 properties characterising CI structures of four discrete variables.
// S0 and S1 are built into the canonical elementary representation; S2 is
// grounded in its elementary exchange form.
inline const std::vector<InferenceRule>& rule_table() {
  using detail::make_rule;
  using F = RuleFamily;
  static const std::vector<InferenceRule> rules = {
      make_rule("S0", F::Semigraphoid, "X _||_ Y | Z => X _||_ Y | Z"),
      make_rule("S1", F::Semigraphoid, "X _||_ Y | Z <=> Y _||_ X | Z"),
      make_rule("S2", F::Semigraphoid, "X _||_ Y Z | U <=> X _||_ Y | Z U & X _||_ Z | U"),

      make_rule("E1", F::Equivalence,
                "X _||_ Y | Z & X _||_ Z | U & X _||_ U | Y <=> X _||_ Y | U & X _||_ Z | Y & X _||_ U | Z"),
      make_rule("E2", F::Equivalence,
                "X _||_ Y | Z & X _||_ U | Y & Y _||_ Z | U & Z _||_ U | X"
                " <=> X _||_ Y | U & X _||_ U | Z & Y _||_ Z | X & Z _||_ U | Y"),
      make_rule("E3", F::Equivalence,
                "X _||_ Y | Z U & X _||_ Z | & Y _||_ U | & Z _||_ U | X Y"
                " <=> X _||_ Y | & X _||_ Z | Y U & Y _||_ U | X Z & Z _||_ U |"),
      make_rule("E4", F::Equivalence,
                "X _||_ Y | & X _||_ Y | Z U & Z _||_ U | X & Z _||_ U | Y"
                " <=> X _||_ Y | Z & X _||_ Y | U & Z _||_ U | & Z _||_ U | X Y"),
      make_rule("E5", F::Equivalence,
                "X _||_ Y | Z U & X _||_ U | Y & Y _||_ Z | & Z _||_ U | X"
                " <=> X _||_ Y | U & X _||_ U | Y Z & Y _||_ Z | X & Z _||_ U |"),

      make_rule("I1", F::Implication, "X _||_ Y | & X _||_ Y | Z & Z _||_ U | X & Z _||_ U | Y => Z _||_ U |"),
      make_rule("I2", F::Implication, "X _||_ Y | & X _||_ Z | U & Z _||_ U | X & Z _||_ U | Y => Z _||_ X U |"),
      make_rule("I3", F::Implication, "X _||_ Y | & X _||_ Y | U & X _||_ Z | U & Z _||_ U | Y => X _||_ Z |"),
      make_rule("I4", F::Implication, "X _||_ Y | & X _||_ Z | U & X _||_ U | Z & Z _||_ U | Y => X _||_ Z U |"),
      make_rule("I5", F::Implication, "X _||_ Y | & X _||_ Z | U & Y _||_ U | Z & Z _||_ U | Y => X _||_ Z |"),
      make_rule("I6", F::Implication, "X _||_ Y | & X _||_ Z | U & Y _||_ Z | U & Z _||_ U | Y => X _||_ Z |"),
      make_rule("I7", F::Implication, "X _||_ Y | & X _||_ Y | Z & X _||_ Z | U & Z _||_ U | Y => X _||_ Y Z |"),
      make_rule("I8", F::Implication, "X _||_ Y | Z & X _||_ Z | U & Y _||_ U | Z & Z _||_ U | Y => X _||_ Z | Y"),
      make_rule("I9", F::Implication, "X _||_ Y | Z & X _||_ Y | U & X _||_ Z | U & Z _||_ U | Y => X _||_ Z | Y"),
      make_rule("I10", F::Implication, "X _||_ Y | Z & X _||_ Z | U & X _||_ U | Z & Z _||_ U | Y => X _||_ Z | Y"),
      make_rule("I11", F::Implication, "X _||_ Y | Z & X _||_ Z | U & Z _||_ U | X & Z _||_ U | Y => X _||_ Z | Y"),
      make_rule("I12", F::Implication, "X _||_ Y | Z & X _||_ Z | U & Y _||_ Z | U & Z _||_ U | Y => X _||_ Z | Y"),
      make_rule("I13", F::Implication,
                "X _||_ Y | & X _||_ Y | Z & X _||_ Y | U & Z _||_ U | X Y => X _||_ Y | Z U"),
      make_rule("I14", F::Implication,
                "X _||_ Y | Z & X _||_ Y | U & X _||_ Z | U & Z _||_ U | X Y => X _||_ Y Z | U"),
      make_rule("I15", F::Implication,
                "X _||_ Y | & X _||_ Y | Z & X _||_ Z | U & Z _||_ U | X Y => X _||_ Z | Y U"),
      make_rule("I16", F::Implication,
                "X _||_ Y | Z & X _||_ Z | U & Y _||_ U | Z & Z _||_ U | X Y => X _||_ Z | Y U"),
      make_rule("I17", F::Implication,
                "X _||_ Y | Z & X _||_ Z | U & X _||_ U | Z & Z _||_ U | X Y => X _||_ Z | Y U"),
      make_rule("I18", F::Implication,
                "X _||_ Y | Z & X _||_ Z | U & Z _||_ U | X & Z _||_ U | X Y => X _||_ Z | Y U"),
      make_rule("I19", F::Implication,
                "X _||_ Y | Z & X _||_ Z | U & Y _||_ Z | U & Z _||_ U | X Y => Z _||_ X Y | U"),
  };
  return rules;
}

inline const InferenceRule& find_rule(std::string_view id) {
  for (const auto& r : rule_table())
    if (r.id == id) return r;
  throw std::invalid_argument("unknown rule '" + std::string(id) + "'");
}

// Premise/conclusion bit sets over the frozen triplet layout of a base.
struct GroundRule {
  std::vector<int> premises;
  std::vector<int> conclusions;
  std::string origin;  // rule id

  auto key() const { return std::tie(premises, conclusions); }
};

enum class RuleSet { Semigraphoid, All };

namespace detail {
inline Subset substitute(Subset pattern, const std::vector<int>& assignment) {
  Subset out;
  for (int p : pattern.elements()) out |= Subset::singleton(assignment[static_cast<std::size_t>(p)]);
  return out;
}

inline std::vector<int> ground_bits(const TripletIndex& idx, const std::vector<Triplet>& patterns,
                                    const std::vector<int>& assignment) {
  std::set<int> bits;
  for (const auto& t : patterns)
    for (const auto& e : expand_to_elementary(
             {substitute(t.x, assignment), substitute(t.y, assignment), substitute(t.z, assignment)}))
      bits.insert(idx.bit(e));
  return {bits.begin(), bits.end()};
}

inline void add_ground_rule(std::vector<GroundRule>& out, std::set<std::pair<std::vector<int>, std::vector<int>>>& seen,
                            std::vector<int> prem, std::vector<int> concl, const std::string& origin) {
  std::vector<int> fresh;
  std::set_difference(concl.begin(), concl.end(), prem.begin(), prem.end(), std::back_inserter(fresh));
  if (fresh.empty()) return;
  if (!seen.emplace(prem, fresh).second) return;
  out.push_back({std::move(prem), std::move(fresh), origin});
}
}  // namespace detail

// Ground instances over `base`. Semi-graphoid rules in elementary exchange form
// {(i,j|kK),(i,k|K)} => {(i,k|jK),(i,j|K)} for any size; E and I rules by
// assigning X, Y, Z, U to the four variables in every order (|N| = 4 only).
// Conclusion bits already among the premises are dropped; duplicates removed.
inline std::vector<GroundRule> ground_rules(const BasicSet& base, RuleSet which) {
  const int n = base.size();
  const auto& idx = TripletIndex::of(n);
  std::vector<GroundRule> out;
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;

  const Subset all = base.all();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const Subset si = Subset::singleton(i), sj = Subset::singleton(j), sk = Subset::singleton(k);
        const Subset rest = all - si - sj - sk;
        std::uint32_t sub = 0;
        do {
          const Subset kk(sub);
          std::vector<int> prem{idx.bit(i, j, kk | sk), idx.bit(i, k, kk)};
          std::vector<int> concl{idx.bit(i, k, kk | sj), idx.bit(i, j, kk)};
          std::sort(prem.begin(), prem.end());
          std::sort(concl.begin(), concl.end());
          detail::add_ground_rule(out, seen, std::move(prem), std::move(concl), "S2");
          sub = (sub - rest.bits()) & rest.bits();
        } while (sub != 0);
      }
  if (which == RuleSet::Semigraphoid) return out;

  if (n != 4) throw std::invalid_argument("E and I rules are only characterised for four variables");
  std::vector<int> assignment{0, 1, 2, 3};
  do {
    for (const auto& rule : rule_table()) {
      if (rule.family == RuleFamily::Semigraphoid) continue;
      auto prem = detail::ground_bits(idx, rule.premises, assignment);
      auto concl = detail::ground_bits(idx, rule.conclusions, assignment);
      detail::add_ground_rule(out, seen, prem, concl, rule.id);
      if (rule.bidirectional) detail::add_ground_rule(out, seen, concl, prem, rule.id);
    }
  } while (std::next_permutation(assignment.begin(), assignment.end()));
  return out;
}

// Closure engine over a fixed set of ground rules.
class RuleEngine {
 public:
  RuleEngine(BasicSet base, RuleSet which) : base_(std::move(base)), which_(which), rules_(ground_rules(base_, which)) {
    const int cap = TripletIndex::of(base_.size()).size();
    by_premise_.resize(static_cast<std::size_t>(cap));
    for (std::size_t r = 0; r < rules_.size(); ++r)
      for (int b : rules_[r].premises) by_premise_[static_cast<std::size_t>(b)].push_back(r);
    if (cap <= 64) {
      for (const auto& r : rules_) {
        std::uint64_t p = 0, c = 0;
        for (int b : r.premises) p |= std::uint64_t{1} << b;
        for (int b : r.conclusions) c |= std::uint64_t{1} << b;
        packed_.push_back({p, c});
      }
    }
  }

  const BasicSet& base() const { return base_; }
  RuleSet rule_set() const { return which_; }
  const std::vector<GroundRule>& rules() const { return rules_; }

  // Least superset of `s` closed under every ground rule (worklist fixpoint).
  CIStructure closure(const CIStructure& s) const {
    check_base(s);
    CIStructure out = s;
    std::vector<int> work;
    for (int b = 0; b < out.capacity(); ++b)
      if (out.test_bit(b)) work.push_back(b);
    std::vector<char> fired(rules_.size(), 0);
    while (!work.empty()) {
      const int b = work.back();
      work.pop_back();
      for (std::size_t r : by_premise_[static_cast<std::size_t>(b)]) {
        if (fired[r]) continue;
        const auto& rule = rules_[r];
        if (!std::all_of(rule.premises.begin(), rule.premises.end(), [&](int p) { return out.test_bit(p); })) continue;
        fired[r] = 1;
        for (int c : rule.conclusions)
          if (!out.test_bit(c)) {
            out.set_bit(c);
            work.push_back(c);
          }
      }
    }
    return out;
  }

  bool is_closed(const CIStructure& s) const {
    check_base(s);
    if (!packed_.empty()) return is_closed_mask(s.mask());
    for (const auto& rule : rules_) {
      auto holds = [&](int b) { return s.test_bit(b); };
      if (std::all_of(rule.premises.begin(), rule.premises.end(), holds) &&
          !std::all_of(rule.conclusions.begin(), rule.conclusions.end(), holds))
        return false;
    }
    return true;
  }

  // Mask form, bases with at most 64 triplets (|N| <= 4).
  bool is_closed_mask(std::uint64_t s) const {
    for (const auto& [p, c] : packed_)
      if ((s & p) == p && (s & c) != c) return false;
    return true;
  }
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& packed() const { return packed_; }

 private:
  void check_base(const CIStructure& s) const {
    if (!(s.base() == base_)) throw std::invalid_argument("structure and rule engine use different basic sets");
  }

  BasicSet base_;
  RuleSet which_;
  std::vector<GroundRule> rules_;
  std::vector<std::vector<std::size_t>> by_premise_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> packed_;
};

}  // namespace cinfer
