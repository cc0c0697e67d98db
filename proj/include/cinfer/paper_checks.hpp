#pragma once

#include "cinfer/catalog.hpp"
#include "cinfer/distribution.hpp"
#include "cinfer/enumeration.hpp"
#include "cinfer/inequalities.hpp"
#include "cinfer/rules.hpp"
#include "cinfer/set_function.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cinfer {

struct CriterionResult {
  int number;
  std::string name;
  bool ok;
  std::string detail;
  double seconds = 0;
};

// Shared state for the reproduction checks; enumeration results are computed once.
class PaperChecks {
 public:
  explicit PaperChecks(std::string data_dir = default_data_dir(), unsigned threads = 1, std::uint64_t seed = 20260)
      : catalog_(std::move(data_dir)), threads_(threads), seed_(seed) {}

  const Catalog& catalog() const { return catalog_; }

  static const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {
        "semi-graphoid count",         "CI-structure count",         "lattice equivalence",
        "irreducible census",          "EX5 closed form",      "counterexamples 1-4",
        "catalog verification",        "mask identities",            "h_xy",
        "derivation suite",            "conditional Ingleton suite", "distribution algebra"};
    return n;
  }

  CriterionResult run(int k) {
    if (k < 1 || k > 12) throw std::invalid_argument("criterion number must be in 1..12");
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r{k, names().at(static_cast<std::size_t>(k - 1)), false, {}};
    try {
      std::ostringstream detail;
      r.ok = dispatch(k, detail);
      r.detail = detail.str();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

  std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;
    for (int k = 1; k <= 12; ++k) out.push_back(run(k));
    return out;
  }

  const EnumerationResult& semigraphoids() {
    if (!sg_) sg_ = enumerate_closed(RuleEngine(BasicSet::xyzu(), RuleSet::Semigraphoid), true, threads_);
    return *sg_;
  }
  const EnumerationResult& ci_structures() {
    if (!ci_) ci_ = enumerate_closed(engine(), true, threads_);
    return *ci_;
  }
  const RuleEngine& engine() {
    if (!engine_) engine_.emplace(BasicSet::xyzu(), RuleSet::All);
    return *engine_;
  }

 private:
  bool dispatch(int k, std::ostream& d) {
    switch (k) {
      case 1: return c1(d);
      case 2: return c2(d);
      case 3: return c3(d);
      case 4: return c4(d);
      case 5: return c5(d);
      case 6: return c6(d);
      case 7: return c7(d);
      case 8: return c8(d);
      case 9: return c9(d);
      case 10: return c10(d);
      case 11: return c11(d);
      case 12: return c12(d);
      default: throw std::invalid_argument("criterion number must be in 1..12");
    }
  }

  bool c1(std::ostream& d) {
    const auto n = semigraphoids().count;
    d << n << " semi-graphoids";
    return n == 26424;
  }

  bool c2(std::ostream& d) {
    const auto n = ci_structures().count;
    d << n << " closed structures";
    return n == 18478;
  }

  bool c3(std::ostream& d) {
    const auto census = all_irreducibles(catalog_);
    std::vector<std::uint64_t> seeds;
    for (const auto& s : census.members) seeds.push_back(s.mask());
    const auto family = meet_closure(seeds, CIStructure::full(BasicSet::xyzu()).mask());
    const auto& closed = ci_structures().structures;
    d << "meet closure " << family.size() << ", closed family " << closed.size();
    bool ok = family == closed;
    // each counterexample structure is needed as a generator
    for (const auto& id : counterexample_ids()) {
      const std::uint64_t rep = entry_structure(catalog_.get(id)).mask();
      std::vector<std::uint64_t> without;
      for (auto m : seeds)
        if (m != rep) without.push_back(m);
      const auto smaller = meet_closure(without, CIStructure::full(BasicSet::xyzu()).mask());
      if (smaller.size() >= family.size()) {
        d << "; dropping " << id << " does not shrink the closure";
        ok = false;
      }
    }
    return ok;
  }

  bool c4(std::ostream& d) {
    const auto census = all_irreducibles(catalog_);
    const std::vector<int> expected{6, 4, 1, 4, 1, 6, 1, 4, 4, 6, 24, 24, 6, 1};
    std::vector<int> got;
    for (const auto& [id, n] : census.orbits) got.push_back(n);
    d << census.members.size() << " irreducibles in " << census.types() << " types";
    bool ok = census.members.size() == 92 && census.types() == 14 && got == expected;
    // co-atoms: the only closed strict superset is the full structure
    const auto& closed = ci_structures().structures;
    const std::uint64_t full = CIStructure::full(BasicSet::xyzu()).mask();
    for (const auto& id : coatom_ids()) {
      const std::uint64_t s = entry_structure(catalog_.get(id)).mask();
      for (auto t : closed)
        if (t != s && t != full && (t & s) == s) {
          d << "; " << id << " is not a co-atom";
          ok = false;
          break;
        }
    }
    const auto irr = meet_irreducibles(closed, full);
    d << "; meet-irreducibles of the family: " << irr.size();
    std::vector<std::uint64_t> members;
    for (const auto& s : census.members) members.push_back(s.mask());
    return ok && irr == members;
  }

  bool c5(std::ostream& d) {
    const auto r = verify_counterexample(catalog_, 5);
    d << "16*ingleton = " << 16 * r.ingleton_value;
    report_failures(r.checks, d);
    const auto six = check_sixth_failure(catalog_);
    return r.ok() && six.counterexample();
  }

  bool c6(std::ostream& d) {
    bool ok = true;
    for (int id = 1; id <= 4; ++id) {
      const auto r = verify_counterexample(catalog_, id);
      d << (id > 1 ? "; " : "") << r.id << " ingleton = " << r.ingleton_value;
      report_failures(r.checks, d);
      const auto v = verify(catalog_.get(r.id), &engine());
      report_failures(v.checks, d);
      ok = ok && r.ok() && v.ok();
    }
    return ok;
  }

  bool c7(std::ostream& d) {
    bool ok = true;
    for (const auto& id : coatom_ids()) {
      const auto r = verify(catalog_.get(id), &engine());
      const double expected = id == "CON7" ? std::log(3.0) : std::log(2.0);
      const bool c_ok = r.proportionality && std::abs(*r.proportionality - expected) <= 1e-9;
      d << id << ":" << (r.induced ? r.induced->count() : -1) << " ";
      report_failures(r.checks, d);
      if (!c_ok) d << "[" << id << " unexpected c] ";
      ok = ok && r.ok() && c_ok;
    }
    return ok;
  }

  bool c8(std::ostream& d) {
    Rng rng(seed_);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
    const auto base = BasicSet::xyzu();
    const Subset x = Subset::singleton(0), y = Subset::singleton(1), z = Subset::singleton(2), u = Subset::singleton(3);
    for (int n = 0; n < 1000; ++n) {
      SetFunction<Rational> h(base, [&](Subset) { return Rational(num(rng), den(rng)); });
      const Rational ing = ingleton(h, x, y, z, u);
      for (int k = 1; k <= 5; ++k)
        if (mask_form(h, k, x, y, z, u) != ing) {
          d << "random function " << n << " fails mask " << k;
          return false;
        }
    }
    for (std::uint32_t t = 0; t < base.power_set_size(); ++t) {
      const auto h = SetFunction<Rational>::indicator(base, Subset(t));
      for (int k = 1; k <= 5; ++k)
        if (mask_form(h, k, x, y, z, u) != ingleton(h, x, y, z, u)) {
          d << "indicator " << base.label(Subset(t)) << " fails mask " << k;
          return false;
        }
    }
    d << "1000 random functions and 16 indicators, 5 masks";
    return true;
  }

  bool c9(std::ostream& d) {
    const auto h = rank_hxy();
    const Rational ing = ingleton(h, Subset::singleton(0), Subset::singleton(1), Subset::singleton(2),
                                  Subset::singleton(3));
    const bool poly = is_polymatroid(h).ok, tight = is_tight(h), mat = is_matroid(h);
    d << "polymatroid " << poly << ", tight " << tight << ", matroid " << mat << ", ingleton " << format_rational(ing);
    return poly && tight && !mat && ing == -1;
  }

  bool c10(std::ostream& d) {
    const auto schemas = load_derivations(catalog_.data_dir());
    int good = 0, caught = 0;
    for (const auto& s : schemas) {
      const auto c = check_derivation(s);
      if (c.ok)
        ++good;
      else
        d << s.target << " fails at " << c.failure << "; ";
      for (const auto& m : mutations(s)) caught += verify_derivation(m) ? 0 : 1;
    }
    d << good << "/" << schemas.size() << " schemas verified, " << caught << "/" << 3 * schemas.size()
      << " mutations rejected";
    return schemas.size() == 19 && good == 19 && caught == 57;
  }

  bool c11(std::ostream& d) {
    Rng rng(seed_ + 11);
    bool ok = true;
    double worst = 1e9;
    for (int id = 1; id <= 5; ++id) {
      const auto rule = conditional_ingleton_rule(id);
      for (int n = 0; n < 200; ++n) {
        const auto p = random_premise_distribution(id, rng, n);
        const auto r = check_conditional_ingleton(p, rule, singleton_assignment());
        worst = std::min(worst, r.ingleton_value);
        if (!r.premises_hold || r.ingleton_value < -1e-9) {
          d << id << "cI sample " << n << (r.premises_hold ? " violates" : " misses premises") << "; ";
          ok = false;
        }
      }
    }
    const auto six = check_sixth_failure(catalog_);
    d << "1000 samples, smallest ingleton " << worst << "; sixth pair on EX5: premises "
      << six.premises_hold << ", ingleton " << six.ingleton_value;
    return ok && six.counterexample();
  }

  bool c12(std::ostream& d);

  static void report_failures(const std::vector<CheckResult>& checks, std::ostream& d) {
    for (const auto& c : checks)
      if (!c.ok) d << " [failed: " << c.name << (c.detail.empty() ? "" : " " + c.detail) << "]";
  }

  Catalog catalog_;
  unsigned threads_;
  std::uint64_t seed_;
  std::optional<EnumerationResult> sg_, ci_;
  std::optional<RuleEngine> engine_;
};

inline std::vector<std::string> catalog_distribution_ids() {
  std::vector<std::string> out;
  for (const auto& id : catalog_ids())
    if (id != "HXY") out.push_back(id);
  return out;
}

inline bool PaperChecks::c12(std::ostream& d) {
  Rng rng(seed_ + 12);
  const auto base = BasicSet::xyzu();

  // conditional products of random consonant pairs
  int cp_ok = 0;
  for (int n = 0; n < 500; ++n) {
    std::vector<int> role(4);  // 0 none, 1 A, 2 B, 3 C
    Subset a, b, c;
    do {
      a = b = c = Subset();
      for (int i = 0; i < 4; ++i) {
        role[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(0, 3)(rng);
        const Subset s = Subset::singleton(i);
        if (role[static_cast<std::size_t>(i)] == 1) a |= s;
        if (role[static_cast<std::size_t>(i)] == 2) b |= s;
        if (role[static_cast<std::size_t>(i)] == 3) c |= s;
      }
    } while (a.is_empty() || b.is_empty());
    const auto space = detail::random_space(base.names(), rng);
    const auto p1 = random_distribution(space, rng);
    const auto p2 = random_distribution(space, rng, true);
    const auto q = marginal(p1, a | c);
    auto r = marginal(p2, b | c);
    if (!c.is_empty()) r = detail::match_marginal(r, q);
    auto prod = conditional_product(q, r);
    std::vector<std::string> order;
    for (int i : (a | b | c).elements()) order.push_back(base.name(i));
    prod = reorder(prod, order);
    const Subset all = prod.base().all();
    auto local = [&](Subset s) {
      Subset out;
      for (int i : s.elements()) out |= Subset::singleton(prod.base().index_of(base.name(i)));
      return out;
    };
    const bool ok = marginal(prod, local(a | c)) == q && marginal(prod, local(b | c)) == r &&
                    is_ci(prod, local(a), local(b), local(c)) && local(a | b | c) == all;
    cp_ok += ok ? 1 : 0;
  }
  d << cp_ok << "/500 conditional products";
  bool ok = cp_ok == 500;

  // KL divergence against the conditional product of own marginals; double Markov extension
  int kl_checks = 0, kl_ok = 0, dm_checks = 0, dm_ok = 0;
  for (const auto& id : catalog_distribution_ids()) {
    const auto& p = *catalog_.get(id).distribution;
    const auto h = entropy_function(p);
    MarginalCache cache(p);
    for (int code = 0; code < 256; ++code) {
      Subset a, b, c;
      for (int i = 0; i < 4; ++i) {
        const int r = (code >> (2 * i)) & 3;
        if (r == 1) a |= Subset::singleton(i);
        if (r == 2) b |= Subset::singleton(i);
        if (r == 3) c |= Subset::singleton(i);
      }
      if (a.is_empty()) continue;
      if (!b.is_empty()) {
        const auto sub = marginal(p, a | b | c);
        const auto prod = conditional_product(p, a, b, c);
        ++kl_checks;
        if (std::abs(kl_divergence(sub, prod) - delta(h, a, b, c)) <= 1e-9) ++kl_ok;
      }
      if (is_ci(cache, a, b, c) && is_ci(cache, a, c, b)) {
        ++dm_checks;
        const auto ext = double_markov_extend(p, a, b, c);
        const auto& eb = ext.base();
        auto local = [&](Subset s) {
          Subset out;
          for (int i : s.elements()) out |= Subset::singleton(eb.index_of(base.name(i)));
          return out;
        };
        const Subset w = Subset::singleton(eb.size() - 1);
        const bool post = is_ci(ext, w, w, local(b)) && is_ci(ext, w, w, local(c)) &&
                          is_ci(ext, local(a), local(b | c), w) &&
                          marginal(ext, local(a | b | c)) == marginal(p, a | b | c);
        dm_ok += post ? 1 : 0;
      }
    }
  }
  d << "; KL " << kl_ok << "/" << kl_checks << "; double Markov " << dm_ok << "/" << dm_checks;
  ok = ok && kl_ok == kl_checks && dm_ok == dm_checks && dm_checks > 0;

  // lattice products of all catalog pairs
  int lp_checks = 0, lp_ok = 0;
  std::vector<std::pair<const JointDistribution*, CIStructure>> dists;
  for (const auto& id : catalog_distribution_ids()) {
    const auto& p = *catalog_.get(id).distribution;
    dists.emplace_back(&p, induced_ci_structure(p));
  }
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (std::size_t j = 0; j < dists.size(); ++j) {
      ++lp_checks;
      const auto prod = lattice_product(*dists[i].first, *dists[j].first);
      lp_ok += induced_ci_structure(prod) == meet(dists[i].second, dists[j].second) ? 1 : 0;
    }
  d << "; lattice products " << lp_ok << "/" << lp_checks;
  return ok && lp_ok == lp_checks;
}

}  // namespace cinfer
