#pragma once

#include "cinfer/cinfer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

namespace testing_support {

using namespace cinfer;

inline const Catalog& catalog() {
  static const Catalog c;
  return c;
}

inline const JointDistribution& dist(const std::string& id) { return *catalog().get(id).distribution; }

inline Subset S(const BasicSet& b, std::initializer_list<std::string_view> labels) { return b.subset(labels); }

// Brute-force probability of the sub-configuration `c` of the variables in `a`:
// direct summation over the full density.
inline Rational oracle_prob(const JointDistribution& p, Subset a, const std::vector<int>& full_cfg) {
  Rational sum = 0;
  for (const auto& [cfg, pr] : p.density()) {
    bool match = true;
    for (int i : a.elements()) match = match && cfg[static_cast<std::size_t>(i)] == full_cfg[static_cast<std::size_t>(i)];
    if (match) sum += pr;
  }
  return sum;
}

// Literal reading of p_XYZ * p_Z = p_XZ * p_YZ at every configuration of the product space.
inline bool oracle_ci(const JointDistribution& p, Subset x, Subset y, Subset z) {
  const auto& cards = p.space().cardinalities();
  std::vector<int> cfg(cards.size(), 0);
  while (true) {
    if (oracle_prob(p, x | y | z, cfg) * oracle_prob(p, z, cfg) !=
        oracle_prob(p, x | z, cfg) * oracle_prob(p, y | z, cfg))
      return false;
    std::size_t i = 0;
    for (; i < cfg.size(); ++i) {
      if (++cfg[i] < cards[i]) break;
      cfg[i] = 0;
    }
    if (i == cfg.size()) return true;
  }
}

// -sum p ln p over the marginal of `a`, computed from scratch in long double.
inline double oracle_entropy(const JointDistribution& p, Subset a) {
  std::map<std::vector<int>, long double> m;
  for (const auto& [cfg, pr] : p.density()) {
    std::vector<int> key;
    for (int i : a.elements()) key.push_back(cfg[static_cast<std::size_t>(i)]);
    m[key] += static_cast<long double>(to_double(pr));
  }
  long double h = 0;
  for (const auto& [k, q] : m)
    if (q > 0) h -= q * std::log(q);
  return static_cast<double>(h);
}

inline JointDistribution make_dist(const BasicSet& base, std::vector<int> cards,
                                   std::vector<std::pair<std::vector<int>, Rational>> rows) {
  std::map<Configuration, Rational> d;
  for (auto& [c, p] : rows) d[c] += p;
  return JointDistribution(SampleSpace(base, std::move(cards)), std::move(d));
}

inline std::vector<std::string> distribution_ids() {
  std::vector<std::string> out;
  for (const auto& id : catalog_ids())
    if (catalog().get(id).distribution) out.push_back(id);
  return out;
}

}  // namespace testing_support
