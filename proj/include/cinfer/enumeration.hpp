#pragma once

#include "cinfer/ci_structure.hpp"
#include "cinfer/rules.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cinfer {

struct EnumerationResult {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> structures;  // filled only when collecting; sorted
};

// Scans every subset of the elementary triplets and keeps the closed ones.
// Mask form, so the triplet count must be at most 32 (|N| <= 4).
inline EnumerationResult enumerate_closed(const RuleEngine& engine, bool collect = false, unsigned threads = 1) {
  const int cap = TripletIndex::of(engine.base().size()).size();
  if (cap > 32) throw std::invalid_argument("exhaustive enumeration supports at most four variables");
  const std::uint64_t total = std::uint64_t{1} << cap;
  threads = std::max(1u, threads);

  std::vector<EnumerationResult> parts(threads);
  auto work = [&](unsigned t) {
    auto& part = parts[t];
    for (std::uint64_t s = t; s < total; s += threads)
      if (engine.is_closed_mask(s)) {
        ++part.count;
        if (collect) part.structures.push_back(s);
      }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  EnumerationResult out;
  for (auto& p : parts) {
    out.count += p.count;
    out.structures.insert(out.structures.end(), p.structures.begin(), p.structures.end());
  }
  std::sort(out.structures.begin(), out.structures.end());
  return out;
}

// Smallest family containing the full structure and the seeds, closed under
// pairwise intersection.
inline std::vector<std::uint64_t> meet_closure(const std::vector<std::uint64_t>& seeds, std::uint64_t full) {
  std::set<std::uint64_t> family{full};
  for (std::uint64_t s : seeds) {
    std::vector<std::uint64_t> fresh{s};
    for (std::uint64_t f : family) fresh.push_back(s & f);
    family.insert(fresh.begin(), fresh.end());
  }
  return {family.begin(), family.end()};
}

inline std::vector<CIStructure> meet_closure(const std::vector<CIStructure>& seeds, const BasicSet& base) {
  const auto full = CIStructure::full(base);
  std::vector<std::uint64_t> masks;
  for (const auto& s : seeds) masks.push_back(s.mask());
  std::vector<CIStructure> out;
  for (auto m : meet_closure(masks, full.mask())) out.push_back(CIStructure::from_mask(base, m));
  return out;
}

// Members of `family` that are not the meet of strictly larger members
// (the full structure is always kept).
inline std::vector<std::uint64_t> meet_irreducibles(const std::vector<std::uint64_t>& family, std::uint64_t full) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s : family) {
    if (s == full) {
      out.push_back(s);
      continue;
    }
    std::uint64_t m = full;
    for (std::uint64_t t : family)
      if (t != s && (t & s) == s) m &= t;
    if (m != s) out.push_back(s);
  }
  return out;
}

inline void write_hex_lines(std::ostream& os, const std::vector<std::uint64_t>& masks, int cap) {
  const int digits = (cap + 3) / 4;
  char buf[32];
  for (auto m : masks) {
    std::snprintf(buf, sizeof buf, "%0*llx\n", digits, static_cast<unsigned long long>(m));
    os << buf;
  }
}

}  // namespace cinfer
