#pragma once

#include "cinfer/ci_structure.hpp"
#include "cinfer/distribution.hpp"
#include "cinfer/json_io.hpp"
#include "cinfer/rules.hpp"
#include "cinfer/set_function.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#ifndef CINFER_DATA_DIR
#define CINFER_DATA_DIR "data"
#endif

namespace cinfer {

// Directory holding catalog/ and derivations.json; $CINFER_DATA_DIR wins over the build default.
inline std::string default_data_dir() {
  if (const char* env = std::getenv("CINFER_DATA_DIR"); env && *env) return env;
  return CINFER_DATA_DIR;
}

struct IngletonMaskClaim {
  int mask;
  Triplet negative_term;  // over x, y, z, u
};

struct CatalogEntry {
  std::string id;
  std::string title;
  std::optional<JointDistribution> distribution;
  std::optional<SetFunction<Rational>> rank_function;
  std::optional<CIStructure> structure;    // exact induced structure, when claimed
  std::vector<Triplet> claimed_statements;  // statements claimed to hold
  std::optional<int> claimed_statement_count;
  std::optional<int> claimed_orbit_size;
  std::optional<bool> matroid;
  std::optional<bool> tight;
  bool coatom = false;
  std::vector<IngletonMaskClaim> ingleton_masks;
  Json raw;
};

inline const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids = {"EX1",  "EX2",  "EX3",  "EX4",  "EX5",  "HXY",  "CON1", "CON2",
                                               "CON3", "CON4", "CON5", "CON6", "CON7", "CON8", "CON9", "FULL"};
  return ids;
}

inline const std::vector<std::string>& coatom_ids() {
  static const std::vector<std::string> ids = {"CON1", "CON2", "CON3", "CON4", "CON5",
                                               "CON6", "CON7", "CON8", "CON9"};
  return ids;
}

inline const std::vector<std::string>& counterexample_ids() {
  static const std::vector<std::string> ids = {"EX1", "EX2", "EX3", "EX4"};
  return ids;
}

inline CatalogEntry catalog_entry_from_json(const Json& j) {
  CatalogEntry e;
  e.raw = j;
  e.id = detail::as_string(detail::require(j, "id", "catalog entry"), "catalog entry.id");
  const std::string where = "catalog entry " + e.id;
  if (j.contains("title")) e.title = j.at("title").get<std::string>();
  if (j.contains("distribution")) e.distribution = distribution_from_json(j.at("distribution"));
  if (j.contains("rank_function")) e.rank_function = set_function_from_json(j.at("rank_function"));
  if (!e.distribution && !e.rank_function) throw InputError(where + ": needs a distribution or a rank function");
  const BasicSet base = e.distribution ? e.distribution->base() : e.rank_function->base();
  if (j.contains("structure")) e.structure = structure_from_json(j.at("structure"));
  if (j.contains("claimed_statements"))
    for (const auto& s : j.at("claimed_statements"))
      e.claimed_statements.push_back(detail::wrap(where, [&] { return parse_statement(base, s.get<std::string>()); }));
  if (j.contains("claimed_statement_count")) e.claimed_statement_count = j.at("claimed_statement_count").get<int>();
  if (j.contains("claimed_orbit_size")) e.claimed_orbit_size = j.at("claimed_orbit_size").get<int>();
  if (j.contains("matroid")) e.matroid = j.at("matroid").get<bool>();
  if (j.contains("tight")) e.tight = j.at("tight").get<bool>();
  if (j.contains("coatom")) e.coatom = j.at("coatom").get<bool>();
  if (j.contains("ingleton_masks"))
    for (const auto& m : j.at("ingleton_masks"))
      e.ingleton_masks.push_back(
          {m.at("mask").get<int>(),
           detail::wrap(where, [&] { return parse_statement(base, m.at("negative_term").get<std::string>()); })});
  return e;
}

class Catalog {
 public:
  explicit Catalog(std::string data_dir = default_data_dir()) : dir_(std::move(data_dir)) {
    for (const auto& id : catalog_ids()) {
      const auto path = std::filesystem::path(dir_) / "catalog" / (id + ".json");
      entries_.emplace(id, catalog_entry_from_json(read_json_file(path.string())));
    }
  }

  const std::string& data_dir() const { return dir_; }

  const CatalogEntry& get(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw std::invalid_argument("unknown catalog id '" + id + "'");
    return it->second;
  }

 private:
  std::string dir_;
  std::map<std::string, CatalogEntry> entries_;
};

struct CheckResult {
  std::string name;
  bool ok;
  std::string detail;
};

struct CatalogReport {
  std::string id;
  std::vector<CheckResult> checks;
  std::optional<double> proportionality;  // c with entropy = c * rank
  std::optional<CIStructure> induced;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

// Structure induced by the entry: from its distribution when present, else from its rank function.
inline CIStructure entry_structure(const CatalogEntry& e) {
  return e.distribution ? induced_ci_structure(*e.distribution) : induced_ci_structure_of_rank(*e.rank_function);
}

inline CatalogReport verify(const CatalogEntry& e, const RuleEngine* engine = nullptr) {
  CatalogReport r;
  r.id = e.id;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  std::optional<SetFunction<double>> entropy;
  if (e.distribution) {
    entropy = entropy_function(*e.distribution);
    add("entropy is a polymatroid", is_polymatroid(*entropy).ok);
  }

  if (e.distribution && e.rank_function) {
    const Subset all = e.rank_function->base().all();
    const Rational top = (*e.rank_function)(all);
    if (top <= 0) {
      add("proportionality", false, "rank(N) must be positive");
    } else {
      const double c = (*entropy)(all) / to_double(top);
      r.proportionality = c;
      double worst = 0;
      for (std::uint32_t s = 0; s < e.rank_function->base().power_set_size(); ++s)
        worst = std::max(worst, std::abs((*entropy)(Subset(s)) - c * to_double((*e.rank_function)(Subset(s)))));
      add("entropy = c * rank", c > 0 && worst <= 1e-9, "c = " + std::to_string(c));
    }
  }

  if (e.rank_function) {
    const auto& h = *e.rank_function;
    const auto w = is_polymatroid(h);
    add("rank function is a polymatroid", w.ok);
    if (e.matroid) add(*e.matroid ? "is a matroid" : "is not a matroid", is_matroid(h) == *e.matroid);
    if (e.tight && w.ok) add(*e.tight ? "is tight" : "is not tight", is_tight(h) == *e.tight);
    if (e.raw.contains("ingleton_xyzu") && h.base().size() == 4) {
      const Rational expected = parse_rational(e.raw.at("ingleton_xyzu").get<std::string>());
      const Rational got = ingleton(h, Subset::singleton(0), Subset::singleton(1), Subset::singleton(2),
                                    Subset::singleton(3));
      add("ingleton(x,y,z,u)", got == expected, format_rational(got));
    }
  }

  const CIStructure induced = entry_structure(e);
  r.induced = induced;
  if (e.distribution && e.rank_function)
    add("distribution and rank function induce the same structure",
        induced == induced_ci_structure_of_rank(*e.rank_function));
  if (entropy)
    add("exact CI tests agree with vanishing entropy differences",
        induced == induced_ci_structure_of_rank(*entropy, 1e-9));

  if (e.structure) add("induced structure equals the listed one", induced == *e.structure);
  if (e.claimed_statement_count)
    add("statement count", induced.count() == *e.claimed_statement_count, std::to_string(induced.count()));
  for (const auto& t : e.claimed_statements) {
    const bool holds = e.distribution ? is_ci(*e.distribution, t) : delta(*e.rank_function, t) == 0;
    add("holds: " + format_statement(induced.base(), t), holds);
  }
  if (e.claimed_orbit_size) {
    const auto size = static_cast<int>(orbit(induced).size());
    add("orbit size", size == *e.claimed_orbit_size, std::to_string(size));
  }
  if (engine && e.distribution) add("closed under the inference rules", engine->is_closed(induced));
  return r;
}

struct IrreducibleCensus {
  std::vector<CIStructure> members;                  // sorted, distinct
  std::vector<std::pair<std::string, int>> orbits;   // representative id -> orbit size
  std::size_t types() const { return orbits.size(); }
};

// Orbits of CON1..CON9 and EX1..EX4 plus the full structure.
inline IrreducibleCensus all_irreducibles(const Catalog& catalog) {
  IrreducibleCensus c;
  std::vector<std::string> ids = coatom_ids();
  ids.insert(ids.end(), counterexample_ids().begin(), counterexample_ids().end());
  ids.push_back("FULL");
  for (const auto& id : ids) {
    auto o = orbit(entry_structure(catalog.get(id)));
    c.orbits.emplace_back(id, static_cast<int>(o.size()));
    c.members.insert(c.members.end(), o.begin(), o.end());
  }
  std::sort(c.members.begin(), c.members.end());
  c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
  return c;
}

}  // namespace cinfer
