#pragma once

#include "cinfer/basic_set.hpp"
#include "cinfer/ci_structure.hpp"
#include "cinfer/distribution.hpp"
#include "cinfer/rational.hpp"
#include "cinfer/set_function.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cinfer {

using Json = nlohmann::json;

// Malformed input; the message names the offending field or row.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  throw InputError(where + ": expected a string");
}

inline Rational as_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a number or rational string");
}

template <typename F>
auto wrap(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}
}  // namespace detail

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---- set functions ------------------------------------------------------------

template <typename T>
Json set_function_to_json(const SetFunction<T>& h) {
  Json values = Json::object();
  for (std::uint32_t s = 0; s < h.base().power_set_size(); ++s)
    values[h.base().label(Subset(s))] = NumericTraits<T>::format(h(Subset(s)));
  return {{"base", h.base().names()}, {"values", values}};
}

// Every subset must be present exactly once; keys are label concatenations in any order.
inline SetFunction<Rational> set_function_from_json(const Json& j) {
  const Json& base_j = detail::require(j, "base", "set function");
  const BasicSet base = detail::wrap("set function.base", [&] { return BasicSet(base_j.get<std::vector<std::string>>()); });
  const Json& values = detail::require(j, "values", "set function");
  if (!values.is_object()) throw InputError("set function.values: expected an object");
  SetFunction<Rational> h(base);
  std::vector<char> seen(base.power_set_size(), 0);
  for (const auto& [key, v] : values.items()) {
    const std::string where = "set function.values[\"" + key + "\"]";
    const Subset s = detail::wrap(where, [&] { return base.parse_label(key); });
    if (seen[s.bits()]) throw InputError(where + ": subset given twice");
    seen[s.bits()] = 1;
    h.set(s, detail::as_rational(v, where));
  }
  for (std::uint32_t s = 0; s < seen.size(); ++s)
    if (!seen[s]) throw InputError("set function.values: no value for subset \"" + base.label(Subset(s)) + "\"");
  return h;
}

// ---- distributions -------------------------------------------------------------

inline Json distribution_to_json(const JointDistribution& p) {
  Json vars = Json::array();
  for (int i = 0; i < p.base().size(); ++i)
    vars.push_back({{"name", p.base().name(i)}, {"cardinality", p.space().cardinality(i)}});
  Json rows = Json::array();
  for (const auto& [cfg, pr] : p.density()) rows.push_back({{"config", cfg}, {"prob", format_rational(pr)}});
  return {{"variables", vars}, {"density", rows}};
}

inline JointDistribution distribution_from_json(const Json& j) {
  const Json& vars = detail::require(j, "variables", "distribution");
  if (!vars.is_array()) throw InputError("distribution.variables: expected an array");
  std::vector<std::string> names;
  std::vector<int> cards;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string where = "distribution.variables[" + std::to_string(k) + "]";
    names.push_back(detail::as_string(detail::require(vars[k], "name", where), where + ".name"));
    const Json& c = detail::require(vars[k], "cardinality", where);
    if (!c.is_number_integer()) throw InputError(where + ".cardinality: expected an integer");
    cards.push_back(c.get<int>());
  }
  const SampleSpace space =
      detail::wrap("distribution.variables", [&] { return SampleSpace(BasicSet(names), cards); });

  const Json& rows = detail::require(j, "density", "distribution");
  if (!rows.is_array()) throw InputError("distribution.density: expected an array");
  std::map<Configuration, Rational> density;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string where = "distribution.density[" + std::to_string(r) + "]";
    const Json& cfg_j = detail::require(rows[r], "config", where);
    if (!cfg_j.is_array()) throw InputError(where + ".config: expected an array of indices");
    Configuration cfg;
    for (const auto& v : cfg_j) {
      if (!v.is_number_integer()) throw InputError(where + ".config: expected integer indices");
      cfg.push_back(v.get<int>());
    }
    if (!space.valid(cfg)) throw InputError(where + ".config: " + format_configuration(cfg) + " outside the sample space");
    const Rational pr = detail::as_rational(detail::require(rows[r], "prob", where), where + ".prob");
    if (pr < 0) throw InputError(where + ".prob: negative probability");
    if (density.count(cfg)) throw InputError(where + ": configuration listed twice");
    density.emplace(std::move(cfg), pr);
  }
  return detail::wrap("distribution", [&] { return JointDistribution(space, std::move(density)); });
}

// ---- CI structures --------------------------------------------------------------

inline Json structure_to_json(const CIStructure& s) {
  Json st = Json::array();
  for (const auto& t : s.members()) {
    Json k = Json::array();
    for (int v : t.k().elements()) k.push_back(s.base().name(v));
    st.push_back({{"i", s.base().name(t.i())}, {"j", s.base().name(t.j())}, {"K", k}});
  }
  return {{"variables", s.base().names()}, {"statements", st}};
}

inline CIStructure structure_from_json(const Json& j) {
  const Json& vars = detail::require(j, "variables", "structure");
  const BasicSet base = detail::wrap("structure.variables", [&] { return BasicSet(vars.get<std::vector<std::string>>()); });
  CIStructure s = detail::wrap("structure.variables", [&] { return CIStructure(base); });
  const Json& st = detail::require(j, "statements", "structure");
  if (!st.is_array()) throw InputError("structure.statements: expected an array");
  for (std::size_t k = 0; k < st.size(); ++k) {
    const std::string where = "structure.statements[" + std::to_string(k) + "]";
    detail::wrap(where, [&] {
      const int i = base.index_of(detail::as_string(detail::require(st[k], "i", where), where + ".i"));
      const int jj = base.index_of(detail::as_string(detail::require(st[k], "j", where), where + ".j"));
      const Subset kk = base.subset_of_labels(detail::require(st[k], "K", where).get<std::vector<std::string>>());
      s.insert(ElementaryTriplet(i, jj, kk));
      return 0;
    });
  }
  return s;
}

// Hex line form of a |N| = 4 structure (6 digits).
inline std::string structure_to_hex(const CIStructure& s) {
  const int digits = (s.capacity() + 3) / 4;
  std::ostringstream os;
  os << std::hex;
  os.width(digits);
  os.fill('0');
  os << s.mask();
  return os.str();
}

inline CIStructure structure_from_hex(const BasicSet& base, const std::string& line) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(line, &used, 16);
  } catch (const std::exception&) {
    throw InputError("bad hex structure line '" + line + "'");
  }
  if (used != line.size()) throw InputError("bad hex structure line '" + line + "'");
  return detail::wrap("hex structure", [&] { return CIStructure::from_mask(base, v); });
}

}  // namespace cinfer
