#include "cinfer/cinfer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cinfer;

namespace {

struct Options {
  bool json = false;
  double tol = 1e-9;
  unsigned threads = 1;
  std::string data_dir = default_data_dir();
};

// Verification failure (exit 1), as opposed to bad input (exit 2).
struct Failed {};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

void print_structure(const CIStructure& s, const Options& o) {
  if (o.json) {
    std::cout << structure_to_json(s).dump(1) << "\n";
    return;
  }
  for (const auto& t : s.members()) std::cout << format_statement(s.base(), t) << "\n";
}

int cmd_entropy(const std::string& path, const Options& o) {
  const auto p = distribution_from_json(read_json_file(path));
  const auto h = entropy_function(p);
  if (o.json) {
    std::cout << set_function_to_json(h).dump(1) << "\n";
    return 0;
  }
  for (std::uint32_t s = 1; s < p.base().power_set_size(); ++s)
    std::cout << p.base().label(Subset(s)) << "\t" << NumericTraits<double>::format(h(Subset(s))) << "\n";
  return 0;
}

int cmd_check_ci(const std::string& path, const std::string& stmt, const Options& o) {
  const auto p = distribution_from_json(read_json_file(path));
  Triplet t;
  try {
    t = parse_statement(p.base(), stmt);
  } catch (const std::exception& e) {
    throw InputError(std::string("statement: ") + e.what());
  }
  const bool holds = is_ci(p, t);
  if (o.json)
    std::cout << Json{{"statement", format_statement(p.base(), t)}, {"holds", holds}}.dump() << "\n";
  else
    std::cout << (holds ? "true" : "false") << "\n";
  return 0;
}

int cmd_structure(const std::string& path, const Options& o) {
  print_structure(induced_ci_structure(distribution_from_json(read_json_file(path))), o);
  return 0;
}

int cmd_ingleton(const std::string& path, const std::string& xyzu, const Options& o) {
  const auto p = distribution_from_json(read_json_file(path));
  const auto parts = split(xyzu, ',');
  if (parts.size() != 4) throw InputError("--xyzu expects four comma-separated variable groups");
  Assignment a;
  for (std::size_t k = 0; k < 4; ++k) {
    try {
      a[k] = p.base().parse_label(parts[k]);
    } catch (const std::exception& e) {
      throw InputError(std::string("--xyzu: ") + e.what());
    }
    if (a[k].is_empty()) throw InputError("--xyzu: empty variable group");
  }
  if (!pairwise_disjoint({a[0], a[1], a[2], a[3]})) throw InputError("--xyzu: groups must be disjoint");
  const double v = ingleton(entropy_function(p), a[0], a[1], a[2], a[3]);
  if (o.json)
    std::cout << Json{{"ingleton", v}}.dump() << "\n";
  else
    std::cout << NumericTraits<double>::format(v) << "\n";
  return 0;
}

int cmd_closure(const std::string& path, const std::string& rules, const Options& o) {
  const auto s = structure_from_json(read_json_file(path));
  RuleSet which = rules == "sg" ? RuleSet::Semigraphoid : RuleSet::All;
  if (which == RuleSet::All && s.base().size() != 4) {
    if (rules == "all") throw InputError("the full rule set is only available for four variables");
    which = RuleSet::Semigraphoid;
  }
  print_structure(RuleEngine(s.base(), which).closure(s), o);
  return 0;
}

int cmd_enumerate(const std::string& rules, const std::string& dump, const Options& o) {
  const RuleSet which = rules == "sg" ? RuleSet::Semigraphoid : RuleSet::All;
  std::cerr << "scanning 2^24 candidate structures ("
            << (which == RuleSet::Semigraphoid ? "semi-graphoid rules" : "all rules") << ", " << o.threads
            << " thread(s))...\n";
  const RuleEngine engine(BasicSet::xyzu(), which);
  const auto r = enumerate_closed(engine, !dump.empty(), o.threads);
  std::cerr << "done\n";
  if (!dump.empty()) {
    std::ofstream out(dump);
    if (!out) throw InputError("cannot write '" + dump + "'");
    write_hex_lines(out, r.structures, TripletIndex::of(4).size());
  }
  if (o.json)
    std::cout << Json{{"rules", rules}, {"count", r.count}, {"ground_rules", engine.rules().size()}}.dump() << "\n";
  else
    std::cout << r.count << "\n";
  return 0;
}

int cmd_irreducibles(const Options& o) {
  const Catalog catalog(o.data_dir);
  const auto census = all_irreducibles(catalog);
  if (o.json) {
    Json orbits = Json::array();
    for (const auto& [id, n] : census.orbits) orbits.push_back({{"representative", id}, {"orbit_size", n}});
    Json members = Json::array();
    for (const auto& s : census.members) members.push_back(structure_to_hex(s));
    std::cout << Json{{"count", census.members.size()}, {"types", census.types()}, {"orbits", orbits},
                      {"members", members}}
                     .dump(1)
              << "\n";
  } else {
    std::cout << census.members.size() << " irreducible structures in " << census.types() << " types\n";
    for (const auto& [id, n] : census.orbits) std::cout << id << "\t" << n << "\n";
  }
  return 0;
}

int cmd_verify_paper(const std::string& only, const Options& o) {
  PaperChecks checks(o.data_dir, o.threads);
  std::vector<CriterionResult> results;
  if (only.empty()) {
    results = checks.run_all();
  } else if (std::all_of(only.begin(), only.end(), ::isdigit)) {
    const int k = std::stoi(only);
    if (k < 1 || k > 12) throw InputError("--only: criterion number must be in 1..12");
    results.push_back(checks.run(k));
  } else {
    const auto& entry = [&]() -> const CatalogEntry& {
      try {
        return checks.catalog().get(only);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--only: ") + e.what());
      }
    }();
    const auto report = verify(entry, &checks.engine());
    std::ostringstream detail;
    for (const auto& c : report.checks)
      detail << "\n  " << (c.ok ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")");
    results.push_back({0, "catalog entry " + only, report.ok(), detail.str()});
  }
  bool all_ok = true;
  Json out = Json::array();
  for (const auto& r : results) {
    all_ok = all_ok && r.ok;
    if (o.json) {
      out.push_back({{"criterion", r.number}, {"name", r.name}, {"pass", r.ok}, {"detail", r.detail},
                     {"seconds", r.seconds}});
    } else {
      std::cout << (r.ok ? "PASS" : "FAIL") << "  ";
      if (r.number > 0) std::cout << r.number << ". ";
      std::cout << r.name << (r.detail.starts_with('\n') ? "" : ": ") << r.detail;
      if (r.number > 0) std::cout << " [" << r.seconds << " s]";
      std::cout << "\n";
    }
  }
  if (o.json) std::cout << out.dump(1) << "\n";
  if (!all_ok) throw Failed{};
  return 0;
}

int cmd_verify_inequality(const std::string& id, int samples, const Options& o) {
  const Catalog catalog(o.data_dir);
  if (id == "sixth") {
    const auto r = check_sixth_failure(catalog);
    if (o.json)
      std::cout << Json{{"premises_hold", r.premises_hold}, {"ingleton", r.ingleton_value}}.dump() << "\n";
    else
      std::cout << "EX5 with X _||_ Z | U and Y _||_ U | Z: premises hold: " << (r.premises_hold ? "true" : "false")
                << ", ingleton = " << r.ingleton_value << (r.counterexample() ? " (counterexample)" : "") << "\n";
    if (!r.counterexample()) throw Failed{};
    return 0;
  }
  ConditionalIngletonRule rule;
  int base_id = 0;
  try {
    base_id = std::stoi(id.substr(0, 1));
    rule = id.size() == 1 ? conditional_ingleton_rule(base_id) : conditional_ingleton_rule(id);
  } catch (const std::exception&) {
    throw InputError("inequality id must be 1..5, 1cI..5cI or 'sixth'");
  }
  if (rule.substitution != kIdentityMap) throw InputError("random checks cover the rules 1cI..5cI");
  Rng rng(20260 + static_cast<unsigned>(rule.base_rule));
  int violations = 0, missed = 0;
  double worst = 1e300;
  for (int n = 0; n < samples; ++n) {
    const auto p = random_premise_distribution(rule.base_rule, rng, n);
    const auto r = check_conditional_ingleton(p, rule, singleton_assignment());
    if (!r.premises_hold) ++missed;
    if (r.premises_hold && r.ingleton_value < -o.tol) ++violations;
    worst = std::min(worst, r.ingleton_value);
  }
  if (o.json)
    std::cout << Json{{"rule", rule.id}, {"samples", samples}, {"violations", violations},
                      {"premises_missed", missed}, {"min_ingleton", worst}}
                     .dump()
              << "\n";
  else
    std::cout << rule.id << ": " << samples << " samples, " << violations << " violations, smallest ingleton "
              << worst << "\n";
  if (violations || missed) throw Failed{};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional independence inference and verification toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--tol", o.tol, "tolerance for floating-point comparisons")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", o.threads, "worker threads for enumeration")->check(CLI::PositiveNumber);
  app.add_option("--data-dir", o.data_dir, "directory with catalog/ and derivations.json");

  std::string dist, stmt, structure, xyzu, rules = "all", dump, only, ineq;
  int samples = 200;

  auto* entropy = app.add_subcommand("entropy", "entropy function of a distribution");
  entropy->add_option("dist", dist)->required();
  auto* check_ci = app.add_subcommand("check-ci", "test a CI statement such as \"x _||_ y | z\"");
  check_ci->add_option("dist", dist)->required();
  check_ci->add_option("statement", stmt)->required();
  auto* structure_cmd = app.add_subcommand("structure", "induced CI structure of a distribution");
  structure_cmd->add_option("dist", dist)->required();
  auto* ingleton_cmd = app.add_subcommand("ingleton", "Ingleton expression of the entropy function");
  ingleton_cmd->add_option("dist", dist)->required();
  ingleton_cmd->add_option("--xyzu", xyzu, "four comma-separated variable groups")->required();
  auto* closure = app.add_subcommand("closure", "closure of a CI structure under the inference rules");
  closure->add_option("structure", structure)->required();
  closure->add_option("--rules", rules)->check(CLI::IsMember({"sg", "all"}));
  auto* enumerate = app.add_subcommand("enumerate", "count closed structures over four variables");
  enumerate->add_option("--rules", rules)->check(CLI::IsMember({"sg", "all"}));
  enumerate->add_option("--dump", dump, "write the structures as hex lines");
  auto* irreducibles = app.add_subcommand("irreducibles", "the meet-irreducible CI structures");
  auto* verify_paper = app.add_subcommand("verify-paper", "run all reproduction checks");
  verify_paper->add_option("--only", only, "criterion number 1..12 or a catalog id");
  auto* verify_ineq = app.add_subcommand("verify-inequality", "random checks of a conditional Ingleton rule");
  verify_ineq->add_option("id", ineq, "1..5 or 'sixth'")->required();
  verify_ineq->add_option("--samples", samples)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*entropy) return cmd_entropy(dist, o);
    if (*check_ci) return cmd_check_ci(dist, stmt, o);
    if (*structure_cmd) return cmd_structure(dist, o);
    if (*ingleton_cmd) return cmd_ingleton(dist, xyzu, o);
    if (*closure) return cmd_closure(structure, closure->count("--rules") ? rules : "auto", o);
    if (*enumerate) return cmd_enumerate(rules, dump, o);
    if (*irreducibles) return cmd_irreducibles(o);
    if (*verify_paper) return cmd_verify_paper(only, o);
    if (*verify_ineq) return cmd_verify_inequality(ineq, samples, o);
  } catch (const Failed&) {
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
