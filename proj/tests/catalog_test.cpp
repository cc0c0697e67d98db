#include "test_support.hpp"

#include <filesystem>
#include <fstream>

using namespace cinfer;
using namespace testing_support;

namespace {
const BasicSet N4 = BasicSet::xyzu();
}

TEST(Catalog, Lookup) {
  const auto& e = catalog().get("EX5");
  ASSERT_TRUE(e.distribution.has_value());
  EXPECT_EQ(e.distribution->support_size(), 10u);
  EXPECT_EQ(catalog().get("CON7").distribution->support_size(), 9u);
  EXPECT_THROW(catalog().get("EX9"), std::invalid_argument);
  EXPECT_EQ(catalog_ids().size(), 16u);
  EXPECT_FALSE(catalog().get("HXY").distribution.has_value());
  EXPECT_EQ(*catalog().get("HXY").rank_function, rank_hxy());
}

TEST(Catalog, FullIsUniform) {
  const auto& p = dist("FULL");
  EXPECT_EQ(p, JointDistribution::uniform(p.space()));
  EXPECT_EQ(induced_ci_structure(p), CIStructure::full(N4));
}

TEST(Catalog, EveryEntryVerifies) {
  const RuleEngine engine(N4, RuleSet::All);
  for (const auto& id : catalog_ids()) {
    const auto r = verify(catalog().get(id), &engine);
    EXPECT_FALSE(r.checks.empty()) << id;
    for (const auto& c : r.checks) EXPECT_TRUE(c.ok) << id << ": " << c.name << " " << c.detail;
  }
}

TEST(Catalog, ProportionalityConstants) {
  const auto r1 = verify(catalog().get("CON1"));
  ASSERT_TRUE(r1.proportionality.has_value());
  EXPECT_NEAR(*r1.proportionality, std::log(2.0), 1e-12);
  const auto r7 = verify(catalog().get("CON7"));
  ASSERT_TRUE(r7.proportionality.has_value());
  EXPECT_NEAR(*r7.proportionality, std::log(3.0), 1e-12);
}

TEST(Catalog, CoatomStatementCounts) {
  const std::map<std::string, int> counts = {{"CON1", 20}, {"CON2", 18}, {"CON3", 18}, {"CON4", 18}, {"CON5", 18},
                                             {"CON6", 14}, {"CON7", 12}, {"CON8", 12}, {"CON9", 12}};
  for (const auto& [id, n] : counts) {
    EXPECT_EQ(entry_structure(catalog().get(id)).count(), n) << id;
    EXPECT_TRUE(catalog().get(id).coatom) << id;
  }
}

TEST(Catalog, CoatomsAreMaximalProperStructures) {
  const RuleEngine engine(N4, RuleSet::All);
  const auto family = enumerate_closed(engine, true).structures;
  const std::uint64_t full = CIStructure::full(N4).mask();
  for (const auto& id : coatom_ids()) {
    const auto s = entry_structure(catalog().get(id)).mask();
    for (std::uint64_t t : family) ASSERT_FALSE((t & s) == s && t != s && t != full) << id;
  }
}

TEST(Catalog, CorruptedEntryFailsVerification) {
  auto e = catalog().get("CON2");
  e.claimed_statement_count = *e.claimed_statement_count + 1;
  EXPECT_FALSE(verify(e).ok());
  auto f = catalog().get("EX1");
  f.claimed_statements.push_back(parse_statement(N4, "z _||_ u |"));
  EXPECT_FALSE(verify(f).ok());
  auto g = catalog().get("CON3");
  g.matroid = !*g.matroid;
  EXPECT_FALSE(verify(g).ok());
}

TEST(Catalog, IrreducibleCensus) {
  const auto c = all_irreducibles(catalog());
  EXPECT_EQ(c.members.size(), 92u);
  EXPECT_EQ(c.types(), 14u);
  int total = 0;
  for (const auto& [id, n] : c.orbits) total += n;
  EXPECT_EQ(total, 92);
}

TEST(Catalog, BadDirectory) {
  EXPECT_THROW(Catalog("/nonexistent/cinfer"), InputError);
}

TEST(Catalog, MalformedEntryReported) {
  const auto dir = std::filesystem::temp_directory_path() / "cinfer_catalog_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "catalog");
  for (const auto& id : catalog_ids())
    std::filesystem::copy_file(std::filesystem::path(default_data_dir()) / "catalog" / (id + ".json"),
                               dir / "catalog" / (id + ".json"));
  {
    std::ofstream out(dir / "catalog" / "EX2.json");
    out << R"({"id": "EX2", "distribution": {"variables": [{"name": "x", "cardinality": 2}],
              "density": [{"config": [0], "prob": "1/2"}, {"config": [1], "prob": "x"}]}})";
  }
  try {
    Catalog c(dir.string());
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("density[1]"), std::string::npos) << e.what();
  }
  std::filesystem::remove_all(dir);
}

TEST(PaperChecks, FastCriteria) {
  PaperChecks checks(default_data_dir(), 1, 7);
  for (int k : {5, 6, 7, 8, 9, 10}) {
    const auto r = checks.run(k);
    EXPECT_TRUE(r.ok) << k << " " << r.name << ": " << r.detail;
  }
  EXPECT_THROW(checks.run(13), std::invalid_argument);
}
