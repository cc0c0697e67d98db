#include "test_support.hpp"

#include <random>

using namespace cinfer;
using namespace testing_support;

namespace {

const BasicSet N4 = BasicSet::xyzu();

std::vector<Assignment> all_singleton_assignments() {
  std::vector<Assignment> out;
  std::vector<int> perm{0, 1, 2, 3};
  do {
    out.push_back({Subset::singleton(perm[0]), Subset::singleton(perm[1]), Subset::singleton(perm[2]),
                   Subset::singleton(perm[3])});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Ingleton value from oracle entropies.
double oracle_ingleton(const JointDistribution& p, const Assignment& a) {
  auto h = [&](std::initializer_list<Subset> parts) {
    Subset s;
    for (Subset t : parts) s |= t;
    return oracle_entropy(p, s);
  };
  const Subset x = a[0], y = a[1], z = a[2], u = a[3];
  return -h({x, y}) + h({x, z}) + h({x, u}) + h({y, z}) + h({y, u}) + h({z, u}) - h({z}) - h({u}) - h({x, z, u}) -
         h({y, z, u});
}

}  // namespace

TEST(Rules, PremiseTexts) {
  const auto& ph = placeholders();
  auto st = [&](const char* s) { return parse_statement(ph, s); };
  const auto c1 = conditional_ingleton_rule(1);
  EXPECT_TRUE(same_statement_multiset({c1.premises.begin(), c1.premises.end()}, {st("X _||_ Y |"), st("X _||_ Y | Z")}));
  EXPECT_TRUE(same_statement(conditional_ingleton_rule(4).premises[1], st("U _||_ Z | X")));
  const auto c2 = conditional_ingleton_rule("cI2");
  EXPECT_TRUE(same_statement_multiset({c2.premises.begin(), c2.premises.end()}, {st("Y _||_ X | U"), st("X _||_ Z | U")}));
  const auto c4 = conditional_ingleton_rule("cI4");
  EXPECT_TRUE(same_statement_multiset({c4.premises.begin(), c4.premises.end()}, {st("Y _||_ U | Z"), st("U _||_ Z | Y")}));
  EXPECT_EQ(c4.substitution, kSwapMap);
  EXPECT_THROW(conditional_ingleton_rule(6), std::invalid_argument);
  EXPECT_THROW(conditional_ingleton_rule("7cI"), std::invalid_argument);
}

TEST(Rules, CheckRejectsBadAssignments) {
  const auto& p = dist("EX1");
  const auto r = conditional_ingleton_rule(1);
  EXPECT_THROW(check_conditional_ingleton(p, r, {Subset{}, S(N4, {"y"}), S(N4, {"z"}), S(N4, {"u"})}),
               std::invalid_argument);
  EXPECT_THROW(check_conditional_ingleton(p, r, {S(N4, {"x"}), S(N4, {"x"}), S(N4, {"z"}), S(N4, {"u"})}),
               std::invalid_argument);
}

TEST(Rules, IngletonValueMatchesOracle) {
  std::mt19937_64 rng(40);
  for (int k = 0; k < 30; ++k) {
    const auto p = random_distribution(SampleSpace(N4, {2, 3, 2, 2}), rng);
    for (const auto& a : {singleton_assignment(), all_singleton_assignments()[7]})
      EXPECT_NEAR(check_conditional_ingleton(p, conditional_ingleton_rule(3), a).ingleton_value, oracle_ingleton(p, a), 1e-12);
  }
}

// Soundness of each rule on random distributions that satisfy its premises.
class RuleSoundness : public ::testing::TestWithParam<int> {};

TEST_P(RuleSoundness, PremisesHoldAndIngletonNonNegative) {
  const int id = GetParam();
  std::mt19937_64 rng(100 + static_cast<unsigned>(id));
  const auto rule = conditional_ingleton_rule(id);
  int strictly_positive = 0;
  for (int k = 0; k < 300; ++k) {
    const auto p = random_premise_distribution(id, rng, k);
    const auto r = check_conditional_ingleton(p, rule, singleton_assignment());
    ASSERT_TRUE(r.premises_hold) << "sample " << k;
    ASSERT_GE(r.ingleton_value, -1e-10) << "sample " << k;
    EXPECT_NEAR(r.ingleton_value, oracle_ingleton(p, singleton_assignment()), 1e-10);
    strictly_positive += r.ingleton_value > 1e-6;
  }
  EXPECT_GT(strictly_positive, 30) << "generator too degenerate for rule " << id;
}

INSTANTIATE_TEST_SUITE_P(AllFive, RuleSoundness, ::testing::Values(1, 2, 3, 4, 5));

TEST(RuleSoundness, SwappedVersionsUnderRelabelling) {
  // cI2 / cI4 premises under (X,Y,Z,U) -> (y,x,u,z) are rule 2 / 4 premises on (x,y,z,u)
  std::mt19937_64 rng(41);
  const Assignment swapped{S(N4, {"y"}), S(N4, {"x"}), S(N4, {"u"}), S(N4, {"z"})};
  for (const auto& [id, base] : {std::pair{"cI2", 2}, std::pair{"cI4", 4}}) {
    const auto rule = conditional_ingleton_rule(id);
    for (int k = 0; k < 100; ++k) {
      const auto p = random_premise_distribution(base, rng, k);
      const auto r = check_conditional_ingleton(p, rule, swapped);
      ASSERT_TRUE(r.premises_hold) << id;
      ASSERT_GE(r.ingleton_value, -1e-10) << id;
    }
  }
}

TEST(RuleSoundness, CompoundArguments) {
  // X = {a, b} independent of everything else: rule 1 premises hold for (ab, c | d, e)
  std::mt19937_64 rng(42);
  const auto rule = conditional_ingleton_rule(1);
  for (int k = 0; k < 50; ++k) {
    const auto left = random_distribution(SampleSpace(BasicSet{"a", "b"}, {2, 2}), rng);
    const auto right = random_distribution(SampleSpace(BasicSet{"c", "d", "e"}, {2, 2, 2}), rng);
    const auto p = conditional_product(left, right);
    const auto& b = p.base();
    const auto r = check_conditional_ingleton(p, rule, {b.subset({"a", "b"}), b.subset({"c"}), b.subset({"d"}), b.subset({"e"})});
    ASSERT_TRUE(r.premises_hold);
    ASSERT_GE(r.ingleton_value, -1e-10);
  }
}

TEST(RuleSoundness, CatalogNeverViolatesARule) {
  for (const auto& id : distribution_ids()) {
    const auto& p = dist(id);
    for (int rid = 1; rid <= 5; ++rid)
      for (const auto& a : all_singleton_assignments()) {
        const auto r = check_conditional_ingleton(p, conditional_ingleton_rule(rid), a);
        if (r.premises_hold) {
          EXPECT_GE(r.ingleton_value, -1e-10) << id << " rule " << rid;
        }
      }
  }
}

TEST(Counterexamples, Example1ClosedForm) {
  const auto& p = dist("EX1");
  const double want = 2.5 * std::log(2.0) - 1.5 * std::log(3.0);
  EXPECT_NEAR(oracle_entropy(p, S(N4, {"z"})) + oracle_entropy(p, S(N4, {"u"})) - oracle_entropy(p, S(N4, {"z", "u"})),
              want, 1e-12);
  const auto r = verify_counterexample(catalog(), 1);
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(r.ingleton_value, -want, 1e-12);
}

TEST(Counterexamples, AllFiveVerify) {
  for (int id = 1; id <= 5; ++id) {
    const auto r = verify_counterexample(catalog(), id);
    for (const auto& c : r.checks) EXPECT_TRUE(c.ok) << r.id << ": " << c.name << " " << c.detail;
    EXPECT_LT(r.ingleton_value, 0.0);
    EXPECT_NEAR(r.ingleton_value, oracle_ingleton(dist("EX" + std::to_string(id)), singleton_assignment()), 1e-12);
  }
  EXPECT_THROW(verify_counterexample(catalog(), 6), std::invalid_argument);
}

TEST(Counterexamples, Ex3CarriesTwoMasks) {
  const auto& e = catalog().get("EX3");
  ASSERT_EQ(e.ingleton_masks.size(), 2u);
  EXPECT_EQ(e.ingleton_masks[0].mask, 3);
  EXPECT_EQ(e.ingleton_masks[1].mask, 5);
}

TEST(Counterexamples, Example5ClosedForm) {
  const double v = oracle_ingleton(dist("EX5"), singleton_assignment());
  EXPECT_NEAR(16 * v, 32 * std::log(2.0) + 30 * std::log(3.0) - 10 * std::log(5.0) + 7 * std::log(7.0) - 22 * std::log(11.0),
              1e-12);
  EXPECT_NEAR(16 * v, -0.0876256, 1e-7);
  EXPECT_NEAR(example5_closed_form(), 16 * v, 1e-12);
}

TEST(SixthPair, Ex5BreaksIt) {
  const auto r = check_sixth_failure(catalog());
  EXPECT_TRUE(r.premises_hold);
  EXPECT_LT(r.ingleton_value, 0.0);
  EXPECT_TRUE(r.counterexample());
}

TEST(SixthPair, DegenerateCases) {
  const auto full = check_sixth_failure(dist("FULL"));
  EXPECT_TRUE(full.premises_hold);
  EXPECT_NEAR(full.ingleton_value, 0.0, 1e-12);
  EXPECT_FALSE(full.counterexample());
  const auto ex1 = check_sixth_failure(dist("EX1"));
  EXPECT_FALSE(ex1.counterexample());
}

TEST(Derivations, AllRecordsVerify) {
  const auto ds = load_derivations();
  ASSERT_EQ(ds.size(), 19u);
  std::set<std::string> targets;
  for (const auto& d : ds) {
    targets.insert(d.target);
    const auto c = check_derivation(d);
    EXPECT_TRUE(c.ok) << d.target << ": " << c.failure;
  }
  EXPECT_EQ(targets.size(), 19u);
  EXPECT_TRUE(targets.count("I1") && targets.count("I19"));
}

TEST(Derivations, MutationsRejected) {
  for (const auto& d : load_derivations()) {
    for (const auto& m : mutations(d)) {
      const auto c = check_derivation(m);
      EXPECT_FALSE(c.ok) << d.target;
      EXPECT_FALSE(c.failure.empty());
    }
  }
}

TEST(Derivations, HandMadeCorruptions) {
  const auto ds = load_derivations();
  auto d = ds.front();
  ASSERT_EQ(d.target, "I1");
  for (auto& p : d.premises) p.overbraced = !p.overbraced;
  EXPECT_FALSE(verify_derivation(d));

  auto e = ds.front();
  e.conclusion = parse_statement(placeholders(), "X _||_ U |");
  EXPECT_FALSE(verify_derivation(e));

  auto f = ds.front();
  f.target = "I2";
  EXPECT_FALSE(verify_derivation(f));

  auto g = ds.front();
  g.substitution = kSwapMap;
  EXPECT_EQ(check_derivation(g).failure, "substitution does not match the rule version");
}

TEST(Derivations, JsonErrors) {
  Json j = {{"target", "I1"}, {"rule", "1cI"}, {"mask", 7}, {"premises", Json::array()}, {"conclusion", "Z _||_ U |"}};
  EXPECT_THROW(derivation_from_json(j), InputError);
  j["mask"] = 1;
  j["conclusion"] = "Z _||_ Q |";
  EXPECT_THROW(derivation_from_json(j), InputError);
  j.erase("rule");
  EXPECT_THROW(derivation_from_json(j), InputError);
}
