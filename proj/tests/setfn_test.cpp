#include "test_support.hpp"

#include <random>

using namespace cinfer;
using namespace testing_support;

namespace {

const BasicSet N4 = BasicSet::xyzu();

SetFunction<Rational> random_function(std::mt19937_64& rng, int lo = -5, int hi = 20) {
  std::uniform_int_distribution<int> v(lo, hi);
  return SetFunction<Rational>(N4, [&](Subset s) { return s.is_empty() ? Rational(0) : Rational(v(rng), 3); });
}

// Non-negative combination of entropy-like rank functions: always a polymatroid.
SetFunction<Rational> random_polymatroid(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(0, 4);
  auto h = SetFunction<Rational>::zero(N4);
  for (std::uint32_t t = 1; t < 16; ++t) {
    // rank of the uniform matroid "covers T": r(S) = min(1, |S & T|)
    const Rational w(c(rng));
    h += w * SetFunction<Rational>(N4, [&](Subset s) { return Rational((s & Subset(t)).is_empty() ? 0 : 1); });
  }
  h += Rational(c(rng)) * rank_hxy();
  return h;
}

std::vector<Subset> all_subsets() {
  std::vector<Subset> out;
  for (std::uint32_t s = 0; s < 16; ++s) out.emplace_back(s);
  return out;
}

}  // namespace

TEST(Delta, HxyExamples) {
  const auto h = rank_hxy();
  EXPECT_EQ(delta(h, S(N4, {"z"}), S(N4, {"u"}), Subset{}), Rational(1));
  EXPECT_EQ(delta(h, S(N4, {"x"}), S(N4, {"y"}), Subset{}), Rational(0));
  EXPECT_EQ(delta(h, S(N4, {"x"}), S(N4, {"y"}), S(N4, {"z"})), Rational(0));
  EXPECT_EQ(delta(h, S(N4, {"x"}), S(N4, {"z"}), Subset{}), Rational(1));
}

TEST(Delta, LiteralHxyTable) {
  // h_xy written out from its definition, independent of rank_hxy()
  std::map<std::string, int> table = {{"", 0},   {"x", 2},   {"y", 2},   {"z", 2},   {"u", 2},   {"xy", 4},
                                      {"xz", 3}, {"xu", 3},  {"yz", 3},  {"yu", 3},  {"zu", 3},  {"xyz", 4},
                                      {"xyu", 4}, {"xzu", 4}, {"yzu", 4}, {"xyzu", 4}};
  const auto h = rank_hxy();
  for (const auto& [label, v] : table) EXPECT_EQ(h(N4.parse_label(label)), Rational(v)) << label;
  // -h(xy)+h(xz)+h(xu)+h(yz)+h(yu)+h(zu)-h(z)-h(u)-h(xzu)-h(yzu)
  const int expected = -4 + 3 + 3 + 3 + 3 + 3 - 2 - 2 - 4 - 4;
  EXPECT_EQ(expected, -1);
  EXPECT_EQ(ingleton(h, S(N4, {"x"}), S(N4, {"y"}), S(N4, {"z"}), S(N4, {"u"})), Rational(expected));
}

TEST(Delta, EmptyArgumentVanishes) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto h = random_function(rng);
    for (Subset y : all_subsets())
      for (Subset z : all_subsets()) {
        EXPECT_EQ(delta(h, Subset{}, y, z), Rational(0));
        EXPECT_EQ(delta(h, y, z, z), Rational(0));
      }
  }
}

TEST(Delta, SymmetricInXY) {
  std::mt19937_64 rng(2);
  const auto h = random_function(rng);
  for (Subset x : all_subsets())
    for (Subset y : all_subsets())
      for (Subset z : all_subsets()) EXPECT_EQ(delta(h, x, y, z), delta(h, y, x, z));
}

TEST(Delta, SemigraphoidChainRule) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto h = random_function(rng);
    for (Subset x : all_subsets())
      for (Subset y : all_subsets())
        for (Subset z : all_subsets())
          for (Subset u : all_subsets()) {
            if (!pairwise_disjoint({x, y, z, u})) continue;
            EXPECT_EQ(delta(h, x, y | z, u), delta(h, x, y, z | u) + delta(h, x, z, u));
          }
  }
}

TEST(Delta, PolymatroidsAreNonNegativeEverywhere) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto h = random_polymatroid(rng);
    ASSERT_TRUE(is_polymatroid(h).ok);
    for (Subset x : all_subsets())
      for (Subset y : all_subsets())
        for (Subset z : all_subsets()) ASSERT_GE(delta(h, x, y, z), Rational(0));
  }
}

TEST(Ingleton, RejectsOverlap) {
  const auto h = rank_hxy();
  EXPECT_THROW(ingleton(h, S(N4, {"x"}), S(N4, {"x"}), S(N4, {"z"}), S(N4, {"u"})), std::invalid_argument);
  EXPECT_THROW(mask_form(h, 1, S(N4, {"x"}), S(N4, {"y"}), S(N4, {"y"}), S(N4, {"u"})), std::invalid_argument);
}

TEST(Ingleton, MaskFormsAgreeExactly) {
  std::mt19937_64 rng(5);
  const Subset x = S(N4, {"x"}), y = S(N4, {"y"}), z = S(N4, {"z"}), u = S(N4, {"u"});
  for (int k = 0; k < 1000; ++k) {
    const auto h = random_function(rng);
    const Rational ing = ingleton(h, x, y, z, u);
    for (int m = 1; m <= 5; ++m) ASSERT_EQ(mask_form(h, m, x, y, z, u), ing) << "mask " << m;
  }
}

TEST(Ingleton, MaskFormsAgreeForCompoundArguments) {
  const BasicSet b5({"a", "b", "c", "d", "e"});
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> v(0, 30);
  const auto h = SetFunction<Rational>(b5, [&](Subset s) { return s.is_empty() ? Rational(0) : Rational(v(rng)); });
  const Subset x = b5.subset({"a", "b"}), y = b5.subset({"c"}), z = b5.subset({"d"}), u = b5.subset({"e"});
  for (int m = 1; m <= 5; ++m) EXPECT_EQ(mask_form(h, m, x, y, z, u), ingleton(h, x, y, z, u));
}

TEST(Ingleton, MaskIndexRange) {
  const auto h = rank_hxy();
  const Subset x = S(N4, {"x"}), y = S(N4, {"y"}), z = S(N4, {"z"}), u = S(N4, {"u"});
  EXPECT_THROW(mask_form(h, 0, x, y, z, u), std::invalid_argument);
  EXPECT_THROW(mask_form(h, 6, x, y, z, u), std::invalid_argument);
}

TEST(Ingleton, SwapSymmetries) {
  std::mt19937_64 rng(7);
  const Subset x = S(N4, {"x"}), y = S(N4, {"y"}), z = S(N4, {"z"}), u = S(N4, {"u"});
  for (int k = 0; k < 200; ++k) {
    const auto h = random_function(rng);
    const Rational v = ingleton(h, x, y, z, u);
    EXPECT_EQ(ingleton(h, y, x, z, u), v);
    EXPECT_EQ(ingleton(h, x, y, u, z), v);
    EXPECT_EQ(ingleton(h, y, x, u, z), v);
  }
}

TEST(Ingleton, DoubleMatchesRational) {
  std::mt19937_64 rng(8);
  const Subset x = S(N4, {"x"}), y = S(N4, {"y"}), z = S(N4, {"z"}), u = S(N4, {"u"});
  for (int k = 0; k < 100; ++k) {
    const auto h = random_function(rng);
    const auto hd = h.convert<double>();
    for (int m = 1; m <= 5; ++m) EXPECT_NEAR(mask_form(hd, m, x, y, z, u), to_double(ingleton(h, x, y, z, u)), 1e-12);
  }
}

TEST(Polymatroid, Examples) {
  EXPECT_TRUE(is_polymatroid(rank_hxy()).ok);
  EXPECT_TRUE(is_polymatroid(SetFunction<Rational>::zero(N4)).ok);

  auto shifted = rank_hxy();
  shifted.set(Subset{}, Rational(1));
  const auto w = is_polymatroid(shifted);
  EXPECT_FALSE(w.ok);
  EXPECT_LT(w.value, Rational(0));

  // h(N) = 1 below h(xyz) = 3
  auto dec = SetFunction<Rational>(N4, [](Subset s) { return Rational(s.size()); });
  dec.set(S(N4, {"x", "y", "z", "u"}), Rational(1));
  const auto w2 = is_polymatroid(dec);
  EXPECT_FALSE(w2.ok);
  ASSERT_TRUE(w2.violating_triplet.has_value());
  EXPECT_LT(w2.value, Rational(0));
  EXPECT_EQ(delta(dec, *w2.violating_triplet), w2.value);
}

TEST(Polymatroid, ElementaryCheckEqualsExhaustive) {
  std::mt19937_64 rng(9);
  int positives = 0;
  for (int k = 0; k < 400; ++k) {
    auto h = k % 2 ? random_polymatroid(rng) : random_function(rng, 0, 12);
    if (k % 7 == 0) h.set(Subset(static_cast<std::uint32_t>(1 + k % 15)), h(Subset(static_cast<std::uint32_t>(1 + k % 15))) - 1);
    const auto fast = is_polymatroid(h);
    const auto full = is_polymatroid(h, 0.0, true);
    ASSERT_EQ(fast.ok, full.ok);
    if (!fast.ok) {
      EXPECT_EQ(delta(h, *fast.violating_triplet), fast.value);
    }
    positives += fast.ok;
  }
  EXPECT_GT(positives, 100);
  EXPECT_LT(positives, 400);
}

TEST(Polymatroid, CatalogEntropies) {
  for (const auto& id : distribution_ids()) EXPECT_TRUE(is_polymatroid(entropy_function(dist(id))).ok) << id;
}

TEST(Matroid, Examples) {
  EXPECT_TRUE(is_matroid(*catalog().get("CON1").rank_function));
  EXPECT_FALSE(is_matroid(rank_hxy()));
  EXPECT_TRUE(is_matroid(SetFunction<Rational>::zero(N4)));
  EXPECT_TRUE(is_matroid(SetFunction<Rational>(N4, [](Subset s) { return Rational(s.size()); })));
  EXPECT_FALSE(is_matroid(SetFunction<Rational>(N4, [](Subset s) { return Rational(s.size(), 2); })));
}

TEST(Tighten, UpIndicatorCollapsesToZero) {
  for (int i = 0; i < 4; ++i) {
    const auto up = SetFunction<Rational>::up_indicator(N4, i);
    EXPECT_FALSE(is_tight(up));
    EXPECT_EQ(tighten(up), SetFunction<Rational>::zero(N4));
  }
}

TEST(Tighten, Properties) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 200; ++k) {
    auto h = random_polymatroid(rng);
    std::uniform_int_distribution<int> c(0, 3);
    for (int i = 0; i < 4; ++i) h += Rational(c(rng)) * SetFunction<Rational>::up_indicator(N4, i);
    const auto t = tighten(h);
    EXPECT_TRUE(is_tight(t));
    EXPECT_TRUE(is_polymatroid(t).ok);
    EXPECT_EQ(tighten(t), t);
    // identical differences on every elementary triplet (i,j|K)
    const auto& idx = TripletIndex::of(4);
    for (const auto& e : idx.triplets()) EXPECT_EQ(delta(t, e.as_triplet()), delta(h, e.as_triplet()));
    // reconstruction: h = t + sum_i gap_i * up_i
    auto back = t;
    for (int i = 0; i < 4; ++i) back += tightness_gap(h, i) * SetFunction<Rational>::up_indicator(N4, i);
    EXPECT_EQ(back, h);
  }
}

TEST(Tighten, RejectsNonPolymatroid) {
  auto dec = SetFunction<Rational>(N4, [](Subset s) { return Rational(-s.size()); });
  EXPECT_THROW(tighten(dec), std::invalid_argument);
}

TEST(InducedStructure, ModularFunctionGivesEverything) {
  const auto mod = SetFunction<Rational>(N4, [](Subset s) {
    Rational v = 0;
    for (int i : s.elements()) v += i + 1;
    return v;
  });
  EXPECT_EQ(induced_ci_structure_of_rank(mod).count(), 24);
}

TEST(InducedStructure, MatchesLiteralScan) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto h = random_polymatroid(rng);
    const auto s = induced_ci_structure_of_rank(h);
    int count = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (std::uint32_t kk = 0; kk < 16; ++kk) {
          if (kk & ((1u << i) | (1u << j))) continue;
          const Subset K(kk), I = Subset::singleton(i), J = Subset::singleton(j);
          const bool zero = h(I | K) + h(J | K) - h(I | J | K) - h(K) == 0;
          EXPECT_EQ(s.contains(ElementaryTriplet(i, j, K)), zero);
          count += zero;
        }
    EXPECT_EQ(s.count(), count);
  }
}

TEST(InducedStructure, HxyStatements) {
  const auto s = induced_ci_structure_of_rank(rank_hxy());
  EXPECT_TRUE(s.contains(parse_statement(N4, "x _||_ y |")));
  EXPECT_FALSE(s.contains(parse_statement(N4, "z _||_ u |")));
  EXPECT_TRUE(s.contains(parse_statement(N4, "x _||_ y | z")));
  EXPECT_FALSE(s.contains(parse_statement(N4, "x _||_ z |")));
}

TEST(SetFunctionIo, RoundTrip) {
  std::mt19937_64 rng(12);
  const auto h = random_function(rng);
  EXPECT_EQ(set_function_from_json(set_function_to_json(h)), h);
}
