#include <gtest/gtest.h>

#include <random>
#include <set>

#include "treeaut/permgroup.hpp"

using namespace treeaut;

namespace {

// Brute force: all ordered pairs of distinct points reached from every other pair.
bool two_transitive_oracle(const PermGroup& g) {
  const int d = g.degree();
  for (Color a = 1; a <= d; ++a)
    for (Color b = 1; b <= d; ++b) {
      if (a == b) continue;
      for (Color x = 1; x <= d; ++x)
        for (Color y = 1; y <= d; ++y) {
          if (x == y) continue;
          bool hit = false;
          for (const auto& p : g.elements()) hit = hit || (p(a) == x && p(b) == y);
          if (!hit) return false;
        }
    }
  return true;
}

Permutation random_perm(std::mt19937_64& rng, int d) {
  std::vector<int> img(d);
  for (int i = 0; i < d; ++i) img[i] = i + 1;
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation::from_images(std::span<const int>(img));
}

}  // namespace

TEST(Permutation, ParsesCycles) {
  const auto p = parse_cycles("(1 2 3)", 4);
  EXPECT_EQ(p.images(), (std::vector<int>{2, 3, 1, 4}));
  EXPECT_EQ(parse_cycles("(1,3)(2 4)", 4).images(), (std::vector<int>{3, 4, 1, 2}));
  EXPECT_TRUE(parse_cycles("", 3).is_identity());
  EXPECT_TRUE(parse_cycles("()", 3).is_identity());
  EXPECT_EQ(parse_cycles(" (1 2) ", 3).to_cycle_string(), "(1 2)");
}

TEST(Permutation, RejectsBadCycles) {
  auto kind_of = [](const char* text, int d) {
    try {
      parse_cycles(text, d);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidContext;
  };
  EXPECT_EQ(kind_of("(1 2", 3), ErrorKind::MalformedCycle);
  EXPECT_EQ(kind_of("1 2)", 3), ErrorKind::MalformedCycle);
  EXPECT_EQ(kind_of("(1 x)", 3), ErrorKind::MalformedCycle);
  EXPECT_EQ(kind_of("(1 5)", 4), ErrorKind::OutOfRange);
  EXPECT_EQ(kind_of("(0 1)", 4), ErrorKind::OutOfRange);
  EXPECT_EQ(kind_of("(1 1)", 4), ErrorKind::RepeatedEntry);
  EXPECT_EQ(kind_of("(1 2)(2 3)", 4), ErrorKind::RepeatedEntry);
}

TEST(Permutation, ComposesRightToLeft) {
  const auto a = parse_cycles("(1 2)", 3), b = parse_cycles("(2 3)", 3);
  // (a*b)(x) = a(b(x)): 2 -> 3 -> 3, 3 -> 2 -> 1
  EXPECT_EQ((a * b)(2), 3);
  EXPECT_EQ((a * b)(3), 1);
  EXPECT_EQ((a * b).to_cycle_string(), "(1 2 3)");
  EXPECT_THROW(a * Permutation::identity(4), Error);
}

TEST(Permutation, GroupLawsOnRandomElements) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 7;
    const auto p = random_perm(rng, d), q = random_perm(rng, d), r = random_perm(rng, d);
    EXPECT_EQ((p * q) * r, p * (q * r));
    EXPECT_TRUE((p * p.inverse()).is_identity());
    EXPECT_TRUE(power(p, order(p)).is_identity());
    EXPECT_EQ(power(p, -1), p.inverse());
    EXPECT_EQ(parse_cycles(p.to_cycle_string(), d), p);
  }
}

TEST(PermGroup, Orders) {
  EXPECT_EQ(PermGroup::symmetric(3).order(), 6u);
  EXPECT_EQ(PermGroup::symmetric(4).order(), 24u);
  EXPECT_EQ(PermGroup::symmetric(5).order(), 120u);
  const auto d4 = PermGroup::generate({parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)}, 4);
  EXPECT_EQ(d4.order(), 8u);
  EXPECT_EQ(PermGroup::trivial(4).order(), 1u);
  EXPECT_TRUE(d4.elements().front().is_identity());
  EXPECT_THROW(PermGroup::generate({parse_cycles("(1 2 3 4 5)", 5), parse_cycles("(1 2)", 5)}, 5, 100), Error);
  EXPECT_THROW(PermGroup::generate({parse_cycles("(1 2)", 3)}, 4), Error);
}

TEST(PermGroup, ElementOrderDividesGroupOrder) {
  for (const auto& g : all_subgroups(4))
    for (const auto& p : g.elements()) {
      EXPECT_EQ(g.order() % static_cast<std::size_t>(order(p)), 0u);
      EXPECT_TRUE(g.contains(p.inverse()));
    }
}

TEST(PermGroup, OrbitsAndStabilizers) {
  const auto g = PermGroup::generate({parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4)}, 4);
  EXPECT_EQ(orbits(g), (std::vector<std::vector<Color>>{{1, 2}, {3, 4}}));
  EXPECT_FALSE(is_transitive(g));
  const auto d4 = PermGroup::generate({parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)}, 4);
  const auto st = stabilizer(d4, 1);
  EXPECT_EQ(st.order(), 2u);
  EXPECT_EQ(orbits_on(st, {2, 3, 4}), (std::vector<std::vector<Color>>{{2, 4}, {3}}));
}

TEST(PermGroup, TwoTransitivityAgreesWithOracle) {
  for (int d = 2; d <= 4; ++d)
    for (const auto& g : all_subgroups(d)) {
      const bool oracle = two_transitive_oracle(g);
      EXPECT_EQ(is_2transitive_direct(g), oracle);
      EXPECT_EQ(is_2transitive_stab(g), oracle);
    }
  const auto d4 = PermGroup::generate({parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)}, 4);
  EXPECT_FALSE(is_2transitive_direct(d4));
  EXPECT_TRUE(is_2transitive_direct(PermGroup::generate({parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 2 3)", 4)}, 4)));
}

TEST(PermGroup, SubgroupCountsOfSmallSymmetricGroups) {
  EXPECT_EQ(all_subgroups(3).size(), 6u);
  EXPECT_EQ(all_subgroups(4).size(), 30u);
}

TEST(PermGroup, OrbitPreservation) {
  const auto f = PermGroup::generate({parse_cycles("(1 2)", 4)}, 4);
  const auto fp = PermGroup::generate({parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4)}, 4);
  EXPECT_FALSE(preserves_orbits(f, fp));
  EXPECT_TRUE(preserves_orbits(PermGroup::generate({parse_cycles("(1 2)(3 4)", 4)}, 4), fp));
  const auto f2 = PermGroup::generate({parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4)}, 4);
  const auto fp2 = PermGroup::generate({parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4), parse_cycles("(1 3)(2 4)", 4)}, 4);
  EXPECT_FALSE(preserves_orbits(f2, fp2));
  EXPECT_TRUE(permutes_orbits(f2, fp2));
}

TEST(PermGroup, FindMappingReturnsLeastSolution) {
  const auto s3 = PermGroup::symmetric(3);
  const auto p = find_mapping(s3, {{1, 2}});
  ASSERT_TRUE(p);
  // Least image sequence with 1 -> 2 is [2, 1, 3].
  EXPECT_EQ(p->images(), (std::vector<int>{2, 1, 3}));
  EXPECT_FALSE(find_mapping(PermGroup::generate({parse_cycles("(1 2 3)", 3)}, 3), {{1, 2}, {2, 1}}));
  EXPECT_FALSE(find_mapping(s3, {{1, 2}, {3, 2}}));
  EXPECT_THROW(find_mapping(s3, {{1, 2}, {1, 3}}), Error);
  for (const auto& g : all_subgroups(4))
    for (Color a = 1; a <= 4; ++a)
      for (Color b = 1; b <= 4; ++b) {
        const auto m = find_mapping(g, {{a, b}});
        ASSERT_EQ(m.has_value(), g.least_mapping(a, b).has_value());
        if (m) {
          EXPECT_EQ(*m, *g.least_mapping(a, b));
        }
      }
}

TEST(PermGroup, PickTau) {
  const auto t3 = pick_long_cycle(PermGroup::generate({parse_cycles("(1 2 3)", 3)}, 3));
  EXPECT_EQ(t3.element.to_cycle_string(), "(1 2 3)");
  EXPECT_EQ(t3.cycle, (std::vector<Color>{1, 2, 3}));
  const auto t4 = pick_long_cycle(PermGroup::generate({parse_cycles("(1 2 3 4)", 4)}, 4));
  EXPECT_EQ(t4.element.to_cycle_string(), "(1 2 3 4)");
  const auto t2 = pick_long_cycle(PermGroup::generate({parse_cycles("(1 2)(3 4)", 4)}, 4));
  EXPECT_EQ(t2.cycle, (std::vector<Color>{1, 2}));
  EXPECT_THROW(pick_long_cycle(PermGroup::trivial(3)), Error);
}
