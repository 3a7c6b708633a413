#include <gtest/gtest.h>

#include <random>

#include "frattini_oracle.hpp"
#include "support.hpp"
#include "testel/certify.hpp"
#include "testel/enumerate.hpp"
#include "testel/error.hpp"
#include "testel/frattini.hpp"
#include "testel/net.hpp"

using namespace testel;
using testel::test::W;

namespace {

const Group& genus2() {
  static const Group g = Group::parse("orientable:2");
  return g;
}

const test::PowerTransversalOracle& genus2_oracle() {
  static const test::PowerTransversalOracle o(genus2(), 5);
  return o;
}

// A fixing non-automorphism of a free group, checked without the library's
// certificate code.
void expect_valid_free_witness(const Word& w, const Certificate& c) {
  ASSERT_EQ(c.status, Certificate::Status::Negative);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(apply(*c.witness, w), w);
  EXPECT_FALSE(is_surjective(*c.witness));
}

// Working-basis functionals of a non-orientable word at p = 3, recomputed here.
std::vector<long long> working_basis(const Word& w, int genus) {
  std::vector<long long> e(static_cast<std::size_t>(genus), 0);
  for (Letter l : w.letters()) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  std::vector<long long> out;
  for (int i = 0; i + 1 < genus; ++i) out.push_back(((e[static_cast<std::size_t>(i)] - e.back()) % 3 + 3) % 3);
  return out;
}

}  // namespace

TEST(Frattini, Membership) {
  EXPECT_TRUE(in_frattini(W("x1 x2 x1^-1 x2^-1", 2), Group::free(2), 2));
  EXPECT_FALSE(in_frattini(W("x1", 2), Group::free(2), 2));
  EXPECT_TRUE(in_frattini(W("x1^5 x2^5 x3^5 x4^5", 4), genus2(), 5));
}

TEST(Frattini, AdjustExamples) {
  const auto g = Group::free(2);
  const auto same = frattini_adjust(W("x1^2 x2^-2", 2), g, 2);
  EXPECT_EQ(same.adjusted, W("x1^2 x2^-2", 2));
  EXPECT_EQ(same.cost, 0);
  const auto a = frattini_adjust(W("x1", 2), g, 2);
  EXPECT_EQ(a.adjusted, W("x1^2", 2));
  EXPECT_EQ(a.exponents, (std::vector<long long>{1, 0}));
  EXPECT_FALSE(a.flipped.has_value());
  const auto b = frattini_adjust(W("x1^-1", 2), g, 2);
  EXPECT_EQ(b.adjusted, W("x1^-2", 2));
  EXPECT_EQ(b.flipped, 1);
}

TEST(Frattini, AdjustLandsInLayerWithBoundedMultiplier) {
  std::mt19937_64 rng(20);
  for (const char* spec : {"free:2", "free:3", "orientable:2", "nonorientable:3", "nonorientable:4"}) {
    const auto g = Group::parse(spec);
    for (int p : {2, 3, 5}) {
      if (!g.is_free() && g.presentation()->kind() == SurfaceKind::NonOrientable && p == 2) continue;
      const auto m = static_cast<long long>(functional_count(g, p));
      for (int i = 0; i < 60; ++i) {
        const auto w = test::random_word(rng, g.rank(), 9);
        const auto a = frattini_adjust(w, g, p);
        EXPECT_TRUE(in_frattini(a.adjusted, g, p));
        EXPECT_LE(static_cast<long long>(distance(w, a.adjusted)), (p - 1) * g.rank());
        EXPECT_LE(a.cost, (p - 1) * std::max<long long>(m, g.rank()));
        if (!w.is_identity()) {
          EXPECT_NE(is_trivial(a.adjusted, g), Truth::True) << spec << " " << to_string(w);
        }
      }
    }
  }
}

TEST(Frattini, SecondLayerExamples) {
  const auto g = Group::free(2);
  EXPECT_TRUE(in_frattini2(Word(2), g, 2));
  EXPECT_FALSE(in_frattini2(W("x1^2", 2), g, 2));
  EXPECT_TRUE(in_frattini2(W("x1^4", 2), g, 2));
  EXPECT_THROW(in_frattini2(W("x1", 2), g, 2), Error);
}

TEST(Frattini, PowersOfBasisLetters) {
  for (int rank : {2, 3}) {
    for (int p : {2, 3}) {
      const auto g = Group::free(rank);
      for (int i = 1; i <= rank; ++i) {
        EXPECT_TRUE(in_frattini2(Word::generator(rank, i, p * p), g, p));
        EXPECT_FALSE(in_frattini2(Word::generator(rank, i, p), g, p));
      }
    }
  }
}

TEST(Frattini, SecondLayerAgreesWithPowerTransversalOracle) {
  const test::PowerTransversalOracle free_oracle(Group::free(2), 3);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto u = frattini_adjust(test::random_word(rng, 2, 12), Group::free(2), 3).adjusted;
    EXPECT_EQ(in_frattini2(u, Group::free(2), 3), free_oracle.in_second_layer(u)) << to_string(u);
  }
  EXPECT_EQ(genus2_oracle().relation_rank(), 624u);
  EXPECT_EQ(genus2_oracle().nontrivial_generators() - genus2_oracle().relation_rank(), 1252u);
  int positives = 0;
  for (int i = 0; i < 60; ++i) {
    // Mixing in fifth powers of commutators reaches the second layer often.
    auto u = frattini_adjust(test::random_word(rng, 4, 10), genus2(), 5).adjusted;
    if (i % 2) u = power(W("x1 x2 x1^-1 x2^-1", 4), 5);
    const bool expected = genus2_oracle().in_second_layer(u);
    positives += expected ? 1 : 0;
    EXPECT_EQ(in_frattini2(u, genus2(), 5), expected) << to_string(u);
  }
  EXPECT_GT(positives, 0);
}

TEST(Frattini, SchreierConstantsGenusTwo) {
  const auto layer = frattini_layer(genus2(), 5);
  EXPECT_EQ(layer->graph().vertex_count(), 625u);
  EXPECT_EQ(layer->basis().size(), 1252u);
  for (const auto& y : layer->basis_generators()) EXPECT_LE(y.length(), 33u);
}

TEST(Canonical, Words) {
  EXPECT_EQ(canonical_test_word(2, 2), W("x1^2 x2^2", 2));
  EXPECT_EQ(canonical_test_word(3, 3), W("x1^3 x2^3 x3^3", 3));
  EXPECT_EQ(canonical_test_word(2, 5), W("x1^5 x2^5", 2));
}

TEST(Turner, PowerCriterion) {
  const std::vector<long long> a{2, 2}, b{1, 2}, c{2, 0}, d{-3, 6};
  EXPECT_TRUE(turner_power_criterion(a));
  EXPECT_FALSE(turner_power_criterion(b));
  EXPECT_FALSE(turner_power_criterion(c));
  EXPECT_TRUE(turner_power_criterion(d));
  EXPECT_TRUE(turner_certificate(W("x1^2 x2^2", 2)).has_value());
  EXPECT_FALSE(turner_certificate(W("x2^2 x1^2", 2)).has_value());
  EXPECT_FALSE(turner_certificate(W("x1 x2^2", 2)).has_value());
}

TEST(NetFree, Examples) {
  const auto id = net_project_free(Word(2), 2);
  EXPECT_EQ(id.output, W("x1^2 x2^2", 2));
  EXPECT_EQ(id.distance, 4);
  for (const char* text : {"x1", "x1 x2"}) {
    const auto w = W(text, 2);
    const auto r = net_project_free(w, 2);
    EXPECT_LE(static_cast<long long>(distance(w, r.output)), 4);
    EXPECT_EQ(r.distance, static_cast<long long>(distance(w, r.output)));
    EXPECT_TRUE(exponent_sums(r.output, Group::free(2), 2).is_zero());
  }
}

TEST(NetFree, ExhaustiveBallOfRadiusSix) {
  const auto g = Group::free(2);
  std::uint64_t n = 0;
  for_each_in_ball(2, 6, [&](const Word& w) {
    ++n;
    const auto r = net_project_free(w, 2);
    const auto d = distance(w, r.output);
    EXPECT_LE(d, 4u) << to_string(w);
    EXPECT_FALSE(r.output.is_identity());
    long long s1 = 0, s2 = 0;
    for (Letter l : r.output.letters()) (std::abs(l) == 1 ? s1 : s2) += l > 0 ? 1 : -1;
    EXPECT_EQ(s1 % 2, 0);
    EXPECT_EQ(s2 % 2, 0);
    EXPECT_EQ(endo_fixer_search(r.output, g, 2).status, Certificate::Status::Unknown) << to_string(w);
  });
  EXPECT_EQ(n, 1457u);
}

TEST(NetFree, HigherRankBound) {
  std::mt19937_64 rng(22);
  for (int rank : {3, 4}) {
    NetOptions opts;
    opts.vetting_bound = 1;
    for (int i = 0; i < 30; ++i) {
      const auto w = test::random_word(rng, rank, 10);
      const auto r = net_project_free(w, rank, opts);
      EXPECT_LE(static_cast<long long>(distance(w, r.output)), 3 * rank - 2);
      EXPECT_FALSE(r.output.is_identity());
      EXPECT_TRUE(in_frattini(r.output, Group::free(rank), 2));
    }
  }
}

TEST(NetOrientable, BoundAndIdentity) {
  EXPECT_EQ(orientable_net_bound(2), 165355);
  EXPECT_THROW(orientable_net_bound(1), Error);
  const auto r = net_project_orientable(Word(4), genus2());
  ASSERT_TRUE(r.layer2.has_value());
  EXPECT_TRUE(genus2_oracle().in_second_layer(*r.layer2));
  EXPECT_LE(r.trace_cost, 165355);
  EXPECT_NE(is_trivial(r.output, genus2()), Truth::True);
}

TEST(NetOrientable, RandomInputsPassIndependentRecheck) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 6; ++i) {
    const auto w = test::random_word(rng, 4, 10);
    const auto r = net_project_orientable(w, genus2());
    ASSERT_TRUE(r.layer2.has_value());
    EXPECT_TRUE(genus2_oracle().in_second_layer(*r.layer2)) << to_string(w);
    EXPECT_LE(r.trace_cost, *r.bound);
    EXPECT_EQ(r.distance, r.trace_cost);
    EXPECT_TRUE(in_frattini(r.output, genus2(), 5));
    long long cost = 0;
    for (const auto& s : r.trace) cost += s.cost;
    EXPECT_EQ(cost, r.trace_cost);
  }
}

TEST(NetNonorientable, Examples) {
  EXPECT_EQ(nonorientable_net_bound(3), 10);
  const auto g3 = Group::parse("nonorientable:3");
  const auto id = net_project_nonorientable(Word(3), g3);
  EXPECT_EQ(id.output, W("x1^3 x2^3", 3));
  EXPECT_EQ(id.trace_cost, 6);
  const auto g4 = Group::parse("nonorientable:4");
  const auto r = net_project_nonorientable(W("x1", 4), g4);
  EXPECT_EQ(working_basis(r.output, 4), (std::vector<long long>{0, 0, 0}));
  EXPECT_LE(r.trace_cost, 15);
  EXPECT_THROW(net_project_nonorientable(W("x1", 4), genus2()), Error);
}

TEST(NetNonorientable, GenusThreeSmallWords) {
  const auto g3 = Group::parse("nonorientable:3");
  for_each_in_ball(3, 3, [&](const Word& w) {
    const auto r = net_project_nonorientable(w, g3);
    EXPECT_LE(r.trace_cost, 10) << to_string(w);
    EXPECT_EQ(working_basis(r.output, 3), (std::vector<long long>{0, 0})) << to_string(w);
    EXPECT_NE(is_trivial(r.output, g3), Truth::True);
  });
}

TEST(Coset, GenusTwoTranspositionQuotient) {
  const FiniteQuotient q{2, std::vector<Perm>(4, parse_cycles("(1,2)", 2))};
  const auto w = W("x1", 4);
  const auto r = coset_test_element(w, genus2(), q);
  EXPECT_EQ(r.quotient_order, 2u);
  EXPECT_EQ(r.prime, 5);
  EXPECT_EQ(r.first_exponents[0], 2);
  EXPECT_EQ(evaluate(q.images, r.net.output), evaluate(q.images, w));
  ASSERT_TRUE(r.net.layer2.has_value());
  EXPECT_TRUE(genus2_oracle().in_second_layer(*r.net.layer2));
}

TEST(Coset, TrivialQuotientMatchesPlainScaling) {
  const FiniteQuotient q{1, {Perm(1), Perm(1)}};
  const auto r = coset_test_element(W("x1 x2", 2), Group::free(2), q);
  EXPECT_EQ(r.quotient_order, 1u);
  EXPECT_EQ(r.prime, 2);
  EXPECT_TRUE(in_frattini(r.net.output, Group::free(2), 2));
  EXPECT_TRUE(r.same_coset);
}

TEST(Coset, FreeQuotientAvoidsDividingPrimes) {
  const FiniteQuotient q{3, {parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3)}};
  std::mt19937_64 rng(24);
  for (int i = 0; i < 10; ++i) {
    const auto w = test::random_word(rng, 2, 8);
    const auto r = coset_test_element(w, Group::free(2), q);
    EXPECT_EQ(r.quotient_order, 6u);
    EXPECT_EQ(r.prime, 5);
    EXPECT_EQ(evaluate(q.images, r.net.output), evaluate(q.images, w));
    EXPECT_FALSE(r.net.output.is_identity());
  }
}

TEST(Coset, RejectsImagesBreakingTheRelator) {
  const FiniteQuotient q{3, {parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3), Perm(3), Perm(3)}};
  EXPECT_THROW(coset_test_element(W("x1", 4), genus2(), q), Error);
}

TEST(Endo, Examples) {
  const auto g = Group::free(2);
  const auto a = endo_fixer_search(W("x1", 2), g, 1);
  expect_valid_free_witness(W("x1", 2), a);
  EXPECT_EQ(a.witness->images, (std::vector<Word>{W("x1", 2), Word(2)}));
  const auto b = endo_fixer_search(W("x1 x2", 2), g, 2);
  expect_valid_free_witness(W("x1 x2", 2), b);
  EXPECT_EQ(b.witness->images, (std::vector<Word>{W("x1 x2", 2), Word(2)}));
  const auto c = endo_fixer_search(W("x1^2 x2^2", 2), g, 2);
  EXPECT_EQ(c.status, Certificate::Status::Unknown);
  EXPECT_EQ(c.search_bound, 2);
}

TEST(Endo, EveryNegativeReverifies) {
  const auto g = Group::free(2);
  for_each_in_ball(2, 4, [&](const Word& w) {
    const auto c = endo_fixer_search(w, g, 2);
    if (c.status == Certificate::Status::Negative) {
      expect_valid_free_witness(w, c);
      EXPECT_TRUE(verify_negative(w, g, c));
    }
  });
}

TEST(Endo, KnownTestElementsStayUndecided) {
  const auto g = Group::free(2);
  for (int L = 0; L <= 3; ++L) {
    EXPECT_NE(endo_fixer_search(W("x1^2 x2^2", 2), g, L).status, Certificate::Status::Negative);
    EXPECT_NE(endo_fixer_search(W("x1 x2 x1^-1 x2^-1", 2), g, L).status, Certificate::Status::Negative);
  }
}

TEST(Endo, SurfaceWitnessesRespectTheRelator) {
  const auto w = W("x1", 4);
  const auto c = endo_fixer_search(w, genus2(), 1);
  ASSERT_EQ(c.status, Certificate::Status::Negative);
  EXPECT_EQ(is_trivial(apply(*c.witness, genus2().presentation()->relator()), genus2()), Truth::True);
  EXPECT_EQ(are_equal(apply(*c.witness, w), w, genus2()), Truth::True);
  EXPECT_TRUE(verify_negative(w, genus2(), c));
}

TEST(Endo, CapIsEnforced) {
  EndoSearchOptions tiny;
  tiny.max_endomorphisms = 10;
  EXPECT_THROW(endo_fixer_search(W("x1", 2), Group::free(2), 2, tiny), Error);
}

TEST(Determinant, Bareiss) {
  EXPECT_EQ(integer_determinant({{2, 0}, {0, 3}}), 6);
  EXPECT_EQ(integer_determinant({{0, 1}, {1, 0}}), -1);
  EXPECT_EQ(integer_determinant({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}), -3);
}
