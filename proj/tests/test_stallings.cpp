#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "testel/error.hpp"
#include "testel/frattini.hpp"
#include "testel/stallings.hpp"

using namespace testel;
using testel::test::W;

namespace {

SubgroupGraph graph_of(int rank, std::initializer_list<const char*> gens) {
  std::vector<Word> ws;
  for (const char* g : gens) ws.push_back(W(g, rank));
  return build_graph(rank, ws);
}

// Kernel of the mod-p exponent map, built by folding generators rather
// than as a covering table: x_i^p and every conjugate-free commutator.
SubgroupGraph mod_kernel_by_folding(int rank, int p) {
  std::vector<Word> gens;
  for (int i = 1; i <= rank; ++i) gens.push_back(Word::generator(rank, i, p));
  for (int i = 1; i <= rank; ++i)
    for (int j = i + 1; j <= rank; ++j) {
      const auto a = Word::generator(rank, i);
      const auto b = Word::generator(rank, j);
      // Conjugates by powers of the generators fill every coset.
      for (int s = 0; s < p; ++s)
        for (int t = 0; t < p; ++t) {
          const auto c = multiply(multiply(a, b), multiply(invert(a), invert(b)));
          const auto conj = multiply(multiply(power(a, s), power(b, t)), c);
          gens.push_back(multiply(conj, invert(multiply(power(a, s), power(b, t)))));
        }
    }
  return build_graph(rank, gens);
}

}  // namespace

TEST(Fold, RoseFromBasis) {
  const auto g = graph_of(2, {"x1", "x2"});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_TRUE(g.is_rose());
  EXPECT_EQ(g.index(), 1u);
}

TEST(Fold, SquareGivesTwoCycle) {
  const auto g = graph_of(2, {"x1^2"});
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.contains(W("x1^2", 2)));
  EXPECT_FALSE(g.contains(W("x1", 2)));
  EXPECT_FALSE(g.index().has_value());
}

TEST(Fold, EmptyGeneratorSet) {
  const auto g = build_graph(2, std::vector<Word>{});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(g.contains(Word(2)));
  EXPECT_FALSE(g.contains(W("x1", 2)));
}

TEST(Fold, IsDeterministicAndFolded) {
  const auto g = graph_of(2, {"x1 x2 x1^-1", "x1 x2^2 x1^-1", "x2 x1"});
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    EXPECT_LE(g.degree(v), 4u);
    if (v != 0) {
      EXPECT_GE(g.degree(v), 2u);
    }
  }
}

TEST(Fold, ConfluentUnderGeneratorPermutation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(test::random_word(rng, 2, 6));
    const auto a = build_graph(2, gens);
    std::shuffle(gens.begin(), gens.end(), rng);
    const auto b = build_graph(2, gens);
    EXPECT_EQ(a, b);
    for (int q = 0; q < 50; ++q) {
      const auto w = test::random_word(rng, 2, 10);
      EXPECT_EQ(a.contains(w), b.contains(w));
    }
  }
}

TEST(Fold, ContainsGeneratorsAndProducts) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(test::random_word(rng, 3, 7));
    const auto g = build_graph(3, gens);
    for (const auto& s : gens) EXPECT_TRUE(g.contains(s));
    Word prod(3);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::bernoulli_distribution inv(0.5);
    for (int i = 0; i < 6; ++i) {
      const auto& s = gens[pick(rng)];
      prod = multiply(prod, inv(rng) ? invert(s) : s);
      EXPECT_TRUE(g.contains(prod));
    }
  }
}

TEST(Index, ModTwoKernel) {
  const auto layer = frattini_layer(Group::free(2), 2);
  EXPECT_EQ(layer->graph().index(), 4u);
  EXPECT_TRUE(layer->graph().contains(W("x1 x2 x1^-1 x2^-1", 2)));
  const auto folded = mod_kernel_by_folding(2, 2);
  EXPECT_EQ(folded.index(), 4u);
  EXPECT_TRUE(folded.contains(W("x1 x2 x1^-1 x2^-1", 2)));
}

TEST(Transversal, Rose) {
  const auto t = schreier_transversal(graph_of(2, {"x1", "x2"}));
  ASSERT_EQ(t.representatives.size(), 1u);
  EXPECT_TRUE(t.representatives[0].is_identity());
}

TEST(Transversal, ModKernels) {
  const auto t2 = schreier_transversal(frattini_layer(Group::free(2), 2)->graph());
  EXPECT_EQ(t2.representatives.size(), 4u);
  EXPECT_EQ(t2.max_length(), 2u);
  EXPECT_TRUE(t2.representatives[0].is_identity());
  const auto t5 = schreier_transversal(frattini_layer(Group::free(2), 5)->graph());
  EXPECT_EQ(t5.representatives.size(), 25u);
  EXPECT_LE(t5.max_length(), 8u);
}

TEST(Transversal, InfiniteIndexIsAnError) {
  EXPECT_THROW(schreier_transversal(graph_of(2, {"x1^2"})), Error);
}

TEST(SchreierGenerators, Counts) {
  const auto& g2 = frattini_layer(Group::free(2), 2)->graph();
  const auto t = schreier_transversal(g2);
  const auto gens = schreier_generators(g2, t);
  EXPECT_EQ(gens.size(), 5u);
  for (const auto& y : gens) EXPECT_LE(y.length(), 2 * t.max_length() + 1);
  const auto rose = graph_of(2, {"x1", "x2"});
  EXPECT_EQ(schreier_generators(rose, schreier_transversal(rose)),
            (std::vector<Word>{W("x1", 2), W("x2", 2)}));
}

TEST(SchreierGenerators, NielsenSchreierOnRandomFiniteIndex) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 40; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(test::random_word(rng, 2, 5));
    const auto g = build_graph(2, gens);
    const auto l = g.index();
    if (!l) continue;
    ++checked;
    const auto ys = schreier_generators(g, schreier_transversal(g));
    EXPECT_EQ(ys.size(), 1 + *l * (2 - 1));
    for (const auto& y : ys) EXPECT_TRUE(g.contains(y));
  }
  EXPECT_GE(checked, 10);
}

TEST(Rewrite, GeneratorsAndProducts) {
  const auto& g = frattini_layer(Group::free(2), 2)->graph();
  const auto t = schreier_transversal(g);
  const auto ys = schreier_generators(g, t);
  const int k = static_cast<int>(ys.size());
  for (int i = 0; i < k; ++i) {
    const auto r = rewrite_in_schreier(g, t, ys[static_cast<std::size_t>(i)]);
    EXPECT_EQ(r, Word::generator(k, i + 1));
  }
  const auto r01 = rewrite_in_schreier(g, t, multiply(ys[0], ys[1]));
  EXPECT_EQ(r01, multiply(Word::generator(k, 1), Word::generator(k, 2)));
  // x1^2: the second x1 leaves the coset of x1, a single Schreier letter.
  const auto sq = rewrite_in_schreier(g, t, W("x1^2", 2));
  EXPECT_EQ(sq.length(), 1u);
  EXPECT_THROW(rewrite_in_schreier(g, t, W("x1", 2)), Error);
}

TEST(Rewrite, EvaluationRoundTrip) {
  const auto& g = frattini_layer(Group::free(2), 3)->graph();
  const SchreierSystem sys(g, schreier_transversal(g));
  std::mt19937_64 rng(8);
  int done = 0;
  while (done < 100) {
    auto w = test::random_word(rng, 2, 16);
    if (!g.contains(w)) continue;
    ++done;
    EXPECT_EQ(sys.evaluate(sys.rewrite(w)), w);
  }
}

TEST(Serialize, RoundTrip) {
  const auto g = graph_of(2, {"x1^2", "x2 x1 x2^-1"});
  const auto text = g.serialize();
  EXPECT_EQ(text.rfind("basepoint 0", 0), 0u);
  EXPECT_EQ(SubgroupGraph::parse(text), g);
}

TEST(Endomorphisms, Surjectivity) {
  EXPECT_TRUE(is_surjective(Endomorphism{2, {W("x1", 2), W("x2", 2)}}));
  EXPECT_TRUE(is_surjective(Endomorphism{2, {W("x1 x2", 2), W("x2", 2)}}));
  EXPECT_FALSE(is_surjective(Endomorphism{2, {W("x1^2", 2), W("x2", 2)}}));
  EXPECT_TRUE(is_automorphism(Endomorphism{2, {W("x2", 2), W("x1", 2)}}));
}

TEST(Endomorphisms, SurjectivityInvariantUnderNielsenMove) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    Endomorphism e{2, {test::random_word(rng, 2, 4), test::random_word(rng, 2, 4)}};
    Endomorphism moved{2, {multiply(e.images[0], e.images[1]), e.images[1]}};
    EXPECT_EQ(is_surjective(e), is_surjective(moved));
  }
}

TEST(Endomorphisms, Apply) {
  const Endomorphism swap{2, {W("x2", 2), W("x1", 2)}};
  EXPECT_TRUE(apply(swap, Word(2)).is_identity());
  EXPECT_EQ(apply(swap, W("x1 x2", 2)), W("x2 x1", 2));
  const Endomorphism kill{2, {W("x1 x2", 2), Word(2)}};
  EXPECT_EQ(apply(kill, W("x1 x2", 2)), W("x1 x2", 2));
}
