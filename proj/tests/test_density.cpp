#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <unistd.h>

#include "support.hpp"
#include "testel/certify.hpp"
#include "testel/density.hpp"
#include "testel/error.hpp"
#include "testel/net.hpp"

using namespace testel;
using testel::test::W;
using Rational = boost::multiprecision::cpp_rational;

namespace {

BigInt pow2(int e) { return BigInt(1) << e; }

// Counts ball elements by brute force over all letter strings.
std::uint64_t brute_ball(int rank, int radius) {
  std::vector<Word> layer{Word(rank)};
  std::set<std::string> seen{to_string(Word(rank))};
  for (int k = 1; k <= radius; ++k) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (int i = 1; i <= rank; ++i) {
        for (int e : {1, -1}) {
          const auto u = multiply(w, Word::generator(rank, i, e));
          if (seen.insert(to_string(u)).second) next.push_back(u);
        }
      }
    }
    layer = std::move(next);
  }
  return seen.size();
}

std::filesystem::path temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("testel_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST(Bounds, FreeCoveringExamples) {
  const auto b = bound_calculator("freeC", 2);
  ASSERT_TRUE(b.exact.has_value());
  EXPECT_EQ(*b.exact, "1/4025");
  for (int n : {2, 3, 4}) {
    const auto r = bound_calculator("freeC", n);
    const Rational factor = Rational(pow2(n + 1) * (pow2(n) - 1) + 1);
    const Rational value(*r.exact);
    const Rational formula_ball(ball_size({n, 3 * n - 2}));
    EXPECT_EQ(value * factor * formula_ball, Rational(1)) << n;
    if (3 * n - 2 <= 7) {
      EXPECT_EQ(Rational(BigInt(brute_ball(n, 3 * n - 2))), formula_ball);
    }
  }
}

TEST(Bounds, NetRadii) {
  EXPECT_EQ(*bound_calculator("freeNet", 2).exact, "4");
  EXPECT_EQ(*bound_calculator("freeNet", 5).exact, "13");
  EXPECT_EQ(*bound_calculator("orNet", 2).exact, "165355");
  EXPECT_EQ(*bound_calculator("nonorNet", 3).exact, "10");
  EXPECT_THROW(bound_calculator("orNet", 1), Error);
}

TEST(Bounds, KrssAgainstClosedForm) {
  const auto b = bound_calculator("krss", 2);
  EXPECT_FALSE(b.exact.has_value());
  const double expected = 1.0 - 8.0 / (3.0 * std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(std::stod(b.decimal), expected, 1e-12);
  EXPECT_EQ(b.decimal, "0.729810176954");
  // zeta(3) = 1.2020569031595942
  EXPECT_NEAR(std::stod(bound_calculator("krss", 3).decimal), 1.0 - 8.0 / (25.0 * 1.2020569031595942), 1e-12);
}

TEST(Bounds, SurfaceBoundsAreRationalsBelowOne) {
  for (const char* name : {"nonorC", "orC"}) {
    const auto b = bound_calculator(name, name[0] == 'n' ? 3 : 2);
    EXPECT_GT(b.exact_digits, 0u);
    EXPECT_FALSE(b.decimal.empty());
    if (b.exact) {
      const Rational v(*b.exact);
      EXPECT_GT(v, 0);
      EXPECT_LT(v, 1);
    } else {
      EXPECT_TRUE(b.exact_elided);
    }
  }
}

TEST(Bounds, UnknownName) { EXPECT_THROW(bound_calculator("nope", 2), Error); }

TEST(Chain, EvenWordsCover) {
  const std::vector<Word> translates{Word(2), W("x1", 2), W("x2", 2), W("x1 x2", 2)};
  for (int k : {5, 6}) {
    const auto r = verify_covering_chain(named_subset("even", 2), translates, 2, k);
    EXPECT_TRUE(r.covering);
    EXPECT_TRUE(r.injection);
    EXPECT_TRUE(r.chain);
    EXPECT_TRUE(r.ball_product);
    EXPECT_EQ(r.uncovered, 0);
    EXPECT_EQ(r.translate_radius, 2);
  }
}

TEST(Chain, TrivialAndFailingSubsets) {
  const auto all = verify_covering_chain(named_subset("all", 2), {Word(2)}, 2, 3);
  EXPECT_TRUE(all.passed());
  EXPECT_EQ(all.subset_in_ball, ball_size({2, 3}));
  const auto single = verify_covering_chain(named_subset("identity", 2), {Word(2)}, 2, 2);
  EXPECT_FALSE(single.covering);
  EXPECT_EQ(single.uncovered, 16);
  ASSERT_TRUE(single.first_uncovered.has_value());
  EXPECT_EQ(single.first_uncovered->length(), 1u);
}

TEST(Chain, SubsetPredicates) {
  const auto even = named_subset("even", 2);
  EXPECT_TRUE(even(W("x1 x2 x1 x2", 2)));
  EXPECT_FALSE(even(W("x1 x2", 2)));
  const auto f3 = named_subset("frattini:3", 2);
  EXPECT_TRUE(f3(W("x1^3 x2^-3", 2)));
  EXPECT_FALSE(f3(W("x1^2", 2)));
  const auto turner = named_subset("turner", 2);
  EXPECT_TRUE(turner(W("x1^2 x2^2", 2)));
  EXPECT_FALSE(turner(W("x1^2 x2^3", 2)));
  EXPECT_THROW(named_subset("bogus", 2), Error);
}

TEST(Census, SmallRadii) {
  const auto k0 = census(2, 0, 2);
  EXPECT_EQ(k0.negative, 1u);
  EXPECT_EQ(k0.total(), 1u);
  EXPECT_EQ(classify(W("x1^2", 2), 2, 2, {}).kind, CensusClass::Negative);
  EXPECT_EQ(classify(W("x1^2 x2^2", 2), 2, 2, {}).kind, CensusClass::Positive);
  EXPECT_EQ(classify(W("x1^2 x2^2", 2), 2, 2, {}).tag, "turner");
}

TEST(Census, BucketsPartitionTheBall) {
  for (int k = 0; k <= 8; ++k) {
    const auto r = census(2, k, 1);
    EXPECT_EQ(BigInt(r.total()), r.ball) << k;
    EXPECT_EQ(r.ball, BigInt(2) * boost::multiprecision::pow(BigInt(3), k) - 1);
    EXPECT_EQ(r.positive, r.positive_turner + r.positive_net);
    EXPECT_FALSE(r.partial);
  }
}

TEST(Census, VerdictsRederive) {
  const auto g = Group::free(2);
  for_each_in_ball(2, 4, [&](const Word& w) {
    const auto v = classify(w, 2, 2, {});
    if (v.kind == CensusClass::Negative) {
      const auto c = endo_fixer_search(w, g, 2);
      ASSERT_TRUE(c.witness.has_value());
      EXPECT_EQ(apply(*c.witness, w), w);
      EXPECT_FALSE(is_surjective(*c.witness));
    } else if (v.tag == "turner") {
      EXPECT_TRUE(turner_certificate(w).has_value());
    } else if (v.tag == "net") {
      EXPECT_EQ(net_project_free(w, 2).output, w);
    }
  });
}

TEST(Census, RaisingTheBoundKeepsNegatives) {
  for_each_in_ball(2, 4, [&](const Word& w) {
    bool negative = false;
    for (int L = 0; L <= 3; ++L) {
      const bool now = classify(w, 2, L, {}).kind == CensusClass::Negative;
      if (negative) {
        EXPECT_TRUE(now) << to_string(w) << " L=" << L;
      }
      negative = negative || now;
    }
  });
}

TEST(Census, WorkerCountDoesNotChangeCounts) {
  CensusOptions one, four;
  four.workers = 4;
  const auto a = census(2, 5, 2, one);
  const auto b = census(2, 5, 2, four);
  EXPECT_EQ(census_log_line(a), census_log_line(b));
  EXPECT_EQ(census_csv_row(a), census_csv_row(b));
}

TEST(Census, PartialRunsAreFlagged) {
  CensusOptions capped;
  capped.max_elements = 100;
  const auto r = census(2, 5, 1, capped);
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.classified, 100u);
  EXPECT_EQ(r.total(), 100u);
  capped.workers = 3;
  EXPECT_EQ(census_csv_row(census(2, 5, 1, capped)), census_csv_row(r));
}

TEST(Census, CsvExport) {
  EXPECT_EQ(census_csv_header(), "rank,k,L,positive,negative,unknown,ball_size,seed");
  CensusOptions o;
  o.seed = 9;
  const auto r = census(2, 2, 2, o);
  const std::string expected = "2,2,2," + std::to_string(r.positive) + "," + std::to_string(r.negative) + "," +
                               std::to_string(r.unknown) + ",17,9";
  EXPECT_EQ(census_csv_row(r), expected);
}

TEST(Census, LogRoundTripSkipsCorruptLines) {
  const auto path = temp_path("log");
  auto r = census(2, 3, 2);
  append_census_log(path.string(), r);
  EXPECT_FALSE(r.timestamp.empty());
  {
    std::ofstream out(path, std::ios::app);
    out << "{\"rank\":2,\"k\":9}\n";
    out << "not json at all\n";
  }
  auto line = census_log_line(r);
  const auto pos = line.find("\"negative\":") + 11;
  line[pos] = line[pos] == '1' ? '2' : '1';
  {
    std::ofstream out(path, std::ios::app);
    out << line << "\n";
  }
  const auto log = load_census_log(path.string());
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(log.corrupt_lines, 3u);
  EXPECT_EQ(census_csv_row(log.records[0]), census_csv_row(r));
  EXPECT_EQ(log.records[0].timestamp, r.timestamp);
  std::filesystem::remove(path);
}

TEST(Census, ResumeReusesCompleteRecords) {
  const auto path = temp_path("resume");
  bool reused = true;
  const auto first = census_resumable(path.string(), 2, 3, 2, {}, &reused);
  EXPECT_FALSE(reused);
  const auto second = census_resumable(path.string(), 2, 3, 2, {}, &reused);
  EXPECT_TRUE(reused);
  EXPECT_EQ(census_csv_row(first), census_csv_row(second));
  census_resumable(path.string(), 2, 3, 1, {}, &reused);
  EXPECT_FALSE(reused);
  EXPECT_EQ(load_census_log(path.string()).records.size(), 2u);
  std::filesystem::remove(path);
}

TEST(Census, MissingLogIsEmpty) {
  const auto log = load_census_log(temp_path("missing").string());
  EXPECT_TRUE(log.records.empty());
  EXPECT_EQ(log.corrupt_lines, 0u);
}

TEST(Audit, IdentityNeedsTheFullRadius) {
  const auto r = net_coverage_audit(2, 0);
  EXPECT_EQ(r.elements, 1u);
  EXPECT_EQ(r.max_distance, 4);
  EXPECT_EQ(r.histogram.at(4), 1u);
}

TEST(Audit, RadiusSix) {
  const auto r = net_coverage_audit(2, 6, 2, 3);
  EXPECT_EQ(r.elements, 1457u);
  EXPECT_LE(r.max_distance, 4);
  std::uint64_t total = 0;
  for (const auto& [d, c] : r.histogram) total += c;
  EXPECT_EQ(total, 1457u);
  std::uint64_t statuses = 0;
  for (const auto& [s, c] : r.status_counts) statuses += c;
  EXPECT_EQ(statuses, 1457u);
  const auto serial = net_coverage_audit(2, 6, 2, 1);
  EXPECT_EQ(serial.histogram, r.histogram);
  EXPECT_EQ(serial.status_counts, r.status_counts);
}

TEST(Constants, SchreierCounts) {
  const auto free = schreier_constants(Group::free(2), 2);
  EXPECT_EQ(free.vertices, 4u);
  ASSERT_TRUE(free.expected_basis.has_value());
  EXPECT_EQ(free.basis, *free.expected_basis);
  EXPECT_EQ(free.basis, 5u);
  const auto g2 = schreier_constants(Group::parse("orientable:2"), 5);
  EXPECT_EQ(g2.vertices, 625u);
  EXPECT_EQ(g2.basis, 1252u);
  EXPECT_EQ(g2.relation_rank, 624u);
  EXPECT_LE(g2.max_generator_length, g2.length_bound);
  EXPECT_EQ(g2.length_bound, 33u);
  const auto n4 = schreier_constants(Group::parse("nonorientable:4"), 3);
  ASSERT_TRUE(n4.expected_basis.has_value());
  EXPECT_EQ(n4.basis, *n4.expected_basis);
}

TEST(Constants, BallCheck) {
  const auto rows = ball_check(3, 4);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.formula, BigInt(row.enumerated));
    EXPECT_EQ(row.enumerated, brute_ball(3, row.radius));
  }
}
