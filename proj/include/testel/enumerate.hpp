#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "testel/word.hpp"

namespace testel {

using BigInt = boost::multiprecision::cpp_int;

struct BallSpec {
  int rank = 1;
  int radius = 0;
};

/// |B_X(k)| for the standard basis of the free group of the given rank.
BigInt ball_size(const BallSpec& spec);
/// Number of reduced words of length exactly k.
BigInt sphere_size(int rank, int radius);

/// Walks the reduced words of one length in lexicographic order
/// (x1 < x1^-1 < x2 < ...), optionally restricted to words that begin with a
/// fixed reduced prefix. Restricting by prefix is how ball enumeration is
/// partitioned into independent shards.
class SphereCursor {
 public:
  SphereCursor(int rank, int radius, const Word& prefix = Word());

  /// The next word, or nullopt once the sphere (or the prefix slice) is exhausted.
  std::optional<Word> next();

 private:
  bool advance(std::size_t from);

  int rank_;
  int radius_;
  std::size_t fixed_;
  std::vector<int> codes_;
  bool started_ = false;
  bool done_ = false;
};

void for_each_in_sphere(int rank, int radius, const std::function<void(const Word&)>& fn);
/// Ball in increasing radius, lexicographic within each sphere.
void for_each_in_ball(int rank, int radius, const std::function<void(const Word&)>& fn);
std::vector<Word> ball_words(int rank, int radius);

/// Partitions B(radius) into shards: shard 0 is the identity and shard 1+c
/// holds every nontrivial word whose first letter has alphabet code c.
std::size_t ball_shard_count(int rank);
void for_each_in_ball_shard(int rank, int radius, std::size_t shard,
                            const std::function<void(const Word&)>& fn);

/// Uniform sample from the sphere of radius k; deterministic for a seed.
Word sample_sphere(int rank, int radius, std::uint64_t seed);

}  // namespace testel
