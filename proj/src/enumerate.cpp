#include "testel/enumerate.hpp"

#include <limits>
#include <random>

#include "testel/error.hpp"

namespace testel {

namespace {

void check_spec(int rank, int radius) {
  require(rank >= 1, ErrorCode::InvalidArgument, "rank must be >= 1");
  require(radius >= 0, ErrorCode::InvalidArgument, "radius must be >= 0");
}

// Uniform integer in [0, bound) from a 64-bit engine; rejection keeps it
// identical across standard library implementations.
std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r = 0;
  do r = engine();
  while (r >= limit);
  return r % bound;
}

}  // namespace

BigInt ball_size(const BallSpec& spec) {
  check_spec(spec.rank, spec.radius);
  if (spec.rank == 1) return BigInt(2 * spec.radius + 1);
  const BigInt base = 2 * spec.rank - 1;
  const BigInt grown = boost::multiprecision::pow(base, static_cast<unsigned>(spec.radius)) - 1;
  return 1 + (2 * spec.rank) * grown / (2 * spec.rank - 2);
}

BigInt sphere_size(int rank, int radius) {
  check_spec(rank, radius);
  if (radius == 0) return 1;
  return BigInt(2 * rank) *
         boost::multiprecision::pow(BigInt(2 * rank - 1), static_cast<unsigned>(radius - 1));
}

SphereCursor::SphereCursor(int rank, int radius, const Word& prefix)
    : rank_(rank), radius_(radius), fixed_(prefix.length()) {
  check_spec(rank, radius);
  require(prefix.rank() == 0 || prefix.rank() == rank, ErrorCode::RankMismatch,
          "prefix rank differs from sphere rank");
  if (fixed_ > static_cast<std::size_t>(radius)) {
    done_ = true;
    return;
  }
  codes_.assign(static_cast<std::size_t>(radius), 0);
  for (std::size_t i = 0; i < fixed_; ++i) codes_[i] = letter_code(prefix.letters()[i]);
}

bool SphereCursor::advance(std::size_t from) {
  // Fill positions [from, radius) with the smallest admissible codes.
  for (std::size_t i = from; i < codes_.size(); ++i) {
    int c = 0;
    if (i > 0 && c == inverse_code(codes_[i - 1])) ++c;
    codes_[i] = c;
  }
  return true;
}

std::optional<Word> SphereCursor::next() {
  if (done_) return std::nullopt;
  const int alphabet = 2 * rank_;
  if (!started_) {
    started_ = true;
    advance(fixed_);
  } else {
    // Odometer over the free positions, skipping codes that cancel.
    std::size_t i = codes_.size();
    while (true) {
      if (i == fixed_) {
        done_ = true;
        return std::nullopt;
      }
      --i;
      int c = codes_[i] + 1;
      if (i > 0 && c == inverse_code(codes_[i - 1])) ++c;
      if (c < alphabet) {
        codes_[i] = c;
        advance(i + 1);
        break;
      }
    }
  }
  std::vector<Letter> letters(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) letters[i] = code_letter(codes_[i]);
  if (radius_ == 0) done_ = true;
  return Word::reduce(rank_, letters);
}

void for_each_in_sphere(int rank, int radius, const std::function<void(const Word&)>& fn) {
  SphereCursor cursor(rank, radius);
  while (auto w = cursor.next()) fn(*w);
}

void for_each_in_ball(int rank, int radius, const std::function<void(const Word&)>& fn) {
  check_spec(rank, radius);
  for (int k = 0; k <= radius; ++k) for_each_in_sphere(rank, k, fn);
}

std::vector<Word> ball_words(int rank, int radius) {
  std::vector<Word> out;
  for_each_in_ball(rank, radius, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::size_t ball_shard_count(int rank) { return static_cast<std::size_t>(2 * rank + 1); }

void for_each_in_ball_shard(int rank, int radius, std::size_t shard,
                            const std::function<void(const Word&)>& fn) {
  check_spec(rank, radius);
  require(shard < ball_shard_count(rank), ErrorCode::OutOfRange, "shard index out of range");
  if (shard == 0) {
    fn(Word(rank));
    return;
  }
  const Letter first = code_letter(static_cast<int>(shard - 1));
  const Word prefix = Word::reduce(rank, std::vector<Letter>{first});
  for (int k = 1; k <= radius; ++k) {
    SphereCursor cursor(rank, k, prefix);
    while (auto w = cursor.next()) fn(*w);
  }
}

Word sample_sphere(int rank, int radius, std::uint64_t seed) {
  check_spec(rank, radius);
  std::mt19937_64 engine(seed);
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(radius));
  int previous = -1;
  for (int i = 0; i < radius; ++i) {
    int c = 0;
    if (previous < 0) {
      c = static_cast<int>(uniform_below(engine, static_cast<std::uint64_t>(2 * rank)));
    } else {
      // 2n-1 choices: skip the code that would cancel.
      c = static_cast<int>(uniform_below(engine, static_cast<std::uint64_t>(2 * rank - 1)));
      if (c >= inverse_code(previous)) ++c;
    }
    letters.push_back(code_letter(c));
    previous = c;
  }
  return Word::reduce(rank, letters);
}

}  // namespace testel
