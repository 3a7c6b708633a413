#pragma once

#include <random>
#include <string>

#include "testel/word.hpp"

namespace testel::test {

inline Word W(const std::string& text, int rank) { return parse_word(text, rank); }

// Unreduced random letter string, reduced by the library.
inline Word random_word(std::mt19937_64& rng, int rank, int max_length) {
  std::uniform_int_distribution<int> len(0, max_length);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<Letter> raw(static_cast<std::size_t>(len(rng)));
  for (auto& l : raw) l = sign(rng) ? gen(rng) : -gen(rng);
  return Word::reduce(rank, raw);
}

}  // namespace testel::test
