#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace testel {

/// A letter is a signed generator index: +i stands for x_i, -i for x_i^-1.
using Letter = std::int32_t;

/// Position of a letter in the alphabet order x1 < x1^-1 < x2 < x2^-1 < ...
inline int letter_code(Letter l) { return 2 * ((l < 0 ? -l : l) - 1) + (l < 0 ? 1 : 0); }
inline Letter code_letter(int code) { return (code % 2 == 0) ? (code / 2 + 1) : -(code / 2 + 1); }
inline int inverse_code(int code) { return code ^ 1; }

/// Freely reduced word over the alphabet x_1..x_rank. Immutable once built;
/// the empty word is the identity.
class Word {
 public:
  Word() = default;
  explicit Word(int rank);

  /// Reduces `raw` freely. Throws on letters outside [1, rank].
  static Word reduce(int rank, std::span<const Letter> raw);
  /// x_index^exponent.
  static Word generator(int rank, int index, long long exponent = 1);

  int rank() const noexcept { return rank_; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }

  /// Reinterprets the same letters over a larger alphabet.
  Word widened(int rank) const;

  friend bool operator==(const Word&, const Word&) = default;
  /// Shortlex order (length first, then alphabet order); identity is least.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  Word(int rank, std::vector<Letter> reduced) : rank_(rank), letters_(std::move(reduced)) {}

  int rank_ = 0;
  std::vector<Letter> letters_;

  friend class WordBuilder;
};

/// Appends letters with on-the-fly free cancellation.
class WordBuilder {
 public:
  explicit WordBuilder(int rank) : rank_(rank) {}

  void push(Letter l);
  void append(const Word& w);
  void append_inverse(const Word& w);
  void append_power(const Word& w, long long exponent);
  std::size_t size() const noexcept { return letters_.size(); }
  Word build() &&;

 private:
  int rank_;
  std::vector<Letter> letters_;
};

Word multiply(const Word& u, const Word& v);
Word invert(const Word& u);
Word power(const Word& u, long long exponent);
inline std::size_t word_length(const Word& u) { return u.length(); }
/// d_X(u, v) = |u^-1 v| in the standard basis.
std::size_t distance(const Word& u, const Word& v);

/// Parses whitespace-separated tokens `x<i>`, `x<i>^-1` (and `x<i>^<k>` as
/// shorthand for a power). "1" or an empty string is the identity.
Word parse_word(std::string_view text, int rank);
/// Canonical text: tokens `x<i>` / `x<i>^-1`; the identity prints as "1".
std::string to_string(const Word& w);

}  // namespace testel
