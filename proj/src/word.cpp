#include "testel/word.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "testel/error.hpp"

namespace testel {

namespace {

void check_letter(int rank, Letter l) {
  const int index = std::abs(l);
  require(l != 0 && index <= rank, ErrorCode::OutOfRange,
          "letter index " + std::to_string(index) + " outside alphabet of rank " +
              std::to_string(rank));
}

void check_same_rank(const Word& u, const Word& v) {
  require(u.rank() == v.rank(), ErrorCode::RankMismatch,
          "rank mismatch: " + std::to_string(u.rank()) + " vs " + std::to_string(v.rank()));
}

}  // namespace

Word::Word(int rank) : rank_(rank) {
  require(rank >= 0, ErrorCode::InvalidArgument, "negative rank");
}

Word Word::reduce(int rank, std::span<const Letter> raw) {
  WordBuilder b(rank);
  for (Letter l : raw) b.push(l);
  return std::move(b).build();
}

Word Word::generator(int rank, int index, long long exponent) {
  check_letter(rank, index);
  const Letter l = exponent < 0 ? -index : index;
  const auto n = static_cast<std::size_t>(exponent < 0 ? -exponent : exponent);
  return Word(rank, std::vector<Letter>(n, l));
}

Word Word::widened(int rank) const {
  require(rank >= rank_, ErrorCode::RankMismatch, "cannot narrow a word's alphabet");
  return Word(rank, letters_);
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() <=> b.length();
  for (std::size_t i = 0; i < a.length(); ++i) {
    const int ca = letter_code(a.letters_[i]);
    const int cb = letter_code(b.letters_[i]);
    if (ca != cb) return ca <=> cb;
  }
  return a.rank_ <=> b.rank_;
}

void WordBuilder::push(Letter l) {
  check_letter(rank_, l);
  if (!letters_.empty() && letters_.back() == -l)
    letters_.pop_back();
  else
    letters_.push_back(l);
}

void WordBuilder::append(const Word& w) {
  require(w.rank() <= rank_, ErrorCode::RankMismatch, "appending word of larger rank");
  for (Letter l : w.letters()) push(l);
}

void WordBuilder::append_inverse(const Word& w) {
  require(w.rank() <= rank_, ErrorCode::RankMismatch, "appending word of larger rank");
  const auto letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) push(-*it);
}

void WordBuilder::append_power(const Word& w, long long exponent) {
  const long long n = exponent < 0 ? -exponent : exponent;
  for (long long i = 0; i < n; ++i) {
    if (exponent > 0)
      append(w);
    else
      append_inverse(w);
  }
}

Word WordBuilder::build() && { return Word(rank_, std::move(letters_)); }

Word multiply(const Word& u, const Word& v) {
  check_same_rank(u, v);
  WordBuilder b(u.rank());
  b.append(u);
  b.append(v);
  return std::move(b).build();
}

Word invert(const Word& u) {
  WordBuilder b(u.rank());
  b.append_inverse(u);
  return std::move(b).build();
}

Word power(const Word& u, long long exponent) {
  WordBuilder b(u.rank());
  b.append_power(u, exponent);
  return std::move(b).build();
}

std::size_t distance(const Word& u, const Word& v) {
  check_same_rank(u, v);
  WordBuilder b(u.rank());
  b.append_inverse(u);
  b.append(v);
  return b.size();
}

Word parse_word(std::string_view text, int rank) {
  WordBuilder b(rank);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r'))
      ++pos;
  };
  auto parse_int = [&](long long& out) {
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    require(ec == std::errc() && ptr != begin, ErrorCode::Parse,
            "expected integer at offset " + std::to_string(pos) + " in \"" + std::string(text) +
                "\"");
    pos += static_cast<std::size_t>(ptr - begin);
  };

  const auto first = text.find_first_not_of(" \t\r\n");
  const auto last = text.find_last_not_of(" \t\r\n");
  if (first != std::string_view::npos && text.substr(first, last - first + 1) == "1")
    return std::move(b).build();
  while (skip_space(), pos < text.size()) {
    require(text[pos] == 'x', ErrorCode::Parse,
            "expected token x<i> at offset " + std::to_string(pos) + " in \"" + std::string(text) +
                "\"");
    ++pos;
    long long index = 0;
    parse_int(index);
    require(index >= 1 && index <= rank, ErrorCode::OutOfRange,
            "letter x" + std::to_string(index) + " outside alphabet of rank " +
                std::to_string(rank));
    long long exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      parse_int(exponent);
    }
    require(pos == text.size() || text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                text[pos] == '\r',
            ErrorCode::Parse, "tokens must be whitespace-separated in \"" + std::string(text) + "\"");
    const auto l = static_cast<Letter>(exponent < 0 ? -index : index);
    for (long long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) b.push(l);
  }
  return std::move(b).build();
}

std::string to_string(const Word& w) {
  if (w.is_identity()) return "1";
  std::string out;
  out.reserve(w.length() * 4);
  for (Letter l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += 'x';
    out += std::to_string(std::abs(l));
    if (l < 0) out += "^-1";
  }
  return out;
}

}  // namespace testel
