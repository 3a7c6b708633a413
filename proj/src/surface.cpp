#include "testel/surface.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

#include "testel/error.hpp"

namespace testel {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::Parse,
          "malformed " + std::string(what) + ": \"" + std::string(text) + "\"");
  return value;
}

std::vector<long long> raw_counts(const Word& w, int rank) {
  std::vector<long long> e(static_cast<std::size_t>(rank), 0);
  for (Letter l : w.letters()) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  return e;
}

// Smallest m >= 2 that does not divide d (d != 0).
long long non_divisor(long long d) {
  long long m = 2;
  while (d % m == 0) ++m;
  return m;
}

Perm cycle_power(std::size_t degree, long long exponent) {
  std::vector<int> images(degree);
  const auto m = static_cast<long long>(degree);
  for (std::size_t i = 0; i < degree; ++i)
    images[i] = static_cast<int>(mod(static_cast<long long>(i) + exponent, m));
  return Perm(std::move(images));
}

std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r = 0;
  do r = engine();
  while (r >= limit);
  return r % bound;
}

// Fast evaluation of a word on small permutations stored as byte tables.
class TupleEvaluator {
 public:
  TupleEvaluator(std::size_t degree, int rank) : degree_(degree), rank_(rank) {}

  bool is_identity(const std::vector<const std::vector<int>*>& forward,
                   const std::vector<std::vector<int>>& backward, const Word& w) const {
    for (std::size_t start = 0; start < degree_; ++start) {
      int x = static_cast<int>(start);
      for (Letter l : w.letters()) {
        const auto i = static_cast<std::size_t>(std::abs(l) - 1);
        x = l > 0 ? (*forward[i])[static_cast<std::size_t>(x)] : backward[i][static_cast<std::size_t>(x)];
      }
      if (x != static_cast<int>(start)) return false;
    }
    return true;
  }

 private:
  std::size_t degree_;
  int rank_;
};

std::optional<QuotientWitness> abelian_witness(const Word& w, const Group& group) {
  const auto e = raw_counts(w, group.rank());
  const int rank = group.rank();
  std::vector<long long> exps(static_cast<std::size_t>(rank), 0);
  std::size_t degree = 0;
  const auto* pres = group.presentation();
  if (!pres || pres->kind() == SurfaceKind::Orientable) {
    for (int i = 0; i < rank; ++i) {
      if (e[static_cast<std::size_t>(i)] == 0) continue;
      degree = static_cast<std::size_t>(non_divisor(e[static_cast<std::size_t>(i)]));
      exps[static_cast<std::size_t>(i)] = 1;
      break;
    }
  } else {
    const long long last = e.back();
    for (int i = 0; i + 1 < rank; ++i) {
      const long long d = e[static_cast<std::size_t>(i)] - last;
      if (d == 0) continue;
      degree = static_cast<std::size_t>(non_divisor(d));
      exps[static_cast<std::size_t>(i)] = 1;
      exps.back() = -1;
      break;
    }
    if (degree == 0 && mod(std::accumulate(e.begin(), e.end(), 0LL), 2) == 1) {
      degree = 2;
      std::fill(exps.begin(), exps.end(), 1);
    }
  }
  if (degree == 0) return std::nullopt;
  QuotientWitness out;
  out.degree = degree;
  out.kind = "cyclic";
  for (int i = 0; i < rank; ++i) out.images.push_back(cycle_power(degree, exps[static_cast<std::size_t>(i)]));
  out.word_image = evaluate(out.images, w);
  return out;
}

}  // namespace

SurfacePresentation SurfacePresentation::orientable(int genus) {
  require(genus >= 2, ErrorCode::InvalidArgument, "orientable surface genus must be >= 2");
  const int rank = 2 * genus;
  std::vector<Letter> r;
  for (int i = 1; i < rank; i += 2) {
    r.insert(r.end(), {i, i + 1, -i, -(i + 1)});
  }
  return SurfacePresentation(SurfaceKind::Orientable, genus, Word::reduce(rank, r));
}

SurfacePresentation SurfacePresentation::nonorientable(int genus) {
  require(genus >= 3, ErrorCode::InvalidArgument, "non-orientable surface genus must be >= 3");
  std::vector<Letter> r;
  for (int i = 1; i <= genus; ++i) r.insert(r.end(), {i, i});
  return SurfacePresentation(SurfaceKind::NonOrientable, genus, Word::reduce(genus, r));
}

SurfacePresentation SurfacePresentation::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  require(colon != std::string_view::npos, ErrorCode::Parse,
          "surface must be orientable:<genus> or nonorientable:<genus>");
  const auto kind = spec.substr(0, colon);
  const int genus = parse_int(spec.substr(colon + 1), "genus");
  if (kind == "orientable") return orientable(genus);
  if (kind == "nonorientable") return nonorientable(genus);
  fail(ErrorCode::Parse, "unknown surface kind \"" + std::string(kind) + "\"");
}

std::string SurfacePresentation::describe() const {
  return (kind_ == SurfaceKind::Orientable ? "orientable:" : "nonorientable:") +
         std::to_string(genus_);
}

DehnReducer::DehnReducer(const Word& relator)
    : rank_(relator.rank()), threshold_(relator.length() / 2 + 1) {
  require(!relator.is_identity(), ErrorCode::InvalidArgument, "empty relator");
  const auto alphabet = static_cast<std::size_t>(2 * rank_);
  trie_.push_back(Node{std::vector<std::int32_t>(alphabet, -1), -1});
  const std::size_t len = relator.length();
  std::vector<std::vector<Letter>> shifts;
  for (const Word& r : {relator, invert(relator)}) {
    const auto letters = r.letters();
    for (std::size_t s = 0; s < len; ++s) {
      std::vector<Letter> shifted(len);
      for (std::size_t i = 0; i < len; ++i) shifted[i] = letters[(s + i) % len];
      shifts.push_back(std::move(shifted));
    }
  }
  for (const auto& shift : shifts) {
    // Key: the first `threshold_` letters, inserted last letter first.
    std::size_t node = 0;
    for (std::size_t i = threshold_; i-- > 0;) {
      const auto code = static_cast<std::size_t>(letter_code(shift[i]));
      if (trie_[node].child[code] < 0) {
        trie_[node].child[code] = static_cast<std::int32_t>(trie_.size());
        trie_.push_back(Node{std::vector<std::int32_t>(alphabet, -1), -1});
      }
      node = static_cast<std::size_t>(trie_[node].child[code]);
    }
    if (trie_[node].replacement >= 0) continue;  // first shift wins
    // piece * complement = 1, so piece = complement^-1.
    std::vector<Letter> replacement;
    for (std::size_t i = len; i-- > threshold_;) replacement.push_back(-shift[i]);
    trie_[node].replacement = static_cast<std::int32_t>(replacements_.size());
    replacements_.push_back(std::move(replacement));
  }
}

Word DehnReducer::reduce(const Word& w) const {
  require(w.rank() <= rank_, ErrorCode::RankMismatch, "word rank exceeds presentation rank");
  std::vector<Letter> out;
  out.reserve(w.length());
  std::vector<Letter> todo(w.letters().rbegin(), w.letters().rend());
  while (!todo.empty()) {
    const Letter l = todo.back();
    todo.pop_back();
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
      continue;
    }
    out.push_back(l);
    if (out.size() < threshold_) continue;
    std::size_t node = 0;
    bool matched = true;
    for (std::size_t i = 0; i < threshold_; ++i) {
      const auto code = static_cast<std::size_t>(letter_code(out[out.size() - 1 - i]));
      const auto next = trie_[node].child[code];
      if (next < 0) {
        matched = false;
        break;
      }
      node = static_cast<std::size_t>(next);
    }
    if (!matched) continue;
    out.resize(out.size() - threshold_);
    const auto& rep = replacements_[static_cast<std::size_t>(trie_[node].replacement)];
    todo.insert(todo.end(), rep.rbegin(), rep.rend());
  }
  return Word::reduce(rank_, out);
}

Group Group::free(int rank) {
  require(rank >= 1, ErrorCode::InvalidArgument, "free group rank must be >= 1");
  Group g;
  g.rank_ = rank;
  return g;
}

Group Group::surface(const SurfacePresentation& pres) {
  Group g;
  g.rank_ = pres.rank();
  g.pres_ = std::make_shared<const SurfacePresentation>(pres);
  g.dehn_ = std::make_shared<const DehnReducer>(pres.relator());
  return g;
}

Group Group::parse(std::string_view spec) {
  if (spec.substr(0, 5) == "free:") return free(parse_int(spec.substr(5), "rank"));
  return surface(SurfacePresentation::parse(spec));
}

std::string Group::describe() const {
  return pres_ ? pres_->describe() : "free:" + std::to_string(rank_);
}

bool ExponentVector::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](long long x) { return x == 0; });
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

bool uses_working_basis(const Group& group, long long modulus) {
  const auto* pres = group.presentation();
  return pres && pres->kind() == SurfaceKind::NonOrientable && modulus != 2;
}

void check_modulus(const Group& group, long long modulus) {
  require(modulus == 0 || is_prime(modulus), ErrorCode::InvalidArgument,
          "modulus " + std::to_string(modulus) + " is not prime");
  const auto* pres = group.presentation();
  require(!(pres && pres->kind() == SurfaceKind::NonOrientable && modulus == 0),
          ErrorCode::InvalidArgument,
          "non-orientable exponent functionals need a prime modulus");
}

}  // namespace

std::size_t functional_count(const Group& group, long long modulus) {
  check_modulus(group, modulus);
  return static_cast<std::size_t>(uses_working_basis(group, modulus) ? group.rank() - 1
                                                                     : group.rank());
}

std::vector<long long> letter_functionals(const Group& group, int index, long long modulus) {
  const std::size_t m = functional_count(group, modulus);
  require(index >= 1 && index <= group.rank(), ErrorCode::OutOfRange, "generator index out of range");
  std::vector<long long> f(m, 0);
  if (uses_working_basis(group, modulus) && index == group.rank()) {
    std::fill(f.begin(), f.end(), mod(-1, modulus));
  } else {
    f[static_cast<std::size_t>(index - 1)] = 1;
  }
  return f;
}

ExponentVector exponent_sums(const Word& w, const Group& group, long long modulus) {
  check_modulus(group, modulus);
  require(w.rank() <= group.rank(), ErrorCode::RankMismatch, "word rank exceeds group rank");
  auto e = raw_counts(w, group.rank());
  ExponentVector out;
  out.modulus = modulus;
  if (uses_working_basis(group, modulus)) {
    const long long last = e.back();
    e.pop_back();
    for (auto& x : e) x -= last;
  }
  if (modulus > 0)
    for (auto& x : e) x = mod(x, modulus);
  out.entries = std::move(e);
  return out;
}

Word dehn_reduce(const Word& w, const SurfacePresentation& pres) {
  return DehnReducer(pres.relator()).reduce(w);
}

std::string to_string(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<QuotientWitness> quotient_separate(const Word& w, const Group& group,
                                                 const QuotientBudget& budget) {
  require(w.rank() <= group.rank(), ErrorCode::RankMismatch, "word rank exceeds group rank");
  if (w.is_identity()) return std::nullopt;
  if (auto cyclic = abelian_witness(w, group)) return cyclic;

  const int rank = group.rank();
  const Word relator = group.presentation() ? group.presentation()->relator() : Word(rank);
  std::uint64_t remaining = budget.max_candidates;
  for (int degree = 2; degree <= budget.max_degree && remaining > 0; ++degree) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(degree));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::vector<int>> inverses(perms.size(), std::vector<int>(p.size()));
    for (std::size_t k = 0; k < perms.size(); ++k)
      for (int i = 0; i < degree; ++i) inverses[k][static_cast<std::size_t>(perms[k][static_cast<std::size_t>(i)])] = i;

    // Total tuple count, saturating.
    std::uint64_t total = 1;
    bool exhaustive = true;
    for (int i = 0; i < rank; ++i) {
      if (total > remaining / perms.size()) {
        exhaustive = false;
        break;
      }
      total *= perms.size();
    }
    const int degrees_left = budget.max_degree - degree + 1;
    const std::uint64_t tries = exhaustive ? total : std::max<std::uint64_t>(1, remaining / static_cast<std::uint64_t>(degrees_left));
    remaining -= std::min(remaining, tries);

    TupleEvaluator eval(static_cast<std::size_t>(degree), rank);
    std::vector<std::size_t> choice(static_cast<std::size_t>(rank), 0);
    std::vector<const std::vector<int>*> forward(static_cast<std::size_t>(rank));
    std::vector<std::vector<int>> backward(static_cast<std::size_t>(rank));
    std::mt19937_64 engine(budget.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(degree)));
    for (std::uint64_t t = 0; t < tries; ++t) {
      if (exhaustive) {
        if (t > 0) {
          for (std::size_t i = 0; i < choice.size(); ++i) {
            if (++choice[i] < perms.size()) break;
            choice[i] = 0;
          }
        }
      } else {
        for (auto& c : choice) c = static_cast<std::size_t>(uniform_below(engine, perms.size()));
      }
      for (std::size_t i = 0; i < choice.size(); ++i) {
        forward[i] = &perms[choice[i]];
        backward[i] = inverses[choice[i]];
      }
      if (!eval.is_identity(forward, backward, relator)) continue;
      if (eval.is_identity(forward, backward, w)) continue;
      QuotientWitness out;
      out.degree = static_cast<std::size_t>(degree);
      out.kind = "permutation";
      for (std::size_t i = 0; i < choice.size(); ++i) out.images.emplace_back(perms[choice[i]]);
      out.word_image = evaluate(out.images, w);
      return out;
    }
  }
  return std::nullopt;
}

bool verify_witness(const Word& w, const Group& group, const QuotientWitness& witness) {
  if (static_cast<int>(witness.images.size()) != group.rank()) return false;
  if (group.presentation() && !evaluate(witness.images, group.presentation()->relator()).is_identity())
    return false;
  return !evaluate(witness.images, w).is_identity();
}

Truth is_trivial(const Word& w, const Group& group, const QuotientBudget& budget) {
  require(w.rank() <= group.rank(), ErrorCode::RankMismatch, "word rank exceeds group rank");
  const auto* pres = group.presentation();
  if (!pres) return w.is_identity() ? Truth::True : Truth::False;
  const Word reduced = group.dehn()->reduce(w);
  if (reduced.is_identity()) return Truth::True;
  if (pres->dehn_complete()) return Truth::False;
  return quotient_separate(reduced, group, budget) ? Truth::False : Truth::Unknown;
}

Truth are_equal(const Word& u, const Word& v, const Group& group, const QuotientBudget& budget) {
  WordBuilder b(group.rank());
  b.append(u);
  b.append_inverse(v);
  return is_trivial(std::move(b).build(), group, budget);
}

}  // namespace testel
