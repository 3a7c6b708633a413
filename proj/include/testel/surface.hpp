#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testel/permutation.hpp"
#include "testel/word.hpp"

namespace testel {

enum class SurfaceKind { Orientable, NonOrientable };

/// One-relator presentation of a closed surface group.
///   orientable genus n >= 2:     <x1..x2n | [x1,x2]...[x2n-1,x2n]>
///   non-orientable genus n >= 3: <x1..xn  | x1^2...xn^2>
class SurfacePresentation {
 public:
  static SurfacePresentation orientable(int genus);
  static SurfacePresentation nonorientable(int genus);
  /// "orientable:<genus>" or "nonorientable:<genus>".
  static SurfacePresentation parse(std::string_view spec);

  SurfaceKind kind() const noexcept { return kind_; }
  int genus() const noexcept { return genus_; }
  int rank() const noexcept { return kind_ == SurfaceKind::Orientable ? 2 * genus_ : genus_; }
  const Word& relator() const noexcept { return relator_; }
  /// Dehn's algorithm decides the word problem (C'(1/6) holds).
  bool dehn_complete() const noexcept {
    return kind_ == SurfaceKind::Orientable || genus_ >= 4;
  }
  std::string describe() const;

 private:
  SurfacePresentation(SurfaceKind kind, int genus, Word relator)
      : kind_(kind), genus_(genus), relator_(std::move(relator)) {}

  SurfaceKind kind_;
  int genus_;
  Word relator_;
};

/// Dehn reduction against the symmetrized relator: every subword longer than
/// half a cyclic conjugate of r^{+-1} is replaced by the inverse of the
/// complementary piece, with free cancellation, until none is left. Letters
/// are consumed left to right on a stack, so the leftmost completed match is
/// replaced first.
class DehnReducer {
 public:
  explicit DehnReducer(const Word& relator);

  Word reduce(const Word& w) const;
  /// Shortest replaced subword length: floor(|r|/2) + 1.
  std::size_t threshold() const noexcept { return threshold_; }

 private:
  struct Node {
    std::vector<std::int32_t> child;
    std::int32_t replacement = -1;
  };

  int rank_;
  std::size_t threshold_;
  std::vector<Node> trie_;  // keyed by the matched piece read right to left
  std::vector<std::vector<Letter>> replacements_;
};

/// Either the free group of a given rank or a surface group. Cheap to copy.
class Group {
 public:
  static Group free(int rank);
  static Group surface(const SurfacePresentation& pres);
  /// "free:<rank>", "orientable:<genus>", "nonorientable:<genus>".
  static Group parse(std::string_view spec);

  bool is_free() const noexcept { return !pres_; }
  int rank() const noexcept { return rank_; }
  const SurfacePresentation* presentation() const noexcept { return pres_.get(); }
  const DehnReducer* dehn() const noexcept { return dehn_.get(); }
  std::string describe() const;

 private:
  int rank_ = 0;
  std::shared_ptr<const SurfacePresentation> pres_;
  std::shared_ptr<const DehnReducer> dehn_;
};

/// Exponent functionals sigma_i. For free and orientable groups these are
/// the raw letter counts (reduced mod p when modulus > 0). For a
/// non-orientable group at an odd prime they are e_i - e_n for i < n, the
/// coordinates on the rank-(n-1) Frattini quotient with basis x1..x_{n-1}.
struct ExponentVector {
  std::vector<long long> entries;
  long long modulus = 0;

  bool is_zero() const;
  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
};

ExponentVector exponent_sums(const Word& w, const Group& group, long long modulus);
/// Number of functionals at this modulus; letter x_{i+1} has functional vector e_i.
std::size_t functional_count(const Group& group, long long modulus);
/// Functional vector of generator x_index (1-based).
std::vector<long long> letter_functionals(const Group& group, int index, long long modulus);

bool is_prime(long long n);

Word dehn_reduce(const Word& w, const SurfacePresentation& pres);

enum class Truth { False, True, Unknown };
std::string to_string(Truth t);

struct QuotientBudget {
  int max_degree = 8;
  std::uint64_t max_candidates = 2'000'000;
  std::uint64_t seed = 0;
};

/// Homomorphism to a permutation group (generator images satisfying the
/// relator) under which the separated word has a non-identity image.
struct QuotientWitness {
  std::size_t degree = 0;
  std::vector<Perm> images;
  Perm word_image;
  std::string kind;  // "cyclic" or "permutation"
};

std::optional<QuotientWitness> quotient_separate(const Word& w, const Group& group,
                                                 const QuotientBudget& budget = {});
/// Re-evaluates the relator and the word under the witness images.
bool verify_witness(const Word& w, const Group& group, const QuotientWitness& witness);

/// Word problem. Free groups and Dehn-complete presentations answer
/// True/False; otherwise False needs a separating quotient and Unknown is
/// returned when none is found within budget.
Truth is_trivial(const Word& w, const Group& group, const QuotientBudget& budget = {});
Truth are_equal(const Word& u, const Word& v, const Group& group,
                const QuotientBudget& budget = {});

}  // namespace testel
