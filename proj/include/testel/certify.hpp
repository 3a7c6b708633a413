#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "testel/stallings.hpp"
#include "testel/surface.hpp"
#include "testel/word.hpp"

namespace testel {

/// One-sided evidence about test-element status.
struct Certificate {
  enum class Status { Positive, Negative, Unknown };

  Status status = Status::Unknown;
  std::string reason;                  // construction tag, or how the witness failed to be onto
  std::optional<Endomorphism> witness;  // negative: fixes w, not an automorphism
  int search_bound = 0;
  std::uint64_t examined = 0;   // endomorphisms enumerated
  std::uint64_t undecided = 0;  // fixers whose automorphism status could not be settled
};

std::string to_string(Certificate::Status s);

struct EndoSearchOptions {
  std::uint64_t max_endomorphisms = 50'000'000;
  QuotientBudget budget;
};

/// Enumerates every endomorphism whose generator images have length <= bound
/// and returns a negative certificate for the first one that fixes w and is
/// provably not an automorphism, else Unknown.
///
/// Image words are taken in shortlex order and tuples are ordered with the
/// image of x1 varying fastest, so the reported witness is the least one in
/// that order. For surface groups only maps sending the relator to the
/// identity are considered, fixing is decided by Dehn reduction, and
/// non-surjectivity is shown on the abelianization (orientable: integer
/// determinant not +-1; non-orientable: singular on the mod-3 Frattini
/// quotient).
Certificate endo_fixer_search(const Word& w, const Group& group, int bound,
                              const EndoSearchOptions& options = {});

/// Independent re-check of a negative certificate.
bool verify_negative(const Word& w, const Group& group, const Certificate& cert);

/// Positive certificate when w is literally x1^k1 ... xn^kn with every k_i
/// nonzero and gcd(k) != 1; nullopt otherwise.
std::optional<Certificate> turner_certificate(const Word& w);

/// Exponents (k_1, ..., k_n) when w has the block form x1^k1 ... xn^kn.
std::optional<std::vector<long long>> power_block_exponents(const Word& w);

/// All k_i nonzero and gcd(k_1, ..., k_n) != 1.
bool turner_power_criterion(std::span<const long long> exponents);

/// Integer determinant (Bareiss).
long long integer_determinant(std::vector<std::vector<long long>> m);

}  // namespace testel
