#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "testel/certify.hpp"
#include "testel/permutation.hpp"
#include "testel/surface.hpp"
#include "testel/word.hpp"

namespace testel {

/// x1^p ... xn^p.
Word canonical_test_word(int n, int p);

struct TraceStep {
  std::string name;
  std::vector<long long> exponents;
  std::vector<int> subset;  // 1-based generator indices
  long long power = 0;
  long long cost = 0;
  std::string note;
};

struct NetOptions {
  int vetting_bound = -1;  // < 0: 2 for free and non-orientable, 1 for orientable
  std::size_t max_cosets = 1000;
  EndoSearchOptions search;
};

struct NetResult {
  Word input;
  Word output;
  std::optional<Word> adjusted;  // u, in the first Frattini layer
  std::optional<Word> layer2;    // v, in the second layer (orientable only)
  long long distance = 0;        // geodesic for free groups, trace cost for surfaces
  bool distance_is_geodesic = false;
  long long trace_cost = 0;
  std::optional<long long> bound;  // none for coset constructions
  int prime = 0;
  std::vector<TraceStep> trace;
  std::string status;  // "positive", "candidate", or "unvetted"
  int vetting_bound = 0;
  std::size_t subsets_tried = 0;
};

/// Free group of rank n >= 2: a test-element candidate within 3n-2 of w.
NetResult net_project_free(const Word& w, int n, const NetOptions& options = {});
/// Orientable genus n >= 2 at p = 5: correction into the second Frattini
/// layer, then 25th powers of a subset of x1..x_{n+1}.
NetResult net_project_orientable(const Word& w, const Group& group, const NetOptions& options = {});
/// Non-orientable genus n >= 3 at p = 3 over the working basis x1..x_{n-1}.
NetResult net_project_nonorientable(const Word& w, const Group& group,
                                    const NetOptions& options = {});
/// Dispatches on the group kind.
NetResult net_project(const Word& w, const Group& group, const NetOptions& options = {});

/// 3n-2, 161n + 8*25^n(n-1)(16n+1) + 33, 5n-5.
long long free_net_bound(int n);
long long orientable_net_bound(int genus);
long long nonorientable_net_bound(int genus);

/// A homomorphism to a finite permutation group given by generator images.
struct FiniteQuotient {
  std::size_t degree = 0;
  std::vector<Perm> images;
};

struct CosetResult {
  NetResult net;
  std::uint64_t quotient_order = 0;       // l = |G/N|
  long long prime = 0;
  std::vector<long long> first_exponents;   // r_i (each x_i raised to r_i * l)
  std::vector<long long> second_exponents;  // s_i (each y_i raised to s_i * l), orientable
  bool same_coset = false;                  // image(t) == image(w), re-evaluated
};

/// Element of the coset wN that is a test-element candidate, N the kernel of
/// the quotient. Throws InvalidArgument when the images do not satisfy the
/// relator and ResourceLimit when the prime search passes 10^4.
CosetResult coset_test_element(const Word& w, const Group& group, const FiniteQuotient& quotient,
                               const NetOptions& options = {});

}  // namespace testel
