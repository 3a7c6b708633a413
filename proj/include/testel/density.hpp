#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "testel/enumerate.hpp"
#include "testel/surface.hpp"
#include "testel/word.hpp"

namespace testel {

// ---- bound calculator ------------------------------------------------------

struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, long long>> params;
  std::optional<std::string> exact;  // "p/q" or an integer; none for the zeta bound
  std::size_t exact_digits = 0;      // digits of numerator plus denominator (estimated when elided)
  bool exact_elided = false;         // exact value too long to print
  std::string decimal;
  int precision = 0;                 // significant digits in `decimal`
};

/// Names: freeC, nonorC, orC (density lower bounds), freeNet, orNet,
/// nonorNet (net radii), krss. Exact values are printed in full up to
/// max_exact_digits; longer ones keep only their digit count.
BoundReport bound_calculator(const std::string& name, int n, std::size_t max_exact_digits = 4096);
std::vector<std::string> bound_names();

// ---- covering chain ----------------------------------------------------------

using WordPredicate = std::function<bool(const Word&)>;

/// Named subsets of a free group: "all", "identity", "even" (every exponent
/// sum even), "turner" (power words passing the power criterion),
/// "frattini:p" (every exponent sum divisible by p).
WordPredicate named_subset(const std::string& name, int rank);

struct CoveringChainReport {
  int rank = 0;
  int radius = 0;
  int translate_radius = 0;  // C, the longest translate
  std::size_t translates = 0;
  BigInt ball_k, ball_k_minus_c, ball_c;
  BigInt subset_in_ball;            // |S ∩ B(k)|
  std::vector<BigInt> translate_counts;  // |S g_i ∩ B(k-C)|
  BigInt uncovered;                 // elements of B(k) outside every S g_i
  std::optional<Word> first_uncovered;
  bool covering = false;
  bool injection = false;
  bool ball_product = false;        // |B(k)| <= |B(k-C)| |B(C)|
  bool chain = false;               // 1 <= m |B(C)| |S ∩ B(k)| / |B(k)|
  bool passed() const { return covering && injection && chain; }
};

/// Checks the covering inequalities by exhaustive enumeration of B(k).
/// Failures are reported, not thrown.
CoveringChainReport verify_covering_chain(const WordPredicate& subset, const std::vector<Word>& translates,
                                          int rank, int radius);

// ---- census ----------------------------------------------------------------

struct CensusOptions {
  int vetting_bound = 2;      // net-construction vetting bound
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t max_elements = 2'000'000;
  std::uint64_t max_endomorphisms = 50'000'000;
};

struct CensusRecord {
  int rank = 0;
  int radius = 0;
  int search_bound = 0;  // L
  int vetting_bound = 0;
  std::uint64_t seed = 0;
  std::uint64_t positive = 0;
  std::uint64_t positive_turner = 0;
  std::uint64_t positive_net = 0;
  std::uint64_t negative = 0;
  std::uint64_t unknown = 0;
  BigInt ball;
  std::uint64_t classified = 0;
  bool partial = false;
  std::string timestamp;  // set when persisted

  std::uint64_t total() const { return positive + negative + unknown; }
};

enum class CensusClass { Positive, Negative, Unknown };

struct CensusVerdict {
  CensusClass kind = CensusClass::Unknown;
  std::string tag;  // "turner", "net", "witness", ""
};

/// Negative when the endomorphism search at bound L finds a fixing
/// non-automorphism, positive for power words passing the power criterion
/// or fixed points of the vetted free-group net construction, else unknown.
CensusVerdict classify(const Word& w, int rank, int search_bound, const CensusOptions& options);

/// Classifies every element of B(k) in the free group of the given rank.
/// Sharded by first letter across workers; the merged counts do not depend
/// on the worker count. When the ball exceeds max_elements the first
/// max_elements words (in shard order) are classified and the record is
/// flagged partial.
CensusRecord census(int rank, int radius, int search_bound, const CensusOptions& options = {});

std::string census_csv_header();
std::string census_csv_row(const CensusRecord& r);

/// Append-only log, one JSON object per line with a crc32 checksum over the
/// rest of the line.
std::string census_log_line(const CensusRecord& r);
void append_census_log(const std::string& path, CensusRecord& r);

struct CensusLog {
  std::vector<CensusRecord> records;
  std::size_t corrupt_lines = 0;
};
CensusLog load_census_log(const std::string& path);

/// Reuses a complete matching record from the log when present, otherwise
/// runs the census and appends it.
CensusRecord census_resumable(const std::string& log_path, int rank, int radius, int search_bound,
                              const CensusOptions& options, bool* reused = nullptr);

// ---- net coverage audit ------------------------------------------------------

struct NetAuditReport {
  int rank = 0;
  int radius = 0;
  int vetting_bound = 0;
  long long bound = 0;
  std::uint64_t elements = 0;
  long long max_distance = 0;
  std::map<long long, std::uint64_t> histogram;
  std::map<std::string, std::uint64_t> status_counts;
};

/// Runs the free-group net projection on every element of B(k) and checks
/// distance <= 3n-2, nontrivial output and even exponent sums. Throws
/// InvariantViolation naming the first offending word.
NetAuditReport net_coverage_audit(int rank, int radius, int vetting_bound = 2, unsigned workers = 1);

// ---- constants ----------------------------------------------------------------

struct SchreierConstants {
  std::string group;
  int prime = 0;
  std::size_t vertices = 0;
  std::size_t schreier_generators = 0;
  std::size_t relation_rank = 0;
  std::size_t basis = 0;
  std::optional<std::size_t> expected_basis;  // rank of the kernel's mod-p homology when known
  std::size_t max_generator_length = 0;
  std::size_t length_bound = 0;     // 16n+1 orientable; 0 when no bound applies
};

SchreierConstants schreier_constants(const Group& group, int p, std::size_t max_cosets = 1000);

struct BallCheck {
  int radius = 0;
  BigInt formula;
  std::uint64_t enumerated = 0;
};

/// ball_size against an exhaustive count for radius 0..k.
std::vector<BallCheck> ball_check(int rank, int radius);

}  // namespace testel
