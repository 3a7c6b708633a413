#include "testel/certify.hpp"

#include <algorithm>
#include <numeric>

#include "testel/enumerate.hpp"
#include "testel/error.hpp"

namespace testel {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

// Integer-valued functionals that are well defined on the group: raw letter
// counts for free and orientable groups, e_i - e_n for non-orientable ones.
std::vector<long long> integral_functionals(const Word& w, const Group& group) {
  std::vector<long long> e(static_cast<std::size_t>(group.rank()), 0);
  for (Letter l : w.letters()) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  const auto* pres = group.presentation();
  if (pres && pres->kind() == SurfaceKind::NonOrientable) {
    const long long last = e.back();
    e.pop_back();
    for (auto& x : e) x -= last;
  }
  return e;
}

bool singular_mod(std::vector<std::vector<long long>> m, long long p) {
  const std::size_t n = m.size();
  for (auto& row : m)
    for (auto& x : row) x = mod(x, p);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pick = rank;
    while (pick < n && m[pick][col] == 0) ++pick;
    if (pick == n) continue;
    std::swap(m[pick], m[rank]);
    long long inv = 1;
    while ((m[rank][col] * inv) % p != 1) ++inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const long long f = (m[r][col] * inv) % p;
      for (std::size_t c = 0; c < n; ++c) m[r][c] = mod(m[r][c] - f * m[rank][c], p);
    }
    ++rank;
  }
  return rank < n;
}

// Reason string when e is provably not an automorphism, empty otherwise.
std::string non_automorphism_reason(const Endomorphism& e, const Group& group) {
  const auto* pres = group.presentation();
  if (!pres) return is_surjective(e) ? "" : "folded image graph is not the rose";
  if (pres->kind() == SurfaceKind::Orientable) {
    const auto n = static_cast<std::size_t>(group.rank());
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const auto f = integral_functionals(e.images[j], group);
      for (std::size_t i = 0; i < n; ++i) m[i][j] = f[i];
    }
    const long long det = integer_determinant(m);
    if (det != 1 && det != -1)
      return "abelianization determinant " + std::to_string(det) + " is not a unit";
    return "";
  }
  // Non-orientable: induced map on the mod-3 Frattini quotient with basis x1..x_{n-1}.
  const auto n = static_cast<std::size_t>(group.rank() - 1);
  std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto f = exponent_sums(e.images[j], group, 3).entries;
    for (std::size_t i = 0; i < n; ++i) m[i][j] = f[i];
  }
  if (singular_mod(m, 3)) return "induced map on the mod-3 Frattini quotient is singular";
  return "";
}

bool fixes(const Endomorphism& e, const Word& w, const Group& group, const QuotientBudget& budget) {
  const Word image = apply(e, w);
  if (group.is_free()) return image == w;
  return are_equal(image, w, group, budget) == Truth::True;
}

bool respects_relator(const Endomorphism& e, const Group& group, const QuotientBudget& budget) {
  const auto* pres = group.presentation();
  if (!pres) return true;
  return is_trivial(apply(e, pres->relator()), group, budget) == Truth::True;
}

}  // namespace

std::string to_string(Certificate::Status s) {
  switch (s) {
    case Certificate::Status::Positive: return "positive";
    case Certificate::Status::Negative: return "negative";
    case Certificate::Status::Unknown: return "unknown";
  }
  return "unknown";
}

long long integer_determinant(std::vector<std::vector<long long>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  long long sign = 1;
  long long previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        const __int128 v = static_cast<__int128>(m[i][j]) * m[k][k] -
                           static_cast<__int128>(m[i][k]) * m[k][j];
        m[i][j] = static_cast<long long>(v / previous);
      }
    previous = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Certificate endo_fixer_search(const Word& w, const Group& group, int bound,
                              const EndoSearchOptions& options) {
  require(bound >= 0, ErrorCode::InvalidArgument, "search bound must be >= 0");
  require(w.rank() <= group.rank(), ErrorCode::RankMismatch, "word rank exceeds group rank");
  const int rank = group.rank();
  const auto words = ball_words(rank, bound);
  const auto choices = words.size();
  {
    std::uint64_t total = 1;
    for (int i = 0; i < rank; ++i) {
      require(total <= options.max_endomorphisms / choices, ErrorCode::ResourceLimit,
              "endomorphism search at bound " + std::to_string(bound) + " exceeds the cap of " +
                  std::to_string(options.max_endomorphisms) + " maps");
      total *= choices;
    }
  }

  const auto target = integral_functionals(w, group);
  std::vector<std::vector<long long>> image_functionals;
  image_functionals.reserve(choices);
  for (const auto& u : words) image_functionals.push_back(integral_functionals(u, group));
  const auto raw = [&] {
    std::vector<long long> e(static_cast<std::size_t>(rank), 0);
    for (Letter l : w.letters()) e[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
    return e;
  }();
  const auto* pres = group.presentation();
  const bool nonorientable = pres && pres->kind() == SurfaceKind::NonOrientable;

  Certificate cert;
  cert.search_bound = bound;
  std::vector<std::size_t> choice(static_cast<std::size_t>(rank), 0);
  std::vector<long long> acc(target.size());
  while (true) {
    ++cert.examined;
    // Abelian prefilter: functionals of phi(w) must match those of w.
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t j = 0; j < choice.size(); ++j) {
      if (raw[j] == 0) continue;
      const auto& f = image_functionals[choice[j]];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += raw[j] * f[i];
    }
    bool candidate = acc == target;
    if (candidate && nonorientable) {
      // phi(relator) = prod phi(x_i)^2 must die on the integral functionals.
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t j = 0; j < choice.size(); ++j)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 2 * image_functionals[choice[j]][i];
      candidate = std::all_of(acc.begin(), acc.end(), [](long long x) { return x == 0; });
    }
    if (candidate) {
      Endomorphism e{rank, {}};
      for (auto c : choice) e.images.push_back(words[c]);
      if (respects_relator(e, group, options.budget) && fixes(e, w, group, options.budget)) {
        auto reason = non_automorphism_reason(e, group);
        if (!reason.empty()) {
          cert.status = Certificate::Status::Negative;
          cert.reason = std::move(reason);
          cert.witness = std::move(e);
          return cert;
        }
        if (pres) {
          // Surface fixers the abelian tests cannot settle stay undecided.
          ++cert.undecided;
        }
      }
    }
    std::size_t i = 0;
    for (; i < choice.size(); ++i) {
      if (++choice[i] < choices) break;
      choice[i] = 0;
    }
    if (i == choice.size()) break;
  }
  cert.reason = "no fixing non-automorphism with images of length <= " + std::to_string(bound);
  return cert;
}

bool verify_negative(const Word& w, const Group& group, const Certificate& cert) {
  if (cert.status != Certificate::Status::Negative || !cert.witness) return false;
  const auto& e = *cert.witness;
  if (e.rank != group.rank() || static_cast<int>(e.images.size()) != group.rank()) return false;
  if (!respects_relator(e, group, {})) return false;
  if (!fixes(e, w, group, {})) return false;
  if (group.is_free()) return !is_surjective(e);
  return !non_automorphism_reason(e, group).empty();
}

std::optional<std::vector<long long>> power_block_exponents(const Word& w) {
  const auto letters = w.letters();
  std::vector<long long> k;
  std::size_t i = 0;
  for (int g = 1; g <= w.rank(); ++g) {
    if (i >= letters.size() || std::abs(letters[i]) != g) return std::nullopt;
    const Letter l = letters[i];
    long long count = 0;
    while (i < letters.size() && letters[i] == l) {
      ++count;
      ++i;
    }
    k.push_back(l > 0 ? count : -count);
  }
  if (i != letters.size() || k.empty()) return std::nullopt;
  return k;
}

bool turner_power_criterion(std::span<const long long> exponents) {
  if (exponents.empty()) return false;
  long long g = 0;
  for (long long k : exponents) {
    if (k == 0) return false;
    g = std::gcd(g, k < 0 ? -k : k);
  }
  return g != 1;
}

std::optional<Certificate> turner_certificate(const Word& w) {
  const auto k = power_block_exponents(w);
  if (!k || !turner_power_criterion(*k)) return std::nullopt;
  Certificate cert;
  cert.status = Certificate::Status::Positive;
  cert.reason = "power word with nonzero exponents and gcd != 1";
  return cert;
}

}  // namespace testel
