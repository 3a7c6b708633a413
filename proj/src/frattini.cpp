#include "testel/frattini.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "testel/error.hpp"

namespace testel {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

int inverse_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  fail(ErrorCode::InvariantViolation, "no inverse mod p");
}

}  // namespace

bool in_frattini(const Word& w, const Group& group, int p) {
  return exponent_sums(w, group, p).is_zero();
}

FrattiniAdjustment frattini_adjust(const Word& w, const Group& group, int p) {
  const auto f = exponent_sums(w, group, p);
  FrattiniAdjustment out;
  out.exponents.resize(f.entries.size());
  for (std::size_t i = 0; i < f.entries.size(); ++i) out.exponents[i] = mod(-f.entries[i], p);

  auto build = [&] {
    WordBuilder b(group.rank());
    b.append(w);
    for (std::size_t i = 0; i < out.exponents.size(); ++i)
      b.append_power(Word::generator(group.rank(), static_cast<int>(i + 1)), out.exponents[i]);
    return std::move(b).build();
  };
  out.adjusted = build();
  if (!w.is_identity()) {
    const auto first = std::find_if(out.exponents.begin(), out.exponents.end(),
                                    [](long long a) { return a != 0; });
    if (first != out.exponents.end() && is_trivial(out.adjusted, group) == Truth::True) {
      *first -= p;
      out.flipped = static_cast<int>(first - out.exponents.begin()) + 1;
      out.adjusted = build();
    }
  }
  for (long long a : out.exponents) out.cost += a < 0 ? -a : a;
  return out;
}

FrattiniLayer::FrattiniLayer(const Group& group, int p, std::size_t max_cosets)
    : group_(group), p_(p) {
  require(is_prime(p), ErrorCode::InvalidArgument, "Frattini layer needs a prime");
  const std::size_t m = functional_count(group, p);
  std::size_t cosets = 1;
  for (std::size_t i = 0; i < m; ++i) {
    require(cosets <= max_cosets / static_cast<std::size_t>(p), ErrorCode::ResourceLimit,
            "Frattini layer at p=" + std::to_string(p) + " has " + std::to_string(p) + "^" +
                std::to_string(m) + " cosets, above the cap of " + std::to_string(max_cosets));
    cosets *= static_cast<std::size_t>(p);
  }

  // Vertices are functional vectors mod p, coordinate i stored as base-p digit i.
  const int rank = group.rank();
  const auto alphabet = static_cast<std::size_t>(2 * rank);
  std::vector<std::vector<long long>> shift;
  for (int j = 1; j <= rank; ++j) shift.push_back(letter_functionals(group, j, p));
  std::vector<std::int32_t> table(cosets * alphabet, SubgroupGraph::kNoEdge);
  std::vector<std::size_t> digits(m);
  for (std::size_t v = 0; v < cosets; ++v) {
    std::size_t rest = v;
    for (auto& d : digits) {
      d = rest % static_cast<std::size_t>(p);
      rest /= static_cast<std::size_t>(p);
    }
    for (int j = 1; j <= rank; ++j) {
      std::size_t target = 0;
      std::size_t place = 1;
      for (std::size_t i = 0; i < m; ++i) {
        target += static_cast<std::size_t>(mod(static_cast<long long>(digits[i]) +
                                                   shift[static_cast<std::size_t>(j - 1)][i],
                                               p)) *
                  place;
        place *= static_cast<std::size_t>(p);
      }
      table[v * alphabet + static_cast<std::size_t>(letter_code(j))] = static_cast<std::int32_t>(target);
      table[target * alphabet + static_cast<std::size_t>(letter_code(-j))] = static_cast<std::int32_t>(v);
    }
  }
  graph_ = std::make_unique<SubgroupGraph>(SubgroupGraph::from_table(rank, cosets, std::move(table)));
  schreier_ = std::make_unique<SchreierSystem>(*graph_, schreier_transversal(*graph_));

  const std::size_t columns = schreier_->generator_count();
  std::vector<std::vector<std::uint8_t>> rows;
  if (const auto* pres = group.presentation()) {
    std::vector<long long> sums(columns);
    for (std::size_t v = 0; v < graph_->vertex_count(); ++v) {
      std::fill(sums.begin(), sums.end(), 0);
      std::size_t end = 0;
      schreier_->accumulate_exponents(pres->relator().letters(), v, sums, &end);
      require(end == v, ErrorCode::InvariantViolation, "lifted relator does not close up");
      std::vector<std::uint8_t> row(columns);
      bool nonzero = false;
      for (std::size_t c = 0; c < columns; ++c) {
        row[c] = static_cast<std::uint8_t>(mod(sums[c], p));
        nonzero = nonzero || row[c] != 0;
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  }

  // Reduced row echelon form over F_p; pivot columns are eliminated.
  std::size_t rank_found = 0;
  std::vector<bool> is_pivot(columns, false);
  for (std::size_t col = 0; col < columns && rank_found < rows.size(); ++col) {
    std::size_t pick = rank_found;
    while (pick < rows.size() && rows[pick][col] == 0) ++pick;
    if (pick == rows.size()) continue;
    std::swap(rows[pick], rows[rank_found]);
    auto& pivot = rows[rank_found];
    const int scale = inverse_mod(pivot[col], p);
    for (std::size_t c = col; c < columns; ++c)
      pivot[c] = static_cast<std::uint8_t>((pivot[c] * scale) % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank_found || rows[r][col] == 0) continue;
      const int factor = rows[r][col];
      auto& row = rows[r];
      for (std::size_t c = col; c < columns; ++c) {
        if (pivot[c] == 0) continue;
        row[c] = static_cast<std::uint8_t>(mod(row[c] - factor * pivot[c], p));
      }
    }
    is_pivot[col] = true;
    pivots_.push_back(col);
    ++rank_found;
  }
  rows.resize(rank_found);
  rows_ = std::move(rows);
  for (std::size_t c = 0; c < columns; ++c)
    if (!is_pivot[c]) basis_.push_back(c);
}

std::vector<Word> FrattiniLayer::basis_generators() const {
  std::vector<Word> out;
  out.reserve(basis_.size());
  for (auto i : basis_) out.push_back(schreier_->generators()[i]);
  return out;
}

std::vector<int> FrattiniLayer::schreier_exponents(const Word& w) const {
  require(w.rank() <= group_.rank(), ErrorCode::RankMismatch, "word rank exceeds group rank");
  std::vector<long long> sums(schreier_->generator_count(), 0);
  std::size_t end = 0;
  require(graph_->walk(w).has_value(), ErrorCode::InvariantViolation, "covering graph is incomplete");
  schreier_->accumulate_exponents(w.letters(), 0, sums, &end);
  require(end == 0, ErrorCode::Domain, "word is not in the first Frattini layer");
  std::vector<int> out(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) out[i] = static_cast<int>(mod(sums[i], p_));
  return out;
}

std::vector<int> FrattiniLayer::coordinates(const Word& w) const {
  auto v = schreier_exponents(w);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const int factor = v[pivots_[r]];
    if (factor == 0) continue;
    const auto& row = rows_[r];
    for (std::size_t c = pivots_[r]; c < v.size(); ++c)
      if (row[c]) v[c] = static_cast<int>(mod(v[c] - factor * row[c], p_));
  }
  std::vector<int> out;
  out.reserve(basis_.size());
  for (auto c : basis_) out.push_back(v[c]);
  return out;
}

bool FrattiniLayer::contains_in_second_layer(const Word& w) const {
  const auto c = coordinates(w);
  return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

std::shared_ptr<const FrattiniLayer> frattini_layer(const Group& group, int p,
                                                    std::size_t max_cosets) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, std::shared_ptr<const FrattiniLayer>> cache;
  const auto key = std::make_pair(group.describe(), p);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto layer = std::make_shared<const FrattiniLayer>(group, p, max_cosets);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(layer)).first->second;
}

bool in_frattini2(const Word& w, const Group& group, int p, std::size_t max_cosets) {
  require(in_frattini(w, group, p), ErrorCode::Domain, "word is not in the first Frattini layer");
  return frattini_layer(group, p, max_cosets)->contains_in_second_layer(w);
}

}  // namespace testel
