#include "testel/net.hpp"

#include <algorithm>

#include "testel/error.hpp"
#include "testel/frattini.hpp"

namespace testel {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

long long inverse_mod(long long a, long long p) {
  a = mod(a, p);
  for (long long x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  fail(ErrorCode::InvariantViolation, "no inverse mod " + std::to_string(p));
}

bool trivial_in(const Word& w, const Group& group) { return is_trivial(w, group) == Truth::True; }

struct SubsetChoice {
  std::vector<int> subset;
  Word candidate;
  bool vetted = false;
  std::size_t tried = 0;
};

// Tries subsets of `letters` in increasing size, lexicographic within a size,
// appending x_i^power for each chosen i. The first candidate without a
// fixing non-automorphism at the vetting bound is taken.
SubsetChoice choose_subset(const Word& base, const Group& group, const std::vector<int>& letters,
                           std::size_t max_size, long long power, int vetting,
                           const EndoSearchOptions& search) {
  std::optional<SubsetChoice> fallback;
  SubsetChoice out;
  for (std::size_t size = 0; size <= std::min(max_size, letters.size()); ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      WordBuilder b(group.rank());
      b.append(base);
      std::vector<int> subset;
      for (auto i : pick) {
        subset.push_back(letters[i]);
        b.append_power(Word::generator(group.rank(), letters[i]), power);
      }
      Word t = std::move(b).build();
      ++out.tried;
      if (!trivial_in(t, group)) {
        if (!fallback) fallback = SubsetChoice{subset, t, false, 0};
        const auto cert = endo_fixer_search(t, group, vetting, search);
        if (cert.status != Certificate::Status::Negative) {
          out.subset = std::move(subset);
          out.candidate = std::move(t);
          out.vetted = true;
          return out;
        }
      }
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == letters.size() - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  require(fallback.has_value(), ErrorCode::InvariantViolation, "every subset candidate was trivial");
  fallback->tried = out.tried;
  return *fallback;
}

int default_vetting(const Group& group, const NetOptions& options) {
  if (options.vetting_bound >= 0) return options.vetting_bound;
  const auto* pres = group.presentation();
  return (pres && pres->kind() == SurfaceKind::Orientable) ? 1 : 2;
}

std::vector<int> range_letters(int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return v;
}

TraceStep adjust_step(const FrattiniAdjustment& adj, int p) {
  TraceStep step{"frattini_adjust", adj.exponents, {}, 0, adj.cost, ""};
  step.note = "exponents chosen mod " + std::to_string(p);
  if (adj.flipped) step.note += "; exponent of x" + std::to_string(*adj.flipped) + " shifted by -" +
                                std::to_string(p) + " to keep the product nontrivial";
  return step;
}

Word power_product(int rank, const std::vector<int>& letters, long long power) {
  WordBuilder b(rank);
  for (int i : letters) b.append_power(Word::generator(rank, i), power);
  return std::move(b).build();
}

Word check_input(const Word& w, const Group& group) {
  require(w.rank() <= group.rank(), ErrorCode::RankMismatch,
          "word rank " + std::to_string(w.rank()) + " exceeds group rank " +
              std::to_string(group.rank()));
  return w.rank() == group.rank() ? w : w.widened(group.rank());
}

void finish_subset(NetResult& res, const SubsetChoice& choice, long long power) {
  res.output = choice.candidate;
  res.subsets_tried = choice.tried;
  res.status = choice.vetted ? "candidate" : "unvetted";
  const long long cost = power * static_cast<long long>(choice.subset.size());
  res.trace.push_back(TraceStep{"append_powers", {}, choice.subset, power, cost,
                                choice.vetted ? "vetted: no fixing non-automorphism with images of length <= " +
                                                    std::to_string(res.vetting_bound)
                                              : "no subset passed vetting; first nontrivial subset kept"});
  res.trace_cost += cost;
}

}  // namespace

Word canonical_test_word(int n, int p) {
  require(n >= 1 && p >= 1, ErrorCode::InvalidArgument, "canonical word needs n >= 1 and p >= 1");
  return power_product(n, range_letters(n), p);
}

long long free_net_bound(int n) { return 3LL * n - 2; }

long long orientable_net_bound(int genus) {
  require(genus >= 2 && genus <= 10, ErrorCode::OutOfRange, "orientable net bound needs 2 <= genus <= 10");
  long long pow25 = 1;
  for (int i = 0; i < genus; ++i) pow25 *= 25;
  return 161LL * genus + 8 * pow25 * (genus - 1) * (16LL * genus + 1) + 33;
}

long long nonorientable_net_bound(int genus) { return 5LL * genus - 5; }

NetResult net_project_free(const Word& w, int n, const NetOptions& options) {
  require(n >= 2, ErrorCode::InvalidArgument, "free-group net needs rank >= 2");
  const Group group = Group::free(n);
  NetResult res;
  res.input = check_input(w, group);
  res.bound = free_net_bound(n);
  res.prime = 2;
  res.distance_is_geodesic = true;
  res.vetting_bound = default_vetting(group, options);
  if (res.input.is_identity()) {
    res.output = canonical_test_word(n, 2);
    res.status = "positive";
    res.trace.push_back(TraceStep{"canonical_word", {}, range_letters(n), 2, 2LL * n,
                                  "x1^2...xn^2 by the power criterion"});
    res.trace_cost = 2LL * n;
  } else {
    const auto adj = frattini_adjust(res.input, group, 2);
    res.adjusted = adj.adjusted;
    res.trace.push_back(adjust_step(adj, 2));
    res.trace_cost = adj.cost;
    const auto choice = choose_subset(adj.adjusted, group, range_letters(n),
                                      static_cast<std::size_t>(n - 1), 2, res.vetting_bound,
                                      options.search);
    finish_subset(res, choice, 2);
  }
  res.distance = static_cast<long long>(distance(res.input, res.output));
  return res;
}

NetResult net_project_nonorientable(const Word& w, const Group& group, const NetOptions& options) {
  const auto* pres = group.presentation();
  require(pres && pres->kind() == SurfaceKind::NonOrientable, ErrorCode::InvalidArgument,
          "non-orientable net needs a non-orientable surface group");
  const int n = pres->genus();
  const int basis = n - 1;
  NetResult res;
  res.input = check_input(w, group);
  res.bound = nonorientable_net_bound(n);
  res.prime = 3;
  res.vetting_bound = default_vetting(group, options);
  if (trivial_in(res.input, group)) {
    res.output = power_product(group.rank(), range_letters(basis), 3);
    res.status = "positive";
    res.trace_cost = 3LL * basis;
    res.trace.push_back(TraceStep{"canonical_word", {}, range_letters(basis), 3, res.trace_cost,
                                  "cubes of the working basis x1..x" + std::to_string(basis)});
  } else {
    const auto adj = frattini_adjust(res.input, group, 3);
    res.adjusted = adj.adjusted;
    res.trace.push_back(adjust_step(adj, 3));
    res.trace_cost = adj.cost;
    const auto choice = choose_subset(adj.adjusted, group, range_letters(basis),
                                      static_cast<std::size_t>(basis - 1), 3, res.vetting_bound,
                                      options.search);
    finish_subset(res, choice, 3);
  }
  res.distance = res.trace_cost;
  return res;
}

NetResult net_project_orientable(const Word& w, const Group& group, const NetOptions& options) {
  const auto* pres = group.presentation();
  require(pres && pres->kind() == SurfaceKind::Orientable, ErrorCode::InvalidArgument,
          "orientable net needs an orientable surface group");
  const int n = pres->genus();
  constexpr int p = 5;
  NetResult res;
  res.input = check_input(w, group);
  res.bound = orientable_net_bound(n);
  res.prime = p;
  res.vetting_bound = default_vetting(group, options);

  const auto adj = frattini_adjust(res.input, group, p);
  res.adjusted = adj.adjusted;
  res.trace.push_back(adjust_step(adj, p));
  res.trace_cost = adj.cost;

  const auto layer = frattini_layer(group, p, options.max_cosets);
  const auto coords = layer->coordinates(adj.adjusted);
  const auto& gens = layer->schreier().generators();
  WordBuilder b(group.rank());
  b.append(adj.adjusted);
  TraceStep second{"second_layer_adjust", {}, {}, 0, 0, ""};
  std::size_t longest = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const long long beta = mod(-coords[i], p);
    second.exponents.push_back(beta);
    const auto& y = gens[layer->basis()[i]];
    longest = std::max(longest, y.length());
    b.append_power(y, beta);
    second.cost += beta * static_cast<long long>(y.length());
  }
  second.note = "k=" + std::to_string(coords.size()) + " basis generators, longest " +
                std::to_string(longest) + " letters";
  Word v = std::move(b).build();
  require(layer->contains_in_second_layer(v), ErrorCode::InvariantViolation,
          "second-layer correction failed");
  res.layer2 = v;
  res.trace_cost += second.cost;
  res.trace.push_back(std::move(second));

  const auto choice = choose_subset(v, group, range_letters(n + 1), static_cast<std::size_t>(n + 1),
                                    p * p, res.vetting_bound, options.search);
  finish_subset(res, choice, p * p);
  res.distance = res.trace_cost;
  return res;
}

NetResult net_project(const Word& w, const Group& group, const NetOptions& options) {
  const auto* pres = group.presentation();
  if (!pres) return net_project_free(w, group.rank(), options);
  if (pres->kind() == SurfaceKind::Orientable) return net_project_orientable(w, group, options);
  return net_project_nonorientable(w, group, options);
}

CosetResult coset_test_element(const Word& w, const Group& group, const FiniteQuotient& quotient,
                               const NetOptions& options) {
  require(static_cast<int>(quotient.images.size()) == group.rank(), ErrorCode::InvalidArgument,
          "quotient needs one image per generator");
  for (const auto& img : quotient.images)
    require(img.degree() == quotient.degree, ErrorCode::InvalidArgument,
            "quotient images have inconsistent degree");
  const auto* pres = group.presentation();
  if (pres)
    require(evaluate(quotient.images, pres->relator()).is_identity(), ErrorCode::InvalidArgument,
            "quotient images do not satisfy the relator");

  CosetResult out;
  const auto order = group_order(quotient.images, quotient.degree, 10'000'000);
  require(order.has_value(), ErrorCode::ResourceLimit, "quotient order exceeds 10^7");
  out.quotient_order = *order;
  const long long l = static_cast<long long>(*order);

  const bool orientable = pres && pres->kind() == SurfaceKind::Orientable;
  const bool nonorientable = pres && pres->kind() == SurfaceKind::NonOrientable;
  long long p = orientable ? 5 : (nonorientable ? 3 : 2);
  while (!(is_prime(p) && l % p != 0)) {
    ++p;
    require(p <= 10'000, ErrorCode::ResourceLimit, "no admissible prime below 10^4");
  }
  out.prime = p;
  const long long l_inv = inverse_mod(l, p);

  NetResult& res = out.net;
  res.input = check_input(w, group);
  res.prime = static_cast<int>(p);
  res.vetting_bound = default_vetting(group, options);
  res.distance_is_geodesic = !pres;

  const auto f = exponent_sums(res.input, group, p);
  out.first_exponents.resize(f.entries.size());
  for (std::size_t i = 0; i < f.entries.size(); ++i)
    out.first_exponents[i] = mod(-f.entries[i] * l_inv, p);
  auto build_u = [&] {
    WordBuilder b(group.rank());
    b.append(res.input);
    for (std::size_t i = 0; i < out.first_exponents.size(); ++i)
      b.append_power(Word::generator(group.rank(), static_cast<int>(i + 1)), out.first_exponents[i] * l);
    return std::move(b).build();
  };
  Word u = build_u();
  TraceStep first{"coset_frattini_adjust", out.first_exponents, {}, l, 0,
                  "x_i raised to r_i*l with p | sigma_i(w) + r_i*l"};
  if (!orientable && !trivial_in(res.input, group) && trivial_in(u, group)) {
    auto it = std::find_if(out.first_exponents.begin(), out.first_exponents.end(),
                           [](long long r) { return r != 0; });
    if (it != out.first_exponents.end()) {
      *it -= p;
      first.exponents = out.first_exponents;
      first.note += "; exponent of x" + std::to_string(it - out.first_exponents.begin() + 1) +
                    " shifted by -p to keep the product nontrivial";
      u = build_u();
    }
  }
  for (long long r : out.first_exponents) first.cost += (r < 0 ? -r : r) * l;
  res.adjusted = u;
  res.trace_cost = first.cost;
  res.trace.push_back(std::move(first));

  const int rank = group.rank();
  if (orientable) {
    const int n = pres->genus();
    const auto layer = frattini_layer(group, static_cast<int>(p), options.max_cosets);
    const auto coords = layer->coordinates(u);
    const auto& gens = layer->schreier().generators();
    WordBuilder b(rank);
    b.append(u);
    TraceStep second{"coset_second_layer_adjust", {}, {}, l, 0,
                     "y_i raised to s_i*l with p | sigma_{y_i}(u) + s_i*l"};
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const long long s = mod(-coords[i] * l_inv, p);
      out.second_exponents.push_back(s);
      const auto& y = gens[layer->basis()[i]];
      b.append_power(y, s * l);
      second.cost += s * l * static_cast<long long>(y.length());
    }
    second.exponents = out.second_exponents;
    Word v = std::move(b).build();
    require(layer->contains_in_second_layer(v), ErrorCode::InvariantViolation,
            "second-layer coset correction failed");
    res.layer2 = v;
    res.trace_cost += second.cost;
    res.trace.push_back(std::move(second));
    const auto choice = choose_subset(v, group, range_letters(n + 1), static_cast<std::size_t>(n + 1),
                                      p * p * l, res.vetting_bound, options.search);
    finish_subset(res, choice, p * p * l);
  } else {
    const int basis = nonorientable ? rank - 1 : rank;
    if (trivial_in(res.input, group)) {
      res.output = power_product(rank, range_letters(basis), p * l);
      res.status = "positive";
      const long long cost = p * l * basis;
      res.trace.push_back(TraceStep{"canonical_word", {}, range_letters(basis), p * l, cost,
                                    "canonical power word with exponents p*l"});
      res.trace_cost += cost;
    } else {
      const auto choice = choose_subset(u, group, range_letters(basis),
                                        static_cast<std::size_t>(basis - 1), p * l,
                                        res.vetting_bound, options.search);
      finish_subset(res, choice, p * l);
    }
  }
  res.distance = res.distance_is_geodesic ? static_cast<long long>(distance(res.input, res.output))
                                          : res.trace_cost;
  out.same_coset = evaluate(quotient.images, res.output) == evaluate(quotient.images, res.input);
  require(out.same_coset, ErrorCode::InvariantViolation, "coset construction left the coset of w");
  return out;
}

}  // namespace testel
