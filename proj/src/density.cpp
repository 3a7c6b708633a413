#include "testel/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include "json.hpp"
#include <zlib.h>

#include "testel/certify.hpp"
#include "testel/error.hpp"
#include "testel/frattini.hpp"
#include "testel/net.hpp"

namespace testel {

namespace {

using boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;
using Json = nlohmann::ordered_json;

constexpr int kRationalDigits = 15;
constexpr int kZetaDigits = 12;
// Radii past this keep only the logarithmic estimate of the ball.
constexpr long long kMaxExactBallRadius = 200'000;

std::string decimal_of(const Rational& q) {
  const cpp_bin_float_50 v = cpp_bin_float_50(numerator(q)) / cpp_bin_float_50(denominator(q));
  std::ostringstream out;
  out << std::setprecision(kRationalDigits) << v;
  return out.str();
}

// log10 |B(k)| for rank >= 2 without forming the integer.
double log10_ball(int rank, long long radius) {
  const double base = 2.0 * rank - 1;
  return static_cast<double>(radius) * std::log10(base) + std::log10(2.0 * rank / (2.0 * rank - 2));
}

std::string decimal_from_log10(double log10_value) {
  const double exponent = std::floor(log10_value);
  const double mantissa = std::pow(10.0, log10_value - exponent);
  std::ostringstream out;
  out << std::setprecision(kRationalDigits - 9) << mantissa << "e" << static_cast<long long>(exponent);
  return out.str();
}

void set_exact(BoundReport& r, const Rational& q, std::size_t max_digits) {
  const std::string num = numerator(q).str();
  const std::string den = denominator(q) == 1 ? "" : denominator(q).str();
  r.exact_digits = num.size() + den.size();
  if (r.exact_digits <= max_digits)
    r.exact = den.empty() ? num : num + "/" + den;
  else
    r.exact_elided = true;
  r.decimal = decimal_of(q);
  r.precision = kRationalDigits;
}

Rational ball_rational(int rank, long long radius) {
  return Rational(ball_size({rank, static_cast<int>(radius)}));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint32_t checksum(const std::string& text) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size())));
}

Json record_json(const CensusRecord& r) {
  Json j;
  j["rank"] = r.rank;
  j["k"] = r.radius;
  j["L"] = r.search_bound;
  j["vetting_bound"] = r.vetting_bound;
  j["seed"] = r.seed;
  j["positive"] = r.positive;
  j["positive_turner"] = r.positive_turner;
  j["positive_net"] = r.positive_net;
  j["negative"] = r.negative;
  j["unknown"] = r.unknown;
  j["ball_size"] = r.ball.str();
  j["classified"] = r.classified;
  j["partial"] = r.partial;
  j["timestamp"] = r.timestamp;
  return j;
}

CensusRecord record_from_json(const Json& j) {
  CensusRecord r;
  r.rank = j.at("rank").get<int>();
  r.radius = j.at("k").get<int>();
  r.search_bound = j.at("L").get<int>();
  r.vetting_bound = j.at("vetting_bound").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.positive = j.at("positive").get<std::uint64_t>();
  r.positive_turner = j.at("positive_turner").get<std::uint64_t>();
  r.positive_net = j.at("positive_net").get<std::uint64_t>();
  r.negative = j.at("negative").get<std::uint64_t>();
  r.unknown = j.at("unknown").get<std::uint64_t>();
  r.ball = BigInt(j.at("ball_size").get<std::string>());
  r.classified = j.at("classified").get<std::uint64_t>();
  r.partial = j.at("partial").get<bool>();
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

// Runs fn(shard) for every ball shard on up to `workers` threads. The first
// failure in shard order is rethrown after all threads stop.
void run_shards(int rank, unsigned workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t shards = ball_shard_count(rank);
  std::vector<std::exception_ptr> errors(shards);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t s = next++; s < shards; s = next++) {
      try {
        fn(s);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(shards)));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

// ---- bounds ---------------------------------------------------------------

std::vector<std::string> bound_names() {
  return {"freeC", "nonorC", "orC", "freeNet", "orNet", "nonorNet", "krss"};
}

BoundReport bound_calculator(const std::string& name, int n, std::size_t max_exact_digits) {
  BoundReport r;
  r.name = name;
  const bool surface = name == "nonorC" || name == "orC" || name == "orNet" || name == "nonorNet";
  r.params.emplace_back(surface ? "genus" : "n", n);

  if (name == "freeC") {
    require(n >= 2 && n <= 30, ErrorCode::OutOfRange, "freeC needs 2 <= n <= 30");
    const BigInt two_n = BigInt(1) << n;
    const BigInt factor = 2 * two_n * (two_n - 1) + 1;
    set_exact(r, Rational(1) / (Rational(factor) * ball_rational(n, free_net_bound(n))), max_exact_digits);
  } else if (name == "nonorC") {
    require(n >= 3 && n <= 30, ErrorCode::OutOfRange, "nonorC needs 3 <= genus <= 30");
    const BigInt six = boost::multiprecision::pow(BigInt(6), static_cast<unsigned>(n - 1));
    set_exact(r, Rational(1) / (Rational(six) * ball_rational(n, nonorientable_net_bound(n))),
              max_exact_digits);
  } else if (name == "orC") {
    const long long radius = orientable_net_bound(n);
    r.params.emplace_back("radius", radius);
    const double log_den = 2.0 * log10_ball(2 * n, radius);
    const auto den_digits = static_cast<std::size_t>(std::floor(log_den)) + 1;
    if (radius <= kMaxExactBallRadius && den_digits + 1 <= max_exact_digits) {
      const Rational ball = ball_rational(2 * n, radius);
      set_exact(r, Rational(1) / (ball * ball), max_exact_digits);
    } else {
      r.exact_elided = true;
      r.exact_digits = den_digits + 1;
      r.decimal = decimal_from_log10(-log_den);
      r.precision = kRationalDigits - 9;
    }
  } else if (name == "freeNet") {
    require(n >= 2, ErrorCode::OutOfRange, "freeNet needs n >= 2");
    set_exact(r, Rational(free_net_bound(n)), max_exact_digits);
  } else if (name == "orNet") {
    set_exact(r, Rational(orientable_net_bound(n)), max_exact_digits);
  } else if (name == "nonorNet") {
    require(n >= 3, ErrorCode::OutOfRange, "nonorNet needs genus >= 3");
    set_exact(r, Rational(nonorientable_net_bound(n)), max_exact_digits);
  } else if (name == "krss") {
    require(n >= 2 && n <= 1000, ErrorCode::OutOfRange, "krss needs 2 <= n <= 1000");
    const double zeta = boost::math::zeta(static_cast<double>(n));
    const double value = 1.0 - (4.0 * n - 4.0) / ((2.0 * n - 1.0) * (2.0 * n - 1.0) * zeta);
    std::ostringstream out;
    out << std::fixed << std::setprecision(kZetaDigits) << value;
    r.decimal = out.str();
    r.precision = kZetaDigits;
  } else {
    std::string known;
    for (const auto& b : bound_names()) known += (known.empty() ? "" : ", ") + b;
    fail(ErrorCode::InvalidArgument, "unknown bound '" + name + "' (expected one of " + known + ")");
  }
  return r;
}

// ---- covering chain -------------------------------------------------------

WordPredicate named_subset(const std::string& name, int rank) {
  if (name == "all") return [](const Word&) { return true; };
  if (name == "identity") return [](const Word& w) { return w.is_identity(); };
  if (name == "turner") return [](const Word& w) { return turner_certificate(w).has_value(); };
  int p = 0;
  if (name == "even") p = 2;
  if (name.rfind("frattini:", 0) == 0) {
    try {
      p = std::stoi(name.substr(9));
    } catch (const std::exception&) {
      p = 0;
    }
    require(p >= 2, ErrorCode::InvalidArgument, "frattini:p needs an integer p >= 2");
  }
  require(p != 0, ErrorCode::InvalidArgument,
          "unknown subset '" + name + "' (expected all, identity, even, turner, frattini:p)");
  const Group group = Group::free(rank);
  return [group, p](const Word& w) { return exponent_sums(w, group, p).is_zero(); };
}

CoveringChainReport verify_covering_chain(const WordPredicate& subset, const std::vector<Word>& translates,
                                          int rank, int radius) {
  require(!translates.empty(), ErrorCode::InvalidArgument, "need at least one translate");
  CoveringChainReport r;
  r.rank = rank;
  r.radius = radius;
  r.translates = translates.size();
  std::vector<Word> inverses;
  for (const auto& g : translates) {
    require(g.rank() <= rank, ErrorCode::RankMismatch, "translate rank exceeds ball rank");
    r.translate_radius = std::max(r.translate_radius, static_cast<int>(g.length()));
    inverses.push_back(invert(g.rank() == rank ? g : g.widened(rank)));
  }
  require(radius >= r.translate_radius, ErrorCode::InvalidArgument,
          "radius must be at least the longest translate");
  r.ball_k = ball_size({rank, radius});
  r.ball_k_minus_c = ball_size({rank, radius - r.translate_radius});
  r.ball_c = ball_size({rank, r.translate_radius});
  r.translate_counts.assign(translates.size(), 0);

  // x lies in S g_i iff x g_i^-1 lies in S.
  for_each_in_ball(rank, radius, [&](const Word& x) {
    if (subset(x)) ++r.subset_in_ball;
    const bool inner = static_cast<int>(x.length()) <= radius - r.translate_radius;
    bool covered = false;
    for (std::size_t i = 0; i < inverses.size(); ++i) {
      if (!subset(multiply(x, inverses[i]))) continue;
      covered = true;
      if (inner) ++r.translate_counts[i];
      else break;
    }
    if (!covered) {
      ++r.uncovered;
      if (!r.first_uncovered) r.first_uncovered = x;
    }
  });

  r.covering = r.uncovered == 0;
  r.injection = std::all_of(r.translate_counts.begin(), r.translate_counts.end(),
                            [&](const BigInt& c) { return c <= r.subset_in_ball; });
  r.ball_product = r.ball_k <= r.ball_k_minus_c * r.ball_c;
  r.chain = r.ball_k <= BigInt(translates.size()) * r.ball_c * r.subset_in_ball;
  return r;
}

// ---- census ---------------------------------------------------------------

CensusVerdict classify(const Word& w, int rank, int search_bound, const CensusOptions& options) {
  const Group group = Group::free(rank);
  EndoSearchOptions search;
  search.max_endomorphisms = options.max_endomorphisms;
  if (endo_fixer_search(w, group, search_bound, search).status == Certificate::Status::Negative)
    return {CensusClass::Negative, "witness"};
  if (turner_certificate(w)) return {CensusClass::Positive, "turner"};
  if (!w.is_identity() && in_frattini(w, group, 2)) {
    NetOptions net;
    net.vetting_bound = options.vetting_bound;
    net.search = search;
    const auto res = net_project_free(w, rank, net);
    if (res.output == w && res.status != "unvetted") return {CensusClass::Positive, "net"};
  }
  return {CensusClass::Unknown, ""};
}

CensusRecord census(int rank, int radius, int search_bound, const CensusOptions& options) {
  require(rank >= 2, ErrorCode::InvalidArgument, "census needs rank >= 2");
  require(radius >= 0 && search_bound >= 0, ErrorCode::InvalidArgument, "radius and L must be >= 0");
  CensusRecord r;
  r.rank = rank;
  r.radius = radius;
  r.search_bound = search_bound;
  r.vetting_bound = options.vetting_bound;
  r.seed = options.seed;
  r.ball = ball_size({rank, radius});

  // Per-shard quotas in shard order keep a capped run deterministic.
  const std::size_t shards = ball_shard_count(rank);
  const BigInt per_shard = (r.ball - 1) / (2 * rank);
  std::vector<std::uint64_t> quota(shards);
  std::uint64_t remaining = options.max_elements;
  for (std::size_t s = 0; s < shards; ++s) {
    const BigInt size = s == 0 ? BigInt(1) : per_shard;
    quota[s] = size < remaining ? static_cast<std::uint64_t>(size) : remaining;
    remaining -= quota[s];
  }
  r.partial = BigInt(options.max_elements) < r.ball;

  struct Counts {
    std::uint64_t turner = 0, net = 0, negative = 0, unknown = 0, seen = 0;
  };
  std::vector<Counts> counts(shards);
  run_shards(rank, options.workers, [&](std::size_t s) {
    Counts& c = counts[s];
    if (quota[s] == 0) return;
    for_each_in_ball_shard(rank, radius, s, [&](const Word& w) {
      if (c.seen >= quota[s]) return;
      ++c.seen;
      const auto v = classify(w, rank, search_bound, options);
      if (v.kind == CensusClass::Negative) ++c.negative;
      else if (v.kind == CensusClass::Unknown) ++c.unknown;
      else if (v.tag == "turner") ++c.turner;
      else ++c.net;
    });
  });
  for (const auto& c : counts) {
    r.positive_turner += c.turner;
    r.positive_net += c.net;
    r.negative += c.negative;
    r.unknown += c.unknown;
    r.classified += c.seen;
  }
  r.positive = r.positive_turner + r.positive_net;
  require(r.total() == r.classified, ErrorCode::InvariantViolation, "census buckets do not partition the input");
  require(r.partial || BigInt(r.total()) == r.ball, ErrorCode::InvariantViolation,
          "census buckets do not sum to the ball size");
  return r;
}

std::string census_csv_header() { return "rank,k,L,positive,negative,unknown,ball_size,seed"; }

std::string census_csv_row(const CensusRecord& r) {
  std::ostringstream out;
  out << r.rank << ',' << r.radius << ',' << r.search_bound << ',' << r.positive << ',' << r.negative << ','
      << r.unknown << ',' << r.ball << ',' << r.seed;
  return out.str();
}

std::string census_log_line(const CensusRecord& r) {
  Json j = record_json(r);
  j["crc32"] = checksum(j.dump());
  return j.dump();
}

void append_census_log(const std::string& path, CensusRecord& r) {
  r.timestamp = utc_timestamp();
  std::ofstream out(path, std::ios::app);
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot open census log '" + path + "'");
  out << census_log_line(r) << '\n';
  require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot write census log '" + path + "'");
}

CensusLog load_census_log(const std::string& path) {
  CensusLog log;
  std::ifstream in(path);
  if (!in) return log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      Json j = Json::parse(line);
      const auto stored = j.at("crc32").get<std::uint32_t>();
      j.erase("crc32");
      if (checksum(j.dump()) != stored) {
        ++log.corrupt_lines;
        continue;
      }
      log.records.push_back(record_from_json(j));
    } catch (const std::exception&) {
      ++log.corrupt_lines;
    }
  }
  return log;
}

CensusRecord census_resumable(const std::string& log_path, int rank, int radius, int search_bound,
                              const CensusOptions& options, bool* reused) {
  for (const auto& r : load_census_log(log_path).records) {
    if (r.rank == rank && r.radius == radius && r.search_bound == search_bound &&
        r.vetting_bound == options.vetting_bound && r.seed == options.seed && !r.partial) {
      if (reused) *reused = true;
      return r;
    }
  }
  if (reused) *reused = false;
  auto r = census(rank, radius, search_bound, options);
  append_census_log(log_path, r);
  return r;
}

// ---- net audit ------------------------------------------------------------

NetAuditReport net_coverage_audit(int rank, int radius, int vetting_bound, unsigned workers) {
  require(rank >= 2, ErrorCode::InvalidArgument, "net audit needs rank >= 2");
  NetAuditReport r;
  r.rank = rank;
  r.radius = radius;
  r.vetting_bound = vetting_bound;
  r.bound = free_net_bound(rank);
  const Group group = Group::free(rank);
  NetOptions options;
  options.vetting_bound = vetting_bound;

  const std::size_t shards = ball_shard_count(rank);
  std::vector<NetAuditReport> parts(shards);
  run_shards(rank, workers, [&](std::size_t s) {
    auto& part = parts[s];
    for_each_in_ball_shard(rank, radius, s, [&](const Word& w) {
      const auto res = net_project_free(w, rank, options);
      std::string problem;
      if (res.distance > r.bound) problem = "distance " + std::to_string(res.distance) + " exceeds the bound";
      else if (res.output.is_identity()) problem = "output is the identity";
      else if (!in_frattini(res.output, group, 2)) problem = "output has an odd exponent sum";
      if (!problem.empty())
        fail(ErrorCode::InvariantViolation, "net audit violation at w = " + to_string(w) + ": " + problem);
      ++part.elements;
      ++part.histogram[res.distance];
      ++part.status_counts[res.status];
      part.max_distance = std::max(part.max_distance, res.distance);
    });
  });
  for (const auto& part : parts) {
    r.elements += part.elements;
    r.max_distance = std::max(r.max_distance, part.max_distance);
    for (const auto& [d, c] : part.histogram) r.histogram[d] += c;
    for (const auto& [st, c] : part.status_counts) r.status_counts[st] += c;
  }
  return r;
}

// ---- constants ------------------------------------------------------------

SchreierConstants schreier_constants(const Group& group, int p, std::size_t max_cosets) {
  const auto layer = frattini_layer(group, p, max_cosets);
  SchreierConstants c;
  c.group = group.describe();
  c.prime = p;
  c.vertices = layer->graph().vertex_count();
  c.schreier_generators = layer->schreier().generator_count();
  c.relation_rank = layer->relation_rank();
  c.basis = layer->basis().size();
  for (const auto& y : layer->schreier().generators())
    c.max_generator_length = std::max(c.max_generator_length, y.length());
  const auto index = c.vertices;
  const auto* pres = group.presentation();
  if (!pres) {
    c.expected_basis = 1 + index * static_cast<std::size_t>(group.rank() - 1);
  } else if (pres->kind() == SurfaceKind::Orientable) {
    c.expected_basis = 2 + index * static_cast<std::size_t>(2 * pres->genus() - 2);
    c.length_bound = static_cast<std::size_t>(16 * pres->genus() + 1);
  } else if (p != 2) {
    // The kernel is non-orientable of genus index(n-2)+2; its mod-p homology has rank genus-1.
    c.expected_basis = 1 + index * static_cast<std::size_t>(pres->genus() - 2);
  }
  return c;
}

std::vector<BallCheck> ball_check(int rank, int radius) {
  require(radius >= 0, ErrorCode::InvalidArgument, "radius must be >= 0");
  std::vector<BallCheck> out(static_cast<std::size_t>(radius) + 1);
  for (int k = 0; k <= radius; ++k) {
    out[static_cast<std::size_t>(k)].radius = k;
    out[static_cast<std::size_t>(k)].formula = ball_size({rank, k});
  }
  // One pass over B(radius); a word of length l counts toward every B(k), k >= l.
  std::vector<std::uint64_t> by_length(static_cast<std::size_t>(radius) + 1, 0);
  for_each_in_ball(rank, radius, [&](const Word& w) { ++by_length[w.length()]; });
  std::uint64_t running = 0;
  for (int k = 0; k <= radius; ++k) {
    running += by_length[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)].enumerated = running;
  }
  return out;
}

}  // namespace testel
