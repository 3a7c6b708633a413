#include "testel/testel.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "report.hpp"
#include "testel/density.hpp"
#include "testel/enumerate.hpp"
#include "testel/error.hpp"
#include "testel/stallings.hpp"

struct tel_group {
  testel::Group value;
};
struct tel_word {
  testel::Word value;
};
struct tel_graph {
  testel::SubgroupGraph value;
};

namespace {

using testel::report::Json;

thread_local std::string last_error;

tel_status status_of(testel::ErrorCode code) {
  switch (code) {
    case testel::ErrorCode::InvalidArgument: return TEL_ERR_INVALID_ARGUMENT;
    case testel::ErrorCode::Parse: return TEL_ERR_PARSE;
    case testel::ErrorCode::RankMismatch: return TEL_ERR_RANK_MISMATCH;
    case testel::ErrorCode::OutOfRange: return TEL_ERR_OUT_OF_RANGE;
    case testel::ErrorCode::Domain: return TEL_ERR_DOMAIN;
    case testel::ErrorCode::ResourceLimit: return TEL_ERR_RESOURCE_LIMIT;
    case testel::ErrorCode::InvariantViolation: return TEL_ERR_INVARIANT;
  }
  return TEL_ERR_INTERNAL;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
tel_status guarded(F&& fn) {
  try {
    fn();
    last_error.clear();
    return TEL_OK;
  } catch (const testel::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const IoError& e) {
    last_error = e.what();
    return TEL_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TEL_ERR_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TEL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return TEL_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) testel::fail(testel::ErrorCode::InvalidArgument, std::string("null ") + what);
}

void emit(const Json& j, char** out) {
  need(out, "output pointer");
  *out = dup(j.dump());
}

testel::Word word_in(const char* text, const testel::Group& group) {
  need(text, "word");
  return testel::parse_word(text, group.rank());
}

testel::NetOptions net_options(const tel_net_options* o) {
  testel::NetOptions n;
  if (o) {
    n.vetting_bound = o->vetting_bound;
    n.max_cosets = o->max_cosets;
    n.search.max_endomorphisms = o->max_endomorphisms;
  }
  return n;
}

}  // namespace

extern "C" {

const char* tel_version(void) { return "1.0.0"; }

const char* tel_status_name(tel_status status) {
  switch (status) {
    case TEL_OK: return "ok";
    case TEL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case TEL_ERR_PARSE: return "parse";
    case TEL_ERR_RANK_MISMATCH: return "rank_mismatch";
    case TEL_ERR_OUT_OF_RANGE: return "out_of_range";
    case TEL_ERR_DOMAIN: return "domain";
    case TEL_ERR_RESOURCE_LIMIT: return "resource_limit";
    case TEL_ERR_INVARIANT: return "invariant_violation";
    case TEL_ERR_IO: return "io";
    case TEL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tel_last_error(void) { return last_error.c_str(); }

void tel_string_free(char* s) { std::free(s); }

tel_status tel_group_parse(const char* spec, tel_group** out) {
  return guarded([&] {
    need(spec, "group spec");
    need(out, "output pointer");
    *out = new tel_group{testel::Group::parse(spec)};
  });
}

void tel_group_destroy(tel_group* group) { delete group; }

int tel_group_rank(const tel_group* group) { return group ? group->value.rank() : 0; }

tel_status tel_group_describe(const tel_group* group, char** out) {
  return guarded([&] {
    need(group, "group");
    need(out, "output pointer");
    *out = dup(group->value.describe());
  });
}

tel_status tel_word_parse(const char* text, int rank, tel_word** out) {
  return guarded([&] {
    need(text, "word");
    need(out, "output pointer");
    *out = new tel_word{testel::parse_word(text, rank)};
  });
}

void tel_word_destroy(tel_word* word) { delete word; }

tel_status tel_word_to_string(const tel_word* word, char** out) {
  return guarded([&] {
    need(word, "word");
    need(out, "output pointer");
    *out = dup(testel::to_string(word->value));
  });
}

size_t tel_word_length(const tel_word* word) { return word ? word->value.length() : 0; }

tel_status tel_word_multiply(const tel_word* a, const tel_word* b, tel_word** out) {
  return guarded([&] {
    need(a, "word");
    need(b, "word");
    need(out, "output pointer");
    *out = new tel_word{testel::multiply(a->value, b->value)};
  });
}

tel_status tel_word_invert(const tel_word* a, tel_word** out) {
  return guarded([&] {
    need(a, "word");
    need(out, "output pointer");
    *out = new tel_word{testel::invert(a->value)};
  });
}

tel_status tel_graph_build(int rank, const tel_word* const* generators, size_t count, tel_graph** out) {
  return guarded([&] {
    need(out, "output pointer");
    if (count > 0) need(generators, "generator array");
    std::vector<testel::Word> gens;
    for (size_t i = 0; i < count; ++i) {
      need(generators[i], "generator");
      gens.push_back(generators[i]->value);
    }
    *out = new tel_graph{testel::build_graph(rank, gens)};
  });
}

void tel_graph_destroy(tel_graph* graph) { delete graph; }

tel_status tel_graph_contains(const tel_graph* graph, const tel_word* word, int* out) {
  return guarded([&] {
    need(graph, "graph");
    need(word, "word");
    need(out, "output pointer");
    *out = graph->value.contains(word->value) ? 1 : 0;
  });
}

tel_status tel_graph_index(const tel_graph* graph, int64_t* out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output pointer");
    const auto i = graph->value.index();
    *out = i ? static_cast<int64_t>(*i) : -1;
  });
}

tel_status tel_graph_serialize(const tel_graph* graph, char** out) {
  return guarded([&] {
    need(graph, "graph");
    need(out, "output pointer");
    *out = dup(graph->value.serialize());
  });
}

tel_status tel_graph_schreier_json(const tel_graph* graph, char** out_json) {
  return guarded([&] {
    need(graph, "graph");
    const auto t = testel::schreier_transversal(graph->value);
    const testel::SchreierSystem sys(graph->value, t);
    Json j;
    j["index"] = graph->value.vertex_count();
    j["transversal"] = Json::array();
    for (const auto& r : t.representatives) j["transversal"].push_back(testel::report::word(r));
    j["generators"] = Json::array();
    for (const auto& y : sys.generators()) j["generators"].push_back(testel::report::word(y));
    emit(j, out_json);
  });
}

tel_status tel_reduce_json(const tel_group* group, const char* word, char** out_json) {
  return guarded([&] {
    need(group, "group");
    const auto& g = group->value;
    const auto w = word_in(word, g);
    Json j;
    j["group"] = g.describe();
    j["input"] = word;
    j["reduced"] = testel::report::word(w);
    j["length"] = w.length();
    if (const auto* pres = g.presentation()) {
      const auto d = testel::dehn_reduce(w, *pres);
      j["dehn_reduced"] = testel::report::word(d);
      j["dehn_length"] = d.length();
      j["dehn_complete"] = pres->dehn_complete();
      j["trivial"] = testel::to_string(testel::is_trivial(w, g));
    } else {
      j["trivial"] = testel::to_string(w.is_identity() ? testel::Truth::True : testel::Truth::False);
    }
    emit(j, out_json);
  });
}

tel_status tel_ball_json(int rank, int radius, int enumerate, char** out_json) {
  return guarded([&] {
    Json j;
    j["rank"] = rank;
    j["k"] = radius;
    j["ball_size"] = testel::report::big(testel::ball_size({rank, radius}));
    j["sphere_size"] = testel::report::big(testel::sphere_size(rank, radius));
    if (enumerate) {
      std::uint64_t count = 0;
      testel::for_each_in_ball(rank, radius, [&](const testel::Word&) { ++count; });
      j["enumerated"] = count;
      j["match"] = testel::BigInt(count) == testel::ball_size({rank, radius});
    }
    emit(j, out_json);
  });
}

tel_status tel_sphere_write(int rank, int radius, const char* path, char** out_json) {
  return guarded([&] {
    need(path, "path");
    std::ofstream out(path);
    if (!out) throw IoError(std::string("cannot open '") + path + "'");
    std::uint64_t count = 0;
    testel::for_each_in_sphere(rank, radius, [&](const testel::Word& w) {
      out << testel::to_string(w) << '\n';
      ++count;
    });
    if (!out) throw IoError(std::string("cannot write '") + path + "'");
    Json j;
    j["rank"] = rank;
    j["k"] = radius;
    j["path"] = path;
    j["written"] = count;
    emit(j, out_json);
  });
}

tel_status tel_sphere_sample_json(int rank, int radius, uint64_t seed, size_t count, char** out_json) {
  return guarded([&] {
    Json j;
    j["rank"] = rank;
    j["k"] = radius;
    j["seed"] = seed;
    j["samples"] = Json::array();
    // Sample i uses seed + i so each draw is reproducible on its own.
    for (size_t i = 0; i < count; ++i)
      j["samples"].push_back(testel::report::word(testel::sample_sphere(rank, radius, seed + i)));
    emit(j, out_json);
  });
}

tel_status tel_frattini_json(const tel_group* group, const char* word, int p, size_t max_cosets, char** out_json) {
  return guarded([&] {
    need(group, "group");
    testel::require(testel::is_prime(p), testel::ErrorCode::InvalidArgument, "p must be prime");
    emit(testel::report::frattini(word_in(word, group->value), group->value, p, max_cosets), out_json);
  });
}

tel_net_options tel_net_options_default(void) {
  tel_net_options o;
  o.vetting_bound = -1;
  o.max_cosets = 1000;
  o.max_endomorphisms = 50'000'000;
  return o;
}

tel_status tel_net_json(const tel_group* group, const char* word, const tel_net_options* options,
                        char** out_json) {
  return guarded([&] {
    need(group, "group");
    const auto& g = group->value;
    const auto res = testel::net_project(word_in(word, g), g, net_options(options));
    emit(testel::report::net(res, g), out_json);
  });
}

tel_status tel_coset_json(const tel_group* group, const char* word, size_t degree, const char* const* images,
                          size_t image_count, const tel_net_options* options, char** out_json) {
  return guarded([&] {
    need(group, "group");
    const auto& g = group->value;
    const auto w = word_in(word, g);
    testel::require(image_count == static_cast<size_t>(g.rank()), testel::ErrorCode::InvalidArgument,
                    "need one permutation image per generator (" + std::to_string(g.rank()) + ")");
    testel::require(degree >= 1, testel::ErrorCode::InvalidArgument, "degree must be >= 1");
    testel::FiniteQuotient q;
    q.degree = degree;
    for (size_t i = 0; i < image_count; ++i) {
      need(images[i], "permutation image");
      q.images.push_back(testel::parse_cycles(images[i], degree));
    }
    const auto res = testel::coset_test_element(w, g, q, net_options(options));
    emit(testel::report::coset(res, g, q, w), out_json);
  });
}

tel_status tel_endo_json(const tel_group* group, const char* word, int bound, uint64_t max_endomorphisms,
                         char** out_json) {
  return guarded([&] {
    need(group, "group");
    const auto& g = group->value;
    const auto w = word_in(word, g);
    testel::EndoSearchOptions opts;
    opts.max_endomorphisms = max_endomorphisms;
    const auto cert = testel::endo_fixer_search(w, g, bound, opts);
    emit(testel::report::certificate(cert, w, g), out_json);
  });
}

tel_census_options tel_census_options_default(void) {
  tel_census_options o;
  o.vetting_bound = 2;
  o.seed = 0;
  o.workers = 1;
  o.max_elements = 2'000'000;
  o.max_endomorphisms = 50'000'000;
  o.log_path = nullptr;
  o.csv_path = nullptr;
  return o;
}

tel_status tel_census_json(int rank, int radius, int search_bound, const tel_census_options* options,
                           char** out_json) {
  return guarded([&] {
    const tel_census_options o = options ? *options : tel_census_options_default();
    testel::CensusOptions c;
    c.vetting_bound = o.vetting_bound;
    c.seed = o.seed;
    c.workers = o.workers;
    c.max_elements = o.max_elements;
    c.max_endomorphisms = o.max_endomorphisms;
    testel::CensusRecord r;
    bool reused = false;
    if (o.log_path) {
      r = testel::census_resumable(o.log_path, rank, radius, search_bound, c, &reused);
    } else {
      r = testel::census(rank, radius, search_bound, c);
    }
    if (o.csv_path) {
      const bool fresh = !std::ifstream(o.csv_path).good();
      std::ofstream csv(o.csv_path, std::ios::app);
      if (!csv) throw IoError(std::string("cannot open '") + o.csv_path + "'");
      if (fresh) csv << testel::census_csv_header() << '\n';
      csv << testel::census_csv_row(r) << '\n';
    }
    Json j = testel::report::census(r);
    Json persist;
    persist["log_path"] = o.log_path ? Json(o.log_path) : Json(nullptr);
    persist["reused"] = reused;
    persist["csv_path"] = o.csv_path ? Json(o.csv_path) : Json(nullptr);
    j["persistence"] = persist;
    emit(j, out_json);
  });
}

tel_status tel_bound_json(const char* name, int n, size_t max_exact_digits, char** out_json) {
  return guarded([&] {
    need(name, "bound name");
    emit(testel::report::bound(testel::bound_calculator(name, n, max_exact_digits)), out_json);
  });
}

tel_status tel_verify_chain_json(int rank, int radius, const char* subset, const char* const* translates,
                                 size_t translate_count, char** out_json) {
  return guarded([&] {
    need(subset, "subset name");
    if (translate_count > 0) need(translates, "translate array");
    std::vector<testel::Word> ts;
    for (size_t i = 0; i < translate_count; ++i) {
      need(translates[i], "translate");
      ts.push_back(testel::parse_word(translates[i], rank));
    }
    const auto r = testel::verify_covering_chain(testel::named_subset(subset, rank), ts, rank, radius);
    emit(testel::report::chain(r, subset, ts), out_json);
  });
}

tel_status tel_verify_audit_json(int rank, int radius, int vetting_bound, unsigned workers, char** out_json) {
  return guarded([&] {
    emit(testel::report::audit(testel::net_coverage_audit(rank, radius, vetting_bound, workers)), out_json);
  });
}

tel_status tel_verify_schreier_json(const tel_group* group, int p, size_t max_cosets, char** out_json) {
  return guarded([&] {
    need(group, "group");
    const auto c = testel::schreier_constants(group->value, p, max_cosets);
    const auto layer = testel::frattini_layer(group->value, p, max_cosets);
    emit(testel::report::schreier(c, *layer), out_json);
  });
}

tel_status tel_verify_ball_json(int rank, int radius, char** out_json) {
  return guarded([&] { emit(testel::report::ball(testel::ball_check(rank, radius), rank), out_json); });
}

}  // extern "C"
