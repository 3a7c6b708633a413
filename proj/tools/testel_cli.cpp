// testel: command-line front end over the C interface.
//
// Every invocation prints one JSON document on stdout holding the run
// configuration and the result (or the error), and a short summary on
// stderr. Exit status: 0 success, 2 validation error, 3 invariant violation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "testel/testel.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;

struct Flags {
  int free_rank = 0;
  std::string surface;
  std::string word;
  int rank = 2;
  int radius = 0;
  int prime = 0;
  int vet = -1;
  int bound = 2;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string output;
  std::string log;
  std::string csv;
  std::string name;
  int n = 0;
  int genus = 0;
  std::string check;
  std::string subset = "even";
  std::vector<std::string> translates;
  std::vector<std::string> images;
  std::size_t degree = 0;
  bool enumerate = false;
  std::size_t sample = 0;
  std::string write_sphere;
  int max_radius = 12;
  int max_endo_bound = 3;
  std::size_t max_cosets = 1000;
  std::uint64_t max_endomorphisms = 50'000'000;
  std::uint64_t max_elements = 2'000'000;
  std::size_t max_digits = 4096;
};

struct Failure {
  tel_status status;
  std::string message;
};

struct GroupHandle {
  tel_group* ptr = nullptr;
  ~GroupHandle() { tel_group_destroy(ptr); }
};

void check(tel_status s) {
  if (s != TEL_OK) throw Failure{s, tel_last_error()};
}

void invalid(const std::string& message) { throw Failure{TEL_ERR_INVALID_ARGUMENT, message}; }

Json take_json(char* raw) {
  std::unique_ptr<char, void (*)(char*)> owned(raw, tel_string_free);
  return Json::parse(owned.get());
}

std::string resolve_path(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("TESTEL_OUTPUT_DIR");
  const std::filesystem::path p(path);
  if (!dir || !*dir || p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

std::string group_spec(const Flags& f) {
  if (f.free_rank && !f.surface.empty()) invalid("give either --free or --surface, not both");
  if (f.free_rank) return "free:" + std::to_string(f.free_rank);
  if (!f.surface.empty()) return f.surface;
  invalid("a group is required (--free N or --surface orientable:g|nonorientable:g)");
  return {};
}

void open_group(const std::string& spec, GroupHandle& g) { check(tel_group_parse(spec.c_str(), &g.ptr)); }

void cap(bool ok, const std::string& message) {
  if (!ok) throw Failure{TEL_ERR_RESOURCE_LIMIT, message};
}

void need_word(const CLI::App* sub) {
  if (sub->count("--word") == 0) invalid("--word is required");
}

tel_net_options net_options(const Flags& f) {
  tel_net_options o = tel_net_options_default();
  o.vetting_bound = f.vet;
  o.max_cosets = f.max_cosets;
  o.max_endomorphisms = f.max_endomorphisms;
  return o;
}

struct Run {
  Json config;
  Json result;
  std::string summary;
};

void cmd_reduce(Run& r, const Flags& f, const CLI::App* sub) {
  const auto spec = group_spec(f);
  r.config = {{"group", spec}, {"word", f.word}};
  need_word(sub);
  GroupHandle g;
  open_group(spec, g);
  char* out = nullptr;
  check(tel_reduce_json(g.ptr, f.word.c_str(), &out));
  r.result = take_json(out);
  r.summary = "reduced: " + r.result["reduced"].get<std::string>();
}

void cmd_ball(Run& r, const Flags& f, const CLI::App*) {
  r.config = {{"rank", f.rank},     {"radius", f.radius},         {"enumerate", f.enumerate},
              {"sample", f.sample}, {"seed", f.seed},             {"write_sphere", f.write_sphere},
              {"max_radius", f.max_radius}};
  const bool enumerates = f.enumerate || !f.write_sphere.empty();
  cap(!enumerates || f.radius <= f.max_radius,
      "radius " + std::to_string(f.radius) + " exceeds --max-radius " + std::to_string(f.max_radius));
  char* out = nullptr;
  check(tel_ball_json(f.rank, f.radius, f.enumerate ? 1 : 0, &out));
  r.result = take_json(out);
  if (f.sample > 0) {
    check(tel_sphere_sample_json(f.rank, f.radius, f.seed, f.sample, &out));
    r.result["samples"] = take_json(out)["samples"];
  }
  if (!f.write_sphere.empty()) {
    check(tel_sphere_write(f.rank, f.radius, resolve_path(f.write_sphere).c_str(), &out));
    r.result["sphere_written"] = take_json(out)["written"];
  }
  r.summary = "|B(" + std::to_string(f.radius) + ")| = " + r.result["ball_size"].dump();
}

void cmd_net(Run& r, const Flags& f, const CLI::App* sub) {
  const auto spec = group_spec(f);
  r.config = {{"group", spec},
              {"word", f.word},
              {"vet", f.vet},
              {"max_cosets", f.max_cosets},
              {"max_endomorphisms", f.max_endomorphisms}};
  need_word(sub);
  GroupHandle g;
  open_group(spec, g);
  const auto opts = net_options(f);
  char* out = nullptr;
  check(tel_net_json(g.ptr, f.word.c_str(), &opts, &out));
  r.result = take_json(out);
  r.summary = "net: distance " + r.result["distance"].dump() + " <= bound " + r.result["bound"].dump() +
              ", status " + r.result["status"].get<std::string>();
}

void cmd_coset(Run& r, const Flags& f, const CLI::App* sub) {
  const auto spec = group_spec(f);
  r.config = {{"group", spec},
              {"word", f.word},
              {"degree", f.degree},
              {"images", f.images},
              {"vet", f.vet},
              {"max_cosets", f.max_cosets},
              {"max_endomorphisms", f.max_endomorphisms}};
  need_word(sub);
  GroupHandle g;
  open_group(spec, g);
  std::vector<const char*> images;
  for (const auto& s : f.images) images.push_back(s.c_str());
  const auto opts = net_options(f);
  char* out = nullptr;
  check(tel_coset_json(g.ptr, f.word.c_str(), f.degree, images.data(), images.size(), &opts, &out));
  r.result = take_json(out);
  r.summary = "coset: l = " + r.result["quotient"]["order"].dump() + ", p = " + r.result["prime"].dump() +
              ", same coset " + r.result["same_coset"].dump();
}

void cmd_endo(Run& r, const Flags& f, const CLI::App* sub) {
  const auto spec = group_spec(f);
  r.config = {{"group", spec},
              {"word", f.word},
              {"bound", f.bound},
              {"max_endo_bound", f.max_endo_bound},
              {"max_endomorphisms", f.max_endomorphisms}};
  need_word(sub);
  cap(f.bound <= f.max_endo_bound,
      "bound " + std::to_string(f.bound) + " exceeds --max-endo-bound " + std::to_string(f.max_endo_bound));
  GroupHandle g;
  open_group(spec, g);
  char* out = nullptr;
  check(tel_endo_json(g.ptr, f.word.c_str(), f.bound, f.max_endomorphisms, &out));
  r.result = take_json(out);
  r.summary = "endo: " + r.result["status"].get<std::string>() + " after " + r.result["examined"].dump() +
              " maps";
}

void cmd_census(Run& r, const Flags& f, const CLI::App*) {
  r.config = {{"rank", f.rank},
              {"radius", f.radius},
              {"L", f.bound},
              {"vet", f.vet < 0 ? 2 : f.vet},
              {"seed", f.seed},
              {"log", f.log},
              {"csv", f.csv},
              {"max_radius", f.max_radius},
              {"max_endo_bound", f.max_endo_bound},
              {"max_elements", f.max_elements},
              {"max_endomorphisms", f.max_endomorphisms}};
  cap(f.radius <= f.max_radius,
      "radius " + std::to_string(f.radius) + " exceeds --max-radius " + std::to_string(f.max_radius));
  cap(f.bound <= f.max_endo_bound,
      "L " + std::to_string(f.bound) + " exceeds --max-endo-bound " + std::to_string(f.max_endo_bound));
  tel_census_options o = tel_census_options_default();
  o.vetting_bound = f.vet < 0 ? 2 : f.vet;
  o.seed = f.seed;
  o.workers = f.workers;
  o.max_elements = f.max_elements;
  o.max_endomorphisms = f.max_endomorphisms;
  const auto log = resolve_path(f.log);
  const auto csv = resolve_path(f.csv);
  o.log_path = log.empty() ? nullptr : log.c_str();
  o.csv_path = csv.empty() ? nullptr : csv.c_str();
  char* out = nullptr;
  check(tel_census_json(f.rank, f.radius, f.bound, &o, &out));
  r.result = take_json(out);
  // Whether the record came from the log depends on earlier runs, so it
  // stays out of the document.
  const bool reused = r.result["persistence"]["reused"].get<bool>();
  r.result["persistence"].erase("reused");
  r.summary = "census: positive " + r.result["positive"].dump() + ", negative " + r.result["negative"].dump() +
              ", unknown " + r.result["unknown"].dump() + " of " + r.result["ball_size"].dump() +
              (reused ? " (reused from log)" : "");
}

void cmd_bounds(Run& r, const Flags& f, const CLI::App* sub) {
  if (f.name.empty()) invalid("--name is required");
  if (sub->count("--n") && sub->count("--genus")) invalid("give either --n or --genus, not both");
  const int n = sub->count("--genus") ? f.genus : (sub->count("--n") ? f.n : 2);
  r.config = {{"name", f.name}, {"n", n}, {"max_digits", f.max_digits}};
  char* out = nullptr;
  check(tel_bound_json(f.name.c_str(), n, f.max_digits, &out));
  r.result = take_json(out);
  r.summary = f.name + " = " + (r.result["exact"].is_string() ? r.result["exact"].get<std::string>()
                                                               : r.result["decimal"].get<std::string>());
}

void cmd_verify(Run& r, const Flags& f, const CLI::App* sub) {
  char* out = nullptr;
  r.config = {{"check", f.check}};
  if (f.check == "ball") {
    r.config.update({{"rank", f.rank}, {"radius", f.radius}, {"max_radius", f.max_radius}});
    cap(f.radius <= f.max_radius, "radius exceeds --max-radius");
    check(tel_verify_ball_json(f.rank, f.radius, &out));
  } else if (f.check == "chain") {
    std::vector<std::string> ts = f.translates.empty() ? std::vector<std::string>{"1", "x1", "x2", "x1 x2"}
                                                       : f.translates;
    r.config.update({{"rank", f.rank},
                     {"radius", f.radius},
                     {"subset", f.subset},
                     {"translates", ts},
                     {"max_radius", f.max_radius}});
    cap(f.radius <= f.max_radius, "radius exceeds --max-radius");
    std::vector<const char*> raw;
    for (const auto& t : ts) raw.push_back(t.c_str());
    check(tel_verify_chain_json(f.rank, f.radius, f.subset.c_str(), raw.data(), raw.size(), &out));
  } else if (f.check == "audit") {
    const int vet = f.vet < 0 ? 2 : f.vet;
    r.config.update({{"rank", f.rank}, {"radius", f.radius}, {"vet", vet}, {"max_radius", f.max_radius}});
    cap(f.radius <= f.max_radius, "radius exceeds --max-radius");
    check(tel_verify_audit_json(f.rank, f.radius, vet, f.workers, &out));
  } else if (f.check == "schreier" || f.check == "frattini") {
    const auto spec = group_spec(f);
    if (f.prime == 0) invalid("--prime is required");
    GroupHandle g;
    open_group(spec, g);
    if (f.check == "schreier") {
      r.config.update({{"group", spec}, {"prime", f.prime}, {"max_cosets", f.max_cosets}});
      check(tel_verify_schreier_json(g.ptr, f.prime, f.max_cosets, &out));
    } else {
      need_word(sub);
      r.config.update({{"group", spec}, {"word", f.word}, {"prime", f.prime}, {"max_cosets", f.max_cosets}});
      check(tel_frattini_json(g.ptr, f.word.c_str(), f.prime, f.max_cosets, &out));
    }
  } else {
    invalid("--check must be one of ball, chain, audit, schreier, frattini");
  }
  r.result = take_json(out);
  r.summary = "verify " + f.check;
  if (r.result.contains("passed")) r.summary += r.result["passed"].get<bool>() ? ": passed" : ": FAILED";
}

int exit_code(tel_status s) {
  return (s == TEL_ERR_INVARIANT || s == TEL_ERR_INTERNAL) ? kExitInvariant : kExitValidation;
}

void add_group_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--free", f.free_rank, "free group of this rank")->check(CLI::Range(1, 64));
  sub->add_option("--surface", f.surface, "surface group, orientable:g or nonorientable:g");
}

}  // namespace

int main(int argc, char** argv) {
  Flags f;
  CLI::App app{"Test elements in free and surface groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tel_version());

  auto* reduce = app.add_subcommand("reduce", "free and Dehn reduction of a word");
  add_group_flags(reduce, f);
  reduce->add_option("--word", f.word, "word, e.g. \"x1 x2^-1\"");

  auto* ball = app.add_subcommand("ball", "ball and sphere sizes");
  ball->add_option("--rank", f.rank)->check(CLI::Range(1, 64));
  ball->add_option("--radius", f.radius)->check(CLI::NonNegativeNumber);
  ball->add_flag("--enumerate", f.enumerate, "check the formula by enumeration");
  ball->add_option("--sample", f.sample, "number of uniform sphere samples");
  ball->add_option("--write-sphere", f.write_sphere, "write the sphere, one word per line");
  ball->add_option("--seed", f.seed);
  ball->add_option("--max-radius", f.max_radius);

  auto* net = app.add_subcommand("net", "nearby test-element candidate");
  add_group_flags(net, f);
  net->add_option("--word", f.word);
  net->add_option("--vet", f.vet, "vetting bound for the subset search (default 2, orientable 1)");

  auto* coset = app.add_subcommand("coset", "test-element candidate in the coset of a finite-index normal subgroup");
  add_group_flags(coset, f);
  coset->add_option("--word", f.word);
  coset->add_option("--degree", f.degree, "permutation degree")->required();
  coset->add_option("--image", f.images, "cycle notation of each generator image, in order")->required();
  coset->add_option("--vet", f.vet);

  auto* endo = app.add_subcommand("endo", "search for a fixing non-automorphism");
  add_group_flags(endo, f);
  endo->add_option("--word", f.word);
  endo->add_option("--bound", f.bound, "maximal image length")->check(CLI::NonNegativeNumber);
  endo->add_option("--max-endo-bound", f.max_endo_bound);

  auto* census = app.add_subcommand("census", "certificate buckets over a ball");
  census->add_option("--rank", f.rank)->check(CLI::Range(2, 64));
  census->add_option("--radius", f.radius)->check(CLI::NonNegativeNumber);
  census->add_option("--L", f.bound, "endomorphism search bound")->check(CLI::NonNegativeNumber);
  census->add_option("--vet", f.vet);
  census->add_option("--seed", f.seed);
  census->add_option("--workers", f.workers)->check(CLI::Range(1u, 256u));
  census->add_option("--log", f.log, "append-only census log (resumed when a record matches)");
  census->add_option("--csv", f.csv, "CSV export");
  census->add_option("--max-radius", f.max_radius);
  census->add_option("--max-endo-bound", f.max_endo_bound);
  census->add_option("--max-elements", f.max_elements);

  auto* bounds = app.add_subcommand("bounds", "net radii and density bounds");
  bounds->add_option("--name", f.name, "freeC, nonorC, orC, freeNet, orNet, nonorNet, krss");
  bounds->add_option("--n", f.n, "rank");
  bounds->add_option("--genus", f.genus, "genus");
  bounds->add_option("--max-digits", f.max_digits, "longest exact value printed in full");

  auto* verify = app.add_subcommand("verify", "exhaustive checks");
  verify->add_option("--check", f.check, "ball, chain, audit, schreier, frattini")->required();
  add_group_flags(verify, f);
  verify->add_option("--word", f.word);
  verify->add_option("--rank", f.rank)->check(CLI::Range(1, 64));
  verify->add_option("--radius", f.radius)->check(CLI::NonNegativeNumber);
  verify->add_option("--prime", f.prime);
  verify->add_option("--subset", f.subset, "all, identity, even, turner, frattini:p");
  verify->add_option("--translate", f.translates, "translate word (repeatable)");
  verify->add_option("--vet", f.vet);
  verify->add_option("--workers", f.workers)->check(CLI::Range(1u, 256u));
  verify->add_option("--max-radius", f.max_radius);

  for (auto* sub : {net, coset, endo, reduce, verify}) {
    sub->add_option("--max-cosets", f.max_cosets);
    sub->add_option("--max-endomorphisms", f.max_endomorphisms);
  }
  for (auto* sub : app.get_subcommands({})) sub->add_option("--output", f.output, "also write the document here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  Json doc;
  doc["tool"] = "testel";
  doc["version"] = tel_version();
  doc["subcommand"] = command;
  int code = kExitOk;
  Run run;
  try {
    if (command == "reduce") cmd_reduce(run, f, sub);
    else if (command == "ball") cmd_ball(run, f, sub);
    else if (command == "net") cmd_net(run, f, sub);
    else if (command == "coset") cmd_coset(run, f, sub);
    else if (command == "endo") cmd_endo(run, f, sub);
    else if (command == "census") cmd_census(run, f, sub);
    else if (command == "bounds") cmd_bounds(run, f, sub);
    else cmd_verify(run, f, sub);
    doc["config"] = run.config;
    doc["result"] = run.result;
  } catch (const Failure& e) {
    code = exit_code(e.status);
    doc["config"] = run.config;
    doc["error"] = {{"status", tel_status_name(e.status)}, {"message", e.message}};
    run.summary = std::string("error (") + tel_status_name(e.status) + "): " + e.message;
  }
  doc["config"]["output"] = f.output;

  const std::string text = doc.dump(2);
  std::cout << text << '\n';
  if (!f.output.empty()) {
    const auto path = resolve_path(f.output);
    std::ofstream out(path);
    if (!out || !(out << text << '\n')) {
      std::cerr << "error: cannot write " << path << '\n';
      return kExitValidation;
    }
  }
  std::cerr << run.summary << '\n';
  return code;
}
