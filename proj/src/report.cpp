#include "report.hpp"

#include <limits>

namespace testel::report {

Json big(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return v.str();
}

Json word(const Word& w) { return to_string(w); }

namespace {

Json optional_word(const std::optional<Word>& w) { return w ? word(*w) : Json(nullptr); }

Json trace_step(const TraceStep& s) {
  Json j;
  j["step"] = s.name;
  j["exponents"] = s.exponents;
  j["subset"] = s.subset;
  j["power"] = s.power;
  j["cost"] = s.cost;
  j["note"] = s.note;
  return j;
}

}  // namespace

Json net(const NetResult& r, const Group& group) {
  Json j;
  j["input"] = word(r.input);
  j["output"] = word(r.output);
  j["output_length"] = r.output.length();
  j["adjusted"] = optional_word(r.adjusted);
  j["layer2_length"] = r.layer2 ? Json(r.layer2->length()) : Json(nullptr);
  j["distance"] = r.distance;
  j["distance_kind"] = r.distance_is_geodesic ? "geodesic" : "trace_cost";
  j["trace_cost"] = r.trace_cost;
  j["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
  j["within_bound"] = r.bound ? Json(r.distance <= *r.bound) : Json(nullptr);
  j["prime"] = r.prime;
  j["output_in_frattini"] = in_frattini(r.output, group, r.prime);
  j["status"] = r.status;
  j["vetting_bound"] = r.vetting_bound;
  j["subsets_tried"] = r.subsets_tried;
  j["trace"] = Json::array();
  for (const auto& s : r.trace) j["trace"].push_back(trace_step(s));
  return j;
}

Json coset(const CosetResult& r, const Group& group, const FiniteQuotient& q, const Word& w) {
  Json j;
  Json quotient;
  quotient["degree"] = q.degree;
  quotient["images"] = Json::array();
  for (const auto& p : q.images) quotient["images"].push_back(to_cycles(p));
  quotient["order"] = r.quotient_order;
  j["quotient"] = quotient;
  j["prime"] = r.prime;
  j["first_exponents"] = r.first_exponents;
  j["second_exponents"] = r.second_exponents;
  j["word_image"] = to_cycles(evaluate(q.images, w.rank() == group.rank() ? w : w.widened(group.rank())));
  j["output_image"] = to_cycles(evaluate(q.images, r.net.output));
  j["same_coset"] = r.same_coset;
  j["net"] = net(r.net, group);
  return j;
}

Json certificate(const Certificate& c, const Word& w, const Group& group) {
  Json j;
  j["word"] = word(w);
  j["status"] = to_string(c.status);
  j["reason"] = c.reason;
  j["search_bound"] = c.search_bound;
  j["examined"] = c.examined;
  j["undecided"] = c.undecided;
  if (c.witness) {
    Json wj;
    wj["images"] = Json::array();
    for (const auto& img : c.witness->images) wj["images"].push_back(word(img));
    wj["text"] = to_string(*c.witness);
    j["witness"] = wj;
    j["witness_verified"] = verify_negative(w, group, c);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json frattini(const Word& w, const Group& group, int p, std::size_t max_cosets) {
  Json j;
  j["word"] = word(w);
  j["prime"] = p;
  j["exponent_sums"] = exponent_sums(w, group, p).entries;
  const bool in_phi = in_frattini(w, group, p);
  j["in_frattini"] = in_phi;
  const auto adj = frattini_adjust(w, group, p);
  Json a;
  a["adjusted"] = word(adj.adjusted);
  a["exponents"] = adj.exponents;
  a["flipped"] = adj.flipped ? Json(*adj.flipped) : Json(nullptr);
  a["cost"] = adj.cost;
  j["adjust"] = a;
  j["in_frattini2"] = in_phi ? Json(in_frattini2(w, group, p, max_cosets)) : Json(nullptr);
  return j;
}

Json bound(const BoundReport& b) {
  Json j;
  j["name"] = b.name;
  Json params = Json::object();
  for (const auto& [k, v] : b.params) params[k] = v;
  j["params"] = params;
  j["exact"] = b.exact ? Json(*b.exact) : Json(nullptr);
  j["exact_digits"] = b.exact_digits;
  j["exact_elided"] = b.exact_elided;
  j["decimal"] = b.decimal;
  j["precision"] = b.precision;
  return j;
}

Json census(const CensusRecord& r) {
  Json j;
  j["rank"] = r.rank;
  j["k"] = r.radius;
  j["L"] = r.search_bound;
  j["vetting_bound"] = r.vetting_bound;
  j["seed"] = r.seed;
  j["positive"] = r.positive;
  j["positive_turner"] = r.positive_turner;
  j["positive_net_candidate"] = r.positive_net;
  j["negative"] = r.negative;
  j["unknown"] = r.unknown;
  j["ball_size"] = big(r.ball);
  j["classified"] = r.classified;
  j["partial"] = r.partial;
  j["sum_check"] = BigInt(r.total()) == (r.partial ? BigInt(r.classified) : r.ball);
  if (r.classified > 0) {
    const double n = static_cast<double>(r.classified);
    j["ratios"] = {{"positive", static_cast<double>(r.positive) / n},
                   {"negative", static_cast<double>(r.negative) / n},
                   {"unknown", static_cast<double>(r.unknown) / n}};
  }
  return j;
}

Json chain(const CoveringChainReport& r, const std::string& subset, const std::vector<Word>& translates) {
  Json j;
  j["subset"] = subset;
  j["rank"] = r.rank;
  j["k"] = r.radius;
  j["C"] = r.translate_radius;
  j["translates"] = Json::array();
  for (const auto& g : translates) j["translates"].push_back(word(g));
  j["ball_k"] = big(r.ball_k);
  j["ball_k_minus_C"] = big(r.ball_k_minus_c);
  j["ball_C"] = big(r.ball_c);
  j["subset_in_ball"] = big(r.subset_in_ball);
  j["translate_counts"] = Json::array();
  for (const auto& c : r.translate_counts) j["translate_counts"].push_back(big(c));
  j["uncovered"] = big(r.uncovered);
  j["first_uncovered"] = r.first_uncovered ? word(*r.first_uncovered) : Json(nullptr);
  j["checks"] = {{"covering", r.covering},
                 {"injection", r.injection},
                 {"ball_product", r.ball_product},
                 {"chain", r.chain}};
  j["passed"] = r.passed();
  return j;
}

Json audit(const NetAuditReport& r) {
  Json j;
  j["rank"] = r.rank;
  j["k"] = r.radius;
  j["vetting_bound"] = r.vetting_bound;
  j["bound"] = r.bound;
  j["elements"] = r.elements;
  j["max_distance"] = r.max_distance;
  Json hist = Json::object();
  for (const auto& [d, c] : r.histogram) hist[std::to_string(d)] = c;
  j["histogram"] = hist;
  Json status = Json::object();
  for (const auto& [s, c] : r.status_counts) status[s] = c;
  j["status_counts"] = status;
  j["passed"] = r.max_distance <= r.bound;
  return j;
}

Json schreier(const SchreierConstants& c, const FrattiniLayer& layer) {
  Json j;
  j["group"] = c.group;
  j["prime"] = c.prime;
  j["vertices"] = c.vertices;
  j["schreier_generators"] = c.schreier_generators;
  j["relation_rank"] = c.relation_rank;
  j["basis_generators"] = c.basis;
  j["expected_basis"] = c.expected_basis ? Json(*c.expected_basis) : Json(nullptr);
  j["max_generator_length"] = c.max_generator_length;
  j["length_bound"] = c.length_bound ? Json(c.length_bound) : Json(nullptr);
  j["transversal_max_length"] = layer.schreier().transversal().max_length();
  bool passed = !c.expected_basis || *c.expected_basis == c.basis;
  if (c.length_bound) passed = passed && c.max_generator_length <= c.length_bound;
  j["passed"] = passed;
  return j;
}

Json ball(const std::vector<BallCheck>& checks, int rank) {
  Json j;
  j["rank"] = rank;
  j["rows"] = Json::array();
  bool ok = true;
  for (const auto& c : checks) {
    const bool match = BigInt(c.enumerated) == c.formula;
    ok = ok && match;
    j["rows"].push_back({{"k", c.radius}, {"formula", big(c.formula)}, {"enumerated", c.enumerated},
                         {"match", match}});
  }
  j["passed"] = ok;
  return j;
}

}  // namespace testel::report
