#pragma once

// JSON views of library results, used by the C interface.

#include "json.hpp"

#include "testel/certify.hpp"
#include "testel/density.hpp"
#include "testel/frattini.hpp"
#include "testel/net.hpp"

namespace testel::report {

using Json = nlohmann::ordered_json;

Json big(const BigInt& v);
Json word(const Word& w);
Json net(const NetResult& r, const Group& group);
Json coset(const CosetResult& r, const Group& group, const FiniteQuotient& q, const Word& w);
Json certificate(const Certificate& c, const Word& w, const Group& group);
Json frattini(const Word& w, const Group& group, int p, std::size_t max_cosets);
Json bound(const BoundReport& b);
Json census(const CensusRecord& r);
Json chain(const CoveringChainReport& r, const std::string& subset, const std::vector<Word>& translates);
Json audit(const NetAuditReport& r);
Json schreier(const SchreierConstants& c, const FrattiniLayer& layer);
Json ball(const std::vector<BallCheck>& checks, int rank);

}  // namespace testel::report
