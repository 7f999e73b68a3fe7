#pragma once

#include "json.hpp"
#include "pi2/admissibility.hpp"
#include "pi2/sposet.hpp"
#include "pi2/unification.hpp"

namespace pi2 {

using Json = nlohmann::ordered_json;

UnificationProblem problem_from_json(const Json& j);
Json problem_to_json(const UnificationProblem& p);

Pi2Rule rule_from_json(const Json& j);
std::optional<std::vector<std::vector<Term>>> factorization_from_json(const Json& j,
                                                                      const Signature& sig);

SPoset sposet_from_json(const Json& j);
Json sposet_to_json(const SPoset& x);

// {"dom": [...], "map": {"a": "b", ...}} against explicit source/target
PartialMap partial_map_from_json(const Json& source, const Json& target, const Json& map);

Json substitution_to_json(const Substitution& s);
Json basis_to_json(const UnifierBasis& b);
Json verdict_to_json(const AdmissibilityVerdict& v);

}  // namespace pi2
