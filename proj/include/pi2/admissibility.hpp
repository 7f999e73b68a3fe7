#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pi2/budget.hpp"
#include "pi2/kripke.hpp"
#include "pi2/syntax.hpp"
#include "pi2/unification.hpp"
#include "pi2/varieties.hpp"

namespace pi2 {

enum class Verdict { Admissible, NotAdmissible, UndecidedResource };
enum class CertificationPath { FactorizationSynthesized, FactorVerified };

std::string verdict_name(Verdict v);
std::string certification_path_name(CertificationPath p);

struct AdmissibilityVerdict {
  Verdict verdict = Verdict::UndecidedResource;
  std::optional<Substitution> witness;  // NOT_ADMISSIBLE only
  CertificationPath path = CertificationPath::FactorizationSynthesized;
  std::vector<std::string> notes;
};

AdmissibilityVerdict check_admissible(
    const Engine& engine, const Pi2Rule& rule, const Budget& budget = {},
    const std::optional<std::vector<std::vector<Term>>>& supplied_factors = {});

// Density-rule shape: premise g -> ((p->r) \/ (r->q) \/ c) with bound {r},
// expected factor g -> ((p->q) \/ c).
struct TTShape {
  std::string g, p, q, c, r;
};
std::optional<TTShape> match_tt_rule(const Pi2Rule& rule);

// Given a prelinear model and a world x with x |= g, x |/= c and some
// y >= x with y |= p, y |/= q, splice a duplicate of y immediately above it,
// let r hold exactly strictly above y, and return the expansion; the premise
// instance fails at x there.
KripkeModel tt_expansion_refuter(const KripkeModel& model, int x, const TTShape& names = TTShape{"g", "p", "q", "c", "r"});

// Exhaustive certification of the expansion argument on all prelinear models
// with at most max_worlds worlds: every world refuting the factor admits the
// expansion, and the expansion refutes the premise there.
bool certify_tt_expansion(const TTShape& names, int max_worlds);

// Bounded search for a C-invariant substitution unifying every premise while
// the conclusion fails; no verdict claim when none is found.
std::optional<Substitution> falsify_admissibility(const Engine& engine, const Pi2Rule& rule,
                                                  const Budget& budget = {});

}  // namespace pi2
