#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pi2/algebra.hpp"
#include "pi2/budget.hpp"
#include "pi2/free_algebra.hpp"
#include "pi2/varieties.hpp"

namespace pi2 {

// One factor: a finite set of bound-variable-free formulas together with the
// congruence on F(X) it renders.
struct Factor {
  std::vector<Term> formulas;
  Congruence congruence;
};

struct ForallFactorization {
  Signature sig;
  VarSet bound;   // C
  VarSet free;    // X
  std::vector<Factor> factors;
  std::string provenance;  // "enumerated" or "supplied-verified"
};

// Formula set rendered from a congruence: the representative of the least
// element of the top block (a principal filter generator for these
// varieties). Round-trips through congruence_generated.
std::vector<Term> render_congruence(const GeneratedAlgebra& fx, const Congruence& c);
Congruence congruence_of_formulas(const GeneratedAlgebra& fx, const std::vector<Term>& theta);

// Minimal qualifying congruences of F(X) for delta, rendered as formula sets.
// `free_override` fixes X when it should exceed vars(delta) \ bound.
ForallFactorization forall_factorize(const Engine& engine, Signature sig,
                                     const std::vector<Term>& delta, const VarSet& bound,
                                     const Budget& budget = {},
                                     const std::optional<VarSet>& free_override = {});

// Condition (1): theta |- delta.
bool verify_factor(const Engine& engine, Signature sig, const std::vector<Term>& theta,
                   const std::vector<Term>& delta, const VarSet& bound);

// Pulls the computed factorization of delta back along s and checks it is a
// factorization of s(delta), against a freshly computed one.
bool pullback_stability_test(const Engine& engine, Signature sig, const std::vector<Term>& delta,
                             const VarSet& bound, const Substitution& s,
                             const Budget& budget = {});

}  // namespace pi2
