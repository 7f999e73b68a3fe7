#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pi2/budget.hpp"
#include "pi2/free_algebra.hpp"
#include "pi2/interpolation.hpp"
#include "pi2/syntax.hpp"
#include "pi2/varieties.hpp"

namespace pi2 {

struct UnificationProblem {
  Signature sig;
  VarSet vars;         // X union C
  VarSet restriction;  // C, possibly empty
  std::vector<std::pair<Term, Term>> pairs;

  UnificationProblem(Signature sig, VarSet vars, VarSet restriction,
                     std::vector<std::pair<Term, Term>> pairs);
};

enum class BasisCertificate {
  EnumerationComplete,
  VerifiedAgainstFactorization,
  ProjectiveWitness,
};

std::string certificate_name(BasisCertificate c);

struct UnifierBasis {
  UnificationProblem problem;
  std::vector<Substitution> unifiers;
  BasisCertificate certificate;
  std::vector<std::string> notes;
};

// True iff s is C-invariant for the problem's restriction and equates every
// pair modulo the variety.
bool check_unifier(const Engine& engine, const UnificationProblem& p, const Substitution& s);

// True iff gamma is less general than sigma: gamma =_E theta . sigma for
// some theta with images drawn from the free algebra over gamma's codomain.
bool more_general(const Engine& engine, Signature sig, const Substitution& sigma,
                  const Substitution& gamma, const Budget& budget = {});

// Standard unification (restriction must be empty): a finite complete basis
// of maximal unifiers, pairwise incomparable. Empty basis means unsolvable.
UnifierBasis unify(const Engine& engine, const UnificationProblem& p, const Budget& budget = {});

// Unification with simple variable restriction via forall-factorization.
UnifierBasis svr_unify(const Engine& engine, const UnificationProblem& p,
                       const Budget& budget = {},
                       const std::optional<std::vector<std::vector<Term>>>& supplied_factors = {});

}  // namespace pi2
