#pragma once

#include <optional>
#include <vector>

#include "pi2/algebra.hpp"
#include "pi2/budget.hpp"
#include "pi2/varieties.hpp"

namespace pi2 {

// A finitely generated algebra built by saturation, with one canonical
// representative term per element (first encountered in closure order) and a
// derivation of every element from the generators, usable to extend
// generator assignments to whole-carrier maps.
struct GeneratedAlgebra {
  AlgebraPtr algebra;
  VarSet gens;
  std::vector<int> gen_elems;  // element of each generator, VarSet order
  std::vector<Term> reps;      // canonical representative terms

  // op: 0 generator, 1 top, 2 bot, 3 meet, 4 imp, 5 join, 6 lax
  struct Deriv {
    int op;
    int i = -1, j = -1;
  };
  std::vector<Deriv> deriv;    // by element, in closure order 0..size-1

  int eval(Term t) const;     // evaluate at the generator embedding
  // extend a generator-image choice (VarSet order) to a full map into target
  std::vector<int> extend(const FiniteAlgebra& target, const std::vector<int>& gen_images) const;
};

GeneratedAlgebra free_algebra(const Engine& engine, Signature sig, const VarSet& gens,
                              const Budget& budget = {});

struct PresentedAlgebra {
  GeneratedAlgebra carrier;
  Presentation presentation;

  int q_of(Term t) const { return carrier.eval(t); }  // quotient map on terms
};

PresentedAlgebra finitely_presented(const Engine& engine, const Presentation& pres,
                                    const Budget& budget = {});

// Explicit quotient homomorphism F(X) ->> A; requires F(X) within budget.
Homomorphism quotient_hom(const Engine& engine, const PresentedAlgebra& a,
                          const Budget& budget = {});

// Free-algebra homomorphism induced by a substitution.
Homomorphism eta(const Engine& engine, Signature sig, const Substitution& s,
                 const Budget& budget = {});

}  // namespace pi2
