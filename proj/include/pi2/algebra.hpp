#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pi2/budget.hpp"
#include "pi2/syntax.hpp"

namespace pi2 {

// Finite algebra with explicit operation tables. Tables are flattened
// row-major; bot/or/lax are present only when the signature has them.
struct FiniteAlgebra {
  Signature sig;
  int size = 0;
  int top = -1;
  int bot = -1;
  std::vector<int> and_table;  // size*size
  std::vector<int> or_table;   // size*size, LC only
  std::vector<int> imp_table;  // size*size
  std::vector<int> lax_table;  // size, NIS only
  std::vector<std::string> names;

  int meet(int a, int b) const { return and_table[a * size + b]; }
  int join(int a, int b) const { return or_table[a * size + b]; }
  int imp(int a, int b) const { return imp_table[a * size + b]; }
  int lax(int a) const { return lax_table[a]; }
  bool leq(int a, int b) const { return meet(a, b) == a; }
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

// Returns a description of the first violated variety law, or nullopt.
std::optional<std::string> audit_variety_laws(const FiniteAlgebra& a);

int eval_term(const FiniteAlgebra& a, Term t, const std::map<std::string, int>& asg);

struct Homomorphism {
  AlgebraPtr source;
  AlgebraPtr target;
  std::vector<int> map;

  int operator()(int e) const { return map[e]; }
};

// Throws std::invalid_argument when map does not preserve some table entry.
void check_homomorphism(const Homomorphism& h);
bool is_homomorphism_map(const FiniteAlgebra& a, const FiniteAlgebra& b,
                         const std::vector<int>& map);

// Partition of a carrier compatible with all operations.
struct Congruence {
  AlgebraPtr algebra;
  std::vector<int> block;  // element -> block id, normalized by first occurrence
  int block_count = 0;

  bool related(int a, int b) const { return block[a] == block[b]; }
  bool operator==(const Congruence& o) const { return block == o.block; }
};

Congruence identity_congruence(AlgebraPtr a);
Congruence total_congruence(AlgebraPtr a);
Congruence congruence_generated(AlgebraPtr a, const std::vector<std::pair<int, int>>& pairs);
bool congruence_leq(const Congruence& fine, const Congruence& coarse);  // fine refines coarse
bool is_congruence(const FiniteAlgebra& a, const std::vector<int>& block);

// All congruences via join-closure of the principal ones.
std::vector<Congruence> all_congruences(AlgebraPtr a, const Budget& budget = {});

struct QuotientResult {
  AlgebraPtr algebra;
  Homomorphism projection;
};
QuotientResult quotient(AlgebraPtr a, const Congruence& c);

Congruence kernel(const Homomorphism& h);

struct SubalgebraResult {
  AlgebraPtr algebra;
  Homomorphism inclusion;          // sub -> ambient
  std::vector<int> ambient_index;  // sub element -> ambient element
};
SubalgebraResult generated_subalgebra(AlgebraPtr b, const std::vector<int>& subset);

struct ImageFactorization {
  AlgebraPtr image;
  Homomorphism projection;  // source ->> image
  Homomorphism inclusion;   // image -> target
};
ImageFactorization image_factorization(const Homomorphism& h);

std::vector<Homomorphism> enumerate_homomorphisms(AlgebraPtr a, AlgebraPtr b,
                                                  const Budget& budget = {});

bool isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b);

// Presentation: generators plus relation pairs over them.
struct Presentation {
  Signature sig;
  VarSet generators;
  std::vector<std::pair<Term, Term>> relations;

  Presentation(Signature sig, VarSet gens, std::vector<std::pair<Term, Term>> rels);
};

}  // namespace pi2
