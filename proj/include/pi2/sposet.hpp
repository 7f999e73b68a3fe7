#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pi2/algebra.hpp"
#include "pi2/kripke.hpp"

namespace pi2 {

// Finite poset with a distinguished subset S.
struct SPoset {
  Poset poset;
  std::uint32_t s = 0;
  std::vector<std::string> labels;  // optional element names for I/O

  int size() const { return poset.n; }
  bool in_s(int x) const { return (s >> x) & 1; }
};

// Partial map between S-posets: dom is a bitmask of source elements,
// map[x] is meaningful only for x in dom.
struct PartialMap {
  SPoset source;
  SPoset target;
  std::uint32_t dom = 0;
  std::vector<int> map;

  bool defined(int x) const { return (dom >> x) & 1; }
  int operator()(int x) const { return map[x]; }
};

PartialMap identity_map(const SPoset& x);
PartialMap compose_partial(const PartialMap& outer, const PartialMap& inner);

struct MorphismCheck {
  bool ok = true;
  std::string violated;  // first violated condition, e.g. "(iii)"
};

// Conditions:
//  (i)   x<y in dom  =>  f(x)<f(y)
//  (ii)  x in dom, f(x)<y  =>  exists x'>x in dom with f(x')=y
//  (iii) f^{-1}(T) = dom /\ S
//  (iv)  s in S, s<=x, x in dom  =>  exists s',x' in dom with s<=s'<=x', s' in S, f(x')=f(x)
MorphismCheck is_morphism(const PartialMap& f);
bool is_total_injective_morphism(const PartialMap& f);
bool is_surjective(const PartialMap& f);

bool is_antichain(const SPoset& x, std::uint32_t a);
std::vector<std::uint32_t> antichains_of(const SPoset& x);
std::uint32_t immediate_successors(const SPoset& x, int e);

// All s in S whose immediate-successor set equals the antichain exactly.
std::vector<int> find_covers(const SPoset& x, std::uint32_t antichain);

// Every antichain not contained in S has a cover.
bool is_projective_dual(const SPoset& x);

// Retract r with r.e = id, built top-down by height; requires a total
// injective morphism e and is_projective_dual(e.source).
PartialMap build_retract(const PartialMap& e);

// Upsets with the nucleus l(U) = {x : forall s in S, x<=s => s in U}.
AlgebraPtr dual_algebra(const SPoset& x);
std::vector<std::uint32_t> dual_carrier_upsets(const SPoset& x);

// Contravariant dual of a morphism: h(U) = {x : forall x'>=x in dom, f(x') in U}.
Homomorphism dual_of_map(const PartialMap& f);

// Iso-class representatives of S-posets with <= max_size elements, cached.
const std::vector<SPoset>& sposets_upto_iso(int max_size);

// All partial maps X -> Y passing is_morphism, deterministic order.
std::vector<PartialMap> enumerate_morphisms(const SPoset& x, const SPoset& y);

}  // namespace pi2
