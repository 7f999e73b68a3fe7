#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pi2/algebra.hpp"
#include "pi2/syntax.hpp"

namespace pi2 {

// Finite poset on {0..n-1}; up[i] is the bitmask of {j : i <= j}, including i.
struct Poset {
  int n = 0;
  std::vector<std::uint32_t> up;

  bool leq(int a, int b) const { return (up[a] >> b) & 1; }
  std::uint32_t full() const { return n == 32 ? ~0u : ((1u << n) - 1); }
};

bool is_upset(const Poset& p, std::uint32_t set);
std::vector<std::uint32_t> upsets_of(const Poset& p);
// every principal upset linearly ordered
bool is_prelinear(const Poset& p);
bool has_root(const Poset& p);  // some element below all others

// All labeled posets on n elements (n <= 5), cached.
const std::vector<Poset>& labeled_posets(int n);
// Isomorphism-class representatives, cached.
const std::vector<Poset>& posets_upto_iso(int n);
std::vector<Poset> rooted_posets_upto(int max_size);     // iso-reduced
std::vector<Poset> prelinear_posets_upto(int max_size);  // iso-reduced

// Intuitionistic Kripke model: valuations are upsets.
struct KripkeModel {
  Poset poset;
  std::map<std::string, std::uint32_t> val;
};

bool model_persistent(const KripkeModel& m);
std::uint32_t eval_kripke(const KripkeModel& m, Term t);  // set of worlds forcing t

// Upset algebra of a poset: ISL tables (plus Or/Bot tables usable for LC
// evaluation on prelinear posets).
AlgebraPtr upset_algebra(const Poset& p, Variety variety);

// Goedel chain with k elements as an LC algebra: 0 = bot, k-1 = top.
AlgebraPtr godel_chain(int k);

}  // namespace pi2
