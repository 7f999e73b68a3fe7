#include "pi2/interpolation.hpp"

#include <algorithm>

namespace pi2 {

std::vector<Term> render_congruence(const GeneratedAlgebra& fx, const Congruence& c) {
  const FiniteAlgebra& alg = *fx.algebra;
  // least element of the top block; the top block is a filter, so the meet
  // of its members generates it
  int m = alg.top;
  for (int e = 0; e < alg.size; e++)
    if (c.related(e, alg.top)) m = alg.meet(m, e);
  return {fx.reps[m]};
}

Congruence congruence_of_formulas(const GeneratedAlgebra& fx, const std::vector<Term>& theta) {
  std::vector<std::pair<int, int>> pairs;
  for (Term t : theta) pairs.emplace_back(fx.eval(t), fx.algebra->top);
  return congruence_generated(fx.algebra, pairs);
}

bool verify_factor(const Engine& engine, Signature sig, const std::vector<Term>& theta,
                   const std::vector<Term>& delta, const VarSet& bound) {
  (void)bound;
  for (Term d : delta)
    if (!engine.entails(sig, theta, d)) return false;
  return true;
}

ForallFactorization forall_factorize(const Engine& engine, Signature sig,
                                     const std::vector<Term>& delta, const VarSet& bound,
                                     const Budget& budget,
                                     const std::optional<VarSet>& free_override) {
  VarSet free_vars = free_override ? *free_override : terms_vars(delta).minus(bound);
  GeneratedAlgebra fx = free_algebra(engine, sig, free_vars, budget);
  std::vector<Congruence> congs = all_congruences(fx.algebra, budget);

  std::vector<int> qualifying;
  std::vector<std::vector<Term>> rendered(congs.size());
  for (std::size_t i = 0; i < congs.size(); i++) {
    rendered[i] = render_congruence(fx, congs[i]);
    if (verify_factor(engine, sig, rendered[i], delta, bound))
      qualifying.push_back(static_cast<int>(i));
  }
  // minimal qualifying congruences (congruence-inclusion order)
  std::vector<int> minimal;
  for (int i : qualifying) {
    bool has_smaller = false;
    for (int j : qualifying) {
      if (i == j) continue;
      if (congruence_leq(congs[j], congs[i]) && !(congs[j] == congs[i])) {
        has_smaller = true;
        break;
      }
    }
    if (!has_smaller) minimal.push_back(i);
  }
  ForallFactorization out;
  out.sig = sig;
  out.bound = bound;
  out.free = free_vars;
  out.provenance = "enumerated";
  for (int i : minimal) out.factors.push_back(Factor{rendered[i], congs[i]});
  std::sort(out.factors.begin(), out.factors.end(), [](const Factor& a, const Factor& b) {
    return TermLess()(a.formulas.front(), b.formulas.front());
  });
  return out;
}

bool pullback_stability_test(const Engine& engine, Signature sig, const std::vector<Term>& delta,
                             const VarSet& bound, const Substitution& s, const Budget& budget) {
  // s acts on the free variables; bound variables stay fixed
  VarSet free_vars = terms_vars(delta).minus(bound);
  if (!free_vars.subset_of(s.domain()))
    throw std::invalid_argument("substitution does not cover the free variables");
  for (const auto& v : s.domain()) {
    VarSet iv = term_vars(s(v));
    for (const auto& c : bound)
      if (iv.contains(c))
        throw std::invalid_argument("substitution image touches the bound variables");
  }
  ForallFactorization base = forall_factorize(engine, sig, delta, bound, budget);

  // substituted delta, with bound variables carried along identically
  VarSet ext_dom = s.domain().unite(bound);
  VarSet ext_cod = s.codomain().unite(bound);
  std::map<std::string, Term> m;
  for (const auto& v : s.domain()) m.emplace(v, s(v));
  for (const auto& c : bound) m.emplace(c, Term::var(c));
  Substitution ext(ext_dom, ext_cod, std::move(m));
  std::vector<Term> delta_sub = apply_substitution(ext, delta);

  std::vector<std::vector<Term>> pulled;
  for (const Factor& f : base.factors) pulled.push_back(apply_substitution(ext, f.formulas));

  // condition (1) for every pulled-back factor
  for (const auto& theta : pulled)
    if (!verify_factor(engine, sig, theta, delta_sub, bound)) return false;

  // condition (2): every minimal qualifying congruence of the substituted
  // problem must lie above some pulled-back factor's congruence, i.e. its
  // formulas must entail that factor's formulas
  ForallFactorization fresh = forall_factorize(engine, sig, delta_sub, bound, budget,
                                               terms_vars(delta_sub).minus(bound));
  for (const Factor& xi : fresh.factors) {
    bool dominated = false;
    for (const auto& theta : pulled) {
      bool all = true;
      for (Term t : theta)
        if (!engine.entails(sig, xi.formulas, t)) { all = false; break; }
      if (all) { dominated = true; break; }
    }
    if (!dominated) return false;
  }
  return true;
}

}  // namespace pi2
