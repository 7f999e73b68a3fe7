#include "pi2/unification.hpp"

#include <algorithm>
#include <set>

namespace pi2 {

UnificationProblem::UnificationProblem(Signature sig_, VarSet vars_, VarSet restriction_,
                                       std::vector<std::pair<Term, Term>> pairs_)
    : sig(sig_), vars(std::move(vars_)), restriction(std::move(restriction_)),
      pairs(std::move(pairs_)) {
  if (!restriction.subset_of(vars))
    throw std::invalid_argument("restriction not contained in the problem variables");
  for (const auto& [l, r] : pairs) {
    if (!term_vars(l).subset_of(vars) || !term_vars(r).subset_of(vars))
      throw std::invalid_argument("pair term uses a variable outside the problem variables");
    if (!l.valid_in(sig) || !r.valid_in(sig))
      throw std::invalid_argument("pair term uses a connective outside the signature");
  }
}

std::string certificate_name(BasisCertificate c) {
  switch (c) {
    case BasisCertificate::EnumerationComplete: return "enumeration-complete";
    case BasisCertificate::VerifiedAgainstFactorization: return "verified-against-factorization";
    case BasisCertificate::ProjectiveWitness: return "projective-witness";
  }
  return "?";
}

bool check_unifier(const Engine& engine, const UnificationProblem& p, const Substitution& s) {
  if (!p.vars.subset_of(s.domain()))
    throw std::invalid_argument("substitution does not cover the problem variables");
  if (!p.restriction.empty() && !is_c_invariant(s, p.restriction)) return false;
  for (const auto& [l, r] : p.pairs)
    if (!engine.equal(p.sig, apply_substitution(s, l), apply_substitution(s, r))) return false;
  return true;
}

bool more_general(const Engine& engine, Signature sig, const Substitution& sigma,
                  const Substitution& gamma, const Budget& budget) {
  if (!(sigma.domain() == gamma.domain()))
    throw std::invalid_argument("generality comparison needs a common domain");
  GeneratedAlgebra f = free_algebra(engine, sig, gamma.codomain(), budget);
  const int n = f.algebra->size;
  std::vector<int> target;
  for (const auto& v : gamma.domain()) target.push_back(f.eval(gamma(v)));

  const auto& theta_vars = sigma.codomain().names();
  const int k = static_cast<int>(theta_vars.size());
  long total = 1;
  for (int i = 0; i < k; i++) {
    total *= n;
    if (total > budget.max_candidates)
      throw ResourceExceeded("generality witness search exceeds candidate budget");
  }
  std::vector<int> asg(k, 0);
  std::map<std::string, int> m;
  for (long c = 0; c < total; c++) {
    long rem = c;
    for (int i = 0; i < k; i++) {
      asg[i] = static_cast<int>(rem % n);
      rem /= n;
    }
    m.clear();
    for (int i = 0; i < k; i++) m[theta_vars[i]] = asg[i];
    bool ok = true;
    int vi = 0;
    for (const auto& v : sigma.domain()) {
      if (eval_term(*f.algebra, apply_substitution(sigma, Term::var(v)), m) != target[vi]) {
        ok = false;
        break;
      }
      vi++;
    }
    if (ok) return true;
  }
  return false;
}

namespace {

Substitution tuple_substitution(const GeneratedAlgebra& f, const VarSet& domain,
                                const std::vector<int>& tuple) {
  std::map<std::string, Term> m;
  for (int i = 0; i < domain.size(); i++) m.emplace(domain.names()[i], f.reps[tuple[i]]);
  VarSet cod;
  {
    std::vector<Term> images;
    for (auto& [v, t] : m) images.push_back(t);
    cod = terms_vars(images);
  }
  return Substitution(domain, cod, std::move(m));
}

// domination within End(F(X)): sigma <= tau iff some theta-tuple satisfies
// extend(theta)[tau[i]] == sigma[i] for all generators
bool tuple_leq(const GeneratedAlgebra& f, const std::vector<int>& sigma,
               const std::vector<int>& tau) {
  const int k = static_cast<int>(sigma.size());
  const int n = f.algebra->size;
  long total = 1;
  for (int i = 0; i < k; i++) total *= n;
  std::vector<int> theta(k, 0);
  for (long c = 0; c < total; c++) {
    long rem = c;
    for (int i = 0; i < k; i++) {
      theta[i] = static_cast<int>(rem % n);
      rem /= n;
    }
    std::vector<int> endo = f.extend(*f.algebra, theta);
    bool ok = true;
    for (int i = 0; i < k; i++)
      if (endo[tau[i]] != sigma[i]) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

std::vector<Term> subterms_closure(const std::vector<std::pair<Term, Term>>& pairs) {
  std::set<Term, TermLess> acc;
  std::vector<Term> stack;
  for (const auto& [l, r] : pairs) {
    stack.push_back(l);
    stack.push_back(r);
  }
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!acc.insert(t).second) continue;
    switch (t.kind()) {
      case Conn::Lax: stack.push_back(t.child()); break;
      case Conn::And:
      case Conn::Or:
      case Conn::Imp:
        stack.push_back(t.lhs());
        stack.push_back(t.rhs());
        break;
      default: break;
    }
  }
  return std::vector<Term>(acc.begin(), acc.end());
}

std::vector<Term> problem_hypotheses(const UnificationProblem& p) {
  std::vector<Term> h;
  for (const auto& [l, r] : p.pairs) {
    if (r == Term::top()) {
      h.push_back(l);
    } else if (l == Term::top()) {
      h.push_back(r);
    } else {
      h.push_back(Term::imp(l, r));
      h.push_back(Term::imp(r, l));
    }
  }
  return h;
}

std::optional<Substitution> ground_unifier(const Engine& engine, const UnificationProblem& p) {
  VarSet x = p.vars.minus(p.restriction);
  std::vector<Term> consts{Term::top()};
  if (p.sig.variety == Variety::LC) consts.push_back(Term::bot());
  const int base = static_cast<int>(consts.size());
  long total = 1;
  for (int i = 0; i < x.size(); i++) total *= base;
  for (long c = 0; c < total; c++) {
    std::map<std::string, Term> m;
    long rem = c;
    for (int i = 0; i < x.size(); i++) {
      m.emplace(x.names()[i], consts[rem % base]);
      rem /= base;
    }
    for (const auto& v : p.restriction) m.emplace(v, Term::var(v));
    Substitution s(p.vars, p.restriction, std::move(m));
    if (check_unifier(engine, p, s)) return s;
  }
  return std::nullopt;
}

UnifierBasis unify_impl(const Engine& engine, const UnificationProblem& p, const Budget& budget);

// sound variable elimination: v := t with v not in vars(t)
std::optional<UnifierBasis> try_elimination(const Engine& engine, const UnificationProblem& p,
                                            const Budget& budget) {
  for (std::size_t pi = 0; pi < p.pairs.size(); pi++) {
    for (int side = 0; side < 2; side++) {
      Term l = side == 0 ? p.pairs[pi].first : p.pairs[pi].second;
      Term r = side == 0 ? p.pairs[pi].second : p.pairs[pi].first;
      if (l.kind() != Conn::Var) continue;
      const std::string& v = l.var_name();
      if (term_vars(r).contains(v)) continue;
      VarSet reduced = p.vars.minus(VarSet({v}));
      std::map<std::string, Term> m;
      for (const auto& w : p.vars) m.emplace(w, w == v ? r : Term::var(w));
      Substitution elim(p.vars, reduced, std::move(m));
      std::vector<std::pair<Term, Term>> rest;
      for (std::size_t j = 0; j < p.pairs.size(); j++) {
        if (j == pi) continue;
        rest.emplace_back(apply_substitution(elim, p.pairs[j].first),
                          apply_substitution(elim, p.pairs[j].second));
      }
      UnificationProblem sub(p.sig, reduced, VarSet{}, std::move(rest));
      UnifierBasis inner = unify_impl(engine, sub, budget);
      UnifierBasis out{p, {}, inner.certificate, inner.notes};
      out.notes.push_back("eliminated " + v);
      for (const Substitution& beta : inner.unifiers)
        out.unifiers.push_back(compose(beta, elim));
      return out;
    }
  }
  return std::nullopt;
}

// transparent mgu: sigma unifying the pairs with pairs |- v <-> sigma(v);
// any unifier tau then satisfies tau =_E tau . sigma, so sigma is an mgu
std::optional<Substitution> transparent_witness(const Engine& engine,
                                                const UnificationProblem& p,
                                                const Budget& budget) {
  std::vector<Term> hyps = problem_hypotheses(p);
  std::vector<Term> pool = subterms_closure(p.pairs);
  pool.push_back(Term::top());
  if (p.sig.variety == Variety::LC) pool.push_back(Term::bot());
  Term big = hyps.empty() ? Term::top() : hyps.front();
  for (std::size_t i = 1; i < hyps.size(); i++) big = Term::conj(big, hyps[i]);
  for (const auto& v : p.vars) pool.push_back(Term::imp(big, Term::var(v)));

  const int per_var_cap = 16;
  std::vector<std::vector<Term>> cands;
  for (const auto& v : p.vars) {
    std::vector<Term> cv{Term::var(v)};
    for (Term t : pool) {
      if (t == Term::var(v)) continue;
      if (static_cast<int>(cv.size()) >= per_var_cap) break;
      if (engine.equal_under(p.sig, hyps, Term::var(v), t)) cv.push_back(t);
    }
    cands.push_back(std::move(cv));
  }
  long total = 1;
  for (const auto& cv : cands) {
    total *= static_cast<long>(cv.size());
    if (total > budget.max_candidates) return std::nullopt;
  }
  std::vector<std::size_t> idx(cands.size(), 0);
  for (long c = 0; c < total; c++) {
    long rem = c;
    for (std::size_t i = 0; i < cands.size(); i++) {
      idx[i] = static_cast<std::size_t>(rem % cands[i].size());
      rem /= cands[i].size();
    }
    std::map<std::string, Term> m;
    std::vector<Term> images;
    for (int i = 0; i < p.vars.size(); i++) {
      m.emplace(p.vars.names()[i], cands[i][idx[i]]);
      images.push_back(cands[i][idx[i]]);
    }
    Substitution s(p.vars, terms_vars(images), std::move(m));
    bool unifies = true;
    for (const auto& [l, r] : p.pairs)
      if (!engine.equal(p.sig, apply_substitution(s, l), apply_substitution(s, r))) {
        unifies = false;
        break;
      }
    if (unifies) return s;
  }
  return std::nullopt;
}

UnifierBasis unify_impl(const Engine& engine, const UnificationProblem& p, const Budget& budget) {
  if (!p.restriction.empty())
    throw std::invalid_argument("unify requires an empty restriction; use svr_unify");

  if (!ground_unifier(engine, p)) {
    UnifierBasis out{p, {}, BasisCertificate::EnumerationComplete,
                     {"not unifiable (closed-image check)"}};
    return out;
  }

  // endomorphism enumeration over F(X)
  bool free_feasible = true;
  std::optional<GeneratedAlgebra> f;
  try {
    f = free_algebra(engine, p.sig, p.vars, budget);
    long total = 1;
    for (int i = 0; i < p.vars.size(); i++) {
      total *= f->algebra->size;
      if (total > budget.max_candidates) { free_feasible = false; break; }
    }
  } catch (const ResourceExceeded&) {
    free_feasible = false;
  }
  if (free_feasible) {
    const GeneratedAlgebra& fx = *f;
    const int n = fx.algebra->size;
    const int k = p.vars.size();
    long total = 1;
    for (int i = 0; i < k; i++) total *= n;
    std::vector<std::vector<int>> unifiers;
    std::vector<int> tuple(k, 0);
    std::map<std::string, int> m;
    for (long c = 0; c < total; c++) {
      long rem = c;
      for (int i = 0; i < k; i++) {
        tuple[i] = static_cast<int>(rem % n);
        rem /= n;
      }
      m.clear();
      for (int i = 0; i < k; i++) m[p.vars.names()[i]] = tuple[i];
      bool ok = true;
      for (const auto& [l, r] : p.pairs)
        if (eval_term(*fx.algebra, l, m) != eval_term(*fx.algebra, r, m)) { ok = false; break; }
      if (ok) unifiers.push_back(tuple);
    }
    // mu-set extraction over the tuple preorder
    std::vector<std::vector<int>> maximal;
    for (const auto& u : unifiers) {
      bool dominated = false;
      for (auto& mx : maximal) {
        if (tuple_leq(fx, u, mx)) {
          if (tuple_leq(fx, mx, u)) {
            Substitution su = tuple_substitution(fx, p.vars, u);
            Substitution sm = tuple_substitution(fx, p.vars, mx);
            if (print_substitution(su) < print_substitution(sm)) mx = u;
          }
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      std::vector<std::vector<int>> kept;
      for (auto& mx : maximal)
        if (!tuple_leq(fx, mx, u)) kept.push_back(mx);
      kept.push_back(u);
      maximal = std::move(kept);
    }
    UnifierBasis out{p, {}, BasisCertificate::EnumerationComplete, {}};
    for (const auto& u : maximal) out.unifiers.push_back(tuple_substitution(fx, p.vars, u));
    std::sort(out.unifiers.begin(), out.unifiers.end(),
              [](const Substitution& a, const Substitution& b) {
                return print_substitution(a) < print_substitution(b);
              });
    return out;
  }

  if (auto elim = try_elimination(engine, p, budget)) return *elim;

  if (auto w = transparent_witness(engine, p, budget)) {
    UnifierBasis out{p, {*w}, BasisCertificate::ProjectiveWitness,
                     {"most general unifier certified by pairs |- v <-> image"}};
    return out;
  }

  throw ResourceExceeded("unification problem exceeds every in-budget strategy");
}

Substitution embed_c_invariant(const Substitution& s, const VarSet& c) {
  std::map<std::string, Term> m;
  for (const auto& v : s.domain()) m.emplace(v, s(v));
  for (const auto& v : c) m.emplace(v, Term::var(v));
  return Substitution(s.domain().unite(c), s.codomain().unite(c), std::move(m));
}

}  // namespace

UnifierBasis unify(const Engine& engine, const UnificationProblem& p, const Budget& budget) {
  UnifierBasis out = unify_impl(engine, p, budget);
  for (const Substitution& s : out.unifiers)
    if (!check_unifier(engine, p, s))
      throw std::logic_error("basis soundness violated: " + print_substitution(s));
  return out;
}

UnifierBasis svr_unify(const Engine& engine, const UnificationProblem& p, const Budget& budget,
                       const std::optional<std::vector<std::vector<Term>>>& supplied_factors) {
  if (p.restriction.empty()) return unify(engine, p, budget);
  const VarSet& c = p.restriction;
  VarSet x = p.vars.minus(c);

  if (!ground_unifier(engine, p)) {
    if (supplied_factors) {
      // still honor the reduction: nothing unifies the factors either
    }
    return UnifierBasis{p, {}, BasisCertificate::EnumerationComplete,
                        {"not C-unifiable (closed-image check)"}};
  }

  std::vector<Term> delta = problem_hypotheses(p);
  std::vector<std::vector<Term>> factors;
  BasisCertificate cert = BasisCertificate::EnumerationComplete;
  std::vector<std::string> notes;
  if (supplied_factors) {
    for (const auto& theta : *supplied_factors) {
      for (Term t : theta) {
        VarSet tv = term_vars(t);
        for (const auto& cv : c)
          if (tv.contains(cv))
            throw std::invalid_argument("supplied factor mentions a restricted variable");
      }
      if (!verify_factor(engine, p.sig, theta, delta, c))
        throw std::invalid_argument("supplied factor fails condition (1)");
    }
    factors = *supplied_factors;
    cert = BasisCertificate::VerifiedAgainstFactorization;
    notes.push_back("factorization supplied; condition (1) verified");
  } else {
    ForallFactorization ff = forall_factorize(engine, p.sig, delta, c, budget, x);
    for (const Factor& fct : ff.factors) factors.push_back(fct.formulas);
    notes.push_back("factorization enumerated with " + std::to_string(factors.size()) +
                    " factor(s)");
  }
  if (factors.empty())
    throw std::logic_error("C-unifiable problem produced an empty factorization");

  std::vector<Substitution> candidates;
  for (const auto& theta : factors) {
    std::vector<std::pair<Term, Term>> sub_pairs;
    for (Term t : theta) sub_pairs.emplace_back(t, Term::top());
    UnificationProblem sub(p.sig, x, VarSet{}, std::move(sub_pairs));
    UnifierBasis b = unify(engine, sub, budget);
    if (b.certificate == BasisCertificate::ProjectiveWitness &&
        cert == BasisCertificate::EnumerationComplete)
      cert = BasisCertificate::ProjectiveWitness;
    for (const Substitution& s : b.unifiers) candidates.push_back(embed_c_invariant(s, c));
  }

  // mu-set of the union
  std::vector<Substitution> maximal;
  for (const Substitution& u : candidates) {
    bool dominated = false;
    for (auto& mx : maximal) {
      if (more_general(engine, p.sig, mx, u, budget)) {
        if (more_general(engine, p.sig, u, mx, budget) &&
            print_substitution(u) < print_substitution(mx))
          mx = u;
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::vector<Substitution> kept;
    for (auto& mx : maximal)
      if (!more_general(engine, p.sig, u, mx, budget)) kept.push_back(mx);
    kept.push_back(u);
    maximal = std::move(kept);
  }
  std::sort(maximal.begin(), maximal.end(), [](const Substitution& a, const Substitution& b) {
    return print_substitution(a) < print_substitution(b);
  });

  UnifierBasis out{p, std::move(maximal), cert, std::move(notes)};
  for (const Substitution& s : out.unifiers)
    if (!check_unifier(engine, p, s))
      throw std::logic_error("svr basis soundness violated: " + print_substitution(s));
  return out;
}

}  // namespace pi2
