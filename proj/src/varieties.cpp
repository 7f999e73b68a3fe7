#include "pi2/varieties.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "pi2/sposet.hpp"

namespace pi2 {

namespace {

// ---------- G4ip sequent search for the {->, /\, T} fragment ----------

struct SequentKey {
  std::vector<const detail::TermNode*> gamma;  // sorted
  const detail::TermNode* goal;
  bool operator==(const SequentKey& o) const { return goal == o.goal && gamma == o.gamma; }
};

struct SequentKeyHash {
  std::size_t operator()(const SequentKey& k) const {
    std::size_t h = std::hash<const void*>()(k.goal);
    for (auto* p : k.gamma) h = h * 0x100000001b3ull ^ std::hash<const void*>()(p);
    return h;
  }
};

class G4ip {
 public:
  bool prove(std::set<Term, TermLess> gamma, Term goal) {
    saturate(gamma);
    if (goal.kind() == Conn::Top) return true;
    if (gamma.count(goal)) return true;
    SequentKey key = make_key(gamma, goal);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    bool res = prove_core(gamma, goal);
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(std::move(key), res);
    return res;
  }

 private:
  static SequentKey make_key(const std::set<Term, TermLess>& gamma, Term goal) {
    SequentKey k;
    k.gamma.reserve(gamma.size());
    for (Term t : gamma) k.gamma.push_back(t.raw());
    std::sort(k.gamma.begin(), k.gamma.end());
    k.goal = goal.raw();
    return k;
  }

  // invertible left rules to a fixpoint
  static void saturate(std::set<Term, TermLess>& gamma) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = gamma.begin(); it != gamma.end(); ++it) {
        Term f = *it;
        if (f.kind() == Conn::Top) {
          gamma.erase(it);
          changed = true;
          break;
        }
        if (f.kind() == Conn::And) {
          Term a = f.lhs(), b = f.rhs();
          gamma.erase(it);
          gamma.insert(a);
          gamma.insert(b);
          changed = true;
          break;
        }
        if (f.kind() == Conn::Imp) {
          Term a = f.lhs(), b = f.rhs();
          if (a.kind() == Conn::Top) {
            gamma.erase(it);
            gamma.insert(b);
            changed = true;
            break;
          }
          if (a.kind() == Conn::And) {
            gamma.erase(it);
            gamma.insert(Term::imp(a.lhs(), Term::imp(a.rhs(), b)));
            changed = true;
            break;
          }
          if (a.kind() == Conn::Var && gamma.count(a)) {
            gamma.erase(it);
            gamma.insert(b);
            changed = true;
            break;
          }
        }
      }
    }
  }

  bool prove_core(const std::set<Term, TermLess>& gamma, Term goal) {
    if (goal.kind() == Conn::And)
      return prove(gamma, goal.lhs()) && prove(gamma, goal.rhs());
    if (goal.kind() == Conn::Imp) {
      auto g = gamma;
      g.insert(goal.lhs());
      return prove(std::move(g), goal.rhs());
    }
    // goal is an atom: branch on ((a -> b) -> c) in gamma
    for (Term f : gamma) {
      if (f.kind() != Conn::Imp || f.lhs().kind() != Conn::Imp) continue;
      Term a = f.lhs().lhs(), b = f.lhs().rhs(), c = f.rhs();
      auto rest = gamma;
      rest.erase(f);
      auto left = rest;
      left.insert(a);
      left.insert(Term::imp(b, c));
      if (!prove(std::move(left), b)) continue;
      auto right = rest;
      right.insert(c);
      if (prove(std::move(right), goal)) return true;
    }
    return false;
  }

  std::mutex mutex_;
  std::unordered_map<SequentKey, bool, SequentKeyHash> memo_;
};

// ---------- model caches ----------

struct ModelFamily {
  std::vector<AlgebraPtr> algebras;
};

}  // namespace

struct Engine::Impl {
  EngineOptions opts;
  mutable G4ip g4ip;

  mutable std::mutex cache_mutex;
  mutable std::map<int, ModelFamily> isl_upset_algebras;  // by rooted bound
  mutable std::map<int, ModelFamily> nis_dual_algebras;   // by S-poset bound

  const ModelFamily& isl_family(int bound) const {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = isl_upset_algebras.find(bound);
    if (it == isl_upset_algebras.end()) {
      ModelFamily fam;
      for (const Poset& p : rooted_posets_upto(bound))
        fam.algebras.push_back(upset_algebra(p, Variety::ISL));
      it = isl_upset_algebras.emplace(bound, std::move(fam)).first;
    }
    return it->second;
  }

  const ModelFamily& nis_family(int bound) const {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = nis_dual_algebras.find(bound);
    if (it == nis_dual_algebras.end()) {
      ModelFamily fam;
      for (const SPoset& x : sposets_upto_iso(bound)) fam.algebras.push_back(dual_algebra(x));
      it = nis_dual_algebras.emplace(bound, std::move(fam)).first;
    }
    return it->second;
  }
};

Engine::Engine(EngineOptions opts) : impl_(std::make_unique<Impl>()) { impl_->opts = opts; }
Engine::~Engine() = default;

const EngineOptions& Engine::options() const { return impl_->opts; }

namespace {

// Scan all assignments of `vars` into `alg`; returns false iff some
// assignment makes every premise top but not the goal.
bool holds_in_algebra(const FiniteAlgebra& alg, const std::vector<Term>& premises, Term goal,
                      const std::vector<std::string>& vars) {
  const int n = alg.size;
  const int k = static_cast<int>(vars.size());
  std::vector<int> asg(k, 0);
  std::map<std::string, int> m;
  for (;;) {
    m.clear();
    for (int i = 0; i < k; i++) m[vars[i]] = asg[i];
    bool prem_ok = true;
    for (Term p : premises)
      if (eval_term(alg, p, m) != alg.top) { prem_ok = false; break; }
    if (prem_ok && eval_term(alg, goal, m) != alg.top) return false;
    int i = 0;
    while (i < k && ++asg[i] == n) asg[i++] = 0;
    if (i == k) break;
    if (k == 0) break;
  }
  return true;
}

bool equal_in_algebra(const FiniteAlgebra& alg, const std::vector<Term>& premises, Term a, Term b,
                      const std::vector<std::string>& vars) {
  const int n = alg.size;
  const int k = static_cast<int>(vars.size());
  std::vector<int> asg(k, 0);
  std::map<std::string, int> m;
  for (;;) {
    m.clear();
    for (int i = 0; i < k; i++) m[vars[i]] = asg[i];
    bool prem_ok = true;
    for (Term p : premises)
      if (eval_term(alg, p, m) != alg.top) { prem_ok = false; break; }
    if (prem_ok && eval_term(alg, a, m) != eval_term(alg, b, m)) return false;
    int i = 0;
    while (i < k && ++asg[i] == n) asg[i++] = 0;
    if (i == k) break;
    if (k == 0) break;
  }
  return true;
}

std::vector<std::string> all_vars(const std::vector<Term>& premises, Term t) {
  std::vector<Term> ts = premises;
  ts.push_back(t);
  return terms_vars(ts).names();
}

}  // namespace

// ---------- LC ----------

bool Engine::lc_valid(Term t) const { return lc_entails({}, t); }

bool Engine::lc_entails(const std::vector<Term>& premises, Term t) const {
  std::vector<std::string> vars = all_vars(premises, t);
  AlgebraPtr chain = godel_chain(static_cast<int>(vars.size()) + 2);
  return holds_in_algebra(*chain, premises, t, vars);
}

bool Engine::lc_valid_frames(Term t, int max_worlds) const {
  for (const Poset& p : prelinear_posets_upto(max_worlds)) {
    AlgebraPtr alg = upset_algebra(p, Variety::LC);
    if (!holds_in_algebra(*alg, {}, t, term_vars(t).names())) return false;
  }
  return true;
}

// ---------- ISL ----------

bool Engine::isl_valid_sequent_only(Term t) const {
  return impl_->g4ip.prove(std::set<Term, TermLess>{}, t);
}

bool Engine::isl_entails_sequent_only(const std::vector<Term>& premises, Term t) const {
  std::set<Term, TermLess> gamma(premises.begin(), premises.end());
  return impl_->g4ip.prove(std::move(gamma), t);
}

bool Engine::isl_valid_kripke_only(Term t, int bound) const {
  const auto& fam = impl_->isl_family(bound);
  std::vector<std::string> vars = term_vars(t).names();
  for (const AlgebraPtr& alg : fam.algebras)
    if (!holds_in_algebra(*alg, {}, t, vars)) return false;
  return true;
}

bool Engine::isl_valid(Term t) const { return isl_entails({}, t); }

bool Engine::isl_entails(const std::vector<Term>& premises, Term t) const {
  // fast counter-model pass, then complete sequent search
  const auto& fam = impl_->isl_family(impl_->opts.isl_fast_kripke_bound);
  std::vector<std::string> vars = all_vars(premises, t);
  for (const AlgebraPtr& alg : fam.algebras)
    if (!holds_in_algebra(*alg, premises, t, vars)) return false;
  return isl_entails_sequent_only(premises, t);
}

// ---------- NIS ----------

bool Engine::nis_valid(Term t) const { return nis_entails({}, t); }

bool Engine::nis_entails(const std::vector<Term>& premises, Term t) const {
  const auto& fam = impl_->nis_family(impl_->opts.nis_model_bound);
  std::vector<std::string> vars = all_vars(premises, t);
  for (const AlgebraPtr& alg : fam.algebras)
    if (!holds_in_algebra(*alg, premises, t, vars)) return false;
  return true;
}

// ---------- dispatch ----------

bool Engine::valid(Signature sig, Term t) const { return entails(sig, {}, t); }

bool Engine::entails(Signature sig, const std::vector<Term>& premises, Term t) const {
  switch (sig.variety) {
    case Variety::ISL: return isl_entails(premises, t);
    case Variety::LC: return lc_entails(premises, t);
    case Variety::NIS: return nis_entails(premises, t);
  }
  throw std::logic_error("unreachable");
}

bool Engine::equal(Signature sig, Term a, Term b) const { return equal_under(sig, {}, a, b); }

bool Engine::equal_under(Signature sig, const std::vector<Term>& premises, Term a, Term b) const {
  if (a == b) return true;
  switch (sig.variety) {
    case Variety::ISL:
      return isl_entails(premises, Term::imp(a, b)) && isl_entails(premises, Term::imp(b, a));
    case Variety::LC: {
      std::vector<Term> ts = premises;
      ts.push_back(a);
      ts.push_back(b);
      std::vector<std::string> vars = terms_vars(ts).names();
      AlgebraPtr chain = godel_chain(static_cast<int>(vars.size()) + 2);
      return equal_in_algebra(*chain, premises, a, b, vars);
    }
    case Variety::NIS: {
      const auto& fam = impl_->nis_family(impl_->opts.nis_model_bound);
      std::vector<Term> ts = premises;
      ts.push_back(a);
      ts.push_back(b);
      std::vector<std::string> vars = terms_vars(ts).names();
      for (const AlgebraPtr& alg : fam.algebras)
        if (!equal_in_algebra(*alg, premises, a, b, vars)) return false;
      return true;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------- evaluation families ----------

std::vector<EvalPoint> Engine::eval_points(Signature sig, const VarSet& vars,
                                           const std::vector<Term>& premises) const {
  std::vector<AlgebraPtr> algebras;
  switch (sig.variety) {
    case Variety::ISL:
      algebras = impl_->isl_family(impl_->opts.eval_family_kripke_bound).algebras;
      break;
    case Variety::LC: algebras.push_back(godel_chain(vars.size() + 2)); break;
    case Variety::NIS:
      algebras = impl_->nis_family(impl_->opts.eval_family_nis_bound).algebras;
      break;
  }
  std::vector<EvalPoint> out;
  const int k = vars.size();
  for (const AlgebraPtr& alg : algebras) {
    const int n = alg->size;
    std::vector<int> asg(k, 0);
    std::map<std::string, int> m;
    for (;;) {
      m.clear();
      for (int i = 0; i < k; i++) m[vars.names()[i]] = asg[i];
      bool prem_ok = true;
      for (Term p : premises)
        if (eval_term(*alg, p, m) != alg->top) { prem_ok = false; break; }
      if (prem_ok) out.push_back(EvalPoint{alg, asg});
      int i = 0;
      while (i < k && ++asg[i] == n) asg[i++] = 0;
      if (i == k || k == 0) break;
    }
    if (k == 0 && !premises.empty()) {
      // handled above: single empty assignment per algebra
    }
  }
  return out;
}

bool Engine::needs_confirmation(Signature sig) const {
  // LC chains are exactly separating; the NIS eval family at a smaller bound
  // must be rechecked at the decision bound; ISL merges need the prover.
  return sig.variety != Variety::LC;
}

bool Engine::confirm_equal(Signature sig, const std::vector<Term>& premises, Term a,
                           Term b) const {
  switch (sig.variety) {
    case Variety::ISL:
      return isl_entails_sequent_only(premises, Term::imp(a, b)) &&
             isl_entails_sequent_only(premises, Term::imp(b, a));
    default: return equal_under(sig, premises, a, b);
  }
}

}  // namespace pi2
