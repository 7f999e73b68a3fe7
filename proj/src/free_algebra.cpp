#include "pi2/free_algebra.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

namespace pi2 {

int GeneratedAlgebra::eval(Term t) const {
  std::map<std::string, int> asg;
  for (int i = 0; i < gens.size(); i++) asg[gens.names()[i]] = gen_elems[i];
  return eval_term(*algebra, t, asg);
}

std::vector<int> GeneratedAlgebra::extend(const FiniteAlgebra& target,
                                          const std::vector<int>& gen_images) const {
  std::vector<int> map(algebra->size, -1);
  int gi = 0;
  for (int e = 0; e < algebra->size; e++) {
    const Deriv& d = deriv[e];
    switch (d.op) {
      case 0: map[e] = gen_images[gi++]; break;
      case 1: map[e] = target.top; break;
      case 2: map[e] = target.bot; break;
      case 3: map[e] = target.meet(map[d.i], map[d.j]); break;
      case 4: map[e] = target.imp(map[d.i], map[d.j]); break;
      case 5: map[e] = target.join(map[d.i], map[d.j]); break;
      case 6: map[e] = target.lax(map[d.i]); break;
    }
  }
  return map;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

// Saturation by closure under the operations. Elements are keyed by their
// value vectors over the engine's evaluation family; candidate vectors are
// computed pointwise from parent vectors via the family's tables, and vector
// collisions are confirmed by the exact decider where the family alone is
// not separating.
GeneratedAlgebra saturate(const Engine& engine, Signature sig, const VarSet& gens,
                          const std::vector<Term>& premise_formulas, const Budget& budget) {
  std::vector<EvalPoint> points = engine.eval_points(sig, gens, premise_formulas);
  const bool confirm = engine.needs_confirmation(sig);
  const std::size_t np = points.size();

  struct Elem {
    Term rep;
    std::vector<int> vec;
    GeneratedAlgebra::Deriv deriv;
  };
  std::vector<Elem> elems;
  std::unordered_map<std::vector<int>, std::vector<int>, VecHash> by_vec;

  auto vec_of_term = [&](Term t) {
    std::vector<int> v(np);
    std::map<std::string, int> asg;
    for (std::size_t p = 0; p < np; p++) {
      asg.clear();
      for (int i = 0; i < gens.size(); i++)
        asg[gens.names()[i]] = points[p].assignment[i];
      v[p] = eval_term(*points[p].algebra, t, asg);
    }
    return v;
  };

  auto find_or_add = [&](Term t, std::vector<int> v, GeneratedAlgebra::Deriv d) -> int {
    auto it = by_vec.find(v);
    if (it != by_vec.end()) {
      for (int id : it->second)
        if (!confirm || engine.confirm_equal(sig, premise_formulas, t, elems[id].rep)) return id;
    }
    int id = static_cast<int>(elems.size());
    if (id >= budget.max_carrier)
      throw ResourceExceeded("free/presented algebra carrier exceeds budget (" +
                             std::to_string(budget.max_carrier) + " elements)");
    by_vec[v].push_back(id);
    elems.push_back(Elem{t, std::move(v), d});
    return id;
  };

  GeneratedAlgebra out;
  out.gens = gens;
  const int top_id = find_or_add(Term::top(), vec_of_term(Term::top()), {1});
  int bot_id = -1;
  if (sig.variety == Variety::LC) bot_id = find_or_add(Term::bot(), vec_of_term(Term::bot()), {2});
  for (const auto& g : gens.names())
    out.gen_elems.push_back(find_or_add(Term::var(g), vec_of_term(Term::var(g)), {0}));

  struct LogEntry {
    int op, i, j, result;
  };
  std::vector<LogEntry> log;

  auto apply_binary = [&](int op, std::size_t i, std::size_t j) {
    std::vector<int> v(np);
    for (std::size_t p = 0; p < np; p++) {
      const FiniteAlgebra& a = *points[p].algebra;
      int x = elems[i].vec[p], y = elems[j].vec[p];
      v[p] = op == 3 ? a.meet(x, y) : (op == 4 ? a.imp(x, y) : a.join(x, y));
    }
    Term t = op == 3 ? Term::conj(elems[i].rep, elems[j].rep)
                     : (op == 4 ? Term::imp(elems[i].rep, elems[j].rep)
                                : Term::disj(elems[i].rep, elems[j].rep));
    int id = find_or_add(t, std::move(v), {op, (int)i, (int)j});
    log.push_back({op, (int)i, (int)j, id});
  };

  auto apply_lax = [&](std::size_t i) {
    std::vector<int> v(np);
    for (std::size_t p = 0; p < np; p++) v[p] = points[p].algebra->lax(elems[i].vec[p]);
    int id = find_or_add(Term::lax(elems[i].rep), std::move(v), {6, (int)i});
    log.push_back({6, (int)i, -1, id});
  };

  std::size_t prev = 0;
  for (;;) {
    std::size_t cur = elems.size();
    if (prev == cur) break;
    for (std::size_t i = 0; i < cur; i++) {
      for (std::size_t j = 0; j < cur; j++) {
        if (i < prev && j < prev) continue;
        apply_binary(3, i, j);
        apply_binary(4, i, j);
        if (sig.variety == Variety::LC) apply_binary(5, i, j);
      }
      if (sig.variety == Variety::NIS && i >= prev) apply_lax(i);
    }
    prev = cur;
  }

  const int n = static_cast<int>(elems.size());
  auto alg = std::make_shared<FiniteAlgebra>();
  alg->sig = sig;
  alg->size = n;
  alg->top = top_id;
  alg->bot = bot_id;
  alg->and_table.assign(n * n, -1);
  alg->imp_table.assign(n * n, -1);
  if (sig.variety == Variety::LC) alg->or_table.assign(n * n, -1);
  if (sig.variety == Variety::NIS) alg->lax_table.assign(n, -1);
  for (const LogEntry& e : log) {
    switch (e.op) {
      case 3: alg->and_table[e.i * n + e.j] = e.result; break;
      case 4: alg->imp_table[e.i * n + e.j] = e.result; break;
      case 5: alg->or_table[e.i * n + e.j] = e.result; break;
      case 6: alg->lax_table[e.i] = e.result; break;
    }
  }
  alg->names.resize(n);
  for (int i = 0; i < n; i++) alg->names[i] = print_term(elems[i].rep);
  out.algebra = alg;
  out.reps.reserve(n);
  out.deriv.reserve(n);
  for (const Elem& e : elems) {
    out.reps.push_back(e.rep);
    out.deriv.push_back(e.deriv);
  }
  return out;
}

struct FreeKey {
  Variety v;
  std::vector<std::string> gens;
  std::vector<const detail::TermNode*> rels;
  bool operator<(const FreeKey& o) const {
    return std::tie(v, gens, rels) < std::tie(o.v, o.gens, o.rels);
  }
};

std::mutex free_cache_mutex;
std::map<FreeKey, GeneratedAlgebra>& free_cache() {
  static auto* c = new std::map<FreeKey, GeneratedAlgebra>();
  return *c;
}

}  // namespace

GeneratedAlgebra free_algebra(const Engine& engine, Signature sig, const VarSet& gens,
                              const Budget& budget) {
  FreeKey key{sig.variety, gens.names(), {}};
  {
    std::lock_guard<std::mutex> lock(free_cache_mutex);
    auto it = free_cache().find(key);
    if (it != free_cache().end()) return it->second;
  }
  GeneratedAlgebra out = saturate(engine, sig, gens, {}, budget);
  std::lock_guard<std::mutex> lock(free_cache_mutex);
  free_cache().emplace(std::move(key), out);
  return out;
}

PresentedAlgebra finitely_presented(const Engine& engine, const Presentation& pres,
                                    const Budget& budget) {
  std::vector<Term> premise_formulas;
  for (const auto& [l, r] : pres.relations) {
    premise_formulas.push_back(Term::imp(l, r));
    premise_formulas.push_back(Term::imp(r, l));
  }
  FreeKey key{pres.sig.variety, pres.generators.names(), {}};
  for (Term t : premise_formulas) key.rels.push_back(t.raw());
  {
    std::lock_guard<std::mutex> lock(free_cache_mutex);
    auto it = free_cache().find(key);
    if (it != free_cache().end()) return PresentedAlgebra{it->second, pres};
  }
  GeneratedAlgebra got = saturate(engine, pres.sig, pres.generators, premise_formulas, budget);
  {
    std::lock_guard<std::mutex> lock(free_cache_mutex);
    free_cache().emplace(std::move(key), got);
  }
  return PresentedAlgebra{got, pres};
}

Homomorphism quotient_hom(const Engine& engine, const PresentedAlgebra& a, const Budget& budget) {
  GeneratedAlgebra fx = free_algebra(engine, a.presentation.sig, a.presentation.generators, budget);
  std::vector<int> map(fx.algebra->size);
  for (int e = 0; e < fx.algebra->size; e++) map[e] = a.q_of(fx.reps[e]);
  Homomorphism h{fx.algebra, a.carrier.algebra, std::move(map)};
  check_homomorphism(h);
  return h;
}

Homomorphism eta(const Engine& engine, Signature sig, const Substitution& s,
                 const Budget& budget) {
  GeneratedAlgebra dom = free_algebra(engine, sig, s.domain(), budget);
  GeneratedAlgebra cod = free_algebra(engine, sig, s.codomain(), budget);
  std::vector<int> map(dom.algebra->size);
  for (int e = 0; e < dom.algebra->size; e++)
    map[e] = cod.eval(apply_substitution(s, dom.reps[e]));
  Homomorphism h{dom.algebra, cod.algebra, std::move(map)};
  check_homomorphism(h);
  return h;
}

}  // namespace pi2
