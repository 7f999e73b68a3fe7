#include "pi2/algebra.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace pi2 {

namespace {

std::string elem_name(const FiniteAlgebra& a, int e) {
  if (e >= 0 && e < static_cast<int>(a.names.size())) return a.names[e];
  return "#" + std::to_string(e);
}

}  // namespace

std::optional<std::string> audit_variety_laws(const FiniteAlgebra& a) {
  const int n = a.size;
  auto fail = [&](const std::string& law) { return std::optional<std::string>(law); };
  if (a.top < 0 || a.top >= n) return fail("top element missing");
  for (int x = 0; x < n; x++) {
    if (a.meet(x, x) != x) return fail("meet idempotence at " + elem_name(a, x));
    if (a.meet(x, a.top) != x) return fail("top unit at " + elem_name(a, x));
    for (int y = 0; y < n; y++) {
      if (a.meet(x, y) != a.meet(y, x)) return fail("meet commutativity");
      for (int z = 0; z < n; z++) {
        if (a.meet(a.meet(x, y), z) != a.meet(x, a.meet(y, z))) return fail("meet associativity");
        // residuation: x /\ y <= z  iff  x <= y -> z
        bool l = a.leq(a.meet(x, y), z);
        bool r = a.leq(x, a.imp(y, z));
        if (l != r)
          return fail("residuation at (" + elem_name(a, x) + "," + elem_name(a, y) + "," +
                      elem_name(a, z) + ")");
      }
    }
  }
  if (a.sig.variety == Variety::LC) {
    if (a.bot < 0 || a.bot >= n) return fail("bot element missing");
    for (int x = 0; x < n; x++) {
      if (a.join(x, x) != x) return fail("join idempotence");
      if (a.meet(a.bot, x) != a.bot) return fail("bot least");
      for (int y = 0; y < n; y++) {
        if (a.join(x, y) != a.join(y, x)) return fail("join commutativity");
        if (a.meet(x, a.join(x, y)) != x) return fail("absorption /\\ over \\/");
        if (a.join(x, a.meet(x, y)) != x) return fail("absorption \\/ over /\\");
        if (a.join(a.imp(x, y), a.imp(y, x)) != a.top) return fail("prelinearity");
        for (int z = 0; z < n; z++)
          if (a.join(a.join(x, y), z) != a.join(x, a.join(y, z))) return fail("join associativity");
      }
    }
  }
  if (a.sig.variety == Variety::NIS) {
    if (static_cast<int>(a.lax_table.size()) != n) return fail("lax table missing");
    for (int x = 0; x < n; x++) {
      if (!a.leq(x, a.lax(x))) return fail("nucleus x <= lx at " + elem_name(a, x));
      if (!a.leq(a.lax(a.lax(x)), a.lax(x))) return fail("nucleus llx <= lx at " + elem_name(a, x));
      for (int y = 0; y < n; y++)
        if (a.lax(a.meet(x, y)) != a.meet(a.lax(x), a.lax(y)))
          return fail("nucleus l(x/\\y) = lx /\\ ly");
    }
  }
  return std::nullopt;
}

int eval_term(const FiniteAlgebra& a, Term t, const std::map<std::string, int>& asg) {
  switch (t.kind()) {
    case Conn::Var: {
      auto it = asg.find(t.var_name());
      if (it == asg.end()) throw std::invalid_argument("unassigned variable " + t.var_name());
      return it->second;
    }
    case Conn::Top: return a.top;
    case Conn::Bot:
      if (a.bot < 0) throw std::invalid_argument("bot not present in this algebra");
      return a.bot;
    case Conn::And: return a.meet(eval_term(a, t.lhs(), asg), eval_term(a, t.rhs(), asg));
    case Conn::Or: return a.join(eval_term(a, t.lhs(), asg), eval_term(a, t.rhs(), asg));
    case Conn::Imp: return a.imp(eval_term(a, t.lhs(), asg), eval_term(a, t.rhs(), asg));
    case Conn::Lax: return a.lax(eval_term(a, t.child(), asg));
  }
  throw std::logic_error("unreachable");
}

void check_homomorphism(const Homomorphism& h) {
  if (!is_homomorphism_map(*h.source, *h.target, h.map))
    throw std::invalid_argument("not a homomorphism");
}

bool is_homomorphism_map(const FiniteAlgebra& a, const FiniteAlgebra& b,
                         const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != a.size) return false;
  if (map[a.top] != b.top) return false;
  if (a.sig.variety == Variety::LC && map[a.bot] != b.bot) return false;
  for (int x = 0; x < a.size; x++) {
    for (int y = 0; y < a.size; y++) {
      if (map[a.meet(x, y)] != b.meet(map[x], map[y])) return false;
      if (map[a.imp(x, y)] != b.imp(map[x], map[y])) return false;
      if (a.sig.variety == Variety::LC && map[a.join(x, y)] != b.join(map[x], map[y])) return false;
    }
    if (a.sig.variety == Variety::NIS && map[a.lax(x)] != b.lax(map[x])) return false;
  }
  return true;
}

namespace {

std::vector<int> normalize_blocks(const std::vector<int>& raw) {
  std::vector<int> out(raw.size(), -1);
  std::map<int, int> relabel;
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); i++) {
    auto [it, fresh] = relabel.emplace(raw[i], next);
    if (fresh) next++;
    out[i] = it->second;
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

Congruence make_congruence(AlgebraPtr a, UnionFind& uf) {
  std::vector<int> raw(a->size);
  for (int i = 0; i < a->size; i++) raw[i] = uf.find(i);
  Congruence c{a, normalize_blocks(raw), 0};
  c.block_count = *std::max_element(c.block.begin(), c.block.end()) + 1;
  return c;
}

}  // namespace

Congruence identity_congruence(AlgebraPtr a) {
  std::vector<int> block(a->size);
  std::iota(block.begin(), block.end(), 0);
  return Congruence{a, block, a->size};
}

Congruence total_congruence(AlgebraPtr a) {
  return Congruence{a, std::vector<int>(a->size, 0), 1};
}

Congruence congruence_generated(AlgebraPtr a, const std::vector<std::pair<int, int>>& pairs) {
  const FiniteAlgebra& alg = *a;
  UnionFind uf(alg.size);
  std::deque<std::pair<int, int>> work(pairs.begin(), pairs.end());
  for (auto [x, y] : work)
    if (x < 0 || x >= alg.size || y < 0 || y >= alg.size)
      throw std::invalid_argument("congruence pair outside carrier");
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    if (!uf.merge(x, y)) continue;
    // compatibility saturation: merged u,v force merges on each table row/column
    for (int w = 0; w < alg.size; w++) {
      work.emplace_back(alg.meet(x, w), alg.meet(y, w));
      work.emplace_back(alg.meet(w, x), alg.meet(w, y));
      work.emplace_back(alg.imp(x, w), alg.imp(y, w));
      work.emplace_back(alg.imp(w, x), alg.imp(w, y));
      if (alg.sig.variety == Variety::LC) {
        work.emplace_back(alg.join(x, w), alg.join(y, w));
        work.emplace_back(alg.join(w, x), alg.join(w, y));
      }
    }
    if (alg.sig.variety == Variety::NIS) work.emplace_back(alg.lax(x), alg.lax(y));
  }
  return make_congruence(a, uf);
}

bool congruence_leq(const Congruence& fine, const Congruence& coarse) {
  for (int x = 0; x < static_cast<int>(fine.block.size()); x++)
    for (int y = x + 1; y < static_cast<int>(fine.block.size()); y++)
      if (fine.related(x, y) && !coarse.related(x, y)) return false;
  return true;
}

bool is_congruence(const FiniteAlgebra& a, const std::vector<int>& block) {
  for (int x = 0; x < a.size; x++)
    for (int y = 0; y < a.size; y++) {
      if (block[x] != block[y]) continue;
      for (int w = 0; w < a.size; w++) {
        if (block[a.meet(x, w)] != block[a.meet(y, w)]) return false;
        if (block[a.imp(x, w)] != block[a.imp(y, w)]) return false;
        if (block[a.imp(w, x)] != block[a.imp(w, y)]) return false;
        if (a.sig.variety == Variety::LC && block[a.join(x, w)] != block[a.join(y, w)]) return false;
      }
      if (a.sig.variety == Variety::NIS && block[a.lax(x)] != block[a.lax(y)]) return false;
    }
  return true;
}

std::vector<Congruence> all_congruences(AlgebraPtr a, const Budget& budget) {
  std::vector<Congruence> found;
  std::set<std::vector<int>> seen;
  auto add = [&](const Congruence& c) {
    if (seen.insert(c.block).second) {
      found.push_back(c);
      if (static_cast<int>(found.size()) > budget.max_congruences)
        throw ResourceExceeded("congruence count exceeds budget");
      return true;
    }
    return false;
  };
  add(identity_congruence(a));
  std::vector<Congruence> principals;
  for (int x = 0; x < a->size; x++)
    for (int y = x + 1; y < a->size; y++) {
      Congruence c = congruence_generated(a, {{x, y}});
      if (add(c)) principals.push_back(c);
    }
  // join-closure: join = congruence generated by union of relations
  std::size_t frontier_start = 0;
  std::vector<Congruence> frontier = found;
  while (!frontier.empty()) {
    std::vector<Congruence> next;
    for (const Congruence& c : frontier) {
      for (const Congruence& p : principals) {
        if (congruence_leq(p, c)) continue;
        std::vector<std::pair<int, int>> pairs;
        for (int x = 0; x < a->size; x++)
          for (int y = x + 1; y < a->size; y++)
            if (c.related(x, y) || p.related(x, y)) pairs.emplace_back(x, y);
        Congruence j = congruence_generated(a, pairs);
        if (add(j)) next.push_back(j);
      }
    }
    frontier = std::move(next);
  }
  (void)frontier_start;
  std::sort(found.begin(), found.end(),
            [](const Congruence& l, const Congruence& r) { return l.block < r.block; });
  return found;
}

QuotientResult quotient(AlgebraPtr a, const Congruence& c) {
  const FiniteAlgebra& alg = *a;
  int m = c.block_count;
  std::vector<int> rep(m, -1);
  for (int e = 0; e < alg.size; e++)
    if (rep[c.block[e]] < 0) rep[c.block[e]] = e;
  auto out = std::make_shared<FiniteAlgebra>();
  out->sig = alg.sig;
  out->size = m;
  out->top = c.block[alg.top];
  if (alg.bot >= 0) out->bot = c.block[alg.bot];
  out->and_table.assign(m * m, 0);
  out->imp_table.assign(m * m, 0);
  if (alg.sig.variety == Variety::LC) out->or_table.assign(m * m, 0);
  if (alg.sig.variety == Variety::NIS) out->lax_table.assign(m, 0);
  for (int i = 0; i < m; i++) {
    for (int j = 0; j < m; j++) {
      out->and_table[i * m + j] = c.block[alg.meet(rep[i], rep[j])];
      out->imp_table[i * m + j] = c.block[alg.imp(rep[i], rep[j])];
      if (alg.sig.variety == Variety::LC) out->or_table[i * m + j] = c.block[alg.join(rep[i], rep[j])];
    }
    if (alg.sig.variety == Variety::NIS) out->lax_table[i] = c.block[alg.lax(rep[i])];
  }
  out->names.resize(m);
  for (int i = 0; i < m; i++) out->names[i] = elem_name(alg, rep[i]);
  Homomorphism proj{a, out, c.block};
  return QuotientResult{out, std::move(proj)};
}

Congruence kernel(const Homomorphism& h) {
  Congruence c{h.source, normalize_blocks(h.map), 0};
  c.block_count = c.block.empty() ? 0 : *std::max_element(c.block.begin(), c.block.end()) + 1;
  return c;
}

SubalgebraResult generated_subalgebra(AlgebraPtr b, const std::vector<int>& subset) {
  const FiniteAlgebra& alg = *b;
  std::set<int> closed(subset.begin(), subset.end());
  for (int e : subset)
    if (e < 0 || e >= alg.size) throw std::invalid_argument("subset element outside carrier");
  closed.insert(alg.top);
  if (alg.bot >= 0) closed.insert(alg.bot);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> cur(closed.begin(), closed.end());
    for (int x : cur) {
      for (int y : cur) {
        for (int v : {alg.meet(x, y), alg.imp(x, y)})
          if (closed.insert(v).second) changed = true;
        if (alg.sig.variety == Variety::LC && closed.insert(alg.join(x, y)).second) changed = true;
      }
      if (alg.sig.variety == Variety::NIS && closed.insert(alg.lax(x)).second) changed = true;
    }
  }
  std::vector<int> ambient(closed.begin(), closed.end());
  std::map<int, int> index;
  for (std::size_t i = 0; i < ambient.size(); i++) index[ambient[i]] = static_cast<int>(i);
  int m = static_cast<int>(ambient.size());
  auto out = std::make_shared<FiniteAlgebra>();
  out->sig = alg.sig;
  out->size = m;
  out->top = index[alg.top];
  if (alg.bot >= 0) out->bot = index[alg.bot];
  out->and_table.assign(m * m, 0);
  out->imp_table.assign(m * m, 0);
  if (alg.sig.variety == Variety::LC) out->or_table.assign(m * m, 0);
  if (alg.sig.variety == Variety::NIS) out->lax_table.assign(m, 0);
  out->names.resize(m);
  for (int i = 0; i < m; i++) {
    out->names[i] = elem_name(alg, ambient[i]);
    for (int j = 0; j < m; j++) {
      out->and_table[i * m + j] = index[alg.meet(ambient[i], ambient[j])];
      out->imp_table[i * m + j] = index[alg.imp(ambient[i], ambient[j])];
      if (alg.sig.variety == Variety::LC)
        out->or_table[i * m + j] = index[alg.join(ambient[i], ambient[j])];
    }
    if (alg.sig.variety == Variety::NIS) out->lax_table[i] = index[alg.lax(ambient[i])];
  }
  Homomorphism incl{out, b, ambient};
  return SubalgebraResult{out, std::move(incl), ambient};
}

ImageFactorization image_factorization(const Homomorphism& h) {
  std::vector<int> image_elems;
  {
    std::set<int> img(h.map.begin(), h.map.end());
    image_elems.assign(img.begin(), img.end());
  }
  SubalgebraResult sub = generated_subalgebra(h.target, image_elems);
  // a hom image is already closed, so the generated subalgebra equals it
  std::map<int, int> to_sub;
  for (std::size_t i = 0; i < sub.ambient_index.size(); i++)
    to_sub[sub.ambient_index[i]] = static_cast<int>(i);
  std::vector<int> proj(h.map.size());
  for (std::size_t e = 0; e < h.map.size(); e++) proj[e] = to_sub.at(h.map[e]);
  return ImageFactorization{sub.algebra, Homomorphism{h.source, sub.algebra, proj},
                            sub.inclusion};
}

namespace {

// Generating set + a derivation of every element from it, in closure order.
struct GenStructure {
  std::vector<int> gens;
  // op: 0 gen, 1 top, 2 bot, 3 meet(i,j), 4 imp(i,j), 5 join(i,j), 6 lax(i)
  struct Deriv {
    int op;
    int i = -1, j = -1;
  };
  std::vector<int> order;           // elements in derivation order
  std::vector<Deriv> deriv;         // indexed by element
};

GenStructure generating_structure(const FiniteAlgebra& a) {
  GenStructure g;
  g.deriv.resize(a.size);
  std::vector<bool> have(a.size, false);
  auto mark = [&](int e, GenStructure::Deriv d) {
    if (have[e]) return false;
    have[e] = true;
    g.deriv[e] = d;
    g.order.push_back(e);
    return true;
  };
  mark(a.top, {1});
  if (a.bot >= 0) mark(a.bot, {2});
  auto close = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> cur = g.order;
      for (int x : cur) {
        for (int y : cur) {
          if (mark(a.meet(x, y), {3, x, y})) changed = true;
          if (mark(a.imp(x, y), {4, x, y})) changed = true;
          if (a.sig.variety == Variety::LC && mark(a.join(x, y), {5, x, y})) changed = true;
        }
        if (a.sig.variety == Variety::NIS && mark(a.lax(x), {6, x})) changed = true;
      }
    }
  };
  close();
  for (int e = 0; e < a.size; e++) {
    if (!have[e]) {
      g.gens.push_back(e);
      mark(e, {0});
      close();
    }
  }
  return g;
}

}  // namespace

std::vector<Homomorphism> enumerate_homomorphisms(AlgebraPtr a, AlgebraPtr b,
                                                  const Budget& budget) {
  if (a->sig.variety != b->sig.variety)
    throw std::invalid_argument("homomorphisms require matching signatures");
  GenStructure g = generating_structure(*a);
  const int ng = static_cast<int>(g.gens.size());
  long total = 1;
  for (int i = 0; i < ng; i++) {
    total *= b->size;
    if (total > budget.max_candidates)
      throw ResourceExceeded("homomorphism candidate count exceeds budget");
  }
  std::vector<Homomorphism> out;
  std::vector<int> choice(ng, 0);
  std::vector<int> map(a->size, -1);
  for (long c = 0; c < total; c++) {
    long rem = c;
    for (int i = ng - 1; i >= 0; i--) {
      choice[i] = static_cast<int>(rem % b->size);
      rem /= b->size;
    }
    // extend along derivations
    int gi = 0;
    for (int e : g.order) {
      const auto& d = g.deriv[e];
      switch (d.op) {
        case 0: map[e] = choice[gi++]; break;
        case 1: map[e] = b->top; break;
        case 2: map[e] = b->bot; break;
        case 3: map[e] = b->meet(map[d.i], map[d.j]); break;
        case 4: map[e] = b->imp(map[d.i], map[d.j]); break;
        case 5: map[e] = b->join(map[d.i], map[d.j]); break;
        case 6: map[e] = b->lax(map[d.i]); break;
      }
    }
    // gens appear in g.order in g.gens order, so choices line up
    if (is_homomorphism_map(*a, *b, map)) out.push_back(Homomorphism{a, b, map});
  }
  return out;
}

bool isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.size != b.size || a.sig.variety != b.sig.variety) return false;
  auto ap = std::make_shared<FiniteAlgebra>(a);
  auto bp = std::make_shared<FiniteAlgebra>(b);
  Budget big;
  big.max_candidates = 10000000;
  for (const Homomorphism& h : enumerate_homomorphisms(ap, bp, big)) {
    std::set<int> img(h.map.begin(), h.map.end());
    if (static_cast<int>(img.size()) == a.size) return true;
  }
  return false;
}

Presentation::Presentation(Signature sig_, VarSet gens, std::vector<std::pair<Term, Term>> rels)
    : sig(sig_), generators(std::move(gens)), relations(std::move(rels)) {
  for (const auto& [l, r] : relations) {
    if (!term_vars(l).subset_of(generators) || !term_vars(r).subset_of(generators))
      throw std::invalid_argument("relation term uses a variable outside the generators");
    if (!l.valid_in(sig) || !r.valid_in(sig))
      throw std::invalid_argument("relation term uses a connective outside the signature");
  }
}

}  // namespace pi2
