#include "pi2/kripke.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pi2 {

bool is_upset(const Poset& p, std::uint32_t set) {
  for (int i = 0; i < p.n; i++)
    if ((set >> i & 1) && (p.up[i] & ~set)) return false;
  return true;
}

std::vector<std::uint32_t> upsets_of(const Poset& p) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s <= p.full(); s++)
    if (is_upset(p, s)) out.push_back(s);
  return out;
}

bool is_prelinear(const Poset& p) {
  for (int x = 0; x < p.n; x++)
    for (int a = 0; a < p.n; a++)
      for (int b = 0; b < p.n; b++)
        if (p.leq(x, a) && p.leq(x, b) && !p.leq(a, b) && !p.leq(b, a)) return false;
  return true;
}

bool has_root(const Poset& p) {
  for (int r = 0; r < p.n; r++)
    if (p.up[r] == p.full()) return true;
  return false;
}

namespace {

std::mutex cache_mutex;

std::vector<Poset> enumerate_labeled(int n) {
  std::vector<Poset> out;
  if (n == 0) {
    out.push_back(Poset{0, {}});
    return out;
  }
  if (n > 5) throw std::invalid_argument("labeled poset enumeration limited to n <= 5");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      if (i != j) pairs.emplace_back(i, j);
  const int np = static_cast<int>(pairs.size());
  for (std::uint64_t bits = 0; bits < (1ull << np); bits++) {
    // strict relation candidate
    std::vector<std::uint32_t> lt(n, 0);
    for (int k = 0; k < np; k++)
      if (bits >> k & 1) lt[pairs[k].first] |= 1u << pairs[k].second;
    bool ok = true;
    for (int a = 0; a < n && ok; a++) {
      if (lt[a] >> a & 1) ok = false;
      for (int b = 0; b < n && ok; b++) {
        if (!(lt[a] >> b & 1)) continue;
        if (lt[b] >> a & 1) ok = false;          // antisymmetry
        if (lt[b] & ~lt[a]) ok = false;          // transitivity: b's successors within a's
      }
    }
    if (!ok) continue;
    Poset p{n, std::vector<std::uint32_t>(n)};
    for (int i = 0; i < n; i++) p.up[i] = lt[i] | (1u << i);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::uint32_t> canonical_form(const Poset& p) {
  std::vector<int> perm(p.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint32_t> best;
  do {
    std::vector<std::uint32_t> cand(p.n, 0);
    for (int i = 0; i < p.n; i++)
      for (int j = 0; j < p.n; j++)
        if (p.leq(i, j)) cand[perm[i]] |= 1u << perm[j];
    if (best.empty() || cand < best) best = cand;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Poset> reduce_iso(const std::vector<Poset>& ps) {
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<Poset> out;
  for (const Poset& p : ps) {
    auto cf = canonical_form(p);
    if (seen.insert(cf).second) out.push_back(Poset{p.n, cf});
  }
  return out;
}

}  // namespace

const std::vector<Poset>& labeled_posets(int n) {
  static std::map<int, std::vector<Poset>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, enumerate_labeled(n)).first;
  return it->second;
}

const std::vector<Poset>& posets_upto_iso(int n) {
  static std::map<int, std::vector<Poset>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  std::vector<Poset> reduced = reduce_iso(labeled_posets(n));
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(n, std::move(reduced)).first->second;
}

std::vector<Poset> rooted_posets_upto(int max_size) {
  std::vector<Poset> out;
  for (int n = 1; n <= max_size; n++)
    for (const Poset& p : posets_upto_iso(n))
      if (has_root(p)) out.push_back(p);
  return out;
}

std::vector<Poset> prelinear_posets_upto(int max_size) {
  std::vector<Poset> out;
  for (int n = 1; n <= max_size; n++)
    for (const Poset& p : posets_upto_iso(n))
      if (is_prelinear(p)) out.push_back(p);
  return out;
}

bool model_persistent(const KripkeModel& m) {
  for (const auto& [v, set] : m.val)
    if (!is_upset(m.poset, set)) return false;
  return true;
}

std::uint32_t eval_kripke(const KripkeModel& m, Term t) {
  switch (t.kind()) {
    case Conn::Var: {
      auto it = m.val.find(t.var_name());
      if (it == m.val.end()) throw std::invalid_argument("unvalued variable " + t.var_name());
      return it->second;
    }
    case Conn::Top: return m.poset.full();
    case Conn::Bot: return 0;
    case Conn::And: return eval_kripke(m, t.lhs()) & eval_kripke(m, t.rhs());
    case Conn::Or: return eval_kripke(m, t.lhs()) | eval_kripke(m, t.rhs());
    case Conn::Imp: {
      std::uint32_t a = eval_kripke(m, t.lhs());
      std::uint32_t b = eval_kripke(m, t.rhs());
      std::uint32_t out = 0;
      for (int w = 0; w < m.poset.n; w++)
        if (((m.poset.up[w] & a) & ~b) == 0) out |= 1u << w;
      return out;
    }
    case Conn::Lax: throw std::invalid_argument("lax connective has no Kripke clause here");
  }
  throw std::logic_error("unreachable");
}

AlgebraPtr upset_algebra(const Poset& p, Variety variety) {
  std::vector<std::uint32_t> ups = upsets_of(p);
  std::map<std::uint32_t, int> index;
  for (std::size_t i = 0; i < ups.size(); i++) index[ups[i]] = static_cast<int>(i);
  const int m = static_cast<int>(ups.size());
  auto a = std::make_shared<FiniteAlgebra>();
  a->sig = Signature{variety};
  a->size = m;
  a->top = index.at(p.full());
  if (variety == Variety::LC) a->bot = index.at(0);
  a->and_table.assign(m * m, 0);
  a->imp_table.assign(m * m, 0);
  if (variety == Variety::LC) a->or_table.assign(m * m, 0);
  for (int i = 0; i < m; i++)
    for (int j = 0; j < m; j++) {
      a->and_table[i * m + j] = index.at(ups[i] & ups[j]);
      std::uint32_t imp = 0;
      for (int w = 0; w < p.n; w++)
        if (((p.up[w] & ups[i]) & ~ups[j]) == 0) imp |= 1u << w;
      a->imp_table[i * m + j] = index.at(imp);
      if (variety == Variety::LC) a->or_table[i * m + j] = index.at(ups[i] | ups[j]);
    }
  a->names.resize(m);
  for (int i = 0; i < m; i++) {
    std::string s = "{";
    for (int w = 0; w < p.n; w++)
      if (ups[i] >> w & 1) s += (s.size() > 1 ? ",w" : "w") + std::to_string(w);
    a->names[i] = s + "}";
  }
  return a;
}

AlgebraPtr godel_chain(int k) {
  if (k < 2) throw std::invalid_argument("chain needs at least 2 elements");
  auto a = std::make_shared<FiniteAlgebra>();
  a->sig = sig_lc();
  a->size = k;
  a->top = k - 1;
  a->bot = 0;
  a->and_table.assign(k * k, 0);
  a->or_table.assign(k * k, 0);
  a->imp_table.assign(k * k, 0);
  for (int i = 0; i < k; i++)
    for (int j = 0; j < k; j++) {
      a->and_table[i * k + j] = std::min(i, j);
      a->or_table[i * k + j] = std::max(i, j);
      a->imp_table[i * k + j] = i <= j ? k - 1 : j;
    }
  a->names.resize(k);
  for (int i = 0; i < k; i++)
    a->names[i] = i == 0 ? "0" : (i == k - 1 ? "1" : "c" + std::to_string(i));
  return a;
}

}  // namespace pi2
