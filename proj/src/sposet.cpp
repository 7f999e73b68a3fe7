#include "pi2/sposet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pi2 {

PartialMap identity_map(const SPoset& x) {
  PartialMap f{x, x, x.poset.full(), std::vector<int>(x.size())};
  std::iota(f.map.begin(), f.map.end(), 0);
  return f;
}

PartialMap compose_partial(const PartialMap& outer, const PartialMap& inner) {
  PartialMap f{inner.source, outer.target, 0, {}};
  f.map.assign(inner.source.size(), -1);
  for (int x = 0; x < inner.source.size(); x++) {
    if (!inner.defined(x)) continue;
    int y = inner(x);
    if (!outer.defined(y)) continue;
    f.dom |= 1u << x;
    f.map[x] = outer(y);
  }
  return f;
}

MorphismCheck is_morphism(const PartialMap& f) {
  const SPoset& X = f.source;
  const SPoset& Y = f.target;
  const Poset& px = X.poset;
  const Poset& py = Y.poset;
  // (i)
  for (int x = 0; x < px.n; x++) {
    if (!f.defined(x)) continue;
    for (int y = 0; y < px.n; y++) {
      if (x == y || !f.defined(y) || !px.leq(x, y)) continue;
      if (!(f(x) != f(y) && py.leq(f(x), f(y)))) return {false, "(i)"};
    }
  }
  // (ii)
  for (int x = 0; x < px.n; x++) {
    if (!f.defined(x)) continue;
    for (int y = 0; y < py.n; y++) {
      if (f(x) == y || !py.leq(f(x), y)) continue;
      bool found = false;
      for (int x2 = 0; x2 < px.n; x2++)
        if (x2 != x && f.defined(x2) && px.leq(x, x2) && f(x2) == y) { found = true; break; }
      if (!found) return {false, "(ii)"};
    }
  }
  // (iii)
  std::uint32_t pre_t = 0;
  for (int x = 0; x < px.n; x++)
    if (f.defined(x) && Y.in_s(f(x))) pre_t |= 1u << x;
  if (pre_t != (f.dom & X.s)) return {false, "(iii)"};
  // (iv)
  for (int s = 0; s < px.n; s++) {
    if (!X.in_s(s)) continue;
    for (int x = 0; x < px.n; x++) {
      if (!f.defined(x) || !px.leq(s, x)) continue;
      bool found = false;
      for (int s2 = 0; s2 < px.n && !found; s2++) {
        if (!f.defined(s2) || !X.in_s(s2) || !px.leq(s, s2)) continue;
        for (int x2 = 0; x2 < px.n; x2++)
          if (f.defined(x2) && px.leq(s2, x2) && f(x2) == f(x)) { found = true; break; }
      }
      if (!found) return {false, "(iv)"};
    }
  }
  return {true, ""};
}

bool is_total_injective_morphism(const PartialMap& f) {
  if (f.dom != f.source.poset.full()) return false;
  std::set<int> img;
  for (int x = 0; x < f.source.size(); x++)
    if (!img.insert(f(x)).second) return false;
  return is_morphism(f).ok;
}

bool is_surjective(const PartialMap& f) {
  std::uint32_t img = 0;
  for (int x = 0; x < f.source.size(); x++)
    if (f.defined(x)) img |= 1u << f(x);
  return img == f.target.poset.full();
}

bool is_antichain(const SPoset& x, std::uint32_t a) {
  for (int i = 0; i < x.size(); i++)
    for (int j = 0; j < x.size(); j++)
      if (i != j && (a >> i & 1) && (a >> j & 1) && x.poset.leq(i, j)) return false;
  return true;
}

std::vector<std::uint32_t> antichains_of(const SPoset& x) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 0; a <= x.poset.full(); a++)
    if (is_antichain(x, a)) out.push_back(a);
  return out;
}

std::uint32_t immediate_successors(const SPoset& x, int e) {
  std::uint32_t strict = x.poset.up[e] & ~(1u << e);
  std::uint32_t out = 0;
  for (int y = 0; y < x.size(); y++) {
    if (!(strict >> y & 1)) continue;
    bool immediate = true;
    for (int w = 0; w < x.size(); w++)
      if (w != e && w != y && (strict >> w & 1) && x.poset.leq(w, y)) { immediate = false; break; }
    if (immediate) out |= 1u << y;
  }
  return out;
}

std::vector<int> find_covers(const SPoset& x, std::uint32_t antichain) {
  if (!is_antichain(x, antichain)) throw std::invalid_argument("not an antichain");
  std::vector<int> out;
  for (int s = 0; s < x.size(); s++)
    if (x.in_s(s) && immediate_successors(x, s) == antichain) out.push_back(s);
  return out;
}

bool is_projective_dual(const SPoset& x) {
  for (std::uint32_t a : antichains_of(x)) {
    if ((a & ~x.s) == 0) continue;  // a subset of S, nothing required
    if (find_covers(x, a).empty()) return false;
  }
  return true;
}

PartialMap build_retract(const PartialMap& e) {
  if (!is_total_injective_morphism(e))
    throw std::invalid_argument("build_retract requires a total injective morphism");
  const SPoset& X = e.source;
  const SPoset& Y = e.target;
  if (!is_projective_dual(X))
    throw std::invalid_argument("build_retract precondition violated: source not projective-dual");
  std::vector<int> from_image(Y.size(), -1);
  for (int x = 0; x < X.size(); x++) from_image[e(x)] = x;
  // height = longest chain strictly above; process maximal elements first
  std::vector<int> height(Y.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < Y.size(); y++)
      for (int z = 0; z < Y.size(); z++)
        if (z != y && Y.poset.leq(y, z) && height[y] < height[z] + 1) {
          height[y] = height[z] + 1;
          changed = true;
        }
  }
  std::vector<int> order(Y.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (height[a] != height[b]) return height[a] < height[b];
    return a < b;
  });
  PartialMap r{Y, X, 0, std::vector<int>(Y.size(), -1)};
  for (int y : order) {
    if (from_image[y] >= 0) {
      r.dom |= 1u << y;
      r.map[y] = from_image[y];
      continue;
    }
    // minimal elements of { r(y') : y < y', y' in dom(r) }
    std::uint32_t vals = 0;
    for (int y2 = 0; y2 < Y.size(); y2++)
      if (y2 != y && Y.poset.leq(y, y2) && r.defined(y2)) vals |= 1u << r(y2);
    std::uint32_t alpha = 0;
    for (int v = 0; v < X.size(); v++) {
      if (!(vals >> v & 1)) continue;
      bool minimal = true;
      for (int w = 0; w < X.size(); w++)
        if (w != v && (vals >> w & 1) && X.poset.leq(w, v)) { minimal = false; break; }
      if (minimal) alpha |= 1u << v;
    }
    if (!Y.in_s(y)) continue;
    if ((alpha & ~X.s) == 0) continue;  // alpha inside S: skip y
    std::vector<int> covers = find_covers(X, alpha);
    if (covers.empty())
      throw std::logic_error("projective-dual source lacks a cover during retract construction");
    r.dom |= 1u << y;
    r.map[y] = covers.front();  // least in canonical element order
  }
  return r;
}

std::vector<std::uint32_t> dual_carrier_upsets(const SPoset& x) { return upsets_of(x.poset); }

AlgebraPtr dual_algebra(const SPoset& x) {
  std::vector<std::uint32_t> ups = dual_carrier_upsets(x);
  std::map<std::uint32_t, int> index;
  for (std::size_t i = 0; i < ups.size(); i++) index[ups[i]] = static_cast<int>(i);
  const int m = static_cast<int>(ups.size());
  const Poset& p = x.poset;
  auto a = std::make_shared<FiniteAlgebra>();
  a->sig = sig_nis();
  a->size = m;
  a->top = index.at(p.full());
  a->and_table.assign(m * m, 0);
  a->imp_table.assign(m * m, 0);
  a->lax_table.assign(m, 0);
  for (int i = 0; i < m; i++) {
    for (int j = 0; j < m; j++) {
      a->and_table[i * m + j] = index.at(ups[i] & ups[j]);
      std::uint32_t imp = 0;
      for (int w = 0; w < p.n; w++)
        if (((p.up[w] & ups[i]) & ~ups[j]) == 0) imp |= 1u << w;
      a->imp_table[i * m + j] = index.at(imp);
    }
    std::uint32_t l = 0;
    for (int w = 0; w < p.n; w++) {
      bool in = true;
      for (int s = 0; s < p.n; s++)
        if (x.in_s(s) && p.leq(w, s) && !(ups[i] >> s & 1)) { in = false; break; }
      if (in) l |= 1u << w;
    }
    a->lax_table[i] = index.at(l);
  }
  a->names.resize(m);
  for (int i = 0; i < m; i++) {
    std::string s = "{";
    for (int w = 0; w < p.n; w++) {
      if (!(ups[i] >> w & 1)) continue;
      if (s.size() > 1) s += ",";
      s += (w < static_cast<int>(x.labels.size()) ? x.labels[w] : "e" + std::to_string(w));
    }
    a->names[i] = s + "}";
  }
  auto bad = audit_variety_laws(*a);
  if (bad) throw std::logic_error("dual algebra failed nucleus audit: " + *bad);
  return a;
}

Homomorphism dual_of_map(const PartialMap& f) {
  MorphismCheck c = is_morphism(f);
  if (!c.ok) throw std::invalid_argument("dual_of_map: not a morphism, violates " + c.violated);
  AlgebraPtr da = dual_algebra(f.target);
  AlgebraPtr db = dual_algebra(f.source);
  std::vector<std::uint32_t> ups_t = dual_carrier_upsets(f.target);
  std::vector<std::uint32_t> ups_s = dual_carrier_upsets(f.source);
  std::map<std::uint32_t, int> index_s;
  for (std::size_t i = 0; i < ups_s.size(); i++) index_s[ups_s[i]] = static_cast<int>(i);
  const Poset& p = f.source.poset;
  std::vector<int> map(ups_t.size());
  for (std::size_t i = 0; i < ups_t.size(); i++) {
    std::uint32_t h = 0;
    for (int x = 0; x < p.n; x++) {
      bool in = true;
      for (int x2 = 0; x2 < p.n; x2++)
        if (p.leq(x, x2) && f.defined(x2) && !(ups_t[i] >> f(x2) & 1)) { in = false; break; }
      if (in) h |= 1u << x;
    }
    map[i] = index_s.at(h);
  }
  Homomorphism hom{da, db, map};
  check_homomorphism(hom);
  return hom;
}

namespace {

std::mutex sposet_cache_mutex;

std::vector<std::uint32_t> canonical_sposet(const SPoset& x) {
  const int n = x.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint32_t> best;
  do {
    std::vector<std::uint32_t> cand(n + 1, 0);
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (x.poset.leq(i, j)) cand[perm[i]] |= 1u << perm[j];
    for (int i = 0; i < n; i++)
      if (x.in_s(i)) cand[n] |= 1u << perm[i];
    if (best.empty() || cand < best) best = cand;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

const std::vector<SPoset>& sposets_upto_iso(int max_size) {
  static std::map<int, std::vector<SPoset>> cache;
  {
    std::lock_guard<std::mutex> lock(sposet_cache_mutex);
    auto it = cache.find(max_size);
    if (it != cache.end()) return it->second;
  }
  std::vector<SPoset> out;
  std::set<std::vector<std::uint32_t>> seen;
  for (int n = 1; n <= max_size; n++) {
    for (const Poset& p : labeled_posets(n)) {
      for (std::uint32_t s = 0; s <= p.full(); s++) {
        SPoset x{p, s, {}};
        auto cf = canonical_sposet(x);
        if (!seen.insert(cf).second) continue;
        Poset cp{n, std::vector<std::uint32_t>(cf.begin(), cf.begin() + n)};
        out.push_back(SPoset{cp, cf[n], {}});
      }
    }
  }
  std::lock_guard<std::mutex> lock(sposet_cache_mutex);
  return cache.emplace(max_size, std::move(out)).first->second;
}

std::vector<PartialMap> enumerate_morphisms(const SPoset& x, const SPoset& y) {
  std::vector<PartialMap> out;
  const int n = x.size();
  const int m = y.size();
  for (std::uint32_t dom = 0; dom <= x.poset.full(); dom++) {
    std::vector<int> idx;
    for (int i = 0; i < n; i++)
      if (dom >> i & 1) idx.push_back(i);
    long total = 1;
    for (std::size_t k = 0; k < idx.size(); k++) total *= m;
    for (long c = 0; c < total; c++) {
      PartialMap f{x, y, dom, std::vector<int>(n, -1)};
      long rem = c;
      for (std::size_t k = 0; k < idx.size(); k++) {
        f.map[idx[k]] = static_cast<int>(rem % m);
        rem /= m;
      }
      if (is_morphism(f).ok) out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace pi2
