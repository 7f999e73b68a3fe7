#include "pi2/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pi2 {

std::string variety_name(Variety v) {
  switch (v) {
    case Variety::ISL: return "isl";
    case Variety::LC: return "lc";
    case Variety::NIS: return "nis";
  }
  return "?";
}

std::optional<Variety> variety_from_name(std::string_view s) {
  if (s == "isl" || s == "ISL") return Variety::ISL;
  if (s == "lc" || s == "LC") return Variety::LC;
  if (s == "nis" || s == "NIS") return Variety::NIS;
  return std::nullopt;
}

bool Signature::allows(Conn c) const {
  switch (c) {
    case Conn::Var:
    case Conn::Top:
    case Conn::And:
    case Conn::Imp: return true;
    case Conn::Bot:
    case Conn::Or: return variety == Variety::LC;
    case Conn::Lax: return variety == Variety::NIS;
  }
  return false;
}

namespace detail {

struct TermNode {
  Conn kind;
  std::string name;  // Var only
  const TermNode* a = nullptr;
  const TermNode* b = nullptr;
  int nodes = 1;
  std::size_t hash = 0;
};

namespace {

struct NodeKey {
  Conn kind;
  std::string_view name;
  const TermNode* a;
  const TermNode* b;
  bool operator==(const NodeKey& o) const {
    return kind == o.kind && name == o.name && a == o.a && b == o.b;
  }
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ull;
    h ^= std::hash<std::string_view>()(k.name) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>()(k.a) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<const void*>()(k.b) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

std::mutex pool_mutex;
std::unordered_map<NodeKey, std::unique_ptr<TermNode>, NodeKeyHash>& pool() {
  static auto* p = new std::unordered_map<NodeKey, std::unique_ptr<TermNode>, NodeKeyHash>();
  return *p;
}

const TermNode* intern(Conn kind, std::string_view name, const TermNode* a, const TermNode* b) {
  std::lock_guard<std::mutex> lock(pool_mutex);
  NodeKey key{kind, name, a, b};
  auto it = pool().find(key);
  if (it != pool().end()) return it->second.get();
  auto node = std::make_unique<TermNode>();
  node->kind = kind;
  node->name = std::string(name);
  node->a = a;
  node->b = b;
  node->nodes = 1 + (a ? a->nodes : 0) + (b ? b->nodes : 0);
  node->hash = NodeKeyHash()(key);
  NodeKey owned_key{kind, node->name, a, b};
  const TermNode* raw = node.get();
  pool().emplace(owned_key, std::move(node));
  return raw;
}

}  // namespace
}  // namespace detail

Term Term::var(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return Term(detail::intern(Conn::Var, name, nullptr, nullptr));
}
Term Term::top() { return Term(detail::intern(Conn::Top, "", nullptr, nullptr)); }
Term Term::bot() { return Term(detail::intern(Conn::Bot, "", nullptr, nullptr)); }
Term Term::conj(Term a, Term b) { return Term(detail::intern(Conn::And, "", a.node_, b.node_)); }
Term Term::disj(Term a, Term b) { return Term(detail::intern(Conn::Or, "", a.node_, b.node_)); }
Term Term::imp(Term a, Term b) { return Term(detail::intern(Conn::Imp, "", a.node_, b.node_)); }
Term Term::lax(Term a) { return Term(detail::intern(Conn::Lax, "", a.node_, nullptr)); }
Term Term::iff(Term a, Term b) { return conj(imp(a, b), imp(b, a)); }

Conn Term::kind() const { return node_->kind; }
const std::string& Term::var_name() const { return node_->name; }
Term Term::lhs() const { return Term(node_->a); }
Term Term::rhs() const { return Term(node_->b); }
Term Term::child() const { return Term(node_->a); }
int Term::node_count() const { return node_->nodes; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::valid_in(const Signature& sig) const {
  if (!sig.allows(kind())) return false;
  switch (kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot: return true;
    case Conn::Lax: return child().valid_in(sig);
    default: return lhs().valid_in(sig) && rhs().valid_in(sig);
  }
}

int compare(Term a, Term b) {
  if (a == b) return 0;
  if (a.node_count() != b.node_count()) return a.node_count() < b.node_count() ? -1 : 1;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Conn::Var: return a.var_name() < b.var_name() ? -1 : 1;
    case Conn::Top:
    case Conn::Bot: return 0;
    case Conn::Lax: return compare(a.child(), b.child());
    default: {
      int c = compare(a.lhs(), b.lhs());
      if (c != 0) return c;
      return compare(a.rhs(), b.rhs());
    }
  }
}

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  for (const auto& n : names_)
    if (n.empty()) throw std::invalid_argument("empty variable name in VarSet");
}

bool VarSet::contains(std::string_view name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

int VarSet::index_of(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

bool VarSet::subset_of(const VarSet& o) const {
  return std::includes(o.names_.begin(), o.names_.end(), names_.begin(), names_.end());
}

VarSet VarSet::unite(const VarSet& o) const {
  std::vector<std::string> out;
  std::set_union(names_.begin(), names_.end(), o.names_.begin(), o.names_.end(),
                 std::back_inserter(out));
  return VarSet(std::move(out));
}

VarSet VarSet::minus(const VarSet& o) const {
  std::vector<std::string> out;
  std::set_difference(names_.begin(), names_.end(), o.names_.begin(), o.names_.end(),
                      std::back_inserter(out));
  return VarSet(std::move(out));
}

namespace {
void collect_vars(Term t, std::set<std::string>& acc) {
  switch (t.kind()) {
    case Conn::Var: acc.insert(t.var_name()); return;
    case Conn::Top:
    case Conn::Bot: return;
    case Conn::Lax: collect_vars(t.child(), acc); return;
    default:
      collect_vars(t.lhs(), acc);
      collect_vars(t.rhs(), acc);
  }
}
}  // namespace

VarSet term_vars(Term t) {
  std::set<std::string> acc;
  collect_vars(t, acc);
  return VarSet(std::vector<std::string>(acc.begin(), acc.end()));
}

VarSet terms_vars(const std::vector<Term>& ts) {
  std::set<std::string> acc;
  for (Term t : ts) collect_vars(t, acc);
  return VarSet(std::vector<std::string>(acc.begin(), acc.end()));
}

Substitution::Substitution(VarSet domain, VarSet codomain, std::map<std::string, Term> map)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), map_(std::move(map)) {
  for (const auto& v : domain_)
    if (!map_.count(v)) throw std::invalid_argument("substitution not total on domain: " + v);
  for (const auto& [v, t] : map_) {
    if (!domain_.contains(v))
      throw std::invalid_argument("substitution maps variable outside domain: " + v);
    if (!term_vars(t).subset_of(codomain_))
      throw std::invalid_argument("image of " + v + " uses variables outside codomain");
  }
}

Substitution Substitution::identity(const VarSet& vars) {
  std::map<std::string, Term> m;
  for (const auto& v : vars) m.emplace(v, Term::var(v));
  return Substitution(vars, vars, std::move(m));
}

Term Substitution::operator()(std::string_view var) const {
  auto it = map_.find(std::string(var));
  if (it == map_.end()) throw std::invalid_argument("variable outside substitution domain");
  return it->second;
}

Term apply_substitution(const Substitution& s, Term t) {
  switch (t.kind()) {
    case Conn::Var: {
      if (!s.domain().contains(t.var_name()))
        throw std::invalid_argument("variable " + t.var_name() + " outside substitution domain");
      return s(t.var_name());
    }
    case Conn::Top:
    case Conn::Bot: return t;
    case Conn::Lax: return Term::lax(apply_substitution(s, t.child()));
    case Conn::And: return Term::conj(apply_substitution(s, t.lhs()), apply_substitution(s, t.rhs()));
    case Conn::Or: return Term::disj(apply_substitution(s, t.lhs()), apply_substitution(s, t.rhs()));
    case Conn::Imp: return Term::imp(apply_substitution(s, t.lhs()), apply_substitution(s, t.rhs()));
  }
  throw std::logic_error("unreachable");
}

std::vector<Term> apply_substitution(const Substitution& s, const std::vector<Term>& ts) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (Term t : ts) out.push_back(apply_substitution(s, t));
  return out;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  if (!inner.codomain().subset_of(outer.domain()))
    throw std::invalid_argument("compose: inner codomain not contained in outer domain");
  std::map<std::string, Term> m;
  for (const auto& v : inner.domain()) m.emplace(v, apply_substitution(outer, inner(v)));
  return Substitution(inner.domain(), outer.codomain(), std::move(m));
}

bool is_c_invariant(const Substitution& s, const VarSet& c) {
  if (!c.subset_of(s.domain()) || !c.subset_of(s.codomain()))
    throw std::invalid_argument("c not contained in substitution domain and codomain");
  for (const auto& p : c)
    if (s(p) != Term::var(p)) return false;
  for (const auto& q : s.domain()) {
    if (c.contains(q)) continue;
    VarSet vs = term_vars(s(q));
    for (const auto& p : c)
      if (vs.contains(p)) return false;
  }
  return true;
}

Pi2Rule::Pi2Rule(Signature sig_, VarSet bound_, std::vector<Term> premises_, Term conclusion_)
    : bound(std::move(bound_)),
      premises(std::move(premises_)),
      conclusion(conclusion_),
      sig(sig_) {
  VarSet cv = term_vars(conclusion);
  for (const auto& p : bound)
    if (cv.contains(p))
      throw std::invalid_argument("bound variable " + p + " occurs in the conclusion");
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  const Signature& sig;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos, msg); }

  Term formula() { return impl(); }

  Term impl() {
    Term a = disj();
    std::size_t save = pos;
    skip_ws();
    if (text.substr(pos, 2) == "->") {
      pos += 2;
      Term b = impl();
      return Term::imp(a, b);
    }
    pos = save;
    return a;
  }

  Term disj() {
    Term a = conj();
    for (;;) {
      std::size_t save = pos;
      skip_ws();
      std::size_t op_at = pos;
      if (text.substr(pos, 2) == "\\/") {
        pos += 2;
        if (sig.variety != Variety::LC) {
          pos = op_at;
          fail("connective \\/ not available under " + variety_name(sig.variety));
        }
        Term b = conj();
        a = Term::disj(a, b);
      } else {
        pos = save;
        return a;
      }
    }
  }

  Term conj() {
    Term a = unary();
    for (;;) {
      std::size_t save = pos;
      skip_ws();
      if (text.substr(pos, 2) == "/\\") {
        pos += 2;
        Term b = unary();
        a = Term::conj(a, b);
      } else {
        pos = save;
        return a;
      }
    }
  }

  // 'l' is a prefix operator only when not part of a longer identifier.
  bool at_keyword(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) return false;
    if (pos + 1 < text.size()) {
      char n = text[pos + 1];
      if (std::isalnum(static_cast<unsigned char>(n)) || n == '_') return false;
    }
    return true;
  }

  Term unary() {
    skip_ws();
    if (at_keyword('l')) {
      std::size_t op_at = pos;
      pos += 1;
      if (sig.variety != Variety::NIS) {
        pos = op_at;
        fail("connective l not available under " + variety_name(sig.variety));
      }
      return Term::lax(unary());
    }
    if (pos < text.size() && text[pos] == '~') {
      std::size_t op_at = pos;
      pos += 1;
      if (sig.variety != Variety::LC) {
        pos = op_at;
        fail("connective ~ not available under " + variety_name(sig.variety));
      }
      Term a = unary();
      return Term::imp(a, Term::bot());
    }
    return atom();
  }

  Term atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      pos++;
      Term a = formula();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      pos++;
      return a;
    }
    if (at_keyword('T')) {
      pos++;
      return Term::top();
    }
    if (at_keyword('F')) {
      if (sig.variety != Variety::LC)
        fail("constant F not available under " + variety_name(sig.variety));
      pos++;
      return Term::bot();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        pos++;
      std::string_view name = text.substr(start, pos - start);
      if (name == "T" || name == "F" || name == "l") {
        pos = start;
        fail("reserved symbol used as variable");
      }
      return Term::var(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

int precedence(Conn c) {
  switch (c) {
    case Conn::Imp: return 1;
    case Conn::Or: return 2;
    case Conn::And: return 3;
    case Conn::Lax: return 4;
    default: return 5;
  }
}

void print_rec(std::ostream& os, Term t, int parent_prec, bool right_of_same) {
  // '~a' sugar for a -> F
  if (t.kind() == Conn::Imp && t.rhs().kind() == Conn::Bot) {
    os << "~";
    print_rec(os, t.lhs(), precedence(Conn::Lax), false);
    return;
  }
  int prec = precedence(t.kind());
  switch (t.kind()) {
    case Conn::Var: os << t.var_name(); return;
    case Conn::Top: os << "T"; return;
    case Conn::Bot: os << "F"; return;
    case Conn::Lax:
      os << "l ";
      print_rec(os, t.child(), prec, false);
      return;
    default: break;
  }
  bool need_parens = prec < parent_prec || (prec == parent_prec && !right_of_same);
  // -> is right-associative; /\ and \/ left-associative
  if (t.kind() == Conn::Imp) need_parens = prec < parent_prec || (prec == parent_prec && right_of_same == false);
  if (need_parens) os << "(";
  const char* op = t.kind() == Conn::Imp ? " -> " : (t.kind() == Conn::And ? " /\\ " : " \\/ ");
  if (t.kind() == Conn::Imp) {
    print_rec(os, t.lhs(), prec + 1, false);
    os << op;
    print_rec(os, t.rhs(), prec, true);
  } else {
    print_rec(os, t.lhs(), prec, true);  // left-assoc: left child may share level
    os << op;
    print_rec(os, t.rhs(), prec + 1, false);
  }
  if (need_parens) os << ")";
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
  Parser p{text, 0, sig};
  Term t = p.formula();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError(p.pos, "trailing input");
  return t;
}

std::string print_term(Term t) {
  std::ostringstream os;
  print_rec(os, t, 0, true);
  return os.str();
}

std::string print_substitution(const Substitution& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& v : s.domain()) {
    if (!first) os << ", ";
    first = false;
    os << v << " |-> " << print_term(s(v));
  }
  os << "}";
  return os.str();
}

}  // namespace pi2
