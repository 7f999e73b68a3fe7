#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pi2 {

enum class Variety { ISL, LC, NIS };

std::string variety_name(Variety v);
std::optional<Variety> variety_from_name(std::string_view s);

// Connective tags. Var/Top are shared; Bot and Or exist only under LC,
// Lax (the nucleus) only under NIS.
enum class Conn : std::uint8_t { Var, Top, Bot, And, Or, Imp, Lax };

struct Signature {
  Variety variety;
  bool allows(Conn c) const;
};

inline Signature sig_isl() { return Signature{Variety::ISL}; }
inline Signature sig_lc() { return Signature{Variety::LC}; }
inline Signature sig_nis() { return Signature{Variety::NIS}; }

namespace detail {
struct TermNode;
}

// Immutable hash-consed formula. Copying is pointer copy; structural
// equality is pointer equality.
class Term {
 public:
  Term() : node_(nullptr) {}

  static Term var(std::string_view name);
  static Term top();
  static Term bot();
  static Term conj(Term a, Term b);
  static Term disj(Term a, Term b);
  static Term imp(Term a, Term b);
  static Term lax(Term a);
  // (a -> b) /\ (b -> a)
  static Term iff(Term a, Term b);

  Conn kind() const;
  const std::string& var_name() const;  // Var only
  Term lhs() const;                     // And/Or/Imp
  Term rhs() const;                     // And/Or/Imp
  Term child() const;                   // Lax
  int node_count() const;
  std::size_t hash() const;
  bool valid_in(const Signature& sig) const;  // uses only sig's connectives

  bool operator==(const Term& o) const { return node_ == o.node_; }
  bool operator!=(const Term& o) const { return node_ != o.node_; }
  explicit operator bool() const { return node_ != nullptr; }

  const detail::TermNode* raw() const { return node_; }

 private:
  explicit Term(const detail::TermNode* n) : node_(n) {}
  const detail::TermNode* node_;
  friend struct detail::TermNode;
};

// Deterministic total order: node count, then structure.
int compare(Term a, Term b);
struct TermLess {
  bool operator()(Term a, Term b) const { return compare(a, b) < 0; }
};

struct TermHash {
  std::size_t operator()(Term t) const { return t.hash(); }
};

// Finite ordered set of distinct variable names, lexicographic order.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names);
  VarSet(std::initializer_list<std::string> names)
      : VarSet(std::vector<std::string>(names)) {}

  bool contains(std::string_view name) const;
  bool subset_of(const VarSet& o) const;
  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  int index_of(std::string_view name) const;  // -1 when absent

  VarSet unite(const VarSet& o) const;
  VarSet minus(const VarSet& o) const;
  bool operator==(const VarSet& o) const { return names_ == o.names_; }

  auto begin() const { return names_.begin(); }
  auto end() const { return names_.end(); }

 private:
  std::vector<std::string> names_;  // sorted, unique
};

VarSet term_vars(Term t);
VarSet terms_vars(const std::vector<Term>& ts);

// Finite variable -> term map with explicit domain and codomain.
class Substitution {
 public:
  Substitution(VarSet domain, VarSet codomain, std::map<std::string, Term> map);

  static Substitution identity(const VarSet& vars);

  const VarSet& domain() const { return domain_; }
  const VarSet& codomain() const { return codomain_; }
  Term operator()(std::string_view var) const;
  const std::map<std::string, Term>& map() const { return map_; }

 private:
  VarSet domain_, codomain_;
  std::map<std::string, Term> map_;
};

Term apply_substitution(const Substitution& s, Term t);
std::vector<Term> apply_substitution(const Substitution& s, const std::vector<Term>& ts);
Substitution compose(const Substitution& outer, const Substitution& inner);
bool is_c_invariant(const Substitution& s, const VarSet& c);

// Pi2 rule: premises may use the bound context, the conclusion must not.
struct Pi2Rule {
  VarSet bound;
  std::vector<Term> premises;
  Term conclusion;
  Signature sig;

  Pi2Rule(Signature sig, VarSet bound, std::vector<Term> premises, Term conclusion);
};

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Grammar:
//   formula := impl ; impl := disj ("->" impl)? ; disj := conj ("\/" conj)* ;
//   conj := unary ("/\" unary)* ; unary := ("l" | "~") unary | atom ;
//   atom := "T" | "F" | IDENT | "(" formula ")"
// "F" and "\/" and "~" are LC-only; "l" is NIS-only.
Term parse_term(std::string_view text, const Signature& sig);
std::string print_term(Term t);
std::string print_substitution(const Substitution& s);

}  // namespace pi2
