#include <random>

#include "doctest.h"
#include "pi2/syntax.hpp"

using namespace pi2;

namespace {

Term t_var(const char* n) { return Term::var(n); }

// random AST over given variables, LC-shaped when allow_lc
Term random_term(std::mt19937_64& rng, const Signature& sig, const std::vector<std::string>& vars,
                 int depth) {
  std::uniform_int_distribution<int> pick(0, 99);
  int r = pick(rng);
  if (depth == 0 || r < 25) {
    if (r % 5 == 0) return Term::top();
    if (sig.variety == Variety::LC && r % 7 == 0) return Term::bot();
    return Term::var(vars[r % vars.size()]);
  }
  Term a = random_term(rng, sig, vars, depth - 1);
  Term b = random_term(rng, sig, vars, depth - 1);
  switch (r % 4) {
    case 0: return Term::conj(a, b);
    case 1: return Term::imp(a, b);
    case 2:
      if (sig.variety == Variety::LC) return Term::disj(a, b);
      if (sig.variety == Variety::NIS) return Term::lax(a);
      return Term::conj(a, b);
    default:
      if (sig.variety == Variety::NIS && r % 8 < 4) return Term::lax(b);
      return Term::imp(b, a);
  }
}

}  // namespace

TEST_CASE("parse basic forms") {
  Signature isl = sig_isl();
  CHECK(parse_term("T", isl) == Term::top());
  CHECK(parse_term("(p -> q) /\\ p", isl) ==
        Term::conj(Term::imp(t_var("p"), t_var("q")), t_var("p")));
  Signature lc = sig_lc();
  Term tt_premise = parse_term("g -> ((p -> r) \\/ (r -> q) \\/ c)", lc);
  CHECK(tt_premise ==
        Term::imp(t_var("g"),
                  Term::disj(Term::disj(Term::imp(t_var("p"), t_var("r")),
                                        Term::imp(t_var("r"), t_var("q"))),
                             t_var("c"))));
}

TEST_CASE("precedence and associativity") {
  Signature lc = sig_lc();
  // -> right-assoc, /\ binds tighter than \/, ~ tightest
  CHECK(parse_term("a -> b -> c", lc) ==
        Term::imp(t_var("a"), Term::imp(t_var("b"), t_var("c"))));
  CHECK(parse_term("a /\\ b \\/ c", lc) ==
        Term::disj(Term::conj(t_var("a"), t_var("b")), t_var("c")));
  CHECK(parse_term("~a \\/ b", lc) ==
        Term::disj(Term::imp(t_var("a"), Term::bot()), t_var("b")));
  CHECK(parse_term("a /\\ b -> c", lc) ==
        Term::imp(Term::conj(t_var("a"), t_var("b")), t_var("c")));
}

TEST_CASE("variety-restricted connectives rejected") {
  CHECK_THROWS_AS(parse_term("p \\/ q", sig_isl()), ParseError);
  CHECK_THROWS_AS(parse_term("F", sig_isl()), ParseError);
  CHECK_THROWS_AS(parse_term("~p", sig_nis()), ParseError);
  CHECK_THROWS_AS(parse_term("l p", sig_lc()), ParseError);
  CHECK_NOTHROW(parse_term("l p", sig_nis()));
  CHECK_NOTHROW(parse_term("~p", sig_lc()));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_term("(p -> ", sig_isl());
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position >= 5);
  }
  try {
    parse_term("p \\/ q", sig_isl());
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position == 2);
  }
}

TEST_CASE("identifiers starting with reserved letters parse as variables") {
  Signature nis = sig_nis();
  Term t = parse_term("lp -> l p", nis);
  CHECK(t == Term::imp(t_var("lp"), Term::lax(t_var("p"))));
  CHECK(parse_term("Tx", sig_isl()) == t_var("Tx"));
}

TEST_CASE("print/parse round-trip on random terms") {
  std::mt19937_64 rng(20240901);
  for (Variety v : {Variety::ISL, Variety::LC, Variety::NIS}) {
    Signature sig{v};
    for (int i = 0; i < 300; i++) {
      Term t = random_term(rng, sig, {"p", "q", "r"}, 4);
      CHECK(parse_term(print_term(t), sig) == t);
    }
  }
}

TEST_CASE("apply_substitution") {
  Signature isl = sig_isl();
  VarSet pq{"p", "q"};
  Substitution s(pq, VarSet{"q"},
                 {{"p", Term::top()}, {"q", t_var("q")}});
  CHECK(apply_substitution(s, parse_term("p /\\ q", isl)) == parse_term("T /\\ q", isl));
  Substitution id = Substitution::identity(pq);
  Term t = parse_term("(p -> q) /\\ p", isl);
  CHECK(apply_substitution(id, t) == t);
  // sigma from the two-incomparable-unifiers example
  VarSet xyz{"x", "y", "z"};
  Substitution sigma(xyz, VarSet{"y", "z"},
                     {{"x", Term::top()}, {"y", t_var("y")}, {"z", t_var("z")}});
  CHECK(apply_substitution(sigma, parse_term("((x -> z) /\\ (y -> z)) -> z", isl)) ==
        parse_term("((T -> z) /\\ (y -> z)) -> z", isl));
  CHECK_THROWS_AS(apply_substitution(s, t_var("zz")), std::invalid_argument);
}

TEST_CASE("compose unit laws and pointwise definition") {
  VarSet xy{"x", "y"};
  Substitution id = Substitution::identity(xy);
  Substitution theta(xy, VarSet{"x"}, {{"x", t_var("x")}, {"y", Term::top()}});
  Substitution left = compose(theta, id);
  for (const auto& v : xy) CHECK(left(v) == theta(v));
  Substitution right = compose(Substitution::identity(VarSet{"x"}), theta);
  for (const auto& v : xy) CHECK(right(v) == theta(v));
  // {y |-> T} . {x|->x, y|->y} = {x|->x, y|->T}
  Substitution inner = Substitution::identity(xy);
  Substitution outer(xy, VarSet{"x"}, {{"x", t_var("x")}, {"y", Term::top()}});
  Substitution c = compose(outer, inner);
  CHECK(c("x") == t_var("x"));
  CHECK(c("y") == Term::top());
  CHECK_THROWS_AS(compose(Substitution::identity(VarSet{"zz"}), theta),
                  std::invalid_argument);
}

TEST_CASE("composition associativity on random triples") {
  std::mt19937_64 rng(7);
  Signature isl = sig_isl();
  std::vector<std::string> names{"a", "b", "c"};
  VarSet abc(names);
  for (int i = 0; i < 50; i++) {
    auto mk = [&](VarSet dom) {
      std::map<std::string, Term> m;
      for (const auto& v : dom) m.emplace(v, random_term(rng, isl, names, 2));
      return Substitution(dom, abc, std::move(m));
    };
    Substitution f = mk(abc), g = mk(abc), h = mk(abc);
    Substitution l = compose(f, compose(g, h));
    Substitution r = compose(compose(f, g), h);
    for (const auto& v : abc) CHECK(l(v) == r(v));
  }
}

TEST_CASE("is_c_invariant") {
  VarSet pq{"p", "q"};
  VarSet c{"p"};
  Substitution ok(pq, pq.unite(VarSet{"r"}),
                  {{"p", t_var("p")}, {"q", Term::imp(t_var("r"), t_var("r"))}});
  CHECK(is_c_invariant(ok, c));
  Substitution moves(pq, pq, {{"p", Term::top()}, {"q", t_var("q")}});
  CHECK_FALSE(is_c_invariant(moves, c));
  Substitution leaks(pq, pq, {{"p", t_var("p")}, {"q", Term::conj(t_var("p"), t_var("q"))}});
  CHECK_FALSE(is_c_invariant(leaks, c));
  CHECK_THROWS_AS(is_c_invariant(Substitution::identity(VarSet{"q"}), c),
                  std::invalid_argument);
}

TEST_CASE("c-invariant substitutions closed under composition") {
  std::mt19937_64 rng(99);
  Signature isl = sig_isl();
  VarSet dom{"c1", "x", "y"};
  VarSet c{"c1"};
  std::vector<std::string> free_names{"x", "y"};
  auto mk_inv = [&]() {
    std::map<std::string, Term> m;
    m.emplace("c1", t_var("c1"));
    for (const auto& v : free_names) m.emplace(v, random_term(rng, isl, free_names, 2));
    return Substitution(dom, dom, std::move(m));
  };
  for (int i = 0; i < 50; i++) {
    Substitution f = mk_inv(), g = mk_inv();
    CHECK(is_c_invariant(f, c));
    CHECK(is_c_invariant(g, c));
    CHECK(is_c_invariant(compose(f, g), c));
  }
}

TEST_CASE("pi2 rule rejects bound variables in the conclusion") {
  Signature lc = sig_lc();
  CHECK_THROWS_AS(Pi2Rule(lc, VarSet{"r"}, {parse_term("r", lc)}, parse_term("r", lc)),
                  std::invalid_argument);
  CHECK_NOTHROW(Pi2Rule(lc, VarSet{"r"},
                        {parse_term("g -> ((p -> r) \\/ (r -> q) \\/ c)", lc)},
                        parse_term("g -> ((p -> q) \\/ c)", lc)));
}
