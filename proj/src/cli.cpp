#include "pi2/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pi2/admissibility.hpp"
#include "pi2/free_algebra.hpp"
#include "pi2/interpolation.hpp"
#include "pi2/json_io.hpp"

namespace pi2 {

namespace {

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

Json budget_json(const Budget& b, const EngineOptions& eo) {
  Json j;
  j["max_carrier"] = b.max_carrier;
  j["max_congruences"] = b.max_congruences;
  j["max_candidates"] = b.max_candidates;
  j["max_fresh_vars"] = b.max_fresh_vars;
  j["nis_model_bound"] = eo.nis_model_bound;
  j["isl_fast_kripke_bound"] = eo.isl_fast_kripke_bound;
  return j;
}

Signature parse_variety_flag(const std::string& v) {
  auto var = variety_from_name(v);
  if (!var) throw std::invalid_argument("unknown variety '" + v + "'");
  return Signature{*var};
}

Json fixtures_compute(const Engine& engine, const Budget& budget) {
  Json j;
  VarSet p_set({std::vector<std::string>{"p"}});
  GeneratedAlgebra f1 = free_algebra(engine, sig_isl(), p_set, budget);
  j["n1_free_isl_one_generator"] = f1.algebra->size;
  Presentation pres(sig_isl(), VarSet{"x", "y"},
                    {{Term::imp(Term::imp(Term::var("x"), Term::var("y")), Term::var("y")),
                      Term::top()}});
  PresentedAlgebra n2 = finitely_presented(engine, pres, budget);
  j["n2_presented_peirce_like"] = n2.carrier.algebra->size;
  j["n3_homs_f1_to_f1"] =
      enumerate_homomorphisms(f1.algebra, f1.algebra, budget).size();
  j["free_isl_two_generators"] =
      free_algebra(engine, sig_isl(), VarSet{"x", "y"}, budget).algebra->size;
  j["free_lc_zero_generators"] = free_algebra(engine, sig_lc(), VarSet{}, budget).algebra->size;
  j["free_lc_one_generator"] = free_algebra(engine, sig_lc(), p_set, budget).algebra->size;
  j["free_nis_one_generator"] = free_algebra(engine, sig_nis(), p_set, budget).algebra->size;

  Signature isl = sig_isl();
  Term delta = parse_term("((x -> z) /\\ (y -> z)) -> z", isl);
  ForallFactorization ff =
      forall_factorize(engine, isl, {delta}, VarSet{"z"}, budget, VarSet{"x", "y"});
  Json factors = Json::array();
  for (const Factor& f : ff.factors) {
    Json fs = Json::array();
    for (Term t : f.formulas) fs.push_back(print_term(t));
    factors.push_back(fs);
  }
  j["isl_example_factorization"] = factors;

  UnificationProblem prob(isl, VarSet{"x", "y", "z"}, VarSet{"z"},
                          {{delta, Term::top()}});
  UnifierBasis basis = svr_unify(engine, prob, budget);
  Json us = Json::array();
  for (const Substitution& s : basis.unifiers) us.push_back(print_substitution(s));
  j["isl_example_svr_basis"] = us;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pi2-rule admissibility and svr-unification for ISL, LC and NIS", "pi2"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Budget budget;
  EngineOptions eopts;
  bool json_out = false;
  app.add_flag("--json", json_out, "emit JSON instead of text");
  app.add_option("--max-carrier", budget.max_carrier, "free-algebra carrier bound");
  app.add_option("--max-congruences", budget.max_congruences, "congruence enumeration bound");
  app.add_option("--max-candidates", budget.max_candidates, "substitution candidate bound");
  app.add_option("--max-fresh-vars", budget.max_fresh_vars, "fresh codomain variables");
  app.add_option("--nis-bound", eopts.nis_model_bound, "NIS S-poset model bound");
  app.add_option("--isl-kripke-bound", eopts.isl_fast_kripke_bound,
                 "rooted-model bound for the ISL counter-model fast path");

  std::string variety_flag = "isl";
  std::string formula_arg;
  std::vector<std::string> premise_args;
  std::string file_arg;
  std::string fixtures_file = "fixtures/golden.json";
  bool fixtures_write = false;

  CLI::App* validity = app.add_subcommand("validity", "decide validity of a formula");
  validity->add_option("--variety", variety_flag, "isl | lc | nis")->required();
  validity->add_option("formula", formula_arg, "formula text")->required();

  CLI::App* entails = app.add_subcommand("entails", "decide entailment from premises");
  entails->add_option("--variety", variety_flag, "isl | lc | nis")->required();
  entails->add_option("--premise", premise_args, "premise formula (repeatable)");
  entails->add_option("formula", formula_arg, "conclusion formula")->required();

  CLI::App* unify_cmd = app.add_subcommand("unify", "standard unification basis");
  unify_cmd->add_option("problem", file_arg, "problem JSON file")->required();

  CLI::App* svr_cmd = app.add_subcommand("svr-unify", "unification with simple variable restriction");
  svr_cmd->add_option("problem", file_arg, "problem JSON file")->required();

  CLI::App* fact_cmd = app.add_subcommand("factorize", "forall-factorization of a formula set");
  fact_cmd->add_option("input", file_arg, "input JSON file")->required();

  CLI::App* adm_cmd = app.add_subcommand("admissible", "Pi2-rule admissibility");
  adm_cmd->add_option("rule", file_arg, "rule JSON file")->required();

  CLI::App* sposet_cmd = app.add_subcommand("sposet", "S-poset operations");
  sposet_cmd->require_subcommand(1);
  std::string sposet_file;
  CLI::App* sp_morph = sposet_cmd->add_subcommand("check-morphism", "check conditions (i)-(iv)");
  sp_morph->add_option("input", sposet_file, "JSON with source, target, map")->required();
  CLI::App* sp_proj = sposet_cmd->add_subcommand("projective", "antichain-cover projectivity");
  sp_proj->add_option("input", sposet_file, "S-poset JSON")->required();
  CLI::App* sp_retract = sposet_cmd->add_subcommand("retract", "build a retract of an embedding");
  sp_retract->add_option("input", sposet_file, "JSON with source, target, map")->required();
  CLI::App* sp_dual = sposet_cmd->add_subcommand("dual", "dual nuclear implicative semilattice");
  sp_dual->add_option("input", sposet_file, "S-poset JSON")->required();

  CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "recompute and diff golden values");
  fixtures_cmd->add_option("--file", fixtures_file, "fixtures JSON path");
  fixtures_cmd->add_flag("--write", fixtures_write, "rewrite the fixtures file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  Engine engine(eopts);
  try {
    if (*validity || *entails) {
      Signature sig = parse_variety_flag(variety_flag);
      Term conclusion = parse_term(formula_arg, sig);
      std::vector<Term> premises;
      for (const auto& s : premise_args) premises.push_back(parse_term(s, sig));
      bool res = engine.entails(sig, premises, conclusion);
      if (json_out) {
        Json j;
        j["command"] = *validity ? "validity" : "entails";
        j["variety"] = variety_name(sig.variety);
        j["premises"] = premise_args;
        j["formula"] = print_term(conclusion);
        j["result"] = res ? (*validity ? "valid" : "entailed") : (*validity ? "invalid" : "not-entailed");
        j["budgets"] = budget_json(budget, eopts);
        out << j.dump(2) << "\n";
      } else {
        out << (res ? (*validity ? "valid" : "entailed") : (*validity ? "invalid" : "not-entailed"))
            << "\n";
      }
      return 0;
    }

    if (*unify_cmd || *svr_cmd) {
      Json in = load_json(file_arg);
      UnificationProblem p = problem_from_json(in);
      auto supplied = factorization_from_json(in, p.sig);
      UnifierBasis basis = *unify_cmd ? unify(engine, p, budget)
                                      : svr_unify(engine, p, budget, supplied);
      if (json_out) {
        Json j = basis_to_json(basis);
        j["command"] = *unify_cmd ? "unify" : "svr-unify";
        j["budgets"] = budget_json(budget, eopts);
        out << j.dump(2) << "\n";
      } else {
        out << (basis.unifiers.empty() ? "NOT_UNIFIABLE" : "UNIFIABLE") << " ("
            << basis.unifiers.size() << " unifier(s), " << certificate_name(basis.certificate)
            << ")\n";
        for (const Substitution& s : basis.unifiers) out << "  " << print_substitution(s) << "\n";
      }
      return 0;
    }

    if (*fact_cmd) {
      Json in = load_json(file_arg);
      auto var = variety_from_name(in.at("variety").get<std::string>());
      if (!var) throw std::invalid_argument("unknown variety");
      Signature sig{*var};
      std::vector<Term> delta;
      for (const auto& e : in.at("delta")) delta.push_back(parse_term(e.get<std::string>(), sig));
      std::vector<std::string> bound_names;
      for (const auto& e : in.at("bound")) bound_names.push_back(e.get<std::string>());
      VarSet bound(bound_names);
      std::optional<VarSet> free_override;
      if (in.contains("free")) {
        std::vector<std::string> fn;
        for (const auto& e : in.at("free")) fn.push_back(e.get<std::string>());
        free_override = VarSet(fn);
      }
      Json j;
      j["command"] = "factorize";
      j["variety"] = variety_name(sig.variety);
      j["bound"] = bound.names();
      auto supplied = factorization_from_json(in, sig);
      if (supplied) {
        // verification path for a supplied candidate factorization
        std::vector<std::string> how;
        for (const auto& theta : *supplied)
          if (!verify_factor(engine, sig, theta, delta, bound))
            throw std::invalid_argument("supplied factor fails condition (1)");
        how.push_back("condition-1:entailment");
        bool cert2 = false;
        try {
          ForallFactorization ff = forall_factorize(engine, sig, delta, bound, budget, free_override);
          cert2 = true;
          for (const Factor& xi : ff.factors) {
            bool dominated = false;
            for (const auto& theta : *supplied) {
              bool all_ent = true;
              for (Term t : theta)
                if (!engine.entails(sig, xi.formulas, t)) { all_ent = false; break; }
              if (all_ent) { dominated = true; break; }
            }
            if (!dominated) cert2 = false;
          }
          if (cert2) how.push_back("condition-2:enumeration");
        } catch (const ResourceExceeded&) {
          if (delta.size() == 1 && supplied->size() == 1 && supplied->front().size() == 1) {
            Pi2Rule probe(sig, bound, delta, supplied->front().front());
            auto tt = match_tt_rule(probe);
            if (tt && certify_tt_expansion(*tt, 4)) {
              cert2 = true;
              how.push_back("condition-2:bisimulation-expansion(models<=4)");
            }
          }
        }
        if (!cert2) throw ResourceExceeded("supplied factorization not certifiable within budget");
        Json factors = Json::array();
        for (const auto& theta : *supplied) {
          Json fs = Json::array();
          for (Term t : theta) fs.push_back(print_term(t));
          factors.push_back(fs);
        }
        j["factors"] = factors;
        j["provenance"] = "supplied-verified";
        j["certification"] = how;
      } else {
        ForallFactorization ff = forall_factorize(engine, sig, delta, bound, budget, free_override);
        Json factors = Json::array();
        for (const Factor& f : ff.factors) {
          Json fs = Json::array();
          for (Term t : f.formulas) fs.push_back(print_term(t));
          factors.push_back(fs);
        }
        j["factors"] = factors;
        j["provenance"] = ff.provenance;
        j["free"] = ff.free.names();
      }
      j["budgets"] = budget_json(budget, eopts);
      if (json_out) {
        out << j.dump(2) << "\n";
      } else {
        out << j["factors"].size() << " factor(s), " << j["provenance"].get<std::string>() << "\n";
        for (const auto& f : j["factors"]) {
          out << "  {";
          for (std::size_t i = 0; i < f.size(); i++)
            out << (i ? ", " : " ") << f[i].get<std::string>();
          out << " }\n";
        }
      }
      return 0;
    }

    if (*adm_cmd) {
      Json in = load_json(file_arg);
      Pi2Rule rule = rule_from_json(in);
      auto supplied = factorization_from_json(in, rule.sig);
      AdmissibilityVerdict v = check_admissible(engine, rule, budget, supplied);
      if (json_out) {
        Json j = verdict_to_json(v);
        j["command"] = "admissible";
        j["rule"] = in;
        j["budgets"] = budget_json(budget, eopts);
        out << j.dump(2) << "\n";
      } else {
        out << verdict_name(v.verdict) << " (" << certification_path_name(v.path) << ")\n";
        if (v.witness) out << "  witness: " << print_substitution(*v.witness) << "\n";
        for (const auto& n : v.notes) out << "  note: " << n << "\n";
      }
      return v.verdict == Verdict::UndecidedResource ? 2 : 0;
    }

    if (*sposet_cmd) {
      Json in = load_json(sposet_file);
      Json j;
      if (*sp_morph || *sp_retract) {
        PartialMap f = partial_map_from_json(in.at("source"), in.at("target"), in);
        if (*sp_morph) {
          MorphismCheck c = is_morphism(f);
          j["command"] = "sposet check-morphism";
          j["morphism"] = c.ok;
          if (!c.ok) j["violated"] = c.violated;
        } else {
          PartialMap r = build_retract(f);
          j["command"] = "sposet retract";
          Json m = Json::object();
          for (int yy = 0; yy < r.source.size(); yy++)
            if (r.defined(yy)) {
              std::string from = yy < (int)f.target.labels.size() ? f.target.labels[yy]
                                                                  : "e" + std::to_string(yy);
              std::string to = r(yy) < (int)f.source.labels.size() ? f.source.labels[r(yy)]
                                                                   : "e" + std::to_string(r(yy));
              m[from] = to;
            }
          j["retract"] = m;
        }
      } else if (*sp_proj) {
        SPoset x = sposet_from_json(in);
        j["command"] = "sposet projective";
        j["projective_dual"] = is_projective_dual(x);
      } else {
        SPoset x = sposet_from_json(in);
        AlgebraPtr a = dual_algebra(x);
        j["command"] = "sposet dual";
        j["carrier"] = a->names;
        j["size"] = a->size;
        Json lax = Json::object();
        for (int e = 0; e < a->size; e++) lax[a->names[e]] = a->names[a->lax(e)];
        j["lax"] = lax;
      }
      j["budgets"] = budget_json(budget, eopts);
      if (json_out)
        out << j.dump(2) << "\n";
      else {
        Json copy = j;
        copy.erase("budgets");
        out << copy.dump(2) << "\n";
      }
      return 0;
    }

    if (*fixtures_cmd) {
      Json computed = fixtures_compute(engine, budget);
      if (fixtures_write) {
        std::ofstream f(fixtures_file);
        if (!f) throw std::invalid_argument("cannot write " + fixtures_file);
        f << computed.dump(2) << "\n";
        out << "wrote " << fixtures_file << "\n";
        return 0;
      }
      Json stored = load_json(fixtures_file);
      bool same = stored == computed;
      if (json_out) {
        Json j;
        j["command"] = "fixtures";
        j["match"] = same;
        j["computed"] = computed;
        if (!same) j["stored"] = stored;
        out << j.dump(2) << "\n";
      } else {
        out << (same ? "OK: fixtures match" : "DIFF: fixtures differ") << "\n";
        if (!same) {
          out << "computed: " << computed.dump(2) << "\n";
          out << "stored:   " << stored.dump(2) << "\n";
        }
      }
      return 0;
    }
  } catch (const ResourceExceeded& e) {
    err << "resource bound exceeded: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand executed\n";
  return 1;
}

}  // namespace pi2
