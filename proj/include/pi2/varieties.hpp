#pragma once

#include <memory>
#include <vector>

#include "pi2/algebra.hpp"
#include "pi2/budget.hpp"
#include "pi2/kripke.hpp"
#include "pi2/syntax.hpp"

namespace pi2 {

struct EngineOptions {
  int isl_fast_kripke_bound = 4;  // counter-model fast path inside isl_valid
  int nis_model_bound = 5;        // S-poset size bound for NIS decisions
  int eval_family_kripke_bound = 4;  // rooted models backing ISL eval points
  int eval_family_nis_bound = 3;     // S-posets backing NIS eval points
};

// One evaluation point: a finite algebra of the variety plus an assignment
// for a fixed variable tuple.
struct EvalPoint {
  AlgebraPtr algebra;
  std::vector<int> assignment;  // indexed like the VarSet order
};

// Per-variety decision engine. Stateless from the caller's view; memoizes
// sequent-search results and model caches internally.
class Engine {
 public:
  explicit Engine(EngineOptions opts = {});
  ~Engine();

  bool valid(Signature sig, Term t) const;
  bool entails(Signature sig, const std::vector<Term>& premises, Term t) const;
  bool equal(Signature sig, Term a, Term b) const;
  bool equal_under(Signature sig, const std::vector<Term>& premises, Term a, Term b) const;

  bool lc_valid(Term t) const;
  bool lc_entails(const std::vector<Term>& premises, Term t) const;
  bool isl_valid(Term t) const;
  bool isl_entails(const std::vector<Term>& premises, Term t) const;
  bool nis_valid(Term t) const;
  bool nis_entails(const std::vector<Term>& premises, Term t) const;

  // Cross-validation surfaces.
  bool isl_valid_kripke_only(Term t, int rooted_model_bound) const;
  bool isl_valid_sequent_only(Term t) const;
  bool isl_entails_sequent_only(const std::vector<Term>& premises, Term t) const;
  bool lc_valid_frames(Term t, int max_worlds) const;  // exhaustive prelinear frames

  // Evaluation family for saturation: all (algebra, assignment) points over
  // `vars` whose assignment makes every premise equal top. For LC the family
  // is exactly separating; for ISL separations are sound and merges must be
  // confirmed (needs_confirmation); for NIS the family is the bounded
  // semantics at eval_family_nis_bound and confirmation rechecks at the full
  // nis_model_bound.
  std::vector<EvalPoint> eval_points(Signature sig, const VarSet& vars,
                                     const std::vector<Term>& premises) const;
  bool needs_confirmation(Signature sig) const;
  bool confirm_equal(Signature sig, const std::vector<Term>& premises, Term a, Term b) const;

  const EngineOptions& options() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pi2
