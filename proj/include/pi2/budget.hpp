#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pi2 {

// Resource knobs for every enumerating operation. All limits are positive;
// hitting one raises ResourceExceeded, never a silently wrong answer.
struct Budget {
  int max_carrier = 600;          // max free/presented algebra size
  int max_congruences = 20000;    // max congruences enumerated per algebra
  long max_candidates = 2000000;  // max substitution candidates per enumeration
  int max_fresh_vars = 2;         // codomain fresh-variable count for samplers
  int nis_model_bound = 5;        // S-poset size bound for the NIS engine
  int isl_kripke_bound = 6;       // rooted-model size bound for ISL counter-model search
  long max_closure_steps = 50000000;
};

inline Budget default_budget() { return Budget{}; }

struct ResourceExceeded : std::runtime_error {
  explicit ResourceExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pi2
