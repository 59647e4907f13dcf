#pragma once

#include <string>
#include <vector>

#include "modalgrid/formula.hpp"
#include "modalgrid/grid_encoding.hpp"
#include "modalgrid/kripke.hpp"

namespace modalgrid {

// A failed case always carries enough text to replay it: a model file plus a
// formula (either may be empty when the case involves only one of them).
struct CaseFailure {
  std::string description;
  std::string model_text;
  std::string formula_text;
};

struct SuiteReport {
  std::string suite;
  long cases_run = 0;
  std::vector<CaseFailure> failures;
  double wall_seconds = 0.0;

  bool passed() const { return failures.empty(); }
};

// Verification suites (all seedless: exhaustive enumerations or fixed pools):
//   lemma3        - quotients of small reflexive phi_grid frames have the
//                   grid's forbidden-subgraph structure
//   lemma4        - satisfaction is invariant under the quotient
//   lemma5        - psi_resp forces the symmetric relation to respect the
//                   variables and the counter; two-step counter distances
//   gbridge       - the counter-guarded Box matches quantification over
//                   non-symmetric, non-reflexive successors
//   thm6-forward  - torus models of psi globally satisfy the reduction of psi
//   thm8-roundtrip- universal-world construction round-trips through
//                   extraction, degrid and unfolding
//   subframe      - basic built-in kernels are preserved by induced subframes
//   oracle        - search vs. reference enumerator, FO evaluator vs. plain
//                   enumeration, and the fixed positive/negative controls
SuiteReport run_suite(const std::string& name);
std::vector<std::string> suite_names();

struct PipelineStage {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PipelineReport {
  std::vector<PipelineStage> stages;
  bool all_passed = false;
};

// End-to-end run: check psi on the plain torus, build the hat model and check
// the reduction globally, add the universal world and check the localized
// reduction there, extract the generated submodel back, degrid, unfold a
// (k+1)x(k+1) fragment and check psi on its interior. Stages after a failed
// stage are not run.
PipelineReport run_pipeline(const FormulaPtr& psi, int width, int height,
                            const TorusValuation& base, int k);

}  // namespace modalgrid
