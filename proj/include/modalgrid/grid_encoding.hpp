#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modalgrid/abstraction.hpp"
#include "modalgrid/formula.hpp"
#include "modalgrid/kripke.hpp"

namespace modalgrid {

// Reserved variables introduced by the reduction. The three d8 bits encode a
// mod-8 counter (a is the most significant bit); __u marks the added
// universal world.
inline constexpr const char* kD8BitA = "__d8a";
inline constexpr const char* kD8BitB = "__d8b";
inline constexpr const char* kD8BitC = "__d8c";
inline constexpr const char* kUniversalVar = "__u";

const std::set<std::string>& d8_bit_names();

// Three-literal conjunction asserting the counter value d (0..7).
FormulaPtr d8_eq(int d);

// Counter value encoded at a world by the three bit variables.
int d8_value(const Model& m, int world);

// Scope of the counter-successor clause inside the respect formula:
//   always       - the clause "(d8=d) -> [](d8 in {d, d+2, d+3})" is emitted
//                  for every d, independent of the variable set (default);
//   per_variable - it is emitted only inside the per-variable block, so an
//                  empty variable set produces `true` (kept for comparison).
enum class RespScope { always, per_variable };

// Conjunction forcing symmetric-related worlds to agree on the counter and on
// every variable in p_set. p_set must not contain reserved (__) names.
FormulaPtr psi_resp(const std::set<std::string>& p_set, RespScope scope = RespScope::always);

// Conjunction forcing every world to have +2 and +3 counter successors.
FormulaPtr psi_succ();

// Replace each Box by its counter-guarded form
//   AND_d ((d8=d) -> []((d8!=d) -> g(child)));
// homomorphic on variables and propositional connectives, with Dia translated
// through its Box definition. Input variables must not use the __ prefix.
FormulaPtr translate_g(const FormulaPtr& f);

// g(f) & psi_resp(variables(f)) & psi_succ(), with literal `true` conjuncts
// dropped.
FormulaPtr reduce_f(const FormulaPtr& f, RespScope scope = RespScope::always);

// __u & []!__u & []f. Rejects inputs already containing __u.
FormulaPtr localize(const FormulaPtr& f);

// Base valuation of a torus: variable -> set of (i,j) coordinates.
using TorusValuation = std::map<std::string, std::set<std::pair<int, int>>>;

// Torus valuation file: one "<var> <i> <j>" triple per line, '#' comments.
TorusValuation read_torus_valuation(std::istream& in);
TorusValuation parse_torus_valuation(const std::string& text);

// Torus stand-in for the grid: width x height worlds with reflexive loops
// plus right and up wraparound edges, the base valuation, and the d8 bits set
// so that d8(i,j) = (3i + 2j) mod 8. Requires width % 8 == 0 and
// height % 4 == 0 so the counter is consistent across the wraparound.
// World (i,j) has index j*width + i.
Model make_torus_hat_model(int width, int height, const TorusValuation& base_valuation);

// Add a fresh irreflexive world with edges to every existing world and __u
// true exactly there. Requires a reflexive model without __u. Returns the new
// model and the index of the added world.
std::pair<Model, int> add_universal_world(const Model& m);

struct ExtractedSubmodel {
  Model model;
  std::vector<int> original_world;  // new index -> index in the source model
};

// Induced submodel on the direct successors of w_u, densely re-indexed.
// Requires w_u irreflexive.
ExtractedSubmodel extract_generated_submodel(const Model& m, int w_u);

// Quotient by p_set plus the d8 bits, with every edge between classes of
// equal counter value removed (under the preconditions this deletes exactly
// the reflexive edges). Requires a reflexive phi_grid model that globally
// satisfies psi_resp(p_set); violations are reported with the failing check.
Model degrid(const Model& m, const std::set<std::string>& p_set);

// Unfold a degrid output into a (k+1) x (k+1) grid fragment starting at
// `start`: world (i,j) carries the valuation of its source world, and the
// only edges are right ((i,j)->(i+1,j)) and up ((i,j)->(i,j+1)). The +2/+3
// counter successors of every visited world must be unique and the two-step
// diamond must close; failures name the offending world. Fragment world (i,j)
// has index j*(k+1) + i.
Model unfold_grid_fragment(const Model& m0, int start, int k);

}  // namespace modalgrid
