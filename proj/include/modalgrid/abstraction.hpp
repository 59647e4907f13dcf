#pragma once

#include <set>
#include <string>
#include <vector>

#include "modalgrid/kripke.hpp"

namespace modalgrid {

// Equivalence classes of the symmetric-edge relation. Class indices are
// assigned by smallest member world; the smallest member is the canonical
// representative.
struct Partition {
  std::vector<int> class_of;             // world -> class index
  std::vector<std::vector<int>> classes; // sorted members, ordered by smallest member

  int class_count() const { return static_cast<int>(classes.size()); }
  int representative(int cls) const { return classes[cls].front(); }
};

// Partition the model's worlds by the symmetric-edge relation.
// Requires a reflexive phi_eq-model; the relation is verified to be an
// equivalence before returning. Throws PreconditionViolation naming the
// witnessing worlds otherwise.
Partition compute_partition(const Model& m);

// The quotient model: worlds are the classes of compute_partition(m), a class
// edge is the representatives' edge, a variable p in p_set is true at a class
// iff it is true at all members, and variables outside p_set are false
// everywhere (dropped from the valuation).
Model quotient(const Model& m, const std::set<std::string>& p_set);

// True iff symmetric-related worlds agree on every variable in p_set.
// Defined for arbitrary models.
bool respects(const Model& m, const std::set<std::string>& p_set);

struct AbstractionStructure {
  bool reflexive = false;            // every world has a self-loop
  bool max_two_successors = false;   // <= 2 direct successors besides itself
  bool max_three_two_step = false;   // <= 3 worlds on loop-free two-step paths
};

// Pure structural predicate on a frame (intended for quotient frames).
AbstractionStructure check_abstraction_structure(const Frame& f);

}  // namespace modalgrid
