#include "modalgrid/abstraction.hpp"

#include <set>

#include "modalgrid/frame_fo.hpp"

namespace modalgrid {

Partition compute_partition(const Model& m) {
  const Frame& f = m.frame;
  const int n = f.world_count();

  for (int w = 0; w < n; ++w)
    if (!f.edge(w, w))
      throw PreconditionViolation("model is not reflexive: world " + std::to_string(w) +
                                  " has no loop");

  if (auto v = find_violation(f, builtin_kernel("phi_eq"))) {
    const auto& a = *v;
    throw PreconditionViolation("frame violates phi_eq at (x=" + std::to_string(a[0]) +
                                ", y=" + std::to_string(a[1]) + ", z=" + std::to_string(a[2]) + ")");
  }

  Partition p;
  p.class_of.assign(n, -1);
  for (int w = 0; w < n; ++w) {
    if (p.class_of[w] != -1) continue;
    int cls = p.class_count();
    p.classes.push_back({});
    for (int w2 = w; w2 < n; ++w2) {
      if (p.class_of[w2] == -1 && sym_related(f, w, w2)) {
        p.class_of[w2] = cls;
        p.classes[cls].push_back(w2);
      }
    }
  }

  // The symmetric relation must be an equivalence here; phi_eq on reflexive
  // frames guarantees it, but verify rather than assume.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (sym_related(f, a, b) != (p.class_of[a] == p.class_of[b]))
        throw PreconditionViolation("symmetric relation is not transitive at worlds " +
                                    std::to_string(a) + " and " + std::to_string(b));
    }
  return p;
}

Model quotient(const Model& m, const std::set<std::string>& p_set) {
  Partition p = compute_partition(m);
  Model q;
  q.frame = Frame(p.class_count());
  for (int c = 0; c < p.class_count(); ++c)
    for (int c2 = 0; c2 < p.class_count(); ++c2)
      if (m.frame.edge(p.representative(c), p.representative(c2))) q.frame.add_edge(c, c2);

  for (const auto& var : p_set) {
    std::set<int> where;
    for (int c = 0; c < p.class_count(); ++c) {
      bool all = true;
      for (int w : p.classes[c])
        if (!m.holds(var, w)) {
          all = false;
          break;
        }
      if (all) where.insert(c);
    }
    if (!where.empty()) q.valuation[var] = std::move(where);
  }
  return q;
}

bool respects(const Model& m, const std::set<std::string>& p_set) {
  const int n = m.frame.world_count();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!sym_related(m.frame, a, b)) continue;
      for (const auto& var : p_set)
        if (m.holds(var, a) != m.holds(var, b)) return false;
    }
  return true;
}

AbstractionStructure check_abstraction_structure(const Frame& f) {
  const int n = f.world_count();
  AbstractionStructure s;

  s.reflexive = is_reflexive(f);

  s.max_two_successors = true;
  for (int w = 0; w < n && s.max_two_successors; ++w) {
    int outside = 0;
    for (int w2 : f.successors(w))
      if (w2 != w) ++outside;
    if (outside > 2) s.max_two_successors = false;
  }

  s.max_three_two_step = true;
  for (int w = 0; w < n && s.max_three_two_step; ++w) {
    std::set<int> targets;
    for (int y : f.successors(w)) {
      if (y == w) continue;
      for (int z : f.successors(y))
        if (z != y) targets.insert(z);
    }
    if (targets.size() > 3) s.max_three_two_step = false;
  }
  return s;
}

}  // namespace modalgrid
