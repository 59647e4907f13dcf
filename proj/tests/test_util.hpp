#pragma once

#include <random>
#include <string>
#include <vector>

#include "modalgrid/formula.hpp"
#include "modalgrid/kripke.hpp"

namespace testutil {

using namespace modalgrid;

// Deterministic formula generator (fixed-seed std::mt19937 is portable).
inline FormulaPtr random_formula(std::mt19937& rng, int depth,
                                 const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> pick(0, 99);
  int roll = pick(rng);
  if (depth == 0 || roll < 25) {
    if (roll % 10 == 0) return fml::top();
    if (roll % 10 == 1) return fml::bot();
    std::uniform_int_distribution<size_t> v(0, vars.size() - 1);
    return fml::var(vars[v(rng)]);
  }
  if (roll < 40) return fml::neg(random_formula(rng, depth - 1, vars));
  if (roll < 50) return fml::box(random_formula(rng, depth - 1, vars));
  if (roll < 60) return fml::dia(random_formula(rng, depth - 1, vars));
  FormulaPtr a = random_formula(rng, depth - 1, vars);
  FormulaPtr b = random_formula(rng, depth - 1, vars);
  if (roll < 72) return fml::conj(a, b);
  if (roll < 84) return fml::disj(a, b);
  if (roll < 93) return fml::impl(a, b);
  return fml::iff(a, b);
}

inline Model random_model(std::mt19937& rng, int max_worlds,
                          const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> nw(1, max_worlds);
  const int n = nw(rng);
  std::uniform_int_distribution<int> coin(0, 3);
  Model m;
  m.frame = Frame(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (coin(rng) < 2) m.frame.add_edge(i, j);
  for (const auto& v : vars)
    for (int w = 0; w < n; ++w)
      if (coin(rng) < 2) m.valuation[v].insert(w);
  return m;
}

inline void collect_subformulas(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  out.push_back(f);
  switch (f->kind()) {
    case FormulaKind::Not:
    case FormulaKind::Box:
    case FormulaKind::Dia:
      collect_subformulas(f->child(), out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
    case FormulaKind::Iff:
      collect_subformulas(f->left(), out);
      collect_subformulas(f->right(), out);
      break;
    default:
      break;
  }
}

}  // namespace testutil
