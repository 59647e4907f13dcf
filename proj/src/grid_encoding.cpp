#include "modalgrid/grid_encoding.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "modalgrid/frame_fo.hpp"

namespace modalgrid {

using namespace fml;

const std::set<std::string>& d8_bit_names() {
  static const std::set<std::string> names{kD8BitA, kD8BitB, kD8BitC};
  return names;
}

namespace {

FormulaPtr d8_literal(const char* bit, bool value) {
  return value ? var(bit) : neg(var(bit));
}

void reject_reserved(const std::set<std::string>& vars, const char* what) {
  for (const auto& v : vars)
    if (has_reserved_prefix(v))
      throw PreconditionViolation(std::string(what) + " uses reserved variable '" + v + "'");
}

}  // namespace

FormulaPtr d8_eq(int d) {
  if (d < 0 || d > 7) throw std::out_of_range("d8 value " + std::to_string(d) + " out of range");
  return conj(conj(d8_literal(kD8BitA, (d >> 2) & 1), d8_literal(kD8BitB, (d >> 1) & 1)),
              d8_literal(kD8BitC, d & 1));
}

int d8_value(const Model& m, int world) {
  if (world < 0 || world >= m.frame.world_count())
    throw std::out_of_range("world " + std::to_string(world) + " out of range");
  return 4 * m.holds(kD8BitA, world) + 2 * m.holds(kD8BitB, world) + m.holds(kD8BitC, world);
}

FormulaPtr psi_resp(const std::set<std::string>& p_set, RespScope scope) {
  reject_reserved(p_set, "psi_resp variable set");
  std::vector<FormulaPtr> parts;
  for (int d = 0; d < 8; ++d) {
    FormulaPtr here = d8_eq(d);
    FormulaPtr succ_clause =
        box(disj_all({d8_eq(d), d8_eq((d + 2) % 8), d8_eq((d + 3) % 8)}));
    if (scope == RespScope::always) parts.push_back(impl(here, succ_clause));
    for (const auto& p : p_set) {
      FormulaPtr pos = impl(var(p), box(impl(here, var(p))));
      FormulaPtr negc = impl(neg(var(p)), box(impl(here, neg(var(p)))));
      if (scope == RespScope::always) {
        parts.push_back(impl(here, pos));
        parts.push_back(impl(here, negc));
      } else {
        parts.push_back(impl(here, conj_all({succ_clause, pos, negc})));
      }
    }
  }
  return conj_all(parts);
}

FormulaPtr psi_succ() {
  std::vector<FormulaPtr> parts;
  for (int d = 0; d < 8; ++d)
    parts.push_back(
        impl(d8_eq(d), conj(dia(d8_eq((d + 2) % 8)), dia(d8_eq((d + 3) % 8)))));
  return conj_all(parts);
}

namespace {

// AND_d ((d8=d) -> []((d8!=d) -> inner))
FormulaPtr guarded_box(const FormulaPtr& inner) {
  std::vector<FormulaPtr> parts;
  for (int d = 0; d < 8; ++d)
    parts.push_back(impl(d8_eq(d), box(impl(neg(d8_eq(d)), inner))));
  return conj_all(parts);
}

FormulaPtr translate_rec(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Var: return var(f.var_name());
    case FormulaKind::True: return top();
    case FormulaKind::False: return bot();
    case FormulaKind::Not: return neg(translate_rec(*f.child()));
    case FormulaKind::And: return conj(translate_rec(*f.left()), translate_rec(*f.right()));
    case FormulaKind::Or: return disj(translate_rec(*f.left()), translate_rec(*f.right()));
    case FormulaKind::Imp: return impl(translate_rec(*f.left()), translate_rec(*f.right()));
    case FormulaKind::Iff: return iff(translate_rec(*f.left()), translate_rec(*f.right()));
    case FormulaKind::Box: return guarded_box(translate_rec(*f.child()));
    case FormulaKind::Dia:
      // <>x abbreviates ![]!x, so translate the Box form of the negated child.
      return neg(guarded_box(neg(translate_rec(*f.child()))));
  }
  return nullptr;  // unreachable
}

}  // namespace

FormulaPtr translate_g(const FormulaPtr& f) {
  reject_reserved(variables(f), "translation input");
  return translate_rec(*f);
}

FormulaPtr reduce_f(const FormulaPtr& f, RespScope scope) {
  std::set<std::string> p = variables(f);
  reject_reserved(p, "reduction input");
  std::vector<FormulaPtr> parts{translate_rec(*f), psi_resp(p, scope), psi_succ()};
  parts.erase(std::remove_if(parts.begin(), parts.end(),
                             [](const FormulaPtr& g) { return g->kind() == FormulaKind::True; }),
              parts.end());
  return conj_all(parts);
}

FormulaPtr localize(const FormulaPtr& f) {
  if (variables(f).count(kUniversalVar))
    throw PreconditionViolation(std::string("localization input already uses '") + kUniversalVar +
                                "'");
  FormulaPtr u = var(kUniversalVar);
  return conj(conj(u, box(neg(u))), box(f));
}

// ---------------------------------------------------------------------------
// Model constructors and extractors

TorusValuation read_torus_valuation(std::istream& in) {
  TorusValuation out;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream is(raw);
    std::string name;
    if (!(is >> name)) continue;
    int i, j;
    if (!(is >> i >> j))
      throw ParseError(line_no, 1, "expected '<var> <i> <j>'");
    std::string extra;
    if (is >> extra) throw ParseError(line_no, 1, "unexpected token '" + extra + "'");
    if (!is_valid_identifier(name))
      throw ParseError(line_no, 1, "invalid variable name '" + name + "'");
    out[name].insert({i, j});
  }
  return out;
}

TorusValuation parse_torus_valuation(const std::string& text) {
  std::istringstream is(text);
  return read_torus_valuation(is);
}

Model make_torus_hat_model(
    int width, int height,
    const std::map<std::string, std::set<std::pair<int, int>>>& base_valuation) {
  if (width <= 0 || width % 8 != 0)
    throw PreconditionViolation("torus width must be a positive multiple of 8, got " +
                                std::to_string(width));
  if (height <= 0 || height % 4 != 0)
    throw PreconditionViolation("torus height must be a positive multiple of 4, got " +
                                std::to_string(height));

  Model m;
  m.frame = Frame(width * height);
  auto idx = [width](int i, int j) { return j * width + i; };
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) {
      int w = idx(i, j);
      m.frame.add_edge(w, w);
      m.frame.add_edge(w, idx((i + 1) % width, j));
      m.frame.add_edge(w, idx(i, (j + 1) % height));
    }

  for (const auto& [name, coords] : base_valuation) {
    if (!is_valid_identifier(name))
      throw PreconditionViolation("invalid base variable name '" + name + "'");
    if (has_reserved_prefix(name))
      throw PreconditionViolation("base valuation uses reserved variable '" + name + "'");
    for (auto [i, j] : coords) {
      if (i < 0 || i >= width || j < 0 || j >= height)
        throw std::out_of_range("base valuation coordinate (" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside torus");
      m.valuation[name].insert(idx(i, j));
    }
  }

  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) {
      int d = (3 * i + 2 * j) % 8;
      int w = idx(i, j);
      if ((d >> 2) & 1) m.valuation[kD8BitA].insert(w);
      if ((d >> 1) & 1) m.valuation[kD8BitB].insert(w);
      if (d & 1) m.valuation[kD8BitC].insert(w);
    }
  return m;
}

std::pair<Model, int> add_universal_world(const Model& m) {
  if (!is_reflexive(m.frame))
    throw PreconditionViolation("universal world requires a reflexive model");
  if (auto it = m.valuation.find(kUniversalVar);
      it != m.valuation.end() && !it->second.empty())
    throw PreconditionViolation(std::string("model already uses '") + kUniversalVar + "'");

  const int n = m.frame.world_count();
  Model out;
  out.frame = Frame(n + 1);
  for (auto [i, j] : m.frame.edges()) out.frame.add_edge(i, j);
  for (int w = 0; w < n; ++w) out.frame.add_edge(n, w);
  out.valuation = m.valuation;
  out.valuation[kUniversalVar] = {n};
  return {std::move(out), n};
}

ExtractedSubmodel extract_generated_submodel(const Model& m, int w_u) {
  const int n = m.frame.world_count();
  if (w_u < 0 || w_u >= n) throw std::out_of_range("w_u out of range");
  if (m.frame.edge(w_u, w_u))
    throw PreconditionViolation("world " + std::to_string(w_u) + " is reflexive");

  ExtractedSubmodel out;
  out.original_world = m.frame.successors(w_u);  // sorted
  std::vector<int> new_index(n, -1);
  for (size_t k = 0; k < out.original_world.size(); ++k) new_index[out.original_world[k]] = static_cast<int>(k);

  out.model.frame = Frame(static_cast<int>(out.original_world.size()));
  for (int a : out.original_world)
    for (int b : m.frame.successors(a))
      if (new_index[b] != -1) out.model.frame.add_edge(new_index[a], new_index[b]);

  for (const auto& [name, worlds] : m.valuation) {
    std::set<int> mapped;
    for (int w : worlds)
      if (w < n && new_index[w] != -1) mapped.insert(new_index[w]);
    if (!mapped.empty()) out.model.valuation[name] = std::move(mapped);
  }
  return out;
}

Model degrid(const Model& m, const std::set<std::string>& p_set) {
  if (!is_reflexive(m.frame))
    throw PreconditionViolation("degrid input is not reflexive");
  if (auto v = find_violation(m.frame, builtin_kernel("phi_grid")))
    throw PreconditionViolation("degrid input violates phi_grid (first violation at x=" +
                                std::to_string((*v)[0]) + ")");
  FormulaPtr resp = psi_resp(p_set);
  for (int w = 0; w < m.frame.world_count(); ++w)
    if (!check(m, w, resp))
      throw PreconditionViolation("degrid input does not satisfy psi_resp at world " +
                                  std::to_string(w));

  std::set<std::string> keep = p_set;
  keep.insert(d8_bit_names().begin(), d8_bit_names().end());
  Model q = quotient(m, keep);

  Model out;
  out.frame = Frame(q.frame.world_count());
  for (auto [a, b] : q.frame.edges())
    if (d8_value(q, a) != d8_value(q, b)) out.frame.add_edge(a, b);
  out.valuation = q.valuation;
  return out;
}

Model unfold_grid_fragment(const Model& m0, int start, int k) {
  const int n = m0.frame.world_count();
  if (start < 0 || start >= n) throw std::out_of_range("start world out of range");
  if (k < 0) throw std::invalid_argument("fragment size must be non-negative");

  auto step = [&](int w, int delta, const char* dir) {
    int want = (d8_value(m0, w) + delta) % 8;
    int found = -1;
    for (int w2 : m0.frame.successors(w)) {
      if (d8_value(m0, w2) != want) continue;
      if (found != -1)
        throw PreconditionViolation("world " + std::to_string(w) + " has an ambiguous " + dir +
                                    " successor");
      found = w2;
    }
    if (found == -1)
      throw PreconditionViolation("world " + std::to_string(w) + " has no " + dir + " successor");
    return found;
  };
  auto right = [&](int w) { return step(w, 3, "right (+3)"); };
  auto up = [&](int w) { return step(w, 2, "up (+2)"); };

  const int side = k + 1;
  std::vector<int> src(static_cast<size_t>(side) * side, -1);
  auto at = [&](int i, int j) -> int& { return src[static_cast<size_t>(j) * side + i]; };

  at(0, 0) = start;
  for (int i = 0; i < k; ++i) at(i + 1, 0) = right(at(i, 0));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i <= k; ++i) at(i, j + 1) = up(at(i, j));
    for (int i = 0; i < k; ++i)
      if (right(at(i, j + 1)) != at(i + 1, j + 1))
        throw PreconditionViolation("up/right diamond fails to close at world " +
                                    std::to_string(at(i, j)));
  }

  Model out;
  out.frame = Frame(side * side);
  auto idx = [side](int i, int j) { return j * side + i; };
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= k; ++i) {
      if (i < k) out.frame.add_edge(idx(i, j), idx(i + 1, j));
      if (j < k) out.frame.add_edge(idx(i, j), idx(i, j + 1));
    }
  for (const auto& [name, worlds] : m0.valuation) {
    std::set<int> mapped;
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= k; ++i)
        if (worlds.count(at(i, j))) mapped.insert(idx(i, j));
    if (!mapped.empty()) out.valuation[name] = std::move(mapped);
  }
  return out;
}

}  // namespace modalgrid
