#include "modalgrid/verify.hpp"

#include <chrono>

#include "modalgrid/abstraction.hpp"
#include "modalgrid/frame_fo.hpp"
#include "modalgrid/grid_encoding.hpp"
#include "modalgrid/search.hpp"

namespace modalgrid {

namespace {

Model frame_model(const Frame& f) {
  Model m;
  m.frame = f;
  return m;
}

void fail(SuiteReport& r, std::string description, const Model* model = nullptr,
          const std::string& formula = "") {
  CaseFailure cf;
  cf.description = std::move(description);
  if (model) cf.model_text = model_to_string(*model);
  cf.formula_text = formula;
  r.failures.push_back(std::move(cf));
}

// ---------------------------------------------------------------------------
// lemma3: quotients of reflexive phi_grid frames (all with <= 4 worlds) are
// reflexive, have at most two outside successors and at most three loop-free
// two-step targets.

SuiteReport suite_lemma3() {
  SuiteReport r;
  r.suite = "lemma3";
  const FOKernel grid = builtin_kernel("phi_grid");
  for (int n = 1; n <= 4; ++n) {
    ReflexiveFrameEnumerator en(n);
    Frame fr;
    while (en.next(fr)) {
      if (!eval_universal(fr, grid)) continue;
      ++r.cases_run;
      Model m = frame_model(fr);
      try {
        Model q = quotient(m, {});
        auto s = check_abstraction_structure(q.frame);
        if (!(s.reflexive && s.max_two_successors && s.max_three_two_step))
          fail(r,
               "quotient structure violated (reflexive=" + std::to_string(s.reflexive) +
                   " max_two=" + std::to_string(s.max_two_successors) +
                   " max_three=" + std::to_string(s.max_three_two_step) + ")",
               &m);
      } catch (const PreconditionViolation& e) {
        fail(r, std::string("quotient rejected a phi_grid frame: ") + e.what(), &m);
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// lemma4: for reflexive phi_eq models with p constant on symmetric classes,
// satisfaction agrees between a world and its class in the quotient.

const std::vector<std::string>& lemma4_formula_pool() {
  static const std::vector<std::string> pool{
      "p",           "!p",          "true",          "false",        "[]p",
      "<>p",         "[]!p",        "<>!p",          "[][]p",        "<><>p",
      "[]<>p",       "<>[]p",       "p & []p",       "p | <>p",      "p -> []p",
      "[](p -> []p)", "<>(p & <>p)", "[][]!p | p",    "[]([]p -> p)", "<>[]<>p",
      "[](p <-> []p)", "p <-> <>p",  "[][][]p",       "<>(p -> []p)"};
  return pool;
}

SuiteReport suite_lemma4() {
  SuiteReport r;
  r.suite = "lemma4";
  std::vector<FormulaPtr> pool;
  for (const auto& s : lemma4_formula_pool()) {
    FormulaPtr f = parse_modal(s);
    if (modal_depth(f) > 3) throw std::logic_error("lemma4 pool formula too deep: " + s);
    for (const auto& v : variables(f))
      if (v != "p") throw std::logic_error("lemma4 pool formula uses " + v);
    pool.push_back(std::move(f));
  }
  const FOKernel eq = builtin_kernel("phi_eq");
  const std::set<std::string> p_only{"p"};

  for (int n = 1; n <= 3; ++n) {
    ReflexiveFrameEnumerator en(n);
    Frame fr;
    while (en.next(fr)) {
      if (!eval_universal(fr, eq)) continue;
      Partition part = compute_partition(frame_model(fr));
      const int classes = part.class_count();
      for (unsigned mask = 0; mask < (1u << classes); ++mask) {
        Model m = frame_model(fr);
        for (int c = 0; c < classes; ++c)
          if ((mask >> c) & 1u)
            for (int w : part.classes[c]) m.valuation["p"].insert(w);
        ++r.cases_run;
        Model q = quotient(m, p_only);
        for (const auto& f : pool)
          for (int w = 0; w < n; ++w)
            if (check(m, w, f) != check(q, part.class_of[w], f)) {
              fail(r,
                   "quotient changed satisfaction at world " + std::to_string(w) + " (class " +
                       std::to_string(part.class_of[w]) + ")",
                   &m, render_modal(f));
            }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// lemma5 model pool: tori with varied valuations plus hand-built models with
// nontrivial symmetric cliques.

struct RespectCase {
  std::string label;
  Model model;
  std::set<std::string> p_set;
  int frame_id = 0;  // models sharing a frame share the id
};

// Duplicate world `target` into a symmetric twin: same loops, mutual edges,
// identical in/out edges and valuation.
Model blow_up_world(const Model& m, int target) {
  const int n = m.frame.world_count();
  Model out;
  out.frame = Frame(n + 1);
  for (auto [i, j] : m.frame.edges()) out.frame.add_edge(i, j);
  const int twin = n;
  out.frame.add_edge(twin, twin);
  out.frame.add_edge(twin, target);
  out.frame.add_edge(target, twin);
  for (int s : m.frame.successors(target))
    if (s != target) out.frame.add_edge(twin, s);
  for (int pr = 0; pr < n; ++pr)
    if (pr != target && m.frame.edge(pr, target)) out.frame.add_edge(pr, twin);
  out.valuation = m.valuation;
  for (auto& [name, worlds] : out.valuation)
    if (worlds.count(target)) worlds.insert(twin);
  return out;
}

// Reflexive model made of symmetric cliques with fixed counter values and
// complete edges between chosen clique pairs.
Model clique_model(const std::vector<std::pair<int, int>>& cliques /* (size, d8) */,
                   const std::vector<std::pair<int, int>>& arrows /* clique -> clique */,
                   const std::map<std::string, std::set<int>>& vars_on_cliques) {
  int n = 0;
  std::vector<std::vector<int>> members;
  for (auto [size, d8] : cliques) {
    std::vector<int> ms;
    for (int k = 0; k < size; ++k) ms.push_back(n++);
    members.push_back(ms);
  }
  Model m;
  m.frame = Frame(n);
  for (size_t c = 0; c < members.size(); ++c)
    for (int a : members[c])
      for (int b : members[c]) m.frame.add_edge(a, b);
  for (auto [from, to] : arrows)
    for (int a : members[from])
      for (int b : members[to]) m.frame.add_edge(a, b);
  for (size_t c = 0; c < members.size(); ++c) {
    int d = cliques[c].second;
    for (int w : members[c]) {
      if ((d >> 2) & 1) m.valuation[kD8BitA].insert(w);
      if ((d >> 1) & 1) m.valuation[kD8BitB].insert(w);
      if (d & 1) m.valuation[kD8BitC].insert(w);
    }
  }
  for (const auto& [name, cliqs] : vars_on_cliques)
    for (int c : cliqs)
      for (int w : members[c]) m.valuation[name].insert(w);
  return m;
}

std::vector<RespectCase> respect_pool() {
  std::vector<RespectCase> pool;
  int frame_id = 0;

  for (int width : {8, 16}) {
    const int height = 4;
    ++frame_id;
    for (int t = 0; t < 23; ++t) {
      TorusValuation base;
      for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) {
          if ((i * 3 + j * 7 + t) % (2 + t % 5) == 0) base["p"].insert({i, j});
          if ((i + 2 * j + 3 * t) % (2 + (t + 1) % 4) == 0) base["q"].insert({i, j});
        }
      pool.push_back({"torus" + std::to_string(width) + "x" + std::to_string(height) + "#" +
                          std::to_string(t),
                      make_torus_hat_model(width, height, base),
                      {"p", "q"},
                      frame_id});
    }
  }

  // Two-world clique pointing at two singleton classes (+2 and +3).
  pool.push_back({"clique-pair", clique_model({{2, 0}, {1, 2}, {1, 3}}, {{0, 1}, {0, 2}},
                                              {{"p", {0}}}),
                  {"p"},
                  ++frame_id});
  pool.push_back({"clique-pair-flip", clique_model({{2, 0}, {1, 2}, {1, 3}}, {{0, 1}, {0, 2}},
                                                   {{"p", {1}}}),
                  {"p"},
                  frame_id});
  // Three cliques of sizes 3/2/1.
  pool.push_back({"clique-triple", clique_model({{3, 1}, {2, 3}, {1, 4}}, {{0, 1}, {0, 2}},
                                                {{"p", {0}}, {"q", {1}}}),
                  {"p", "q"},
                  ++frame_id});

  // Tori with one world duplicated into a symmetric pair.
  {
    TorusValuation base;
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 8; ++i)
        if ((i + j) % 2 == 0) base["p"].insert({i, j});
    pool.push_back({"torus8x4-blowup-origin", blow_up_world(make_torus_hat_model(8, 4, base), 0),
                    {"p"},
                    ++frame_id});
    pool.push_back({"torus8x4-blowup-mid",
                    blow_up_world(make_torus_hat_model(8, 4, base), 2 * 8 + 3),
                    {"p"},
                    ++frame_id});
  }
  return pool;
}

std::string d8_distance_violation(const Model& m) {
  const Frame& fr = m.frame;
  for (int w = 0; w < fr.world_count(); ++w) {
    int d = d8_value(m, w);
    for (int y : fr.successors(w)) {
      if (y == w || sym_related(fr, w, y)) continue;
      int delta = (d8_value(m, y) - d + 8) % 8;
      if (delta < 2 || delta > 6)
        return "one-step neighbor " + std::to_string(y) + " of world " + std::to_string(w) +
               " has counter offset " + std::to_string(delta);
      for (int z : fr.successors(y)) {
        if (z == y || sym_related(fr, y, z)) continue;
        int delta2 = (d8_value(m, z) - d + 8) % 8;
        if (delta2 < 2 || delta2 > 6)
          return "two-step neighbor " + std::to_string(z) + " of world " + std::to_string(w) +
                 " has counter offset " + std::to_string(delta2);
      }
    }
  }
  return "";
}

SuiteReport suite_lemma5() {
  SuiteReport r;
  r.suite = "lemma5";
  const FOKernel grid = builtin_kernel("phi_grid");
  std::set<int> checked_frames;
  for (const auto& c : respect_pool()) {
    ++r.cases_run;
    if (!is_reflexive(c.model.frame)) {
      fail(r, c.label + ": generated model is not reflexive", &c.model);
      continue;
    }
    if (!checked_frames.count(c.frame_id)) {
      checked_frames.insert(c.frame_id);
      if (auto v = find_violation(c.model.frame, grid)) {
        fail(r, c.label + ": generated frame violates phi_grid", &c.model);
        continue;
      }
    }
    FormulaPtr resp = psi_resp(c.p_set);
    if (!check_global(c.model, resp)) {
      fail(r, c.label + ": generated model does not globally satisfy psi_resp", &c.model,
           render_modal(resp));
      continue;
    }
    std::set<std::string> with_bits = c.p_set;
    with_bits.insert(d8_bit_names().begin(), d8_bit_names().end());
    if (!respects(c.model, with_bits))
      fail(r, c.label + ": symmetric relation does not respect the variables", &c.model);
    if (auto msg = d8_distance_violation(c.model); !msg.empty())
      fail(r, c.label + ": " + msg, &c.model);
  }
  return r;
}

// ---------------------------------------------------------------------------
// gbridge: the guarded Box translation quantifies exactly over non-symmetric,
// non-reflexive successors.

SuiteReport suite_gbridge() {
  SuiteReport r;
  r.suite = "gbridge";
  std::vector<FormulaPtr> xis;
  for (const char* s : {"p", "!p", "p & q", "p | !q", "p -> q", "[]p", "<>p", "[](p -> q)",
                        "p -> <>q", "true"})
    xis.push_back(parse_modal(s));

  std::vector<RespectCase> models;
  for (auto& c : respect_pool()) {
    if (c.label.rfind("torus16", 0) == 0) continue;  // keep the suite quick
    if (auto hash = c.label.find('#'); hash != std::string::npos)
      if (std::stoi(c.label.substr(hash + 1)) > 5) continue;
    models.push_back(std::move(c));
  }

  for (const auto& c : models) {
    for (const auto& xi : xis) {
      ++r.cases_run;
      FormulaPtr lhs = translate_g(fml::box(xi));
      FormulaPtr g_xi = translate_g(xi);
      for (int w = 0; w < c.model.frame.world_count(); ++w) {
        bool guarded = check(c.model, w, lhs);
        bool direct = true;
        for (int w2 : c.model.frame.successors(w)) {
          if (w2 == w || sym_related(c.model.frame, w, w2)) continue;
          if (!check(c.model, w2, g_xi)) {
            direct = false;
            break;
          }
        }
        if (guarded != direct) {
          fail(r,
               c.label + ": guarded Box disagrees with successor quantification at world " +
                   std::to_string(w),
               &c.model, render_modal(lhs));
          break;
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// thm6-forward / thm8-roundtrip: torus cases

struct TorusCase {
  std::string label;
  FormulaPtr psi;
  TorusValuation base;
};

std::vector<TorusCase> torus_cases() {
  std::vector<TorusCase> cases;
  cases.push_back({"dia-true", parse_modal("<>true"), {}});

  TorusValuation checker;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 8; ++i)
      if ((i + j) % 2 == 0) checker["p"].insert({i, j});
  cases.push_back({"checkerboard", parse_modal("(p -> []!p) & (!p -> []p)"), checker});

  TorusValuation col0;
  for (int j = 0; j < 4; ++j) col0["p"].insert({0, j});
  cases.push_back({"succ-true", parse_modal("p -> <>true"), col0});
  return cases;
}

SuiteReport suite_thm6_forward() {
  SuiteReport r;
  r.suite = "thm6-forward";
  const FOKernel grid = builtin_kernel("phi_grid");
  for (const auto& c : torus_cases()) {
    Model hat = make_torus_hat_model(8, 4, c.base);
    Model plain;
    plain.frame = drop_reflexive_edges(hat.frame);
    plain.valuation = hat.valuation;

    ++r.cases_run;
    if (!check_global(plain, c.psi))
      fail(r, c.label + ": input valuation does not globally satisfy psi on the plain torus",
           &plain, render_modal(c.psi));

    ++r.cases_run;
    if (auto v = find_violation(hat.frame, grid))
      fail(r, c.label + ": hat torus violates phi_grid", &hat);

    ++r.cases_run;
    FormulaPtr reduced = reduce_f(c.psi);
    for (int w = 0; w < hat.frame.world_count(); ++w)
      if (!check(hat, w, reduced)) {
        fail(r, c.label + ": reduction fails at torus world " + std::to_string(w), &hat,
             render_modal(reduced));
        break;
      }
  }
  return r;
}

SuiteReport suite_thm8_roundtrip() {
  SuiteReport r;
  r.suite = "thm8-roundtrip";
  const FOKernel fin = builtin_kernel("phi_final");
  for (const auto& c : torus_cases()) {
    Model hat = make_torus_hat_model(8, 4, c.base);
    auto [with_u, w_u] = add_universal_world(hat);

    ++r.cases_run;
    if (auto v = find_violation(with_u.frame, fin))
      fail(r, c.label + ": universal-world model violates phi_final", &with_u);

    ++r.cases_run;
    FormulaPtr local = localize(reduce_f(c.psi));
    if (!check(with_u, w_u, local))
      fail(r, c.label + ": localized reduction fails at the universal world", &with_u,
           render_modal(local));

    ++r.cases_run;
    ExtractedSubmodel ex = extract_generated_submodel(with_u, w_u);
    std::set<std::string> vars;
    for (const auto& [name, _] : hat.valuation) vars.insert(name);
    vars.insert(kUniversalVar);
    bool identity = ex.original_world.size() == static_cast<size_t>(hat.frame.world_count());
    for (size_t i = 0; identity && i < ex.original_world.size(); ++i)
      identity = ex.original_world[i] == static_cast<int>(i);
    if (!identity || !models_equal(ex.model, hat, vars))
      fail(r, c.label + ": extraction does not invert the universal-world construction",
           &ex.model);

    ++r.cases_run;
    try {
      Model m0 = degrid(ex.model, variables(c.psi));
      Model frag = unfold_grid_fragment(m0, 0, 3);
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
          if (!check(frag, j * 4 + i, c.psi)) {
            fail(r,
                 c.label + ": psi fails at interior fragment world (" + std::to_string(i) + "," +
                     std::to_string(j) + ")",
                 &frag, render_modal(c.psi));
            j = 3;
            break;
          }
    } catch (const PreconditionViolation& e) {
      fail(r, c.label + ": degrid/unfold rejected the extracted model: " + e.what(), &ex.model);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// subframe: basic built-in kernels are preserved by induced subframes.
// Satisfaction tables are built per world count; subframes are looked up by
// their adjacency code.

namespace sf {

unsigned long long frame_code(const Frame& f) {
  const int n = f.world_count();
  unsigned long long code = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) code = (code << 1) | (f.edge(i, j) ? 1ULL : 0ULL);
  return code;
}

}  // namespace sf

SuiteReport suite_subframe() {
  SuiteReport r;
  r.suite = "subframe";
  for (const auto& name :
       {"phi_1step", "phi_2step", "phi_eq", "phi_grid", "phi_univ", "phi_final"}) {
    const FOKernel k = builtin_kernel(name);
    // sat[n][code] for n = 1..4
    std::vector<std::vector<char>> sat(5);
    for (int n = 1; n <= 4; ++n) {
      sat[n].assign(1ULL << (n * n), 0);
      FrameEnumerator en(n);
      Frame fr;
      unsigned long long code = 0;
      while (en.next(fr)) sat[n][code++] = eval_universal(fr, k) ? 1 : 0;
    }
    for (int n = 1; n <= 4; ++n) {
      FrameEnumerator en(n);
      Frame fr;
      while (en.next(fr)) {
        if (!sat[n][sf::frame_code(fr)]) continue;
        ++r.cases_run;
        for (unsigned subset = 1; subset < (1u << n); ++subset) {
          std::vector<int> keep;
          for (int w = 0; w < n; ++w)
            if ((subset >> w) & 1u) keep.push_back(w);
          const int sn = static_cast<int>(keep.size());
          Frame sub(sn);
          for (int a = 0; a < sn; ++a)
            for (int b = 0; b < sn; ++b)
              if (fr.edge(keep[a], keep[b])) sub.add_edge(a, b);
          if (!sat[sn][sf::frame_code(sub)]) {
            Model m = frame_model(fr);
            fail(r,
                 std::string(name) + " not preserved by the induced subframe on worlds {" +
                     [&] {
                       std::string s;
                       for (int w : keep) s += std::to_string(w) + " ";
                       return s;
                     }() +
                     "}",
                 &m);
            break;
          }
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// oracle: fixed search controls, FO evaluator vs. plain enumeration, and
// search vs. reference enumerator agreement.

namespace oracle {

bool naive_body(const FONode& nd, const Frame& f, const std::vector<int>& asn) {
  switch (nd.kind()) {
    case FOKind::True: return true;
    case FOKind::False: return false;
    case FOKind::Edge: return f.edge(asn[nd.var_a() - 1], asn[nd.var_b() - 1]);
    case FOKind::Eq: return asn[nd.var_a() - 1] == asn[nd.var_b() - 1];
    case FOKind::Not: return !naive_body(*nd.child(), f, asn);
    case FOKind::And: return naive_body(*nd.left(), f, asn) && naive_body(*nd.right(), f, asn);
    case FOKind::Or: return naive_body(*nd.left(), f, asn) || naive_body(*nd.right(), f, asn);
    case FOKind::Imp: return !naive_body(*nd.left(), f, asn) || naive_body(*nd.right(), f, asn);
  }
  return false;
}

// Full odometer over all n^k assignments, no pruning.
bool naive_eval_universal(const Frame& f, const FOKernel& k) {
  const int n = f.world_count();
  if (k.var_count == 0) return naive_body(*k.body, f, {});
  if (n == 0) return true;
  std::vector<int> asn(k.var_count, 0);
  while (true) {
    if (!naive_body(*k.body, f, asn)) return false;
    int i = 0;
    while (i < k.var_count) {
      if (++asn[i] < n) break;
      asn[i] = 0;
      ++i;
    }
    if (i == k.var_count) return true;
  }
}

const char* status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    default: return "aborted";
  }
}

}  // namespace oracle

SuiteReport suite_oracle() {
  SuiteReport r;
  r.suite = "oracle";
  const FOKernel fin = builtin_kernel("phi_final");

  // Negative control: the localized reduction of a formula whose source is
  // globally unsatisfiable on grids must have no witness within 4 worlds.
  {
    ++r.cases_run;
    auto out = find_model(fin, localize(reduce_f(parse_modal("[]p & []!p"))), 4,
                          SearchMode::local);
    if (out.status != SearchStatus::exhausted)
      fail(r,
           std::string("negative control expected exhausted, got ") +
               oracle::status_name(out.status) +
               (out.witness_model ? " at world " + std::to_string(*out.witness_world) : ""),
           out.witness_model ? &*out.witness_model : nullptr,
           render_modal(localize(reduce_f(parse_modal("[]p & []!p")))));
  }

  // Positive control: one irreflexive world satisfies the localization marker.
  {
    ++r.cases_run;
    auto out = find_model(fin, parse_modal("__u & []!__u"), 1, SearchMode::local);
    bool ok = out.status == SearchStatus::found && out.witness_model &&
              out.witness_model->frame.world_count() == 1 &&
              out.witness_model->frame.edge_count() == 0 &&
              out.witness_model->holds(kUniversalVar, 0) && out.witness_world == 0;
    if (!ok)
      fail(r, "positive control did not find the 1-world irreflexive witness",
           out.witness_model ? &*out.witness_model : nullptr, "__u & []!__u");
  }

  // FO evaluator against plain full enumeration, all frames with <= 3 worlds.
  for (const auto& name : builtin_kernel_names()) {
    const FOKernel k = builtin_kernel(name);
    for (int n = 1; n <= 3; ++n) {
      FrameEnumerator en(n);
      Frame fr;
      while (en.next(fr)) {
        ++r.cases_run;
        if (eval_universal(fr, k) != oracle::naive_eval_universal(fr, k)) {
          Model m = frame_model(fr);
          fail(r, std::string("FO evaluators disagree on ") + name, &m);
        }
      }
    }
  }

  // Search against the reference enumerator on the fixed formula pool.
  std::vector<FormulaPtr> pool;
  for (const char* s : {"p", "!p", "p & !p", "p | !p", "[]p", "<>p", "<>true", "[]false",
                        "[][]p", "<><>p", "[]p -> p", "p & []!p", "<>(p & <>p)", "[](p | q)"})
    pool.push_back(parse_modal(s));
  for (const auto& name : builtin_kernel_names()) {
    const FOKernel k = builtin_kernel(name);
    for (const auto& f : pool)
      for (SearchMode mode : {SearchMode::local, SearchMode::global}) {
        ++r.cases_run;
        auto a = find_model(k, f, 3, mode);
        auto b = reference_find_model(k, f, 3, mode);
        if (a.status != b.status)
          fail(r,
               std::string("search enumerators disagree on ") + name + " x '" + render_modal(f) +
                   "' (" + (mode == SearchMode::local ? "local" : "global") + "): " +
                   oracle::status_name(a.status) + " vs " + oracle::status_name(b.status),
               a.witness_model ? &*a.witness_model : nullptr, render_modal(f));
      }
  }
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"lemma3", "lemma4",       "lemma5",         "gbridge",
          "thm6-forward", "thm8-roundtrip", "subframe", "oracle"};
}

SuiteReport run_suite(const std::string& name) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  SuiteReport r;
  if (name == "lemma3") r = suite_lemma3();
  else if (name == "lemma4") r = suite_lemma4();
  else if (name == "lemma5") r = suite_lemma5();
  else if (name == "gbridge") r = suite_gbridge();
  else if (name == "thm6-forward") r = suite_thm6_forward();
  else if (name == "thm8-roundtrip") r = suite_thm8_roundtrip();
  else if (name == "subframe") r = suite_subframe();
  else if (name == "oracle") r = suite_oracle();
  else throw std::invalid_argument("unknown suite '" + name + "'");
  r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

PipelineStage stage_ok(const std::string& name, const std::string& detail = "") {
  return {name, true, detail};
}

PipelineStage stage_fail(const std::string& name, const std::string& detail) {
  return {name, false, detail};
}

}  // namespace

PipelineReport run_pipeline(const FormulaPtr& psi, int width, int height,
                            const TorusValuation& base, int k) {
  PipelineReport rep;
  rep.all_passed = false;
  auto push_fail = [&](const std::string& stage, const std::string& why) {
    rep.stages.push_back(stage_fail(stage, why));
  };

  // Stage 1: input checks.
  Model hat;
  try {
    if (modal_depth(psi) > 1) {
      push_fail("input", "psi has modal depth " + std::to_string(modal_depth(psi)) +
                             ", the pipeline requires depth <= 1");
      return rep;
    }
    hat = make_torus_hat_model(width, height, base);
    Model plain;
    plain.frame = drop_reflexive_edges(hat.frame);
    plain.valuation = hat.valuation;
    for (int w = 0; w < plain.frame.world_count(); ++w)
      if (!check(plain, w, psi)) {
        push_fail("input", "psi is not globally satisfied on the plain torus (world " +
                               std::to_string(w) + ")");
        return rep;
      }
    rep.stages.push_back(stage_ok("input", "psi holds at every torus world"));
  } catch (const std::exception& e) {
    push_fail("input", e.what());
    return rep;
  }

  // Stage 2: hat model satisfies the frame conditions and the reduction.
  FormulaPtr reduced = reduce_f(psi);
  if (auto v = find_violation(hat.frame, builtin_kernel("phi_grid"))) {
    push_fail("hat-model", "hat torus violates phi_grid");
    return rep;
  }
  for (int w = 0; w < hat.frame.world_count(); ++w)
    if (!check(hat, w, reduced)) {
      push_fail("hat-model", "reduction fails at torus world " + std::to_string(w));
      return rep;
    }
  rep.stages.push_back(stage_ok("hat-model", "phi_grid and the reduction hold globally"));

  // Stage 3: universal world.
  auto [with_u, w_u] = add_universal_world(hat);
  if (auto v = find_violation(with_u.frame, builtin_kernel("phi_final"))) {
    push_fail("universal-world", "model violates phi_final");
    return rep;
  }
  FormulaPtr local = localize(reduced);
  if (!check(with_u, w_u, local)) {
    push_fail("universal-world", "localized reduction fails at the universal world");
    return rep;
  }
  rep.stages.push_back(
      stage_ok("universal-world", "phi_final holds and the localized reduction is satisfied"));

  // Stage 4: extraction inverts the construction.
  ExtractedSubmodel ex = extract_generated_submodel(with_u, w_u);
  std::set<std::string> vars;
  for (const auto& [name, _] : hat.valuation) vars.insert(name);
  vars.insert(kUniversalVar);
  if (!models_equal(ex.model, hat, vars)) {
    push_fail("extract", "extracted submodel differs from the hat model");
    return rep;
  }
  rep.stages.push_back(stage_ok("extract", "extraction returned the hat model"));

  // Stage 5: degrid.
  Model m0;
  try {
    m0 = degrid(ex.model, variables(psi));
  } catch (const PreconditionViolation& e) {
    push_fail("degrid", e.what());
    return rep;
  }
  rep.stages.push_back(stage_ok("degrid", std::to_string(m0.frame.world_count()) + " classes"));

  // Stage 6: unfold a (k+1)x(k+1) fragment.
  Model frag;
  try {
    frag = unfold_grid_fragment(m0, 0, k);
  } catch (const PreconditionViolation& e) {
    push_fail("unfold", e.what());
    return rep;
  }
  rep.stages.push_back(stage_ok("unfold", std::to_string(frag.frame.world_count()) + " worlds"));

  // Stage 7: interior global satisfaction.
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      if (!check(frag, j * (k + 1) + i, psi)) {
        push_fail("interior", "psi fails at interior fragment world (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        return rep;
      }
  rep.stages.push_back(
      stage_ok("interior", "psi holds at all " + std::to_string(k * k) + " interior worlds"));

  rep.all_passed = true;
  return rep;
}

}  // namespace modalgrid
