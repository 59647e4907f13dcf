#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modalgrid/frame_fo.hpp"
#include "modalgrid/grid_encoding.hpp"
#include "test_util.hpp"

using namespace modalgrid;
using namespace modalgrid::fml;

namespace {

void set_d8(Model& m, int world, int d) {
  if ((d >> 2) & 1) m.valuation[kD8BitA].insert(world);
  if ((d >> 1) & 1) m.valuation[kD8BitB].insert(world);
  if (d & 1) m.valuation[kD8BitC].insert(world);
}

bool contains_conjunct(const FormulaPtr& f, const FormulaPtr& wanted) {
  for (const auto& part : flatten_conjuncts(f)) {
    if (equal(part, wanted)) return true;
    // conjuncts may themselves be conjunction blocks
    if (part->kind() == FormulaKind::And && contains_conjunct(part, wanted)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("counter literals") {
  CHECK(equal(d8_eq(0), parse_modal("!__d8a & !__d8b & !__d8c")));
  CHECK(equal(d8_eq(7), parse_modal("__d8a & __d8b & __d8c")));
  CHECK(equal(d8_eq(5), parse_modal("__d8a & !__d8b & __d8c")));
  CHECK_THROWS_AS(d8_eq(8), std::out_of_range);
  CHECK_THROWS_AS(d8_eq(-1), std::out_of_range);
}

TEST_CASE("exactly one counter value holds at any world") {
  std::mt19937 rng(4);
  const std::vector<std::string> bits{kD8BitA, kD8BitB, kD8BitC};
  for (int i = 0; i < 40; ++i) {
    Model m = testutil::random_model(rng, 4, bits);
    for (int w = 0; w < m.frame.world_count(); ++w) {
      int hits = 0;
      for (int d = 0; d < 8; ++d) hits += check(m, w, d8_eq(d));
      CHECK(hits == 1);
      CHECK(check(m, w, d8_eq(d8_value(m, w))));
    }
  }
}

TEST_CASE("psi_resp structure") {
  FormulaPtr empty = psi_resp({});
  auto parts = flatten_conjuncts(empty);
  REQUIRE(parts.size() == 8);
  for (int d = 0; d < 8; ++d) {
    FormulaPtr succ = impl(
        d8_eq(d), box(disj(disj(d8_eq(d), d8_eq((d + 2) % 8)), d8_eq((d + 3) % 8))));
    CHECK(equal(parts[d], succ));
  }

  FormulaPtr with_p = psi_resp({"p"});
  CHECK(flatten_conjuncts(with_p).size() == 24);
  FormulaPtr pinned =
      impl(d8_eq(0), impl(var("p"), box(impl(d8_eq(0), var("p")))));
  CHECK(contains_conjunct(with_p, pinned));
  FormulaPtr pinned_neg =
      impl(d8_eq(3), impl(neg(var("p")), box(impl(d8_eq(3), neg(var("p"))))));
  CHECK(contains_conjunct(with_p, pinned_neg));
  CHECK(modal_depth(with_p) == 1);
}

TEST_CASE("psi_resp per-variable scoping") {
  CHECK(equal(psi_resp({}, RespScope::per_variable), top()));
  FormulaPtr lit = psi_resp({"p"}, RespScope::per_variable);
  auto parts = flatten_conjuncts(lit);
  REQUIRE(parts.size() == 8);
  FormulaPtr succ0 =
      box(disj(disj(d8_eq(0), d8_eq(2)), d8_eq(3)));
  FormulaPtr expect0 = impl(
      d8_eq(0), conj(conj(succ0, impl(var("p"), box(impl(d8_eq(0), var("p"))))),
                     impl(neg(var("p")), box(impl(d8_eq(0), neg(var("p")))))));
  CHECK(equal(parts[0], expect0));
}

TEST_CASE("the two psi_resp scopings agree semantically on nonempty variable sets") {
  std::mt19937 rng(2718);
  FormulaPtr a = psi_resp({"p", "q"});
  FormulaPtr b = psi_resp({"p", "q"}, RespScope::per_variable);
  const std::vector<std::string> vars{"p", "q", kD8BitA, kD8BitB, kD8BitC};
  for (int i = 0; i < 60; ++i) {
    Model m = testutil::random_model(rng, 4, vars);
    for (int w = 0; w < m.frame.world_count(); ++w) CHECK(check(m, w, a) == check(m, w, b));
  }
}

TEST_CASE("psi_resp rejects reserved variables") {
  CHECK_THROWS_AS(psi_resp({"__d8a"}), PreconditionViolation);
  CHECK_THROWS_AS(psi_resp({"__u"}), PreconditionViolation);
  CHECK_THROWS_AS(psi_resp({"__x"}), PreconditionViolation);
}

TEST_CASE("psi_succ structure and wraparound") {
  FormulaPtr s = psi_succ();
  auto parts = flatten_conjuncts(s);
  REQUIRE(parts.size() == 8);
  FormulaPtr wrap = impl(d8_eq(6), conj(dia(d8_eq(0)), dia(d8_eq(1))));
  CHECK(equal(parts[6], wrap));
  CHECK(modal_depth(s) == 1);

  Model loop;
  loop.frame = Frame(1);
  loop.frame.add_edge(0, 0);  // d8 = 0 everywhere, no +2 successor
  CHECK(!check(loop, 0, s));
}

TEST_CASE("translation is homomorphic away from Box") {
  CHECK(equal(translate_g(parse_modal("p")), parse_modal("p")));
  CHECK(equal(translate_g(parse_modal("true")), parse_modal("true")));
  CHECK(equal(translate_g(parse_modal("p & q")), parse_modal("p & q")));

  std::vector<FormulaPtr> guarded;
  for (int d = 0; d < 8; ++d)
    guarded.push_back(impl(d8_eq(d), box(impl(neg(d8_eq(d)), var("p")))));
  FormulaPtr expected_box = conj_all(guarded);
  CHECK(equal(translate_g(parse_modal("[]p")), expected_box));
  CHECK(equal(translate_g(parse_modal("![]p")), neg(expected_box)));

  // Dia goes through its Box definition
  std::vector<FormulaPtr> guarded_neg;
  for (int d = 0; d < 8; ++d)
    guarded_neg.push_back(impl(d8_eq(d), box(impl(neg(d8_eq(d)), neg(var("p"))))));
  CHECK(equal(translate_g(parse_modal("<>p")), neg(conj_all(guarded_neg))));
}

TEST_CASE("translation variable footprint") {
  CHECK(variables(translate_g(parse_modal("[]p"))) ==
        std::set<std::string>{"p", kD8BitA, kD8BitB, kD8BitC});
}

TEST_CASE("the torus globally satisfies the reduction of a diamond") {
  Model hat = make_torus_hat_model(8, 4, {});
  CHECK(check_global(hat, reduce_f(parse_modal("<>true"))));
}

// 32^9 raw assignments; the evaluator must follow the antecedent edges.
TEST_CASE("the two-step kernel is tractable on the full torus") {
  Model hat = make_torus_hat_model(8, 4, {});
  CHECK(eval_universal(hat.frame, builtin_kernel("phi_2step")));
  CHECK(eval_universal(hat.frame, builtin_kernel("phi_1step")));
}

TEST_CASE("translation keeps the modal depth and adds only counter bits") {
  std::mt19937 rng(31337);
  const std::vector<std::string> vars{"p", "q"};
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = testutil::random_formula(rng, 4, vars);
    FormulaPtr g = translate_g(f);
    CHECK(modal_depth(g) == modal_depth(f));
    auto gv = variables(g);
    for (const auto& v : variables(f)) CHECK(gv.count(v) == 1);
    for (const auto& v : gv)
      CHECK((variables(f).count(v) == 1 || d8_bit_names().count(v) == 1));
  }
}

TEST_CASE("translation rejects reserved variables") {
  CHECK_THROWS_AS(translate_g(parse_modal("__d8a")), PreconditionViolation);
  CHECK_THROWS_AS(translate_g(parse_modal("[]__u")), PreconditionViolation);
  CHECK_THROWS_AS(reduce_f(parse_modal("__d8b | p")), PreconditionViolation);
}

TEST_CASE("reduction conjunction") {
  CHECK(equal(reduce_f(parse_modal("true")), conj(psi_resp({}), psi_succ())));
  FormulaPtr red = reduce_f(parse_modal("[]p"));
  CHECK(variables(red) ==
        std::set<std::string>{"p", kD8BitA, kD8BitB, kD8BitC});
  CHECK(modal_depth(red) == 1);
  CHECK(equal(red, conj_all({translate_g(parse_modal("[]p")), psi_resp({"p"}), psi_succ()})));
}

TEST_CASE("localization") {
  CHECK(equal(localize(parse_modal("true")), parse_modal("__u & []!__u & []true")));
  FormulaPtr red = reduce_f(parse_modal("[]p"));
  CHECK(modal_depth(localize(red)) == 2);
  CHECK_THROWS_AS(localize(parse_modal("__u & p")), PreconditionViolation);
  CHECK(equal(localize(red), conj(conj(var("__u"), box(neg(var("__u")))), box(red))));
}

TEST_CASE("torus construction") {
  Model hat = make_torus_hat_model(8, 4, {});
  CHECK(hat.frame.world_count() == 32);
  CHECK(d8_value(hat, 0) == 0);       // (0,0)
  CHECK(d8_value(hat, 1) == 3);       // (1,0): right adds 3
  CHECK(d8_value(hat, 8) == 2);       // (0,1): up adds 2
  CHECK(d8_value(hat, 8 + 1) == 5);   // (1,1)
  CHECK(is_reflexive(hat.frame));
  for (int w = 0; w < 32; ++w) CHECK(hat.frame.successors(w).size() == 3);

  CHECK(eval_universal(hat.frame, builtin_kernel("phi_grid")));
  CHECK(check_global(hat, conj(psi_resp({}), psi_succ())));

  CHECK_THROWS_AS(make_torus_hat_model(7, 4, {}), PreconditionViolation);
  CHECK_THROWS_AS(make_torus_hat_model(8, 3, {}), PreconditionViolation);
  CHECK_THROWS_AS(make_torus_hat_model(0, 4, {}), PreconditionViolation);
  CHECK_THROWS_AS(make_torus_hat_model(8, 4, {{"__d8a", {{0, 0}}}}), PreconditionViolation);
  CHECK_THROWS_AS(make_torus_hat_model(8, 4, {{"p", {{8, 0}}}}), std::out_of_range);
}

TEST_CASE("torus valuation files") {
  TorusValuation v = parse_torus_valuation("# comment\np 0 0\np 1 2\nq 3 1\n\n");
  CHECK(v["p"] == std::set<std::pair<int, int>>{{0, 0}, {1, 2}});
  CHECK(v["q"] == std::set<std::pair<int, int>>{{3, 1}});
  CHECK_THROWS_AS(parse_torus_valuation("p 0\n"), ParseError);
  CHECK_THROWS_AS(parse_torus_valuation("p 0 0 9\n"), ParseError);
  CHECK_THROWS_AS(parse_torus_valuation("9bad 0 0\n"), ParseError);
}

TEST_CASE("universal world construction") {
  Model hat = make_torus_hat_model(8, 4, {});
  auto [with_u, w_u] = add_universal_world(hat);
  CHECK(w_u == 32);
  CHECK(with_u.frame.world_count() == 33);
  CHECK(!with_u.frame.edge(w_u, w_u));
  for (int w = 0; w < 32; ++w) CHECK(with_u.frame.edge(w_u, w));
  CHECK(check(with_u, w_u, parse_modal("__u & []!__u")));
  CHECK(eval_universal(with_u.frame, builtin_kernel("phi_univ")));
  CHECK(eval_universal(with_u.frame, builtin_kernel("phi_final")));

  // small case: a reflexive 2-clique
  Model clique;
  clique.frame = Frame(2);
  for (int i : {0, 1})
    for (int j : {0, 1}) clique.frame.add_edge(i, j);
  auto [cu, cw] = add_universal_world(clique);
  CHECK(eval_universal(cu.frame, builtin_kernel("phi_univ")));
  CHECK(check(cu, cw, parse_modal("__u & []!__u")));

  Model irref;
  irref.frame = Frame(1);
  CHECK_THROWS_AS(add_universal_world(irref), PreconditionViolation);
  Model marked = clique;
  marked.valuation["__u"] = {0};
  CHECK_THROWS_AS(add_universal_world(marked), PreconditionViolation);
}

TEST_CASE("extraction inverts the universal world") {
  Model hat = make_torus_hat_model(8, 4, {{"p", {{0, 0}, {3, 2}}}});
  auto [with_u, w_u] = add_universal_world(hat);
  ExtractedSubmodel ex = extract_generated_submodel(with_u, w_u);
  CHECK(ex.original_world.size() == 32);
  for (int i = 0; i < 32; ++i) CHECK(ex.original_world[i] == i);
  std::set<std::string> vars{"p", kD8BitA, kD8BitB, kD8BitC, "__u"};
  CHECK(models_equal(ex.model, hat, vars));
  CHECK(is_reflexive(ex.model.frame));
  CHECK(eval_universal(ex.model.frame, builtin_kernel("phi_grid")));

  CHECK_THROWS_AS(extract_generated_submodel(hat, 0), PreconditionViolation);  // reflexive w_u
  CHECK_THROWS_AS(extract_generated_submodel(with_u, 99), std::out_of_range);
}

TEST_CASE("extraction at a successor-free world yields the empty model") {
  Model lone;
  lone.frame = Frame(1);
  lone.valuation["__u"] = {0};
  ExtractedSubmodel ex = extract_generated_submodel(lone, 0);
  CHECK(ex.model.frame.world_count() == 0);
  CHECK(ex.original_world.empty());
  CHECK(ex.model.valuation.empty());
}

TEST_CASE("degrid removes exactly the loops on a torus") {
  Model hat = make_torus_hat_model(8, 4, {{"p", {{1, 0}}}});
  Model m0 = degrid(hat, {"p"});
  CHECK(m0.frame == drop_reflexive_edges(hat.frame));
  CHECK(m0.holds("p", 1));
  for (int w = 0; w < 32; ++w) {
    CHECK(m0.frame.successors(w).size() == 2);  // psi_succ holds on the torus
    CHECK(d8_value(m0, w) == d8_value(hat, w));
  }
  CHECK(check_global(m0, psi_resp({"p"})));
}

TEST_CASE("degrid diagnostics name the failing check") {
  Model notrefl;
  notrefl.frame = Frame(1);
  CHECK_THROWS_WITH_AS(degrid(notrefl, {}), doctest::Contains("not reflexive"),
                       PreconditionViolation);

  // reflexive, phi_grid violated by a three-successor star
  Model star;
  star.frame = Frame(4);
  for (int w = 0; w < 4; ++w) star.frame.add_edge(w, w);
  for (int w : {1, 2, 3}) star.frame.add_edge(0, w);
  CHECK_THROWS_WITH_AS(degrid(star, {}), doctest::Contains("phi_grid"), PreconditionViolation);

  // reflexive phi_grid model whose counter successor values are wrong
  Model skew;
  skew.frame = Frame(2);
  skew.frame.add_edge(0, 0);
  skew.frame.add_edge(1, 1);
  skew.frame.add_edge(0, 1);
  set_d8(skew, 1, 1);  // offset +1 is not allowed by psi_resp
  CHECK_THROWS_WITH_AS(degrid(skew, {}), doctest::Contains("psi_resp"), PreconditionViolation);
}

TEST_CASE("unfolding a degrid torus") {
  TorusValuation checker;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 8; ++i)
      if ((i + j) % 2 == 0) checker["p"].insert({i, j});
  Model hat = make_torus_hat_model(8, 4, checker);
  Model m0 = degrid(hat, {"p"});

  Model frag = unfold_grid_fragment(m0, 0, 2);
  CHECK(frag.frame.world_count() == 9);
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 2; ++i) {
      int w = j * 3 + i;
      CHECK(d8_value(frag, w) == (3 * i + 2 * j) % 8);
      CHECK(frag.holds("p", w) == ((i + j) % 2 == 0));
      CHECK(!frag.frame.edge(w, w));
    }
  // fragment edges are right and up only
  CHECK(frag.frame.edge_count() == 2 * 2 * 3);  // 2 per row/column pair
  CHECK(frag.frame.edge(0, 1));
  CHECK(frag.frame.edge(0, 3));
  CHECK(!frag.frame.edge(1, 0));

  // interior worlds satisfy formulas that are globally true on the torus;
  // boundary worlds may lose successors
  FormulaPtr psi = parse_modal("(p -> []!p) & (!p -> []p)");
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) CHECK(check(frag, j * 3 + i, psi));
  CHECK(!check(frag, 8, parse_modal("<>true")));  // the far corner has no successors

  // a different start world shifts the counter values
  Model frag2 = unfold_grid_fragment(m0, 1, 1);
  CHECK(d8_value(frag2, 0) == 3);
  CHECK(d8_value(frag2, 1) == 6);
  CHECK(d8_value(frag2, 2) == 5);

  // depth-1 formulas globally true on the source hold at strict-interior
  // fragment worlds (they keep both successors)
  REQUIRE(check_global(m0, psi_succ()));
  Model frag3 = unfold_grid_fragment(m0, 0, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) CHECK(check(frag3, j * 4 + i, psi_succ()));
}

TEST_CASE("unfolding reports broken structure") {
  // missing +2 successor
  Model m;
  m.frame = Frame(2);
  m.frame.add_edge(0, 1);
  set_d8(m, 1, 3);  // only a +3 successor exists
  CHECK_THROWS_WITH_AS(unfold_grid_fragment(m, 0, 1), doctest::Contains("no up"),
                       PreconditionViolation);

  // ambiguous +3 successor
  Model amb;
  amb.frame = Frame(3);
  amb.frame.add_edge(0, 1);
  amb.frame.add_edge(0, 2);
  set_d8(amb, 1, 3);
  set_d8(amb, 2, 3);
  CHECK_THROWS_WITH_AS(unfold_grid_fragment(amb, 0, 1), doctest::Contains("ambiguous"),
                       PreconditionViolation);

  // open diamond: up-then-right lands elsewhere than right-then-up
  Model open;
  open.frame = Frame(5);
  set_d8(open, 1, 2);
  set_d8(open, 2, 3);
  set_d8(open, 3, 5);
  set_d8(open, 4, 5);
  open.frame.add_edge(0, 1);  // up
  open.frame.add_edge(0, 2);  // right
  open.frame.add_edge(1, 3);  // right from up
  open.frame.add_edge(2, 4);  // up from right
  CHECK_THROWS_WITH_AS(unfold_grid_fragment(open, 0, 1), doctest::Contains("diamond"),
                       PreconditionViolation);

  CHECK_THROWS_AS(unfold_grid_fragment(m, 7, 1), std::out_of_range);
}
