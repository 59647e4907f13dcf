#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "modalgrid/grid_encoding.hpp"
#include "modalgrid/search.hpp"

using namespace modalgrid;

namespace {

FOKernel trivial_kernel() { return FOKernel::make(0, fo::top()); }

std::vector<Frame> collect(FilteredFrameEnumerator en) {
  std::vector<Frame> out;
  Frame f;
  while (en.next(f)) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("frame enumeration counts and order") {
  auto all1 = collect(FilteredFrameEnumerator(1, trivial_kernel()));
  REQUIRE(all1.size() == 2);
  CHECK(all1[0].edge_count() == 0);  // empty frame first
  CHECK(all1[1].edge(0, 0));

  CHECK(collect(FilteredFrameEnumerator(1, builtin_kernel("phi_eq"))).size() == 2);

  FOKernel all_reflexive = parse_kernel("fo 1\nR(x1,x1)\nend");
  CHECK(collect(FilteredFrameEnumerator(2, all_reflexive)).size() == 4);

  auto all2 = collect(FilteredFrameEnumerator(2, trivial_kernel()));
  CHECK(all2.size() == 16);

  ReflexiveFrameEnumerator ren(2);
  Frame fr;
  int count = 0;
  while (ren.next(fr)) {
    CHECK(is_reflexive(fr));
    ++count;
  }
  CHECK(count == 4);
}

TEST_CASE("lexicographic frame order is row-major with (0,0) most significant") {
  FrameEnumerator en(2);
  Frame fr;
  REQUIRE(en.next(fr));
  CHECK(fr.edge_count() == 0);
  REQUIRE(en.next(fr));  // index 1: least significant cell is (1,1)
  CHECK(fr.edge(1, 1));
  CHECK(fr.edge_count() == 1);
}

TEST_CASE("a contradiction exhausts the search") {
  auto out = find_model(trivial_kernel(), parse_modal("p & !p"), 3, SearchMode::local);
  CHECK(out.status == SearchStatus::exhausted);
  CHECK(!out.witness_model.has_value());
  CHECK(out.stats.frames_examined == 2 + 16 + 512);
}

TEST_CASE("the localization marker has a one-world irreflexive witness") {
  auto out = find_model(builtin_kernel("phi_final"), parse_modal("__u & []!__u"), 1,
                        SearchMode::local);
  REQUIRE(out.status == SearchStatus::found);
  REQUIRE(out.witness_model.has_value());
  CHECK(out.witness_model->frame.world_count() == 1);
  CHECK(out.witness_model->frame.edge_count() == 0);
  CHECK(out.witness_model->holds("__u", 0));
  CHECK(out.witness_world == 0);
}

// Successor-free worlds satisfy every Box vacuously, so localized reductions
// always have a degenerate witness; this pins the actual search semantics.
TEST_CASE("localized reductions admit successor-free witnesses") {
  FormulaPtr f = localize(reduce_f(parse_modal("[]p & []!p")));
  auto out = find_model(builtin_kernel("phi_final"), f, 2, SearchMode::local);
  REQUIRE(out.status == SearchStatus::found);
  CHECK(out.witness_model->frame.world_count() == 1);
  CHECK(out.witness_model->frame.edge_count() == 0);
  CHECK(out.witness_model->holds("__u", 0));
}

// Any model globally satisfying psi_succ needs a world for every counter
// value (the +2/+3 closure of any value is all of Z8), so small bounds
// genuinely exhaust.
TEST_CASE("psi_succ cannot hold globally on three worlds") {
  auto out = find_model(trivial_kernel(), psi_succ(), 3, SearchMode::global);
  CHECK(out.status == SearchStatus::exhausted);
}

TEST_CASE("global mode requires the formula everywhere") {
  // "p" globally: the first frame (1 world, no edges) with p true everywhere.
  auto out = find_model(trivial_kernel(), parse_modal("p"), 2, SearchMode::global);
  REQUIRE(out.status == SearchStatus::found);
  CHECK(!out.witness_world.has_value());
  CHECK(check_global(*out.witness_model, parse_modal("p")));

  // <>true globally needs every world to have a successor.
  auto out2 = find_model(trivial_kernel(), parse_modal("<>true"), 2, SearchMode::global);
  REQUIRE(out2.status == SearchStatus::found);
  for (int w = 0; w < out2.witness_model->frame.world_count(); ++w)
    CHECK(!out2.witness_model->frame.successors(w).empty());
}

TEST_CASE("found witnesses revalidate") {
  std::vector<FormulaPtr> pool{parse_modal("p"), parse_modal("[]p & <>p"),
                               parse_modal("<>(p & <>!p)"), parse_modal("[]false")};
  for (const auto& name : {"phi_eq", "phi_univ", "phi_grid"}) {
    const FOKernel k = builtin_kernel(name);
    for (const auto& f : pool) {
      auto out = find_model(k, f, 3, SearchMode::local);
      if (out.status != SearchStatus::found) continue;
      REQUIRE(out.witness_model.has_value());
      CHECK(eval_universal(out.witness_model->frame, k));
      CHECK(check(*out.witness_model, *out.witness_world, f));
      // all variables outside the formula stay false
      for (const auto& [v, worlds] : out.witness_model->valuation)
        CHECK(variables(f).count(v) == 1);
    }
  }
}

TEST_CASE("witnesses are stable as the bound grows") {
  std::vector<FormulaPtr> pool{parse_modal("p & <>p"), parse_modal("[]p -> <>p"),
                               parse_modal("<><>p")};
  const FOKernel k = builtin_kernel("phi_univ");
  for (const auto& f : pool)
    for (int b = 1; b <= 2; ++b) {
      auto small = find_model(k, f, b, SearchMode::local);
      if (small.status != SearchStatus::found) continue;
      auto big = find_model(k, f, b + 1, SearchMode::local);
      REQUIRE(big.status == SearchStatus::found);
      CHECK(big.witness_world == small.witness_world);
      CHECK(big.witness_model->frame == small.witness_model->frame);
      std::set<std::string> vars = variables(f);
      CHECK(models_equal(*big.witness_model, *small.witness_model, vars));
    }
}

TEST_CASE("resource limits abort the search") {
  SearchLimits limits;
  limits.max_frames = 3;
  auto out = find_model(trivial_kernel(), parse_modal("p & !p"), 3, SearchMode::local, limits);
  CHECK(out.status == SearchStatus::aborted);
  CHECK(out.stats.frames_examined <= 4);

  SearchLimits tl;
  tl.time_limit_s = 1e-9;
  auto out2 = find_model(builtin_kernel("phi_grid"), parse_modal("p & !p"), 4,
                         SearchMode::local, tl);
  CHECK(out2.status == SearchStatus::aborted);
}

TEST_CASE("search agrees with the reference enumerator") {
  std::vector<FormulaPtr> pool{parse_modal("p & []!p"), parse_modal("<>p & <>!p"),
                               parse_modal("[]false & p")};
  for (const auto& name : {"phi_eq", "phi_final"}) {
    const FOKernel k = builtin_kernel(name);
    for (const auto& f : pool)
      for (SearchMode mode : {SearchMode::local, SearchMode::global}) {
        auto a = find_model(k, f, 3, mode);
        auto b = reference_find_model(k, f, 3, mode);
        CHECK(a.status == b.status);
        if (a.status == SearchStatus::found && mode == SearchMode::local)
          CHECK(check(*b.witness_model, *b.witness_world, f));
      }
  }
}

TEST_CASE("canonical frames are class representatives") {
  // over all 2-world frames: 16 digraphs, 10 isomorphism classes
  FrameEnumerator en(2);
  Frame fr;
  int canonical = 0;
  while (en.next(fr)) canonical += is_canonical_frame(fr);
  CHECK(canonical == 10);
}

TEST_CASE("canonical pruning preserves the search status") {
  std::vector<FormulaPtr> pool{parse_modal("p & []!p"), parse_modal("<>p & <>!p"),
                               parse_modal("p & !p"), parse_modal("[]false & <>true")};
  SearchLimits pruned;
  pruned.canonical_pruning = true;
  for (const auto& name : {"phi_eq", "phi_univ"}) {
    const FOKernel k = builtin_kernel(name);
    for (const auto& f : pool)
      for (SearchMode mode : {SearchMode::local, SearchMode::global}) {
        auto plain = find_model(k, f, 3, mode);
        auto fast = find_model(k, f, 3, mode, pruned);
        CHECK(plain.status == fast.status);
        CHECK(fast.stats.frames_admitted <= plain.stats.frames_admitted);
        if (fast.status == SearchStatus::found) {
          CHECK(eval_universal(fast.witness_model->frame, k));
          if (mode == SearchMode::local)
            CHECK(check(*fast.witness_model, *fast.witness_world, f));
        }
      }
  }
}

TEST_CASE("enumerator guards") {
  CHECK_THROWS_AS(FrameEnumerator(8), std::invalid_argument);
  CHECK_THROWS_AS(find_model(trivial_kernel(), parse_modal("p"), 0, SearchMode::local),
                  std::invalid_argument);
}
