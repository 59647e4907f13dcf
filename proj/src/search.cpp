#include "modalgrid/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <stdexcept>

namespace modalgrid {

namespace {

using Clock = std::chrono::steady_clock;

enum Tri : signed char { TriF = 0, TriT = 1, TriU = 2 };

// Formula flattened to an index tree so the valuation search can evaluate it
// against a raw assignment array (slot = world * var_count + var, value -1/0/1).
struct CompiledFormula {
  struct Node {
    FormulaKind kind;
    int var = -1;
    int a = -1, b = -1;
  };
  std::vector<Node> nodes;
  int root = -1;
  int var_count = 0;

  static CompiledFormula compile(const Formula& f, const std::vector<std::string>& vars) {
    CompiledFormula c;
    c.var_count = static_cast<int>(vars.size());
    c.root = c.build(f, vars);
    return c;
  }

private:
  int build(const Formula& f, const std::vector<std::string>& vars) {
    Node nd;
    nd.kind = f.kind();
    switch (f.kind()) {
      case FormulaKind::Var: {
        auto it = std::lower_bound(vars.begin(), vars.end(), f.var_name());
        nd.var = static_cast<int>(it - vars.begin());
        break;
      }
      case FormulaKind::True:
      case FormulaKind::False:
        break;
      case FormulaKind::Not:
      case FormulaKind::Box:
      case FormulaKind::Dia:
        nd.a = build(*f.child(), vars);
        break;
      default:
        nd.a = build(*f.left(), vars);
        nd.b = build(*f.right(), vars);
    }
    nodes.push_back(nd);
    return static_cast<int>(nodes.size()) - 1;
  }
};

Tri tri_not(Tri t) { return t == TriU ? TriU : (t == TriT ? TriF : TriT); }

Tri eval_partial(const CompiledFormula& c, int node, const Frame& fr,
                 const std::vector<signed char>& asn, int world) {
  const auto& nd = c.nodes[node];
  switch (nd.kind) {
    case FormulaKind::Var: {
      signed char v = asn[static_cast<size_t>(world) * c.var_count + nd.var];
      return v < 0 ? TriU : (v ? TriT : TriF);
    }
    case FormulaKind::True: return TriT;
    case FormulaKind::False: return TriF;
    case FormulaKind::Not: return tri_not(eval_partial(c, nd.a, fr, asn, world));
    case FormulaKind::And: {
      Tri l = eval_partial(c, nd.a, fr, asn, world);
      if (l == TriF) return TriF;
      Tri r = eval_partial(c, nd.b, fr, asn, world);
      if (r == TriF) return TriF;
      return (l == TriT && r == TriT) ? TriT : TriU;
    }
    case FormulaKind::Or: {
      Tri l = eval_partial(c, nd.a, fr, asn, world);
      if (l == TriT) return TriT;
      Tri r = eval_partial(c, nd.b, fr, asn, world);
      if (r == TriT) return TriT;
      return (l == TriF && r == TriF) ? TriF : TriU;
    }
    case FormulaKind::Imp: {
      Tri l = eval_partial(c, nd.a, fr, asn, world);
      if (l == TriF) return TriT;
      Tri r = eval_partial(c, nd.b, fr, asn, world);
      if (r == TriT) return TriT;
      return (l == TriT && r == TriF) ? TriF : TriU;
    }
    case FormulaKind::Iff: {
      Tri l = eval_partial(c, nd.a, fr, asn, world);
      if (l == TriU) return TriU;
      Tri r = eval_partial(c, nd.b, fr, asn, world);
      if (r == TriU) return TriU;
      return l == r ? TriT : TriF;
    }
    case FormulaKind::Box: {
      bool unknown = false;
      for (int w2 : fr.successors(world)) {
        Tri t = eval_partial(c, nd.a, fr, asn, w2);
        if (t == TriF) return TriF;
        if (t == TriU) unknown = true;
      }
      return unknown ? TriU : TriT;
    }
    case FormulaKind::Dia: {
      bool unknown = false;
      for (int w2 : fr.successors(world)) {
        Tri t = eval_partial(c, nd.a, fr, asn, w2);
        if (t == TriT) return TriT;
        if (t == TriU) unknown = true;
      }
      return unknown ? TriU : TriF;
    }
  }
  return TriU;  // unreachable
}

struct AbortSignal {};

struct ValuationSearch {
  const CompiledFormula& cf;
  const Frame& fr;
  SearchMode mode;
  int target = 0;  // local mode
  std::vector<int> slot_order;
  std::vector<signed char> asn;
  SearchStats* stats;
  const SearchLimits* limits;
  Clock::time_point start;

  Tri evaluate() const {
    if (mode == SearchMode::local) return eval_partial(cf, cf.root, fr, asn, target);
    bool unknown = false;
    for (int w = 0; w < fr.world_count(); ++w) {
      Tri t = eval_partial(cf, cf.root, fr, asn, w);
      if (t == TriF) return TriF;
      if (t == TriU) unknown = true;
    }
    return unknown ? TriU : TriT;
  }

  bool run(size_t depth) {
    Tri t = evaluate();
    if (t != TriU) {
      if (++stats->models_examined % 4096 == 0 && limits->time_limit_s > 0 &&
          std::chrono::duration<double>(Clock::now() - start).count() > limits->time_limit_s)
        throw AbortSignal{};
      if (t == TriF) return false;
      for (size_t i = depth; i < slot_order.size(); ++i) asn[slot_order[i]] = 0;
      return true;
    }
    // A fully assigned valuation always evaluates definitely.
    int slot = slot_order[depth];
    for (signed char v = 0; v <= 1; ++v) {
      asn[slot] = v;
      if (run(depth + 1)) return true;
    }
    asn[slot] = -1;
    return false;
  }
};

// Local mode assigns worlds in breadth-first order from the target world, so
// the formula at the target becomes decided as soon as every reachable world
// is assigned; unreachable worlds never branch.
std::vector<int> world_order_from(const Frame& fr, int target) {
  const int n = fr.world_count();
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  std::deque<int> queue{target};
  seen[target] = 1;
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    order.push_back(w);
    for (int w2 : fr.successors(w))
      if (!seen[w2]) {
        seen[w2] = 1;
        queue.push_back(w2);
      }
  }
  for (int w = 0; w < n; ++w)
    if (!seen[w]) order.push_back(w);
  return order;
}

Model assignment_to_model(const Frame& fr, const std::vector<std::string>& vars,
                          const std::vector<signed char>& asn) {
  Model m;
  m.frame = fr;
  const int V = static_cast<int>(vars.size());
  for (int w = 0; w < fr.world_count(); ++w)
    for (int v = 0; v < V; ++v)
      if (asn[static_cast<size_t>(w) * V + v] == 1) m.valuation[vars[v]].insert(w);
  return m;
}

}  // namespace

FrameEnumerator::FrameEnumerator(int n) : n_(n) {
  if (n < 0 || n * n > 62) throw std::invalid_argument("frame enumeration supports n*n <= 62");
  limit_ = 1ULL << (n * n);
}

bool FrameEnumerator::next(Frame& out) {
  if (index_ >= limit_) return false;
  const int cells = n_ * n_;
  out = Frame(n_);
  for (int c = 0; c < cells; ++c)
    if ((index_ >> (cells - 1 - c)) & 1ULL) out.add_edge(c / n_, c % n_);
  ++index_;
  return true;
}

ReflexiveFrameEnumerator::ReflexiveFrameEnumerator(int n) : n_(n), free_cells_(n * n - n) {
  if (n < 0 || free_cells_ > 62)
    throw std::invalid_argument("reflexive frame enumeration supports n*n - n <= 62");
  limit_ = 1ULL << free_cells_;
}

bool ReflexiveFrameEnumerator::next(Frame& out) {
  if (index_ >= limit_) return false;
  out = Frame(n_);
  int bit = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) {
        out.add_edge(i, j);
        continue;
      }
      if ((index_ >> (free_cells_ - 1 - bit)) & 1ULL) out.add_edge(i, j);
      ++bit;
    }
  ++index_;
  return true;
}

bool FilteredFrameEnumerator::next(Frame& out) {
  while (base_.next(out))
    if (eval_universal(out, *kernel_)) return true;
  return false;
}

bool is_canonical_frame(const Frame& f) {
  const int n = f.world_count();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  auto code_under = [&](const std::vector<int>& p) {
    unsigned long long code = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) code = (code << 1) | (f.edge(p[i], p[j]) ? 1ULL : 0ULL);
    return code;
  };
  const unsigned long long self = code_under(perm);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (code_under(perm) < self) return false;
  return true;
}

SearchOutcome find_model(const FOKernel& kernel, const FormulaPtr& f, int max_worlds,
                         SearchMode mode, const SearchLimits& limits) {
  if (max_worlds < 1) throw std::invalid_argument("max_worlds must be >= 1");

  const auto t0 = Clock::now();
  SearchOutcome out;
  auto var_set = variables(f);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  CompiledFormula cf = CompiledFormula::compile(*f, vars);
  const int V = static_cast<int>(vars.size());

  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  auto finish = [&](SearchStatus st) {
    out.status = st;
    out.stats.elapsed_seconds = elapsed();
    return out;
  };

  try {
    for (int n = 1; n <= max_worlds; ++n) {
      FrameEnumerator fe(n);
      Frame fr;
      while (fe.next(fr)) {
        ++out.stats.frames_examined;
        if (limits.max_frames > 0 && out.stats.frames_examined > limits.max_frames)
          return finish(SearchStatus::aborted);
        if (limits.time_limit_s > 0 && elapsed() > limits.time_limit_s)
          return finish(SearchStatus::aborted);
        if (limits.canonical_pruning && !is_canonical_frame(fr)) continue;
        if (!eval_universal(fr, kernel)) continue;
        ++out.stats.frames_admitted;

        ValuationSearch vs{cf,
                           fr,
                           mode,
                           0,
                           {},
                           std::vector<signed char>(static_cast<size_t>(n) * V, -1),
                           &out.stats,
                           &limits,
                           t0};
        auto run_with_order = [&](int target, const std::vector<int>& worlds) {
          vs.target = target;
          vs.slot_order.clear();
          for (int w : worlds)
            for (int v = 0; v < V; ++v) vs.slot_order.push_back(w * V + v);
          std::fill(vs.asn.begin(), vs.asn.end(), -1);
          return vs.run(0);
        };

        bool hit = false;
        int hit_world = -1;
        if (mode == SearchMode::local) {
          for (int wt = 0; wt < n && !hit; ++wt) {
            if (run_with_order(wt, world_order_from(fr, wt))) {
              hit = true;
              hit_world = wt;
            }
          }
        } else {
          std::vector<int> all(n);
          for (int w = 0; w < n; ++w) all[w] = w;
          hit = run_with_order(0, all);
        }

        if (hit) {
          Model m = assignment_to_model(fr, vars, vs.asn);
          bool ok = eval_universal(m.frame, kernel) &&
                    (mode == SearchMode::local ? check(m, hit_world, f) : check_global(m, f));
          if (!ok) throw std::logic_error("search witness failed revalidation");
          out.witness_model = std::move(m);
          if (mode == SearchMode::local) out.witness_world = hit_world;
          return finish(SearchStatus::found);
        }
      }
    }
  } catch (const AbortSignal&) {
    return finish(SearchStatus::aborted);
  }
  return finish(SearchStatus::exhausted);
}

// ---------------------------------------------------------------------------
// Reference enumerator (kept deliberately plain; used as the search oracle)

SearchOutcome reference_find_model(const FOKernel& kernel, const FormulaPtr& f, int max_worlds,
                                   SearchMode mode) {
  if (max_worlds < 1) throw std::invalid_argument("max_worlds must be >= 1");
  const auto t0 = Clock::now();
  SearchOutcome out;
  auto var_set = variables(f);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  const int V = static_cast<int>(vars.size());
  if (max_worlds * max_worlds > 62 || max_worlds * V > 62)
    throw std::invalid_argument("reference enumerator bound too large");

  for (int n = 1; n <= max_worlds; ++n) {
    const int cells = n * n;
    for (unsigned long long code = 0; code < (1ULL << cells); ++code) {
      // Column-major, least-significant-bit-first frame decoding.
      Frame fr(n);
      for (int c = 0; c < cells; ++c)
        if ((code >> c) & 1ULL) fr.add_edge(c % n, c / n);
      ++out.stats.frames_examined;
      if (!eval_universal(fr, kernel)) continue;
      ++out.stats.frames_admitted;

      const int slots = n * V;
      for (unsigned long long vcode = 0; vcode < (1ULL << slots); ++vcode) {
        Model m;
        m.frame = fr;
        for (int v = 0; v < V; ++v)
          for (int w = 0; w < n; ++w)
            if ((vcode >> (v * n + w)) & 1ULL) m.valuation[vars[v]].insert(w);
        ++out.stats.models_examined;
        if (mode == SearchMode::local) {
          for (int w = 0; w < n; ++w)
            if (check(m, w, f)) {
              out.status = SearchStatus::found;
              out.witness_model = std::move(m);
              out.witness_world = w;
              out.stats.elapsed_seconds =
                  std::chrono::duration<double>(Clock::now() - t0).count();
              return out;
            }
        } else if (check_global(m, f)) {
          out.status = SearchStatus::found;
          out.witness_model = std::move(m);
          out.stats.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
          return out;
        }
      }
    }
  }
  out.status = SearchStatus::exhausted;
  out.stats.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

}  // namespace modalgrid
