#pragma once

#include <optional>

#include "modalgrid/formula.hpp"
#include "modalgrid/frame_fo.hpp"
#include "modalgrid/kripke.hpp"

namespace modalgrid {

enum class SearchStatus { found, exhausted, aborted };
enum class SearchMode { local, global };

struct SearchLimits {
  long long max_frames = 0;   // 0 = unlimited
  double time_limit_s = 0.0;  // 0 = unlimited
  // Skip frames that are not the lexicographically least member of their
  // isomorphism class. Off by default; preserves the found/exhausted status
  // (satisfaction is isomorphism-invariant) but may change the witness.
  bool canonical_pruning = false;
};

struct SearchStats {
  long long frames_examined = 0;  // frames enumerated (before the kernel filter)
  long long frames_admitted = 0;  // frames satisfying the kernel
  long long models_examined = 0;  // decided nodes of the valuation search
  double elapsed_seconds = 0.0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<Model> witness_model;
  std::optional<int> witness_world;  // local mode only
  SearchStats stats;
};

// Bounded brute-force model finding: enumerate all frames with 1..max_worlds
// worlds in adjacency-lexicographic order, keep those satisfying the kernel,
// and search valuations over the formula's variables (all other variables
// false) by backtracking with three-valued pruning. The first witness in
// enumeration order is returned and re-validated with independent
// eval_universal/check calls before being reported. Deterministic.
SearchOutcome find_model(const FOKernel& kernel, const FormulaPtr& f, int max_worlds,
                         SearchMode mode, const SearchLimits& limits = {});

// All 2^(n*n) digraphs on n worlds. The adjacency matrix is read row-major as
// a bit string with cell (0,0) most significant; frames come in increasing
// numeric order of that string (the empty frame first).
class FrameEnumerator {
public:
  explicit FrameEnumerator(int n);
  bool next(Frame& out);

private:
  int n_;
  unsigned long long index_ = 0;
  unsigned long long limit_;
};

// All 2^(n*n - n) reflexive frames: loops forced, off-diagonal cells
// enumerated in the same row-major lexicographic order.
class ReflexiveFrameEnumerator {
public:
  explicit ReflexiveFrameEnumerator(int n);
  bool next(Frame& out);

private:
  int n_;
  int free_cells_;
  unsigned long long index_ = 0;
  unsigned long long limit_;
};

// True iff no vertex permutation yields a lexicographically smaller
// adjacency code (the frame is its isomorphism class representative).
bool is_canonical_frame(const Frame& f);

// FrameEnumerator filtered by a kernel.
class FilteredFrameEnumerator {
public:
  FilteredFrameEnumerator(int n, const FOKernel& k) : base_(n), kernel_(&k) {}
  bool next(Frame& out);

private:
  FrameEnumerator base_;
  const FOKernel* kernel_;
};

// Reference enumerator for cross-checking find_model: frames in a different
// (column-major, reversed-bit) order, full valuation tables in variable-major
// order, no pruning, satisfaction checked with plain check() calls. Agrees
// with find_model on status; the witness may differ.
SearchOutcome reference_find_model(const FOKernel& kernel, const FormulaPtr& f, int max_worlds,
                                   SearchMode mode);

}  // namespace modalgrid
