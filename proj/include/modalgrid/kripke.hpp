#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modalgrid/formula.hpp"

namespace modalgrid {

// Finite directed graph of worlds 0..n-1. Stores the adjacency matrix plus
// sorted successor lists; the edge set is duplicate-free by construction.
class Frame {
public:
  Frame() = default;
  explicit Frame(int world_count);

  int world_count() const { return n_; }

  bool edge(int from, int to) const { return adj_[static_cast<size_t>(from) * n_ + to] != 0; }
  void add_edge(int from, int to);     // throws std::out_of_range on bad index
  void remove_edge(int from, int to);

  const std::vector<int>& successors(int w) const { return succ_[w]; }
  std::vector<std::pair<int, int>> edges() const;  // sorted lexicographically
  long edge_count() const;

  bool operator==(const Frame& other) const { return n_ == other.n_ && adj_ == other.adj_; }

private:
  void check_index(int w) const;

  int n_ = 0;
  std::vector<std::uint8_t> adj_;       // n*n, row-major
  std::vector<std::vector<int>> succ_;  // per-world sorted successor lists
};

// A frame plus a valuation. Variables absent from the map are false at every
// world. Treat as immutable once built.
struct Model {
  Frame frame;
  std::map<std::string, std::set<int>> valuation;

  bool holds(const std::string& var, int world) const {
    auto it = valuation.find(var);
    return it != valuation.end() && it->second.count(world) > 0;
  }
  void set_true(const std::string& var, int world);
};

// Satisfaction at a world: Box over all successors, Dia over some successor.
// Throws std::out_of_range if world >= world_count.
bool check(const Model& m, int world, const Formula& f);
inline bool check(const Model& m, int world, const FormulaPtr& f) { return check(m, world, *f); }

// True iff f holds at every world.
bool check_global(const Model& m, const Formula& f);
inline bool check_global(const Model& m, const FormulaPtr& f) { return check_global(m, *f); }

// Symmetric-edge relation: both (a,b) and (b,a) present.
bool sym_related(const Frame& f, int a, int b);
inline bool sym_related(const Model& m, int a, int b) { return sym_related(m.frame, a, b); }

bool is_reflexive(const Frame& f);
inline bool is_reflexive(const Model& m) { return is_reflexive(m.frame); }
Frame reflexive_closure(const Frame& f);
Frame drop_reflexive_edges(const Frame& f);

// Structural equality with the valuation compared only on `vars`
// (default-false outside each model's map).
bool models_equal(const Model& a, const Model& b, const std::set<std::string>& vars);

// Model file format (line-oriented, '#' starts a comment):
//   model
//   worlds <n>
//   edge <i> <j>
//   val <var> <i> [<i> ...]
//   end
// Parsing is strict: unknown directives are errors, indices must be < n.
Model read_model(std::istream& in);
Model parse_model(const std::string& text);
void write_model(std::ostream& out, const Model& m);
std::string model_to_string(const Model& m);

}  // namespace modalgrid
