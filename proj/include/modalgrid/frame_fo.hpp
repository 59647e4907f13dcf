#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modalgrid/kripke.hpp"

namespace modalgrid {

enum class FOKind : unsigned char { True, False, Edge, Eq, Not, And, Or, Imp };

class FONode;
using FONodePtr = std::shared_ptr<const FONode>;

// Quantifier-free boolean tree over the atoms x_i R x_j and x_i = x_j.
// Variable indices are 1-based.
class FONode {
public:
  FONode(FOKind kind, int a, int b, FONodePtr left, FONodePtr right);

  FOKind kind() const { return kind_; }
  int var_a() const { return a_; }  // atoms only
  int var_b() const { return b_; }
  const FONodePtr& child() const { return left_; }
  const FONodePtr& left() const { return left_; }
  const FONodePtr& right() const { return right_; }

private:
  FOKind kind_;
  int a_ = 0, b_ = 0;
  FONodePtr left_, right_;
};

namespace fo {

FONodePtr top();
FONodePtr bot();
FONodePtr edge(int a, int b);
FONodePtr eq(int a, int b);
FONodePtr neg(FONodePtr f);
FONodePtr conj(FONodePtr a, FONodePtr b);
FONodePtr disj(FONodePtr a, FONodePtr b);
FONodePtr impl(FONodePtr a, FONodePtr b);
FONodePtr conj_all(const std::vector<FONodePtr>& fs);  // left fold; empty -> top
FONodePtr disj_all(const std::vector<FONodePtr>& fs);  // left fold; empty -> bot
FONodePtr sym(int a, int b);                           // (a R b) & (b R a)

}  // namespace fo

// Universal first-order frame condition: all of x1..xk implicitly universally
// quantified over the worlds. Kernels without equality atoms are "basic".
struct FOKernel {
  int var_count = 0;
  FONodePtr body;
  bool uses_equality = false;

  static FOKernel make(int var_count, FONodePtr body);  // validates indices, sets flag
};

// True iff the body holds under every assignment of worlds to x1..xk.
// Empty frames satisfy every kernel vacuously.
bool eval_universal(const Frame& f, const FOKernel& k);

// First falsifying assignment in lexicographic order (x1 outermost, worlds
// ascending), or nullopt when the frame satisfies the kernel.
std::optional<std::vector<int>> find_violation(const Frame& f, const FOKernel& k);

// Built-in frame conditions. Names:
//   phi_1step, phi_2step, phi_eq, phi_grid, phi_univ, phi_final, phi_prior_eq
// All are basic except phi_prior_eq. Throws std::invalid_argument on unknown names.
FOKernel builtin_kernel(const std::string& name);
std::vector<std::string> builtin_kernel_names();

// Guard the body with "every variable is reflexive":
//   (x1 R x1 & ... & xk R xk) -> body
FOKernel relativize_to_reflexive(const FOKernel& k);

// Conjunction, padded to the larger variable count.
FOKernel conj_kernels(const FOKernel& a, const FOKernel& b);

// Kernel text format:
//   fo <k>
//   <body using R(xi,xj), =(xi,xj), !, &, |, ->, (), true, false>
//   end
FOKernel read_kernel(std::istream& in);
FOKernel parse_kernel(const std::string& text);
std::string render_kernel(const FOKernel& k);

}  // namespace modalgrid
