#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "modalgrid/errors.hpp"

namespace modalgrid {

enum class FormulaKind : unsigned char { Var, True, False, Not, And, Or, Imp, Iff, Box, Dia };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable modal formula tree. Dia is a first-class node; the model checker
// treats it as the dual of Box. Subtrees may be shared between formulas.
class Formula {
public:
  Formula(FormulaKind kind, std::string var_name, FormulaPtr left, FormulaPtr right);

  FormulaKind kind() const { return kind_; }
  const std::string& var_name() const { return var_name_; }  // Var nodes only
  const FormulaPtr& child() const { return left_; }          // Not/Box/Dia
  const FormulaPtr& left() const { return left_; }
  const FormulaPtr& right() const { return right_; }

  bool is_binary() const {
    return kind_ == FormulaKind::And || kind_ == FormulaKind::Or || kind_ == FormulaKind::Imp ||
           kind_ == FormulaKind::Iff;
  }
  bool is_unary() const {
    return kind_ == FormulaKind::Not || kind_ == FormulaKind::Box || kind_ == FormulaKind::Dia;
  }

private:
  FormulaKind kind_;
  std::string var_name_;
  FormulaPtr left_;
  FormulaPtr right_;
};

// Identifier shape accepted for variables: [a-zA-Z_][a-zA-Z0-9_]*
bool is_valid_identifier(std::string_view name);

// Names starting with "__" are reserved for machine-introduced variables
// (the d8 counter bits and the localization marker).
bool has_reserved_prefix(std::string_view name);

namespace fml {

FormulaPtr var(std::string name);
FormulaPtr top();
FormulaPtr bot();
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr impl(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr box(FormulaPtr f);
FormulaPtr dia(FormulaPtr f);

// Left-associated conjunction/disjunction of a list; empty list gives top/bot.
FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr disj_all(const std::vector<FormulaPtr>& fs);

}  // namespace fml

bool equal(const Formula& a, const Formula& b);
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }

// Text grammar (whitespace-insensitive, '#' starts a line comment):
//   formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
//   or := and ("|" and)* ; and := unary ("&" unary)* ;
//   unary := ("!"|"~") unary | "[]" unary | "<>" unary | atom ;
//   atom := "true" | "false" | IDENT | "(" formula ")"
// Throws ParseError with position on malformed input.
FormulaPtr parse_modal(std::string_view text);

// Precedence-minimal rendering; parse_modal(render_modal(f)) is structurally
// identical to f.
std::string render_modal(const Formula& f);
inline std::string render_modal(const FormulaPtr& f) { return render_modal(*f); }

// Maximal nesting degree of Box/Dia.
int modal_depth(const Formula& f);
inline int modal_depth(const FormulaPtr& f) { return modal_depth(*f); }

std::set<std::string> variables(const Formula& f);
inline std::set<std::string> variables(const FormulaPtr& f) { return variables(*f); }

// Conjuncts along the left-associated And spine, in order.
std::vector<FormulaPtr> flatten_conjuncts(const FormulaPtr& f);

}  // namespace modalgrid
