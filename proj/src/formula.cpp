#include "modalgrid/formula.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace modalgrid {

namespace {

bool needs_child(FormulaKind k) {
  return k == FormulaKind::Not || k == FormulaKind::Box || k == FormulaKind::Dia;
}

bool needs_both(FormulaKind k) {
  return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Imp ||
         k == FormulaKind::Iff;
}

}  // namespace

Formula::Formula(FormulaKind kind, std::string var_name, FormulaPtr left, FormulaPtr right)
    : kind_(kind), var_name_(std::move(var_name)), left_(std::move(left)), right_(std::move(right)) {
  if (kind_ == FormulaKind::Var) {
    if (!is_valid_identifier(var_name_))
      throw std::invalid_argument("invalid variable name: '" + var_name_ + "'");
    if (left_ || right_) throw std::invalid_argument("variable node with children");
  } else if (!var_name_.empty()) {
    throw std::invalid_argument("non-variable node with a name");
  } else if (needs_child(kind_)) {
    if (!left_ || right_) throw std::invalid_argument("unary node needs exactly one child");
  } else if (needs_both(kind_)) {
    if (!left_ || !right_) throw std::invalid_argument("binary node needs two children");
  } else {
    if (left_ || right_) throw std::invalid_argument("constant node with children");
  }
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

bool has_reserved_prefix(std::string_view name) {
  return name.size() >= 2 && name[0] == '_' && name[1] == '_';
}

namespace fml {

FormulaPtr var(std::string name) {
  return std::make_shared<Formula>(FormulaKind::Var, std::move(name), nullptr, nullptr);
}
FormulaPtr top() {
  static const FormulaPtr t = std::make_shared<Formula>(FormulaKind::True, "", nullptr, nullptr);
  return t;
}
FormulaPtr bot() {
  static const FormulaPtr f = std::make_shared<Formula>(FormulaKind::False, "", nullptr, nullptr);
  return f;
}
FormulaPtr neg(FormulaPtr f) {
  return std::make_shared<Formula>(FormulaKind::Not, "", std::move(f), nullptr);
}
FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(FormulaKind::And, "", std::move(a), std::move(b));
}
FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(FormulaKind::Or, "", std::move(a), std::move(b));
}
FormulaPtr impl(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(FormulaKind::Imp, "", std::move(a), std::move(b));
}
FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<Formula>(FormulaKind::Iff, "", std::move(a), std::move(b));
}
FormulaPtr box(FormulaPtr f) {
  return std::make_shared<Formula>(FormulaKind::Box, "", std::move(f), nullptr);
}
FormulaPtr dia(FormulaPtr f) {
  return std::make_shared<Formula>(FormulaKind::Dia, "", std::move(f), nullptr);
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return top();
  FormulaPtr acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

FormulaPtr disj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return bot();
  FormulaPtr acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

}  // namespace fml

bool equal(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Var:
      return a.var_name() == b.var_name();
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Not:
    case FormulaKind::Box:
    case FormulaKind::Dia:
      return equal(*a.child(), *b.child());
    default:
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { End, LParen, RParen, Not, Box, Dia, And, Or, Imp, Iff, True, False, Ident };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws_and_comments();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Tok::End, "", line, col};
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        advance();
      std::string word(text_.substr(start, pos_ - start));
      if (word == "true") return {Tok::True, word, line, col};
      if (word == "false") return {Tok::False, word, line, col};
      return {Tok::Ident, word, line, col};
    }
    switch (c) {
      case '(': advance(); return {Tok::LParen, "(", line, col};
      case ')': advance(); return {Tok::RParen, ")", line, col};
      case '!': advance(); return {Tok::Not, "!", line, col};
      case '~': advance(); return {Tok::Not, "~", line, col};
      case '&': advance(); return {Tok::And, "&", line, col};
      case '|': advance(); return {Tok::Or, "|", line, col};
      case '[':
        advance();
        if (peek() != ']') throw ParseError(line, col, "expected ']' after '['");
        advance();
        return {Tok::Box, "[]", line, col};
      case '<':
        advance();
        if (peek() == '>') {
          advance();
          return {Tok::Dia, "<>", line, col};
        }
        if (peek() == '-') {
          advance();
          if (peek() != '>') throw ParseError(line, col, "expected '>' after '<-'");
          advance();
          return {Tok::Iff, "<->", line, col};
        }
        throw ParseError(line, col, "expected '<>' or '<->'");
      case '-':
        advance();
        if (peek() != '>') throw ParseError(line, col, "expected '>' after '-'");
        advance();
        return {Tok::Imp, "->", line, col};
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }

private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  FormulaPtr parse() {
    FormulaPtr f = parse_iff();
    expect(Tok::End, "end of input");
    return f;
  }

private:
  // Hard cap on syntactic nesting so hostile input cannot exhaust the stack.
  static constexpr int kMaxDepth = 1000;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth)
        throw ParseError(p.tok_.line, p.tok_.column, "formula nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  void shift() { tok_ = lexer_.next(); }

  void expect(Tok k, const char* what) {
    if (tok_.kind != k)
      throw ParseError(tok_.line, tok_.column,
                       std::string("expected ") + what + ", got '" +
                           (tok_.kind == Tok::End ? "<end>" : tok_.text) + "'");
  }

  FormulaPtr parse_iff() {
    FormulaPtr f = parse_imp();
    while (tok_.kind == Tok::Iff) {
      shift();
      f = fml::iff(f, parse_imp());
    }
    return f;
  }

  FormulaPtr parse_imp() {
    DepthGuard guard(*this);  // right recursion
    FormulaPtr f = parse_or();
    if (tok_.kind == Tok::Imp) {
      shift();
      return fml::impl(f, parse_imp());
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (tok_.kind == Tok::Or) {
      shift();
      f = fml::disj(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (tok_.kind == Tok::And) {
      shift();
      f = fml::conj(f, parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    DepthGuard guard(*this);
    switch (tok_.kind) {
      case Tok::Not: shift(); return fml::neg(parse_unary());
      case Tok::Box: shift(); return fml::box(parse_unary());
      case Tok::Dia: shift(); return fml::dia(parse_unary());
      default: return parse_atom();
    }
  }

  FormulaPtr parse_atom() {
    switch (tok_.kind) {
      case Tok::True: shift(); return fml::top();
      case Tok::False: shift(); return fml::bot();
      case Tok::Ident: {
        std::string name = tok_.text;
        shift();
        return fml::var(std::move(name));
      }
      case Tok::LParen: {
        shift();
        FormulaPtr f = parse_iff();
        expect(Tok::RParen, "')'");
        shift();
        return f;
      }
      default:
        throw ParseError(tok_.line, tok_.column,
                         "expected formula, got '" + (tok_.kind == Tok::End ? "<end>" : tok_.text) +
                             "'");
    }
  }

  Lexer lexer_;
  Token tok_{Tok::End, "", 1, 1};
  int depth_ = 0;
};

}  // namespace

FormulaPtr parse_modal(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Precedence levels: Iff=1 < Imp=2 < Or=3 < And=4 < unary/atom=5.
int precedence(FormulaKind k) {
  switch (k) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Imp: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    default: return 5;
  }
}

void render_rec(const Formula& f, int min_prec, std::string& out) {
  int prec = precedence(f.kind());
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case FormulaKind::Var: out += f.var_name(); break;
    case FormulaKind::True: out += "true"; break;
    case FormulaKind::False: out += "false"; break;
    case FormulaKind::Not:
      out += '!';
      render_rec(*f.child(), 5, out);
      break;
    case FormulaKind::Box:
      out += "[]";
      render_rec(*f.child(), 5, out);
      break;
    case FormulaKind::Dia:
      out += "<>";
      render_rec(*f.child(), 5, out);
      break;
    case FormulaKind::And:
      render_rec(*f.left(), 4, out);
      out += " & ";
      render_rec(*f.right(), 5, out);
      break;
    case FormulaKind::Or:
      render_rec(*f.left(), 3, out);
      out += " | ";
      render_rec(*f.right(), 4, out);
      break;
    case FormulaKind::Imp:
      render_rec(*f.left(), 3, out);
      out += " -> ";
      render_rec(*f.right(), 2, out);
      break;
    case FormulaKind::Iff:
      render_rec(*f.left(), 1, out);
      out += " <-> ";
      render_rec(*f.right(), 2, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render_modal(const Formula& f) {
  std::string out;
  render_rec(f, 0, out);
  return out;
}

int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Var:
    case FormulaKind::True:
    case FormulaKind::False:
      return 0;
    case FormulaKind::Not:
      return modal_depth(*f.child());
    case FormulaKind::Box:
    case FormulaKind::Dia:
      return 1 + modal_depth(*f.child());
    default:
      return std::max(modal_depth(*f.left()), modal_depth(*f.right()));
  }
}

namespace {

void collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Var: out.insert(f.var_name()); break;
    case FormulaKind::True:
    case FormulaKind::False: break;
    case FormulaKind::Not:
    case FormulaKind::Box:
    case FormulaKind::Dia:
      collect_vars(*f.child(), out);
      break;
    default:
      collect_vars(*f.left(), out);
      collect_vars(*f.right(), out);
  }
}

}  // namespace

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

std::vector<FormulaPtr> flatten_conjuncts(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  FormulaPtr cur = f;
  while (cur->kind() == FormulaKind::And) {
    out.push_back(cur->right());
    cur = cur->left();
  }
  out.push_back(cur);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace modalgrid
