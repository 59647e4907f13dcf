#include "modalgrid/frame_fo.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

namespace modalgrid {

FONode::FONode(FOKind kind, int a, int b, FONodePtr left, FONodePtr right)
    : kind_(kind), a_(a), b_(b), left_(std::move(left)), right_(std::move(right)) {
  switch (kind_) {
    case FOKind::True:
    case FOKind::False:
      if (left_ || right_) throw std::invalid_argument("constant node with children");
      break;
    case FOKind::Edge:
    case FOKind::Eq:
      if (a_ < 1 || b_ < 1) throw std::invalid_argument("atom variable index must be >= 1");
      if (left_ || right_) throw std::invalid_argument("atom node with children");
      break;
    case FOKind::Not:
      if (!left_ || right_) throw std::invalid_argument("negation needs exactly one child");
      break;
    default:
      if (!left_ || !right_) throw std::invalid_argument("binary node needs two children");
  }
}

namespace fo {

FONodePtr top() {
  static const FONodePtr t = std::make_shared<FONode>(FOKind::True, 0, 0, nullptr, nullptr);
  return t;
}
FONodePtr bot() {
  static const FONodePtr f = std::make_shared<FONode>(FOKind::False, 0, 0, nullptr, nullptr);
  return f;
}
FONodePtr edge(int a, int b) { return std::make_shared<FONode>(FOKind::Edge, a, b, nullptr, nullptr); }
FONodePtr eq(int a, int b) { return std::make_shared<FONode>(FOKind::Eq, a, b, nullptr, nullptr); }
FONodePtr neg(FONodePtr f) { return std::make_shared<FONode>(FOKind::Not, 0, 0, std::move(f), nullptr); }
FONodePtr conj(FONodePtr a, FONodePtr b) {
  return std::make_shared<FONode>(FOKind::And, 0, 0, std::move(a), std::move(b));
}
FONodePtr disj(FONodePtr a, FONodePtr b) {
  return std::make_shared<FONode>(FOKind::Or, 0, 0, std::move(a), std::move(b));
}
FONodePtr impl(FONodePtr a, FONodePtr b) {
  return std::make_shared<FONode>(FOKind::Imp, 0, 0, std::move(a), std::move(b));
}
FONodePtr conj_all(const std::vector<FONodePtr>& fs) {
  if (fs.empty()) return top();
  FONodePtr acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}
FONodePtr disj_all(const std::vector<FONodePtr>& fs) {
  if (fs.empty()) return bot();
  FONodePtr acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}
FONodePtr sym(int a, int b) { return conj(edge(a, b), edge(b, a)); }

}  // namespace fo

namespace {

void scan_body(const FONode& nd, int var_count, bool& uses_eq) {
  switch (nd.kind()) {
    case FOKind::Edge:
    case FOKind::Eq:
      if (nd.var_a() > var_count || nd.var_b() > var_count)
        throw std::invalid_argument("atom variable index exceeds kernel variable count");
      if (nd.kind() == FOKind::Eq) uses_eq = true;
      break;
    case FOKind::Not:
      scan_body(*nd.child(), var_count, uses_eq);
      break;
    case FOKind::And:
    case FOKind::Or:
    case FOKind::Imp:
      scan_body(*nd.left(), var_count, uses_eq);
      scan_body(*nd.right(), var_count, uses_eq);
      break;
    default:
      break;
  }
}

}  // namespace

FOKernel FOKernel::make(int var_count, FONodePtr body) {
  if (var_count < 0) throw std::invalid_argument("negative variable count");
  if (!body) throw std::invalid_argument("null kernel body");
  bool uses_eq = false;
  scan_body(*body, var_count, uses_eq);
  return FOKernel{var_count, std::move(body), uses_eq};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// Three-valued evaluation over a partial assignment (-1 = unassigned).
// A definite result holds for every completion of the assignment.
enum Tri : signed char { TriF = 0, TriT = 1, TriU = 2 };

Tri eval3(const FONode& nd, const Frame& f, const std::vector<int>& asn) {
  switch (nd.kind()) {
    case FOKind::True: return TriT;
    case FOKind::False: return TriF;
    case FOKind::Edge: {
      int a = asn[nd.var_a() - 1], b = asn[nd.var_b() - 1];
      if (a < 0 || b < 0) return TriU;
      return f.edge(a, b) ? TriT : TriF;
    }
    case FOKind::Eq: {
      int a = asn[nd.var_a() - 1], b = asn[nd.var_b() - 1];
      if (a < 0 || b < 0) return TriU;
      return a == b ? TriT : TriF;
    }
    case FOKind::Not: {
      Tri c = eval3(*nd.child(), f, asn);
      return c == TriU ? TriU : (c == TriT ? TriF : TriT);
    }
    case FOKind::And: {
      Tri l = eval3(*nd.left(), f, asn);
      if (l == TriF) return TriF;
      Tri r = eval3(*nd.right(), f, asn);
      if (r == TriF) return TriF;
      return (l == TriT && r == TriT) ? TriT : TriU;
    }
    case FOKind::Or: {
      Tri l = eval3(*nd.left(), f, asn);
      if (l == TriT) return TriT;
      Tri r = eval3(*nd.right(), f, asn);
      if (r == TriT) return TriT;
      return (l == TriF && r == TriF) ? TriF : TriU;
    }
    case FOKind::Imp: {
      Tri l = eval3(*nd.left(), f, asn);
      if (l == TriF) return TriT;
      Tri r = eval3(*nd.right(), f, asn);
      if (r == TriT) return TriT;
      return (l == TriT && r == TriF) ? TriF : TriU;
    }
  }
  return TriU;  // unreachable
}

// Depth-first search over assignments in lexicographic order. Subtrees where
// the body is already definitely true are skipped; a definitely-false partial
// assignment is completed with world 0 (its lexicographically first
// completion, all of which are violations).
bool violation_dfs(const FONode& body, const Frame& f, std::vector<int>& asn, size_t depth) {
  Tri t = eval3(body, f, asn);
  if (t == TriT) return false;
  if (t == TriF) {
    std::fill(asn.begin() + depth, asn.end(), 0);
    return true;
  }
  for (int v = 0; v < f.world_count(); ++v) {
    asn[depth] = v;
    if (violation_dfs(body, f, asn, depth + 1)) return true;
  }
  asn[depth] = -1;
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_violation(const Frame& f, const FOKernel& k) {
  if (f.world_count() == 0 && k.var_count > 0) return std::nullopt;  // vacuous
  std::vector<int> asn(k.var_count, -1);
  if (violation_dfs(*k.body, f, asn, 0)) return asn;
  return std::nullopt;
}

bool eval_universal(const Frame& f, const FOKernel& k) { return !find_violation(f, k).has_value(); }

// ---------------------------------------------------------------------------
// Built-in kernels

namespace {

using namespace fo;

FOKernel make_phi_1step() {
  // (x R y1 & x R y2 & x R y3) -> (some x~yi or some yi~yj)
  FONodePtr ante = conj_all({edge(1, 2), edge(1, 3), edge(1, 4)});
  FONodePtr cons =
      disj_all({sym(1, 2), sym(1, 3), sym(1, 4), sym(2, 3), sym(2, 4), sym(3, 4)});
  return FOKernel::make(4, impl(ante, cons));
}

FOKernel make_phi_2step() {
  // x=1, y1..y4=2..5, z1..z4=6..9
  std::vector<FONodePtr> steps;
  for (int i = 1; i <= 4; ++i) steps.push_back(conj(edge(1, 1 + i), edge(1 + i, 5 + i)));
  std::vector<FONodePtr> alts;
  for (int i = 1; i <= 4; ++i) alts.push_back(sym(1, 1 + i));
  for (int i = 1; i <= 4; ++i) alts.push_back(sym(1 + i, 5 + i));
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) alts.push_back(sym(5 + i, 5 + j));
  return FOKernel::make(9, impl(conj_all(steps), disj_all(alts)));
}

FOKernel make_phi_eq() {
  // ((x~y) & y R z -> x R z) & ((x~y) & z R y -> z R x)
  FONodePtr out = impl(conj(sym(1, 2), edge(2, 3)), edge(1, 3));
  FONodePtr in = impl(conj(sym(1, 2), edge(3, 2)), edge(3, 1));
  return FOKernel::make(3, conj(out, in));
}

FOKernel make_phi_univ() {
  // (x R y -> y R y) & (!(wu R wu) -> (x R y -> wu R y)), with x=1, y=2, wu=3
  FONodePtr incoming_reflexive = impl(edge(1, 2), edge(2, 2));
  FONodePtr universal = impl(neg(edge(3, 3)), impl(edge(1, 2), edge(3, 2)));
  return FOKernel::make(3, conj(incoming_reflexive, universal));
}

FOKernel make_phi_grid() {
  return conj_kernels(conj_kernels(make_phi_1step(), make_phi_2step()), make_phi_eq());
}

FOKernel make_phi_prior_eq() {
  FONodePtr one = impl(conj_all({edge(1, 2), edge(1, 3), edge(1, 4)}),
                       disj_all({eq(2, 3), eq(2, 4), eq(3, 4)}));
  std::vector<FONodePtr> steps;
  for (int i = 1; i <= 4; ++i) steps.push_back(conj(edge(1, 1 + i), edge(1 + i, 5 + i)));
  std::vector<FONodePtr> pairs;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) pairs.push_back(eq(5 + i, 5 + j));
  FONodePtr two = impl(conj_all(steps), disj_all(pairs));
  return conj_kernels(FOKernel::make(4, one), FOKernel::make(9, two));
}

}  // namespace

FOKernel relativize_to_reflexive(const FOKernel& k) {
  std::vector<FONodePtr> loops;
  for (int i = 1; i <= k.var_count; ++i) loops.push_back(fo::edge(i, i));
  return FOKernel::make(k.var_count, fo::impl(fo::conj_all(loops), k.body));
}

FOKernel conj_kernels(const FOKernel& a, const FOKernel& b) {
  return FOKernel::make(std::max(a.var_count, b.var_count), fo::conj(a.body, b.body));
}

FOKernel builtin_kernel(const std::string& name) {
  if (name == "phi_1step") return make_phi_1step();
  if (name == "phi_2step") return make_phi_2step();
  if (name == "phi_eq") return make_phi_eq();
  if (name == "phi_grid") return make_phi_grid();
  if (name == "phi_univ") return make_phi_univ();
  if (name == "phi_final") return conj_kernels(make_phi_univ(), relativize_to_reflexive(make_phi_grid()));
  if (name == "phi_prior_eq") return make_phi_prior_eq();
  throw std::invalid_argument("unknown built-in kernel '" + name + "'");
}

std::vector<std::string> builtin_kernel_names() {
  return {"phi_1step", "phi_2step", "phi_eq", "phi_grid", "phi_univ", "phi_final", "phi_prior_eq"};
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct FOToken {
  enum Kind { End, LParen, RParen, Comma, Not, And, Or, Imp, True, False, R, EqSym, Var } kind;
  int index = 0;  // Var
  int line = 1, column = 1;
  std::string text;
};

class FOLexer {
public:
  FOLexer(std::string_view text, int first_line) : text_(text), line_(first_line) {}

  FOToken next() {
    skip();
    FOToken t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) {
      t.kind = FOToken::End;
      return t;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) advance();
      std::string word(text_.substr(start, pos_ - start));
      t.text = word;
      if (word == "true") { t.kind = FOToken::True; return t; }
      if (word == "false") { t.kind = FOToken::False; return t; }
      if (word == "R") { t.kind = FOToken::R; return t; }
      if (word.size() >= 2 && word[0] == 'x') {
        int idx = 0;
        for (size_t i = 1; i < word.size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(word[i])))
            throw ParseError(t.line, t.column, "bad variable '" + word + "'");
          idx = idx * 10 + (word[i] - '0');
        }
        if (idx < 1) throw ParseError(t.line, t.column, "variable index must be >= 1");
        t.kind = FOToken::Var;
        t.index = idx;
        return t;
      }
      throw ParseError(t.line, t.column, "unexpected word '" + word + "'");
    }
    switch (c) {
      case '(': advance(); t.kind = FOToken::LParen; return t;
      case ')': advance(); t.kind = FOToken::RParen; return t;
      case ',': advance(); t.kind = FOToken::Comma; return t;
      case '!': advance(); t.kind = FOToken::Not; return t;
      case '~': advance(); t.kind = FOToken::Not; return t;
      case '&': advance(); t.kind = FOToken::And; return t;
      case '|': advance(); t.kind = FOToken::Or; return t;
      case '=': advance(); t.kind = FOToken::EqSym; return t;
      case '-':
        advance();
        if (pos_ >= text_.size() || text_[pos_] != '>')
          throw ParseError(t.line, t.column, "expected '>' after '-'");
        advance();
        t.kind = FOToken::Imp;
        return t;
      default:
        throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
    }
  }

private:
  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
      ++pos_;
    }
  }
  void skip() {
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
  int line_;
  int col_ = 1;
};

class FOParser {
public:
  FOParser(std::string_view body, int first_line, int var_count)
      : lexer_(body, first_line), var_count_(var_count) {
    shift();
  }

  FONodePtr parse() {
    FONodePtr f = parse_imp();
    if (tok_.kind != FOToken::End)
      throw ParseError(tok_.line, tok_.column, "unexpected trailing input in kernel body");
    return f;
  }

private:
  void shift() { tok_ = lexer_.next(); }

  void expect(FOToken::Kind k, const char* what) {
    if (tok_.kind != k) throw ParseError(tok_.line, tok_.column, std::string("expected ") + what);
  }

  int parse_var() {
    expect(FOToken::Var, "variable x<i>");
    int idx = tok_.index;
    if (idx > var_count_)
      throw ParseError(tok_.line, tok_.column,
                       "variable x" + std::to_string(idx) + " exceeds declared count " +
                           std::to_string(var_count_));
    shift();
    return idx;
  }

  FONodePtr parse_atom_args(bool is_edge) {
    shift();  // consume R / =
    expect(FOToken::LParen, "'('");
    shift();
    int a = parse_var();
    expect(FOToken::Comma, "','");
    shift();
    int b = parse_var();
    expect(FOToken::RParen, "')'");
    shift();
    return is_edge ? fo::edge(a, b) : fo::eq(a, b);
  }

  FONodePtr parse_imp() {
    if (++depth_ > 1000) throw ParseError(tok_.line, tok_.column, "kernel body nesting too deep");
    FONodePtr f = parse_or();
    if (tok_.kind == FOToken::Imp) {
      shift();
      f = fo::impl(f, parse_imp());
    }
    --depth_;
    return f;
  }

  FONodePtr parse_or() {
    FONodePtr f = parse_and();
    while (tok_.kind == FOToken::Or) {
      shift();
      f = fo::disj(f, parse_and());
    }
    return f;
  }

  FONodePtr parse_and() {
    FONodePtr f = parse_unary();
    while (tok_.kind == FOToken::And) {
      shift();
      f = fo::conj(f, parse_unary());
    }
    return f;
  }

  FONodePtr parse_unary() {
    if (++depth_ > 1000) throw ParseError(tok_.line, tok_.column, "kernel body nesting too deep");
    FONodePtr result;
    if (tok_.kind == FOToken::Not) {
      shift();
      result = fo::neg(parse_unary());
    } else {
      switch (tok_.kind) {
        case FOToken::True: shift(); result = fo::top(); break;
        case FOToken::False: shift(); result = fo::bot(); break;
        case FOToken::R: result = parse_atom_args(true); break;
        case FOToken::EqSym: result = parse_atom_args(false); break;
        case FOToken::LParen: {
          shift();
          result = parse_imp();
          expect(FOToken::RParen, "')'");
          shift();
          break;
        }
        default:
          throw ParseError(tok_.line, tok_.column, "expected kernel body term");
      }
    }
    --depth_;
    return result;
  }

  FOLexer lexer_;
  int var_count_;
  FOToken tok_;
  int depth_ = 0;
};

}  // namespace

FOKernel read_kernel(std::istream& in) {
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) lines.push_back(raw);

  auto strip = [](std::string s) {
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    return s;
  };
  auto blank = [](const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
  };

  size_t header = 0;
  while (header < lines.size() && blank(strip(lines[header]))) ++header;
  if (header == lines.size())
    throw ParseError(static_cast<int>(lines.size()) + 1, 1, "missing 'fo <k>' header");
  {
    std::istringstream hs(strip(lines[header]));
    std::string kw;
    int k = -1;
    if (!(hs >> kw) || kw != "fo" || !(hs >> k) || k < 0)
      throw ParseError(static_cast<int>(header) + 1, 1, "expected 'fo <k>' header");
    std::string extra;
    if (hs >> extra) throw ParseError(static_cast<int>(header) + 1, 1, "unexpected tokens after header");

    size_t end_line = lines.size();
    for (size_t i = header + 1; i < lines.size(); ++i) {
      std::istringstream ls(strip(lines[i]));
      std::string first;
      if (ls >> first && first == "end") {
        std::string more;
        if (ls >> more) throw ParseError(static_cast<int>(i) + 1, 1, "unexpected tokens after 'end'");
        end_line = i;
        break;
      }
    }
    if (end_line == lines.size())
      throw ParseError(static_cast<int>(lines.size()) + 1, 1, "missing 'end'");
    for (size_t i = end_line + 1; i < lines.size(); ++i)
      if (!blank(strip(lines[i])))
        throw ParseError(static_cast<int>(i) + 1, 1, "content after 'end'");

    std::string body;
    for (size_t i = header + 1; i < end_line; ++i) {
      body += lines[i];
      body += '\n';
    }
    FOParser parser(body, static_cast<int>(header) + 2, k);
    return FOKernel::make(k, parser.parse());
  }
}

FOKernel parse_kernel(const std::string& text) {
  std::istringstream is(text);
  return read_kernel(is);
}

namespace {

// Precedence: Imp=2 < Or=3 < And=4 < Not/atom=5.
int fo_precedence(FOKind k) {
  switch (k) {
    case FOKind::Imp: return 2;
    case FOKind::Or: return 3;
    case FOKind::And: return 4;
    default: return 5;
  }
}

void render_fo(const FONode& nd, int min_prec, std::string& out) {
  int prec = fo_precedence(nd.kind());
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (nd.kind()) {
    case FOKind::True: out += "true"; break;
    case FOKind::False: out += "false"; break;
    case FOKind::Edge:
      out += "R(x" + std::to_string(nd.var_a()) + ",x" + std::to_string(nd.var_b()) + ")";
      break;
    case FOKind::Eq:
      out += "=(x" + std::to_string(nd.var_a()) + ",x" + std::to_string(nd.var_b()) + ")";
      break;
    case FOKind::Not:
      out += '!';
      render_fo(*nd.child(), 5, out);
      break;
    case FOKind::And:
      render_fo(*nd.left(), 4, out);
      out += " & ";
      render_fo(*nd.right(), 5, out);
      break;
    case FOKind::Or:
      render_fo(*nd.left(), 3, out);
      out += " | ";
      render_fo(*nd.right(), 4, out);
      break;
    case FOKind::Imp:
      render_fo(*nd.left(), 3, out);
      out += " -> ";
      render_fo(*nd.right(), 2, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render_kernel(const FOKernel& k) {
  std::string body;
  render_fo(*k.body, 0, body);
  return "fo " + std::to_string(k.var_count) + "\n" + body + "\nend\n";
}

}  // namespace modalgrid
