#include "modalgrid/kripke.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

namespace modalgrid {

Frame::Frame(int world_count) : n_(world_count) {
  if (world_count < 0) throw std::out_of_range("negative world count");
  adj_.assign(static_cast<size_t>(n_) * n_, 0);
  succ_.assign(n_, {});
}

void Frame::check_index(int w) const {
  if (w < 0 || w >= n_)
    throw std::out_of_range("world " + std::to_string(w) + " out of range (n=" +
                            std::to_string(n_) + ")");
}

void Frame::add_edge(int from, int to) {
  check_index(from);
  check_index(to);
  auto& cell = adj_[static_cast<size_t>(from) * n_ + to];
  if (cell) return;
  cell = 1;
  auto& s = succ_[from];
  s.insert(std::lower_bound(s.begin(), s.end(), to), to);
}

void Frame::remove_edge(int from, int to) {
  check_index(from);
  check_index(to);
  auto& cell = adj_[static_cast<size_t>(from) * n_ + to];
  if (!cell) return;
  cell = 0;
  auto& s = succ_[from];
  s.erase(std::lower_bound(s.begin(), s.end(), to));
}

std::vector<std::pair<int, int>> Frame::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j : succ_[i]) out.emplace_back(i, j);
  return out;
}

long Frame::edge_count() const {
  long c = 0;
  for (const auto& s : succ_) c += static_cast<long>(s.size());
  return c;
}

void Model::set_true(const std::string& var, int world) {
  if (world < 0 || world >= frame.world_count())
    throw std::out_of_range("valuation world " + std::to_string(world) + " out of range");
  valuation[var].insert(world);
}

bool check(const Model& m, int world, const Formula& f) {
  if (world < 0 || world >= m.frame.world_count())
    throw std::out_of_range("world " + std::to_string(world) + " out of range");
  switch (f.kind()) {
    case FormulaKind::Var: return m.holds(f.var_name(), world);
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Not: return !check(m, world, *f.child());
    case FormulaKind::And: return check(m, world, *f.left()) && check(m, world, *f.right());
    case FormulaKind::Or: return check(m, world, *f.left()) || check(m, world, *f.right());
    case FormulaKind::Imp: return !check(m, world, *f.left()) || check(m, world, *f.right());
    case FormulaKind::Iff: return check(m, world, *f.left()) == check(m, world, *f.right());
    case FormulaKind::Box:
      for (int w2 : m.frame.successors(world))
        if (!check(m, w2, *f.child())) return false;
      return true;
    case FormulaKind::Dia:
      for (int w2 : m.frame.successors(world))
        if (check(m, w2, *f.child())) return true;
      return false;
  }
  return false;  // unreachable
}

bool check_global(const Model& m, const Formula& f) {
  for (int w = 0; w < m.frame.world_count(); ++w)
    if (!check(m, w, f)) return false;
  return true;
}

bool sym_related(const Frame& f, int a, int b) { return f.edge(a, b) && f.edge(b, a); }

bool is_reflexive(const Frame& f) {
  for (int w = 0; w < f.world_count(); ++w)
    if (!f.edge(w, w)) return false;
  return true;
}

Frame reflexive_closure(const Frame& f) {
  Frame out = f;
  for (int w = 0; w < f.world_count(); ++w) out.add_edge(w, w);
  return out;
}

Frame drop_reflexive_edges(const Frame& f) {
  Frame out = f;
  for (int w = 0; w < f.world_count(); ++w) out.remove_edge(w, w);
  return out;
}

bool models_equal(const Model& a, const Model& b, const std::set<std::string>& vars) {
  if (!(a.frame == b.frame)) return false;
  static const std::set<int> empty;
  for (const auto& v : vars) {
    auto ia = a.valuation.find(v);
    auto ib = b.valuation.find(v);
    const std::set<int>& sa = ia == a.valuation.end() ? empty : ia->second;
    const std::set<int>& sb = ib == b.valuation.end() ? empty : ib->second;
    if (sa != sb) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Model file format

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

int parse_index(const std::string& tok, int line_no, const char* what) {
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(line_no, 1, std::string("expected ") + what + ", got '" + tok + "'");
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw ParseError(line_no, 1, std::string(what) + " out of range: '" + tok + "'");
  }
}

}  // namespace

Model read_model(std::istream& in) {
  Model m;
  bool saw_header = false, saw_worlds = false, saw_end = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_tokens(raw);
    if (toks.empty()) continue;
    if (saw_end)
      throw ParseError(line_no, 1, "content after 'end'");
    if (!saw_header) {
      if (toks.size() != 1 || toks[0] != "model")
        throw ParseError(line_no, 1, "expected 'model' header");
      saw_header = true;
      continue;
    }
    const std::string& dir = toks[0];
    if (dir == "worlds") {
      if (saw_worlds) throw ParseError(line_no, 1, "duplicate 'worlds' directive");
      if (toks.size() != 2) throw ParseError(line_no, 1, "usage: worlds <n>");
      int n = parse_index(toks[1], line_no, "world count");
      m.frame = Frame(n);
      saw_worlds = true;
    } else if (dir == "edge") {
      if (!saw_worlds) throw ParseError(line_no, 1, "'edge' before 'worlds'");
      if (toks.size() != 3) throw ParseError(line_no, 1, "usage: edge <i> <j>");
      int i = parse_index(toks[1], line_no, "world index");
      int j = parse_index(toks[2], line_no, "world index");
      if (i >= m.frame.world_count() || j >= m.frame.world_count())
        throw ParseError(line_no, 1, "edge index out of range");
      m.frame.add_edge(i, j);
    } else if (dir == "val") {
      if (!saw_worlds) throw ParseError(line_no, 1, "'val' before 'worlds'");
      if (toks.size() < 3) throw ParseError(line_no, 1, "usage: val <var> <i> [<i> ...]");
      if (!is_valid_identifier(toks[1]))
        throw ParseError(line_no, 1, "invalid variable name '" + toks[1] + "'");
      for (size_t k = 2; k < toks.size(); ++k) {
        int w = parse_index(toks[k], line_no, "world index");
        if (w >= m.frame.world_count())
          throw ParseError(line_no, 1, "valuation index out of range");
        m.valuation[toks[1]].insert(w);
      }
    } else if (dir == "end") {
      if (toks.size() != 1) throw ParseError(line_no, 1, "unexpected tokens after 'end'");
      if (!saw_worlds) throw ParseError(line_no, 1, "'end' before 'worlds'");
      saw_end = true;
    } else {
      throw ParseError(line_no, 1, "unknown directive '" + dir + "'");
    }
  }
  if (!saw_header) throw ParseError(line_no + 1, 1, "missing 'model' header");
  if (!saw_end) throw ParseError(line_no + 1, 1, "missing 'end'");
  return m;
}

Model parse_model(const std::string& text) {
  std::istringstream is(text);
  return read_model(is);
}

void write_model(std::ostream& out, const Model& m) {
  out << "model\n";
  out << "worlds " << m.frame.world_count() << "\n";
  for (auto [i, j] : m.frame.edges()) out << "edge " << i << " " << j << "\n";
  for (const auto& [var, worlds] : m.valuation) {
    if (worlds.empty()) continue;
    out << "val " << var;
    for (int w : worlds) out << " " << w;
    out << "\n";
  }
  out << "end\n";
}

std::string model_to_string(const Model& m) {
  std::ostringstream os;
  write_model(os, m);
  return os.str();
}

}  // namespace modalgrid
