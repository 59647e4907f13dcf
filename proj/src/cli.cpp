#include "modalgrid/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "modalgrid/abstraction.hpp"
#include "modalgrid/frame_fo.hpp"
#include "modalgrid/grid_encoding.hpp"
#include "modalgrid/kripke.hpp"
#include "modalgrid/search.hpp"
#include "modalgrid/verify.hpp"

namespace modalgrid::cli {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "<text>" or "@<file>"
FormulaPtr load_formula(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') return parse_modal(slurp(spec.substr(1)));
  return parse_modal(spec);
}

// "builtin:<name>" or "@<file>"
FOKernel load_kernel(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return builtin_kernel(spec.substr(8));
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw std::runtime_error("cannot open '" + spec.substr(1) + "'");
    return read_kernel(in);
  }
  throw std::runtime_error("kernel spec must be 'builtin:<name>' or '@<file>', got '" + spec +
                           "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_model(in);
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

std::set<std::string> split_vars(const std::string& csv) {
  std::set<std::string> out;
  std::string cur;
  std::istringstream is(csv);
  while (std::getline(is, cur, ','))
    if (!cur.empty()) out.insert(cur);
  return out;
}

void print_ast(const Formula& f, std::ostream& out) {
  switch (f.kind()) {
    case FormulaKind::Var: out << "(var " << f.var_name() << ")"; return;
    case FormulaKind::True: out << "true"; return;
    case FormulaKind::False: out << "false"; return;
    case FormulaKind::Not: out << "(not "; break;
    case FormulaKind::And: out << "(and "; break;
    case FormulaKind::Or: out << "(or "; break;
    case FormulaKind::Imp: out << "(imp "; break;
    case FormulaKind::Iff: out << "(iff "; break;
    case FormulaKind::Box: out << "(box "; break;
    case FormulaKind::Dia: out << "(dia "; break;
  }
  if (f.is_unary()) {
    print_ast(*f.child(), out);
  } else {
    print_ast(*f.left(), out);
    out << " ";
    print_ast(*f.right(), out);
  }
  out << ")";
}

void print_report(const SuiteReport& r, std::ostream& out) {
  out << "suite " << r.suite << ": " << r.cases_run << " cases, " << r.failures.size()
      << " failures, " << r.wall_seconds << " s\n";
  for (const auto& f : r.failures) {
    out << "failure: " << f.description << "\n";
    if (!f.formula_text.empty()) out << "  formula: " << f.formula_text << "\n";
    if (!f.model_text.empty()) {
      out << "  model:\n";
      std::istringstream is(f.model_text);
      std::string line;
      while (std::getline(is, line)) out << "    " << line << "\n";
    }
  }
}

struct CheckOpts {
  std::string formula, model;
  int world = -1;
  bool global = false;
};

struct FindOpts {
  std::string fo, formula, mode = "local", emit_model;
  int max_worlds = 4;
  long long max_frames = 0;
  double time_limit_s = 0.0;
  bool canonical = false;
};

struct PipelineOpts {
  std::string formula, val_file;
  int width = 8, height = 4, k = 3;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"modalgrid: a workbench for modal satisfiability over universal frame conditions"};
  app.require_subcommand(1);

  std::string parse_formula;
  auto* cmd_parse = app.add_subcommand("parse", "parse a formula and print its tree");
  cmd_parse->add_option("--formula", parse_formula, "formula text or @file")->required();

  std::string render_formula;
  auto* cmd_render = app.add_subcommand("render", "parse a formula and print canonical text");
  cmd_render->add_option("--formula", render_formula, "formula text or @file")->required();

  CheckOpts check_opts;
  auto* cmd_check = app.add_subcommand("check", "evaluate a formula on a model");
  cmd_check->add_option("--model", check_opts.model, "model file")->required();
  cmd_check->add_option("--formula", check_opts.formula, "formula text or @file")->required();
  auto* world_opt = cmd_check->add_option("--world", check_opts.world, "world to check at");
  cmd_check->add_flag("--global", check_opts.global, "require the formula at every world")
      ->excludes(world_opt);

  std::string fc_model, fc_kernel;
  auto* cmd_fc = app.add_subcommand("frame-check", "evaluate a universal frame condition");
  cmd_fc->add_option("--model", fc_model, "model file")->required();
  cmd_fc->add_option("--fo", fc_kernel, "builtin:<name> or @file")->required();

  std::string q_model, q_vars, q_out;
  auto* cmd_q = app.add_subcommand("quotient", "collapse symmetric cliques of a model");
  cmd_q->add_option("--model", q_model, "model file")->required();
  cmd_q->add_option("--vars", q_vars, "comma-separated variables kept in the quotient");
  cmd_q->add_option("-o,--output", q_out, "output file (default stdout)");

  std::string r_formula;
  bool r_local = false, r_emit_fo = false, r_per_var = false;
  auto* cmd_r = app.add_subcommand("reduce", "translate a formula for grid-style search");
  cmd_r->add_option("--formula", r_formula, "formula text or @file")->required();
  cmd_r->add_flag("--local", r_local, "wrap the result in the localization marker");
  cmd_r->add_flag("--emit-fo", r_emit_fo, "also print the phi_final kernel");
  cmd_r->add_flag("--resp-per-var", r_per_var,
                  "emit the counter-successor clause only under each variable");

  int t_width = 8, t_height = 4;
  std::string t_val, t_out;
  auto* cmd_t = app.add_subcommand("make-torus", "emit a torus model with the mod-8 counter");
  cmd_t->add_option("--width", t_width, "torus width (multiple of 8)")->required();
  cmd_t->add_option("--height", t_height, "torus height (multiple of 4)")->required();
  cmd_t->add_option("--val-file", t_val, "base valuation file: '<var> <i> <j>' lines");
  cmd_t->add_option("-o,--output", t_out, "output file (default stdout)");

  FindOpts find_opts;
  auto* cmd_find = app.add_subcommand("find", "bounded brute-force model search");
  cmd_find->add_option("--fo", find_opts.fo, "builtin:<name> or @file")->required();
  cmd_find->add_option("--formula", find_opts.formula, "formula text or @file")->required();
  cmd_find->add_option("--max-worlds", find_opts.max_worlds, "largest frame size (default 4)");
  cmd_find->add_option("--mode", find_opts.mode, "local or global (default local)")
      ->check(CLI::IsMember({"local", "global"}));
  cmd_find->add_option("--emit-model", find_opts.emit_model, "write the witness model here");
  cmd_find->add_option("--max-frames", find_opts.max_frames, "abort after this many frames");
  cmd_find->add_option("--time-limit-s", find_opts.time_limit_s, "abort after this many seconds");
  cmd_find->add_flag("--canonical", find_opts.canonical,
                     "search only isomorphism class representatives");

  std::string v_suite;
  auto* cmd_v = app.add_subcommand("verify", "run a verification suite");
  cmd_v->add_option("suite", v_suite, "one of: lemma3 lemma4 lemma5 gbridge thm6-forward thm8-roundtrip subframe oracle")
      ->required();

  PipelineOpts p_opts;
  auto* cmd_p = app.add_subcommand("pipeline", "end-to-end torus reduction round-trip");
  cmd_p->add_option("--formula", p_opts.formula, "formula text or @file")->required();
  cmd_p->add_option("--width", p_opts.width, "torus width (multiple of 8)");
  cmd_p->add_option("--height", p_opts.height, "torus height (multiple of 4)");
  cmd_p->add_option("--val-file", p_opts.val_file, "base valuation file");
  cmd_p->add_option("--k", p_opts.k, "unfold a (k+1)x(k+1) fragment (default 3)");

  std::vector<const char*> argv;
  argv.push_back("modalgrid");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (cmd_parse->parsed()) {
      print_ast(*load_formula(parse_formula), out);
      out << "\n";
      return 0;
    }

    if (cmd_render->parsed()) {
      out << render_modal(load_formula(render_formula)) << "\n";
      return 0;
    }

    if (cmd_check->parsed()) {
      Model m = load_model(check_opts.model);
      FormulaPtr f = load_formula(check_opts.formula);
      if (!check_opts.global && check_opts.world < 0)
        throw std::runtime_error("check needs --world <n> or --global");
      bool ok = check_opts.global ? check_global(m, f) : check(m, check_opts.world, f);
      out << (ok ? "true" : "false") << "\n";
      return ok ? 0 : 1;
    }

    if (cmd_fc->parsed()) {
      Model m = load_model(fc_model);
      FOKernel k = load_kernel(fc_kernel);
      if (auto v = find_violation(m.frame, k)) {
        out << "violated at (";
        for (size_t i = 0; i < v->size(); ++i)
          out << (i ? ", " : "") << "x" << i + 1 << "=" << (*v)[i];
        out << ")\n";
        return 1;
      }
      out << "satisfied\n";
      return 0;
    }

    if (cmd_q->parsed()) {
      Model m = load_model(q_model);
      Partition part = compute_partition(m);
      Model q = quotient(m, split_vars(q_vars));
      std::ostringstream body;
      body << "model\n";
      for (int c = 0; c < part.class_count(); ++c) {
        body << "# class " << c << ": worlds";
        for (int w : part.classes[c]) body << " " << w;
        body << "\n";
      }
      std::string full = model_to_string(q);
      body << full.substr(full.find('\n') + 1);  // drop the duplicate header
      write_text(q_out, body.str(), out);
      return 0;
    }

    if (cmd_r->parsed()) {
      FormulaPtr f = load_formula(r_formula);
      if (modal_depth(f) > 1)
        err << "warning: formula has modal depth " << modal_depth(f)
            << "; the reduction is intended for depth <= 1\n";
      FormulaPtr g = reduce_f(f, r_per_var ? RespScope::per_variable : RespScope::always);
      if (r_local) g = localize(g);
      out << render_modal(g) << "\n";
      if (r_emit_fo) out << render_kernel(builtin_kernel("phi_final"));
      return 0;
    }

    if (cmd_t->parsed()) {
      TorusValuation base;
      if (!t_val.empty()) {
        std::ifstream in(t_val);
        if (!in) throw std::runtime_error("cannot open '" + t_val + "'");
        base = read_torus_valuation(in);
      }
      Model m = make_torus_hat_model(t_width, t_height, base);
      write_text(t_out, model_to_string(m), out);
      return 0;
    }

    if (cmd_find->parsed()) {
      FOKernel k = load_kernel(find_opts.fo);
      FormulaPtr f = load_formula(find_opts.formula);
      SearchLimits limits{find_opts.max_frames, find_opts.time_limit_s, find_opts.canonical};
      SearchMode mode = find_opts.mode == "global" ? SearchMode::global : SearchMode::local;
      SearchOutcome o = find_model(k, f, find_opts.max_worlds, mode, limits);
      const char* status = o.status == SearchStatus::found ? "found"
                           : o.status == SearchStatus::exhausted ? "exhausted"
                                                                 : "aborted";
      out << "status: " << status << "\n";
      if (o.witness_world) out << "world: " << *o.witness_world << "\n";
      out << "frames: " << o.stats.frames_examined << " examined, " << o.stats.frames_admitted
          << " admitted\n";
      out << "valuation nodes: " << o.stats.models_examined << "\n";
      if (o.witness_model) {
        if (!find_opts.emit_model.empty())
          write_text(find_opts.emit_model, model_to_string(*o.witness_model), out);
        else
          out << model_to_string(*o.witness_model);
      }
      return o.status == SearchStatus::found ? 0 : o.status == SearchStatus::exhausted ? 1 : 2;
    }

    if (cmd_v->parsed()) {
      SuiteReport r = run_suite(v_suite);
      print_report(r, out);
      return r.passed() ? 0 : 1;
    }

    if (cmd_p->parsed()) {
      FormulaPtr psi = load_formula(p_opts.formula);
      TorusValuation base;
      if (!p_opts.val_file.empty()) {
        std::ifstream in(p_opts.val_file);
        if (!in) throw std::runtime_error("cannot open '" + p_opts.val_file + "'");
        base = read_torus_valuation(in);
      }
      PipelineReport rep = run_pipeline(psi, p_opts.width, p_opts.height, base, p_opts.k);
      for (const auto& s : rep.stages)
        out << "stage " << s.name << ": " << (s.passed ? "ok" : "FAIL")
            << (s.detail.empty() ? "" : " (" + s.detail + ")") << "\n";
      out << (rep.all_passed ? "pipeline: ok" : "pipeline: FAIL") << "\n";
      return rep.all_passed ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  err << "error: no subcommand\n";
  return 2;
}

}  // namespace modalgrid::cli
