// ghyltl: command-line front end for evaluation, model checking, prenex
// transformation, arithmetic compilation and gadget verification.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghyltl/arith.hpp"
#include "ghyltl/compile.hpp"
#include "ghyltl/error.hpp"
#include "ghyltl/hyper.hpp"
#include "ghyltl/io.hpp"
#include "ghyltl/semantics.hpp"
#include "ghyltl/transform.hpp"

namespace {

using namespace ghyltl;
using nlohmann::ordered_json;

enum Exit { kHolds = 0, kFails = 1, kUnknown = 2, kError = 3 };

struct Options {
  bool json = false;
  std::size_t max_prefix = 3;
  std::size_t max_loop = 2;
  std::size_t until_cutoff = 200;
  std::size_t cycle_margin = 2;
  bool no_cycles = false;

  EvalConfig config() const {
    EvalConfig c;
    c.until_cutoff = until_cutoff;
    c.cycle_margin = cycle_margin;
    c.cycle_detection = !no_cycles;
    return c;
  }
};

// Report fields in insertion order; "timing_ms" is the only field that may
// differ between identical runs.
class Report {
public:
  explicit Report(std::string command) { j_["command"] = std::move(command); }

  ordered_json& inputs() { return j_["inputs"]; }
  ordered_json& bounds() { return j_["bounds"]; }
  ordered_json& operator[](const char* k) { return j_[k]; }

  void verdict(const Verdict& v) {
    j_["verdict"] = to_string(v.truth);
    if (v.unknown()) {
      j_["limiting_bound"] = v.reason;
      if (v.bounded) j_["bounded_value"] = *v.bounded ? "holds" : "fails";
    }
  }

  int finish(int code, bool as_json, std::chrono::steady_clock::time_point start) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    j_["exit"] = code;
    j_["timing_ms"] = static_cast<long long>(ms);
    if (as_json) {
      std::cout << j_.dump(2) << "\n";
    } else {
      print(j_, "");
    }
    return code;
  }

private:
  static void print(const ordered_json& j, const std::string& indent) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        std::cout << indent << it.key() << ":\n";
        print(*it, indent + "  ");
      } else if (it->is_string()) {
        const std::string s = it->get<std::string>();
        if (s.find('\n') != std::string::npos) std::cout << indent << it.key() << ":\n" << s;
        else std::cout << indent << it.key() << ": " << s << "\n";
      } else {
        std::cout << indent << it.key() << ": " << it->dump() << "\n";
      }
    }
  }

  ordered_json j_;
};

int code_of(const Verdict& v) { return v.holds() ? kHolds : v.fails() ? kFails : kUnknown; }

void eval_bounds(Report& r, const Options& o) {
  r.bounds()["until_cutoff"] = o.until_cutoff;
  r.bounds()["cycle_margin"] = o.cycle_margin;
  r.bounds()["cycle_detection"] = !o.no_cycles;
}

HyperFormula read_formula(const std::string& path) { return hyper::parse(io::read_file(path)); }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized HyperLTL with stuttering and contexts over lasso traces"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Print the report as JSON");

  auto add_eval_flags = [&](CLI::App* c) {
    c->add_option("--until-cutoff", o.until_cutoff, "Hard bound on Until iterations")->capture_default_str();
    c->add_option("--cycle-margin", o.cycle_margin, "Loop multiples before positions are folded")->capture_default_str();
    c->add_flag("--no-cycle-detection", o.no_cycles, "Plain bounded unrolling");
  };
  auto add_lasso_flags = [&](CLI::App* c) {
    c->add_option("--max-prefix", o.max_prefix, "Longest lasso prefix")->capture_default_str();
    c->add_option("--max-loop", o.max_loop, "Longest lasso loop")->capture_default_str();
  };

  std::string traces_file, formula_file, ts_file, arith_file, out_dir, encoding = "stutter", op = "add";
  std::string out_file;
  bool strict = false;
  std::size_t n1 = 0, n2 = 0, n3 = 0, pos_bound = 8, max_traces = 2, bound = 12, bit_cap = 12;
  GadgetBounds gb;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a sentence on a trace set");
  eval_cmd->add_option("traces", traces_file, "Trace-set JSON file")->required();
  eval_cmd->add_option("formula", formula_file, "Formula file")->required();
  add_eval_flags(eval_cmd);

  auto* check_cmd = app.add_subcommand("check", "Model check a transition system up to lasso bounds");
  check_cmd->add_option("system", ts_file, "Transition-system JSON file")->required();
  check_cmd->add_option("formula", formula_file, "Formula file")->required();
  add_lasso_flags(check_cmd);
  add_eval_flags(check_cmd);

  auto* compile_cmd = app.add_subcommand("compile", "Compile an arithmetic sentence");
  compile_cmd->add_option("--encoding", encoding, "stutter or context")->capture_default_str();
  compile_cmd->add_option("arith", arith_file, "Arithmetic sentence file")->required();
  compile_cmd->add_option("outdir", out_dir, "Output directory")->required();
  compile_cmd->add_flag("--strict-fidelity", strict, "Emit multiplication as a disjunction of implications");

  auto* gadget_cmd = app.add_subcommand("gadget", "Verify an addition or multiplication gadget instance");
  gadget_cmd->add_option("--encoding", encoding, "stutter or context")->capture_default_str();
  gadget_cmd->add_option("--op", op, "add or mul")->capture_default_str();
  gadget_cmd->add_option("--n1", n1)->required();
  gadget_cmd->add_option("--n2", n2)->required();
  gadget_cmd->add_option("--n3", n3)->required();
  gadget_cmd->add_option("--max-period", gb.max_period, "0 derives it from n1, n2")->capture_default_str();
  gadget_cmd->add_option("--max-marker", gb.max_marker, "0 derives it from n1, n2, n3")->capture_default_str();
  gadget_cmd->add_option("--enum-prefix", gb.enum_prefix)->capture_default_str();
  gadget_cmd->add_option("--enum-loop", gb.enum_loop)->capture_default_str();
  gadget_cmd->add_option("--until-cutoff", gb.until_cutoff)->capture_default_str();
  gadget_cmd->add_flag("--strict-fidelity", strict, "Literal multiplication shape");

  auto* prenex_cmd = app.add_subcommand("prenex", "Transform a sentence into prenex form over position traces");
  prenex_cmd->add_option("formula", formula_file, "Formula file")->required();
  prenex_cmd->add_option("--traces", traces_file, "Also evaluate both forms on this trace set");
  prenex_cmd->add_option("--pos-bound", pos_bound, "Largest position trace added")->capture_default_str();
  add_eval_flags(prenex_cmd);

  auto* sat_cmd = app.add_subcommand("sat", "Search for a small trace-set model");
  sat_cmd->add_option("formula", formula_file, "Formula file")->required();
  sat_cmd->add_option("--max-traces", max_traces, "Largest model size")->capture_default_str();
  sat_cmd->add_option("--out", out_file, "Write the model as a trace-set file");
  add_lasso_flags(sat_cmd);
  add_eval_flags(sat_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "Evaluate an arithmetic sentence over a bounded domain");
  oracle_cmd->add_option("arith", arith_file, "Arithmetic sentence file")->required();
  oracle_cmd->add_option("--bound", bound, "First-order values range over 0..bound")->capture_default_str();
  oracle_cmd->add_option("--bit-cap", bit_cap, "Sets range over subsets of 0..min(bound, bit-cap)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  const auto start = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  Report r(sub->get_name());
  try {
    if (sub == eval_cmd) {
      r.inputs()["traces"] = traces_file;
      r.inputs()["formula"] = formula_file;
      eval_bounds(r, o);
      const auto set = io::parse_traceset(io::read_file(traces_file));
      const auto f = read_formula(formula_file);
      const Verdict v = check_traceset(set.traces, f, o.config());
      r["fragment"] = hyper::fragment_name(hyper::fragment_of(f));
      r.verdict(v);
      return r.finish(code_of(v), o.json, start);
    }
    if (sub == check_cmd) {
      r.inputs()["system"] = ts_file;
      r.inputs()["formula"] = formula_file;
      r.bounds()["max_prefix"] = o.max_prefix;
      r.bounds()["max_loop"] = o.max_loop;
      eval_bounds(r, o);
      const auto ts = io::parse_ts(io::read_file(ts_file));
      const auto f = read_formula(formula_file);
      const TsCheck c = check_ts(ts, f, o.max_prefix, o.max_loop, o.config());
      r["universe_size"] = c.universe_size;
      r["exact_universe"] = c.exact_universe;
      if (!c.warnings.empty()) r["warnings"] = c.warnings;
      r.verdict(c.verdict);
      return r.finish(code_of(c.verdict), o.json, start);
    }
    if (sub == compile_cmd) {
      r.inputs()["arith"] = arith_file;
      r.inputs()["outdir"] = out_dir;
      r.inputs()["encoding"] = encoding;
      r.inputs()["strict_fidelity"] = strict;
      const Encoding e = parse_encoding(encoding);
      const auto f = arith::parse(io::read_file(arith_file));
      CompileOptions opts;
      opts.strict_fidelity = strict;
      const CompiledArtifact art = compile(f, e, opts);
      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      io::write_file((dir / "system.json").string(), io::ts_to_json(art.system));
      io::write_file((dir / "formula.txt").string(), hyper::to_string(art.sentence) + "\n");
      nlohmann::json vm(art.var_map);
      io::write_file((dir / "varmap.json").string(), vm.dump(2) + "\n");
      r["flat"] = arith::to_string(f);
      r["fragment"] = hyper::fragment_name(hyper::fragment_of(hoist(art.sentence)));
      r["formula_size"] = hyper::size(art.sentence);
      r["written"] = {"system.json", "formula.txt", "varmap.json"};
      return r.finish(kHolds, o.json, start);
    }
    if (sub == gadget_cmd) {
      const Encoding e = parse_encoding(encoding);
      if (op != "add" && op != "mul") throw DomainError("unknown --op '" + op + "' (expected add or mul)");
      const Relation rel = op == "add" ? Relation::Add : Relation::Mul;
      r.inputs()["encoding"] = encoding;
      r.inputs()["op"] = op;
      r.inputs()["n1"] = n1;
      r.inputs()["n2"] = n2;
      r.inputs()["n3"] = n3;
      r.inputs()["strict_fidelity"] = strict;
      CompileOptions opts;
      opts.strict_fidelity = strict;
      const GadgetResult g = verify_gadget_report(rel, n1, n2, n3, e, gb, opts);
      r.bounds()["max_period"] = g.max_period;
      r.bounds()["max_marker"] = g.max_marker;
      r.bounds()["enum_prefix"] = gb.enum_prefix;
      r.bounds()["enum_loop"] = gb.enum_loop;
      r.bounds()["until_cutoff"] = gb.until_cutoff;
      r["universe_size"] = g.universe_size;
      r["verdict"] = g.holds ? "holds" : "fails";
      return r.finish(g.holds ? kHolds : kFails, o.json, start);
    }
    if (sub == prenex_cmd) {
      r.inputs()["formula"] = formula_file;
      if (!traces_file.empty()) r.inputs()["traces"] = traces_file;
      r.bounds()["pos_bound"] = pos_bound;
      eval_bounds(r, o);
      const auto f = read_formula(formula_file);
      const auto p = prenexify(f);
      r["formula"] = hyper::to_string(p);
      r["fragment"] = hyper::fragment_name(hyper::fragment_of(p));
      if (traces_file.empty()) return r.finish(kHolds, o.json, start);
      const auto set = io::parse_traceset(io::read_file(traces_file));
      const Verdict orig = check_traceset(set.traces, f, o.config());
      const PrenexCheck pc = check_with_positions(set.traces, p, pos_bound, o.config());
      r["original_verdict"] = to_string(orig.truth);
      r["position_bound_used"] = pc.bound;
      r["stabilized"] = pc.stabilized;
      r.verdict(pc.verdict);
      return r.finish(code_of(pc.verdict), o.json, start);
    }
    if (sub == sat_cmd) {
      r.inputs()["formula"] = formula_file;
      r.bounds()["max_traces"] = max_traces;
      r.bounds()["max_prefix"] = o.max_prefix;
      r.bounds()["max_loop"] = o.max_loop;
      eval_bounds(r, o);
      const auto f = read_formula(formula_file);
      const auto model = bounded_sat(f, max_traces, o.max_prefix, o.max_loop, hyper::props(f), o.config());
      if (!model) {
        r["verdict"] = "none";
        return r.finish(kFails, o.json, start);
      }
      const std::string text = io::traceset_to_json(io::make_traceset(*model));
      r["verdict"] = "found";
      r["model_size"] = model->size();
      if (out_file.empty()) r["model"] = text;
      else {
        io::write_file(out_file, text);
        r["model_file"] = out_file;
      }
      return r.finish(kHolds, o.json, start);
    }
    if (sub == oracle_cmd) {
      r.inputs()["arith"] = arith_file;
      r.bounds()["bound"] = bound;
      r.bounds()["bit_cap"] = bit_cap;
      const auto f = arith::parse(io::read_file(arith_file));
      const bool v = arith::eval_bounded(f, bound, bit_cap);
      r["flat"] = arith::to_string(f);
      r["verdict"] = v ? "true" : "false";
      return r.finish(v ? kHolds : kFails, o.json, start);
    }
  } catch (const ghyltl::Error& e) {
    r["error"] = e.what();
    std::cerr << "error: " << e.what() << "\n";
    return r.finish(kError, o.json, start);
  } catch (const std::exception& e) {
    r["error"] = e.what();
    std::cerr << "error: " << e.what() << "\n";
    return r.finish(kError, o.json, start);
  }
  return kError;
}
