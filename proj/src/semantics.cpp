#include "ghyltl/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "ghyltl/error.hpp"

namespace ghyltl {

std::string to_string(Truth t) {
  switch (t) {
    case Truth::Holds: return "holds";
    case Truth::Fails: return "fails";
    case Truth::Unknown: return "unknown";
  }
  return {};
}

namespace {

using hyper::Op;
using Mask = std::uint64_t;

// Kleene logic ordered F < U < T: conjunction is min, disjunction is max.
enum class Tri : std::uint8_t { F = 0, U = 1, T = 2 };
Tri tnot(Tri a) { return a == Tri::T ? Tri::F : a == Tri::F ? Tri::T : Tri::U; }
Tri tand(Tri a, Tri b) { return std::min(a, b); }
Tri tor(Tri a, Tri b) { return std::max(a, b); }

struct INode {
  Op op;
  int prop = -1;
  int var = -1;
  int gamma = -1;
  Mask ctx = 0;
  int lhs = -1;
  int rhs = -1;
  // Quantifier block: consecutive binders of one kind, and the conjuncts of
  // the (possibly negated) body with the binder index after which each one
  // can be decided (-1: before any binding).
  std::vector<int> block;
  std::vector<std::pair<int, int>> conjuncts;
};

struct TraceData {
  TracePtr trace;
  std::size_t pre = 0;
  std::size_t loop = 1;
  std::vector<std::vector<char>> letters; // per proposition id
  std::vector<std::shared_ptr<const ChangepointProfile>> cps; // per Γ id, lazy
  bool folded = false;
  std::size_t fold_t = 0;
  std::size_t fold_p = 1;

  bool holds(int prop, std::size_t i) const {
    const std::size_t k = i < pre ? i : pre + (i - pre) % loop;
    return letters[prop][k];
  }
};

struct Env {
  std::vector<int> tr;
  std::vector<std::size_t> pos;
  Mask dom = 0;
};

bool has_past(const hyper::Formula& f) { return !hyper::temporally_past_free(f); }

std::size_t past_depth(const hyper::Formula& f) {
  std::size_t d = 0;
  if (f->lhs) d = std::max(d, past_depth(f->lhs));
  if (f->rhs) d = std::max(d, past_depth(f->rhs));
  return d + (f->op == Op::Yesterday || f->op == Op::Since ? 1 : 0);
}

hyper::Formula simplified_neg(const hyper::Formula& f) {
  if (f->op == Op::Not) return f->lhs;
  return hyper::neg(f);
}

void flatten_conj(const hyper::Formula& f, std::vector<hyper::Formula>& out) {
  if (f->op == Op::Not && f->lhs->op == Op::Or) {
    flatten_conj(simplified_neg(f->lhs->lhs), out);
    flatten_conj(simplified_neg(f->lhs->rhs), out);
    return;
  }
  if (f->op == Op::Not && f->lhs->op == Op::Not) {
    flatten_conj(f->lhs->lhs, out);
    return;
  }
  if (f->op == Op::True) return;
  out.push_back(f);
}

class Evaluator {
public:
  Evaluator(const std::vector<LassoTrace>& L, const Assignment& a, const VarSet& c,
            const hyper::Formula& f, const EvalConfig& cfg, const StepObserver* obs)
      : cfg_(cfg), obs_(obs) {
    if (cfg_.until_cutoff == 0) throw DomainError("until cutoff must be at least 1");
    for (const auto& x : hyper::free_vars(f))
      if (!a.count(x)) throw DomainError("free variable '" + x + "' is not bound by the assignment");

    for (const auto& x : hyper::all_vars(f)) var_id(x);
    for (const auto& [x, _] : a) var_id(x);
    for (const auto& x : c) var_id(x);
    for (const auto& p : hyper::props(f)) prop_id(p);

    for (const auto& t : L) add_trace(std::make_shared<const LassoTrace>(t));
    universe_ = traces_.size();

    env_.tr.assign(vars_.size(), -1);
    env_.pos.assign(vars_.size(), 0);
    std::map<const LassoTrace*, int> by_ptr;
    for (const auto& [x, pt] : a) {
      if (!pt.trace) throw DomainError("assignment of '" + x + "' has no trace");
      auto it = by_ptr.find(pt.trace.get());
      int idx = it != by_ptr.end() ? it->second : add_trace(pt.trace);
      by_ptr[pt.trace.get()] = idx;
      const int v = var_ids_.at(x);
      env_.tr[v] = idx;
      env_.pos[v] = pt.pos;
      env_.dom |= Mask{1} << v;
    }
    for (const auto& x : c) ctx_ |= Mask{1} << var_ids_.at(x);

    past_depth_ = past_depth(f);
    root_ = compile(f);
  }

  Verdict run() {
    Tri r = eval(root_, ctx_);
    Verdict v;
    v.truth = r == Tri::T ? Truth::Holds : r == Tri::F ? Truth::Fails : Truth::Unknown;
    if (r != Tri::U) v.bounded = r == Tri::T;
    if (r == Tri::U) v.reason = unknown_reason_.empty() ? "until-cutoff" : unknown_reason_;
    return v;
  }

private:
  int var_id(const std::string& x) {
    auto [it, fresh] = var_ids_.emplace(x, static_cast<int>(vars_.size()));
    if (fresh) {
      vars_.push_back(x);
      if (vars_.size() > 64) throw DomainError("at most 64 trace variables are supported");
    }
    return it->second;
  }

  int prop_id(const std::string& p) {
    auto [it, fresh] = prop_ids_.emplace(p, static_cast<int>(props_.size()));
    if (fresh) props_.push_back(p);
    return it->second;
  }

  int gamma_id(const GammaSet& g) {
    for (std::size_t k = 0; k < gammas_.size(); ++k)
      if (gammas_[k] == g) return static_cast<int>(k);
    gammas_.push_back(g);
    return static_cast<int>(gammas_.size() - 1);
  }

  int add_trace(TracePtr t) {
    TraceData d;
    d.pre = t->prefix_length();
    d.loop = t->loop_length();
    d.letters.resize(props_.size());
    for (std::size_t p = 0; p < props_.size(); ++p) {
      d.letters[p].resize(d.pre + d.loop);
      for (std::size_t i = 0; i < d.pre + d.loop; ++i) d.letters[p][i] = t->holds(props_[p], i);
    }
    d.trace = std::move(t);
    traces_.push_back(std::move(d));
    return static_cast<int>(traces_.size() - 1);
  }

  int compile(const hyper::Formula& f) {
    INode n;
    n.op = f->op;
    switch (f->op) {
      case Op::True: break;
      case Op::Atom:
        n.prop = prop_id(f->prop);
        n.var = var_id(f->var);
        break;
      case Op::Context:
        for (const auto& x : f->context) n.ctx |= Mask{1} << var_id(x);
        n.lhs = compile(f->lhs);
        break;
      case Op::Exists:
      case Op::Forall: {
        hyper::Formula g = f;
        while (g->op == f->op) {
          n.block.push_back(var_id(g->var));
          g = g->lhs;
        }
        std::vector<hyper::Formula> parts;
        flatten_conj(f->op == Op::Exists ? g : simplified_neg(g), parts);
        for (const auto& part : parts) {
          int ready = -1;
          if (has_past(part)) {
            ready = static_cast<int>(n.block.size()) - 1;
          } else {
            const auto fv = hyper::free_vars(part);
            for (std::size_t k = 0; k < n.block.size(); ++k)
              if (std::find(fv.begin(), fv.end(), vars_[n.block[k]]) != fv.end()) ready = static_cast<int>(k);
          }
          n.conjuncts.emplace_back(compile(part), ready);
        }
        break;
      }
      default:
        if (f->op == Op::Next || f->op == Op::Until || f->op == Op::Yesterday || f->op == Op::Since)
          n.gamma = gamma_id(f->gamma);
        if (f->lhs) n.lhs = compile(f->lhs);
        if (f->rhs) n.rhs = compile(f->rhs);
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
  }

  const ChangepointProfile& cp(int trace, int gamma) {
    auto& d = traces_[trace];
    if (d.cps.size() < gammas_.size()) d.cps.resize(gammas_.size());
    if (!d.cps[gamma])
      d.cps[gamma] = std::make_shared<const ChangepointProfile>(changepoint_profile(*d.trace, gammas_[gamma]));
    return *d.cps[gamma];
  }

  // Folds a position into its congruence class for cycle detection.
  std::size_t fold(int trace, std::size_t pos) {
    auto& d = traces_[trace];
    if (!d.folded) {
      std::size_t base = d.pre, per = d.loop;
      for (std::size_t g = 0; g < gammas_.size(); ++g) {
        const auto& p = cp(trace, static_cast<int>(g));
        base = std::max(base, p.threshold);
        per = std::lcm(per, p.period);
      }
      d.fold_t = base + (cfg_.cycle_margin + past_depth_) * per;
      d.fold_p = per;
      d.folded = true;
    }
    return pos < d.fold_t ? pos : d.fold_t + (pos - d.fold_t) % d.fold_p;
  }

  std::vector<std::string> names(Mask m) const {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < vars_.size(); ++v)
      if (m >> v & 1) out.push_back(vars_[v]);
    return out;
  }

  void notify(StepEvent::Kind k, Mask ctx, Mask moved) {
    if (!obs_ || !*obs_) return;
    StepEvent e{k, names(ctx), names(moved), 0, 0};
    (*obs_)(e);
  }

  void step_succ(Mask e, int gamma) {
    for (std::size_t v = 0; v < vars_.size(); ++v)
      if (e >> v & 1) env_.pos[v] = cp(env_.tr[v], gamma).succ(env_.pos[v]);
  }

  // All-or-nothing predecessor step; false if some coordinate has none.
  bool step_pred(Mask e, int gamma) {
    std::vector<std::pair<std::size_t, std::size_t>> moves;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (!(e >> v & 1)) continue;
      auto p = cp(env_.tr[v], gamma).pred(env_.pos[v]);
      if (!p) return false;
      moves.emplace_back(v, *p);
    }
    for (auto [v, p] : moves) env_.pos[v] = p;
    return true;
  }

  std::vector<std::size_t> save(Mask e) const {
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < vars_.size(); ++v)
      if (e >> v & 1) s.push_back(env_.pos[v]);
    return s;
  }

  void restore(Mask e, const std::vector<std::size_t>& s) {
    std::size_t k = 0;
    for (std::size_t v = 0; v < vars_.size(); ++v)
      if (e >> v & 1) env_.pos[v] = s[k++];
  }

  Tri eval(int id, Mask ctx) {
    const INode& n = nodes_[id];
    switch (n.op) {
      case Op::True: return Tri::T;
      case Op::Atom: {
        if (!(env_.dom >> n.var & 1)) throw DomainError("unbound variable '" + vars_[n.var] + "'");
        return traces_[env_.tr[n.var]].holds(n.prop, env_.pos[n.var]) ? Tri::T : Tri::F;
      }
      case Op::Not: return tnot(eval(n.lhs, ctx));
      case Op::Or: {
        Tri a = eval(n.lhs, ctx);
        if (a == Tri::T) return a;
        return tor(a, eval(n.rhs, ctx));
      }
      case Op::Context: return eval(n.lhs, n.ctx);
      case Op::Next: {
        const Mask e = ctx & env_.dom;
        if (!e) return eval(n.lhs, ctx);
        auto saved = save(e);
        step_succ(e, n.gamma);
        notify(StepEvent::Succ, ctx, e);
        Tri r = eval(n.lhs, ctx);
        restore(e, saved);
        return r;
      }
      case Op::Yesterday: {
        const Mask e = ctx & env_.dom;
        if (!e) return eval(n.lhs, ctx);
        auto saved = save(e);
        if (!step_pred(e, n.gamma)) return Tri::F;
        notify(StepEvent::Pred, ctx, e);
        Tri r = eval(n.lhs, ctx);
        restore(e, saved);
        return r;
      }
      case Op::Until: return until(n, ctx);
      case Op::Since: return since(n, ctx);
      case Op::Exists:
      case Op::Forall: {
        Tri r = search(n, ctx, 0);
        return n.op == Op::Exists ? r : tnot(r);
      }
    }
    return Tri::U;
  }

  Tri until(const INode& n, Mask ctx) {
    const Mask e = ctx & env_.dom;
    if (!e) return eval(n.rhs, ctx);
    auto saved = save(e);
    std::set<std::vector<std::size_t>> seen;
    Tri acc = Tri::F, pre = Tri::T;
    for (std::size_t k = 0;; ++k) {
      if (cfg_.cycle_detection) {
        std::vector<std::size_t> key;
        for (std::size_t v = 0; v < vars_.size(); ++v)
          if (e >> v & 1) key.push_back(fold(env_.tr[v], env_.pos[v]));
        if (!seen.insert(std::move(key)).second) break; // configurations repeat
      }
      if (k >= cfg_.until_cutoff) {
        if (acc != Tri::T) {
          acc = Tri::U;
          if (unknown_reason_.empty()) unknown_reason_ = "until-cutoff";
        }
        break;
      }
      acc = tor(acc, tand(pre, eval(n.rhs, ctx)));
      if (acc == Tri::T) break;
      pre = tand(pre, eval(n.lhs, ctx));
      if (pre == Tri::F) break;
      step_succ(e, n.gamma);
      notify(StepEvent::Succ, ctx, e);
    }
    restore(e, saved);
    return acc;
  }

  Tri since(const INode& n, Mask ctx) {
    const Mask e = ctx & env_.dom;
    if (!e) return eval(n.rhs, ctx);
    auto saved = save(e);
    const std::size_t start_max = *std::max_element(saved.begin(), saved.end());
    std::size_t steps = 0;
    Tri acc = Tri::F, pre = Tri::T;
    while (true) {
      acc = tor(acc, tand(pre, eval(n.rhs, ctx)));
      if (acc == Tri::T) break;
      pre = tand(pre, eval(n.lhs, ctx));
      if (pre == Tri::F) break;
      if (!step_pred(e, n.gamma)) break;
      ++steps;
      notify(StepEvent::Pred, ctx, e);
    }
    restore(e, saved);
    if (obs_ && *obs_) {
      StepEvent ev{StepEvent::SinceDone, names(ctx), names(e), steps, start_max};
      (*obs_)(ev);
    }
    return acc;
  }

  // Existential search over the block's binders; conjuncts are decided as
  // soon as their variables are bound.
  Tri search(const INode& n, Mask ctx, std::size_t k) {
    if (k == 0) {
      Tri r = Tri::T;
      for (auto [c, ready] : n.conjuncts)
        if (ready < 0) {
          r = tand(r, eval(c, ctx));
          if (r == Tri::F) return r;
        }
      if (n.block.empty()) return r;
      return tand(r, bind(n, ctx, 0));
    }
    return bind(n, ctx, k);
  }

  Tri bind(const INode& n, Mask ctx, std::size_t k) {
    if (k == n.block.size()) return Tri::T;
    const int v = n.block[k];
    const int old_tr = env_.tr[v];
    const std::size_t old_pos = env_.pos[v];
    const Mask old_dom = env_.dom;
    Tri acc = Tri::F;
    for (std::size_t t = 0; t < universe_ && acc != Tri::T; ++t) {
      env_.tr[v] = static_cast<int>(t);
      env_.pos[v] = 0;
      env_.dom = old_dom | Mask{1} << v;
      Tri r = Tri::T;
      for (auto [c, ready] : n.conjuncts) {
        if (ready != static_cast<int>(k)) continue;
        r = tand(r, eval(c, ctx));
        if (r == Tri::F) break;
      }
      if (r != Tri::F) r = tand(r, bind(n, ctx, k + 1));
      acc = tor(acc, r);
    }
    env_.tr[v] = old_tr;
    env_.pos[v] = old_pos;
    env_.dom = old_dom;
    return acc;
  }

  EvalConfig cfg_;
  const StepObserver* obs_;
  std::map<std::string, int> var_ids_;
  std::vector<std::string> vars_;
  std::map<std::string, int> prop_ids_;
  std::vector<std::string> props_;
  std::vector<GammaSet> gammas_;
  std::vector<TraceData> traces_;
  std::size_t universe_ = 0;
  std::vector<INode> nodes_;
  int root_ = -1;
  Env env_;
  Mask ctx_ = 0;
  std::size_t past_depth_ = 0;
  std::string unknown_reason_;
};

} // namespace

Verdict eval(const std::vector<LassoTrace>& L, const Assignment& a, const VarSet& c, const HyperFormula& f,
             const EvalConfig& cfg, const StepObserver* observer) {
  return Evaluator(L, a, c, f, cfg, observer).run();
}

Verdict check_traceset(const std::vector<LassoTrace>& L, const HyperFormula& f, const EvalConfig& cfg) {
  if (!hyper::is_sentence(f)) throw DomainError("formula is not a sentence");
  return eval(L, {}, hyper::all_vars(f), f, cfg);
}

QuantifierPolarity quantifier_polarity(const HyperFormula& f) {
  QuantifierPolarity r;
  std::function<void(const HyperFormula&, bool)> go = [&](const HyperFormula& g, bool positive) {
    if (g->op == Op::Exists) (positive ? r.existential : r.universal) = true;
    if (g->op == Op::Forall) (positive ? r.universal : r.existential) = true;
    const bool flip = g->op == Op::Not;
    if (g->lhs) go(g->lhs, flip ? !positive : positive);
    if (g->rhs) go(g->rhs, positive);
  };
  go(f, true);
  return r;
}

TsCheck check_ts(const TransitionSystem& ts, const HyperFormula& f, std::size_t max_prefix,
                 std::size_t max_loop, const EvalConfig& cfg, const std::vector<LassoTrace>& extra) {
  if (!hyper::is_sentence(f)) throw DomainError("formula is not a sentence");
  TsCheck out;
  auto universe = enumerate_ts_traces(ts, max_prefix, max_loop, &out.warnings);
  for (const auto& t : extra) {
    if (!ts.accepts(t)) throw DomainError("extra trace " + t.to_string() + " is not a trace of the system");
    universe.push_back(t);
  }
  universe = dedup_canonical(universe);
  out.universe_size = universe.size();

  if (auto exact = ts.finite_traces()) {
    std::set<LassoTrace> have(universe.begin(), universe.end());
    out.exact_universe = std::all_of(exact->begin(), exact->end(), [&](const LassoTrace& t) { return have.count(t); });
  }

  Verdict v = check_traceset(universe, f, cfg);
  if (v.unknown() || out.exact_universe) {
    out.verdict = v;
    return out;
  }
  const auto pol = quantifier_polarity(f);
  const bool sound = (v.holds() && !pol.universal) || (v.fails() && !pol.existential);
  if (!sound) {
    v.bounded = v.holds();
    v.truth = Truth::Unknown;
    v.reason = "max-prefix/max-loop";
  }
  out.verdict = v;
  return out;
}

std::optional<std::vector<LassoTrace>> bounded_sat(const HyperFormula& f, std::size_t max_traces,
                                                   std::size_t max_prefix, std::size_t max_loop,
                                                   const PropSet& ap, const EvalConfig& cfg) {
  if (!hyper::is_sentence(f)) throw DomainError("formula is not a sentence");
  const auto cands = dedup_canonical(enumerate_lassos(ap, max_prefix, max_loop));
  const std::size_t n = cands.size();
  for (std::size_t size = 1; size <= std::min(max_traces, n); ++size) {
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<LassoTrace> L;
      for (auto i : idx) L.push_back(cands[i]);
      if (check_traceset(L, f, cfg).holds()) return L;
      // Next combination in lexicographic order.
      std::size_t k = size;
      while (k > 0 && idx[k - 1] == n - size + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return std::nullopt;
}

} // namespace ghyltl
