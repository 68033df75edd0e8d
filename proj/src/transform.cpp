#include "ghyltl/transform.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ghyltl/error.hpp"

namespace ghyltl {

using hyper::Formula;
using hyper::Op;

std::vector<LassoTrace> pos_traces(std::size_t b) {
  std::vector<LassoTrace> out;
  for (std::size_t i = 0; i <= b; ++i) out.push_back(marker_trace(kHash, i));
  return out;
}

Formula origin_marker(const std::string& x, const std::string& prop) {
  auto a = hyper::atom(prop, x);
  return hyper::neg(hyper::yesterday({}, hyper::lor(a, hyper::neg(a))));
}

Formula position_shape(const std::string& x, const PropSet& ap) {
  std::vector<Formula> pure;
  for (const auto& p : ap)
    if (p != kHash) pure.push_back(hyper::neg(hyper::atom(p, x)));
  auto h = hyper::atom(kHash, x);
  auto single = hyper::until({}, hyper::neg(h),
                             hyper::land(h, hyper::next({}, hyper::always({}, hyper::neg(h)))));
  auto body = pure.empty() ? single : hyper::land(hyper::always({}, hyper::conj(pure)), single);
  return hyper::context({x}, body);
}

namespace {

using Quantifiers = std::vector<std::pair<bool, std::string>>;

struct Part {
  Quantifiers prefix;
  Formula matrix;
};

Quantifiers dual(Quantifiers qs) {
  for (auto& q : qs) q.first = !q.first;
  return qs;
}

void append(Quantifiers& a, const Quantifiers& b) { a.insert(a.end(), b.begin(), b.end()); }

class Fresh {
public:
  explicit Fresh(const std::vector<std::string>& reserved) : reserved_(reserved.begin(), reserved.end()) {}

  // With keep_if_free, the first claim of an input name keeps it; every
  // other request gets `base` plus a counter that collides with nothing.
  std::string operator()(const std::string& base, bool keep_if_free = false) {
    if (keep_if_free && claimed_.insert(base).second) return base;
    for (std::size_t k = 0;; ++k) {
      std::string name = base + std::to_string(k);
      if (!reserved_.count(name) && claimed_.insert(name).second) return name;
    }
  }

private:
  std::set<std::string> reserved_;
  std::set<std::string> claimed_;
};

// Γ must step by one on position traces, otherwise the #-marker does not
// count Γ-successors.
void require_unit_steps(const GammaSet& g) {
  const auto prof = changepoint_profile(LassoTrace(PropSet{}, {}, {PropSet{}}), g);
  if (!prof.tail_start || *prof.tail_start != 1)
    throw DomainError("cannot simulate " + g.to_string() +
                      ": it does not step by one on position traces");
}

class Prenexer {
public:
  Prenexer(const Formula& f)
      : ap_(hyper::props(f)), fresh_(hyper::all_vars(f)), top_(hyper::all_vars(f)) {}

  Formula run(const Formula& f) {
    Part p = tr(f, top_, {});
    return hyper::join_prefix(p.prefix, p.matrix);
  }

private:
  using Names = std::map<std::string, std::string>;

  // Context for a temporal step: the current context restricted to the
  // variables bound at this point, renamed; an unbound placeholder when empty.
  std::vector<std::string> effective(const std::vector<std::string>& c, const Names& r) {
    std::vector<std::string> out;
    for (const auto& x : c)
      if (auto it = r.find(x); it != r.end()) out.push_back(it->second);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Formula with_context(std::vector<std::string> c, Formula f) {
    if (c.empty()) {
      if (idle_.empty()) idle_ = fresh_("idle");
      c.push_back(idle_);
    }
    return hyper::context(std::move(c), std::move(f));
  }

  Formula in_context(const std::vector<std::string>& c, Formula f) {
    return c.empty() ? f : hyper::context(c, std::move(f));
  }

  static std::vector<std::string> plus(std::vector<std::string> c, const std::string& x) {
    c.push_back(x);
    return c;
  }

  Formula shape(const std::string& p) { return position_shape(p, ap_); }

  Formula hash(const std::string& p) { return hyper::atom(kHash, p); }

  // q's marker strictly precedes p's.
  Formula less(const std::string& q, const std::string& p) {
    return hyper::context({p, q}, hyper::eventually({}, hyper::land(hash(q), hyper::next({}, hyper::eventually({}, hash(p))))));
  }

  Formula orig(const std::string& p) { return hyper::context({p}, origin_marker(p)); }

  Part tr(const Formula& f, const std::vector<std::string>& c, const Names& r) {
    switch (f->op) {
      case Op::True: return {{}, f};
      case Op::Atom: return {{}, hyper::atom(f->prop, r.at(f->var))};
      case Op::Not: {
        Part p = tr(f->lhs, c, r);
        return {dual(p.prefix), hyper::neg(p.matrix)};
      }
      case Op::Or: {
        Part a = tr(f->lhs, c, r), b = tr(f->rhs, c, r);
        append(a.prefix, b.prefix);
        return {a.prefix, hyper::lor(a.matrix, b.matrix)};
      }
      case Op::Context: return tr(f->lhs, f->context, r);
      case Op::Exists:
      case Op::Forall: {
        const std::string x = fresh_(f->var, true);
        Names inner = r;
        inner[f->var] = x;
        Part body = tr(f->lhs, c, inner);
        auto guard = hyper::context({x}, hyper::always({}, hyper::neg(hash(x))));
        Part out;
        out.prefix.emplace_back(f->op == Op::Exists, x);
        append(out.prefix, body.prefix);
        out.matrix = f->op == Op::Exists ? hyper::land(guard, body.matrix) : hyper::implies(guard, body.matrix);
        return out;
      }
      case Op::Next:
      case Op::Yesterday: {
        // Variables quantified below are not in the context yet, so one step
        // commutes with their binders.
        Part p = tr(f->lhs, c, r);
        auto ce = effective(c, r);
        auto step = f->op == Op::Next ? hyper::next(f->gamma, p.matrix) : hyper::yesterday(f->gamma, p.matrix);
        return {p.prefix, with_context(ce, step)};
      }
      case Op::Until:
      case Op::Since: return binary(f, c, r);
    }
    throw DomainError("unreachable");
  }

  Part binary(const Formula& f, const std::vector<std::string>& c, const Names& r) {
    const bool fut = f->op == Op::Until;
    const auto ce = effective(c, r);
    Part a = tr(f->lhs, c, r), b = tr(f->rhs, c, r);
    if (hyper::quantifier_free(f->lhs) && hyper::quantifier_free(f->rhs)) {
      auto op = fut ? hyper::until(f->gamma, a.matrix, b.matrix) : hyper::since(f->gamma, a.matrix, b.matrix);
      return {{}, with_context(ce, op)};
    }
    require_unit_steps(f->gamma);

    // Reach the position marked on p: forward with the context, or forward
    // on p alone and then backwards with the context to p's origin.
    auto reach = [&](const std::string& p, Formula lhs, Formula rhs) {
      if (fut)
        return hyper::context(plus(ce, p), hyper::until(f->gamma, lhs, hyper::land(hash(p), in_context(ce, rhs))));
      auto back = hyper::context(plus(ce, p), hyper::since(f->gamma, lhs, hyper::land(orig(p), in_context(ce, rhs))));
      return hyper::context({p}, hyper::eventually({}, hyper::land(hash(p), back)));
    };

    const std::string p = fresh_("pos");
    Part out;
    out.prefix.emplace_back(true, p);
    append(out.prefix, b.prefix);
    if (hyper::quantifier_free(f->lhs)) {
      out.matrix = hyper::land(shape(p), reach(p, a.matrix, b.matrix));
      return out;
    }
    const std::string q = fresh_("pos");
    out.prefix.emplace_back(false, q);
    append(out.prefix, a.prefix);
    auto earlier = hyper::implies(hyper::land(shape(q), less(q, p)), reach(q, hyper::tt(), a.matrix));
    out.matrix = hyper::conj({shape(p), reach(p, hyper::tt(), b.matrix), earlier});
    return out;
  }

  PropSet ap_;
  Fresh fresh_;
  std::vector<std::string> top_;
  std::string idle_;
};

} // namespace

Formula prenexify(const Formula& f) {
  if (!hyper::is_sentence(f)) throw DomainError("prenexify expects a sentence");
  if (hyper::props(f).contains(kHash)) throw DomainError("input already uses the reserved proposition '" + kHash + "'");
  if (hyper::is_prenex(f)) return f;
  return Prenexer(f).run(f);
}

namespace {

Part hoist_part(const Formula& f, Fresh& fresh) {
  switch (f->op) {
    case Op::Not: {
      Part p = hoist_part(f->lhs, fresh);
      return {dual(p.prefix), hyper::neg(p.matrix)};
    }
    case Op::Or: {
      Part a = hoist_part(f->lhs, fresh), b = hoist_part(f->rhs, fresh);
      append(a.prefix, b.prefix);
      return {a.prefix, hyper::lor(a.matrix, b.matrix)};
    }
    case Op::Exists:
    case Op::Forall: {
      const std::string x = fresh(f->var, true);
      Part body = hoist_part(f->var == x ? f->lhs : hyper::rename_free(f->lhs, {{f->var, x}}), fresh);
      Part out;
      out.prefix.emplace_back(f->op == Op::Exists, x);
      append(out.prefix, body.prefix);
      out.matrix = body.matrix;
      return out;
    }
    default:
      if (!hyper::quantifier_free(f)) throw DomainError("hoist: quantifier under a temporal or context operator");
      return {{}, f};
  }
}

} // namespace

Formula hoist(const Formula& f) {
  Fresh fresh(hyper::all_vars(f));
  Part p = hoist_part(f, fresh);
  return hyper::join_prefix(p.prefix, p.matrix);
}

PrenexCheck check_with_positions(const std::vector<LassoTrace>& L, const Formula& prenex, std::size_t max_b,
                                 const EvalConfig& cfg) {
  PrenexCheck out;
  std::size_t prefix = 0, period = 1;
  for (const auto& t : L) {
    prefix = std::max(prefix, t.prefix_length());
    period = lcm_size(period, t.loop_length());
  }
  const std::size_t horizon = prefix + period;
  std::vector<LassoTrace> universe = L;
  std::optional<Verdict> prev;
  for (std::size_t b = 0; b <= max_b; ++b) {
    universe.push_back(marker_trace(kHash, b));
    Verdict v = check_traceset(universe, prenex, cfg);
    out.history.push_back(v.truth);
    out.verdict = v;
    out.bound = b;
    if (prev && b > horizon && prev->truth == v.truth) {
      out.stabilized = true;
      break;
    }
    prev = v;
  }
  return out;
}

} // namespace ghyltl
