#include "ghyltl/compile.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "ghyltl/error.hpp"
#include "ghyltl/transform.hpp"

namespace ghyltl {

namespace H = hyper;
using arith::Op;

std::string to_string(Encoding e) { return e == Encoding::Stutter ? "stutter" : "context"; }

Encoding parse_encoding(std::string_view s) {
  if (s == "stutter") return Encoding::Stutter;
  if (s == "context") return Encoding::Context;
  throw DomainError("unknown encoding '" + std::string(s) + "' (expected stutter or context)");
}

std::string to_string(Relation r) { return r == Relation::Add ? "add" : "mul"; }

std::string trace_var(const std::string& arith_var) { return "x" + arith_var; }

std::string number_prop(const std::string& y, Encoding e) {
  return e == Encoding::Stutter ? "hy_" + y : kHash;
}

// ------------------------------------------------------ operand separation

namespace {

void collect_names(const arith::Formula& f, std::set<std::string>& out) {
  if (!f) return;
  for (const auto* s : {&f->a, &f->b, &f->c})
    if (!s->empty()) out.insert(*s);
  collect_names(f->lhs, out);
  collect_names(f->rhs, out);
}

arith::Formula same_value(const std::string& a, const std::string& b) {
  return arith::land(arith::neg(arith::less(a, b)), arith::neg(arith::less(b, a)));
}

arith::Formula separate(const arith::Formula& f, std::set<std::string>& used) {
  switch (f->op) {
    case Op::Add:
    case Op::Mul: {
      std::vector<std::string> v{f->a, f->b, f->c};
      std::vector<std::string> copies;
      std::vector<arith::Formula> parts;
      for (std::size_t i = 1; i < 3; ++i) {
        if (std::find(v.begin(), v.begin() + i, v[i]) == v.begin() + i) continue;
        std::string c;
        for (std::size_t k = 0;; ++k)
          if (used.insert(c = v[i] + "c" + std::to_string(k)).second) break;
        parts.push_back(same_value(c, v[i]));
        copies.push_back(c);
        v[i] = c;
      }
      if (copies.empty()) return f;
      parts.push_back(f->op == Op::Add ? arith::add(v[0], v[1], v[2]) : arith::mul(v[0], v[1], v[2]));
      arith::Formula out = arith::conj(parts);
      for (auto it = copies.rbegin(); it != copies.rend(); ++it) out = arith::exists(*it, out);
      return out;
    }
    case Op::Less:
    case Op::Member: return f;
    case Op::Not: return arith::neg(separate(f->lhs, used));
    case Op::Or: return arith::lor(separate(f->lhs, used), separate(f->rhs, used));
    case Op::ExistsFirst:
    case Op::ExistsSecond: return arith::exists(f->a, separate(f->lhs, used));
    case Op::ForallFirst:
    case Op::ForallSecond: return arith::forall(f->a, separate(f->lhs, used));
  }
  throw DomainError("unreachable");
}

} // namespace

arith::Formula separate_operands(const arith::Formula& f) {
  std::set<std::string> used;
  collect_names(f, used);
  return separate(f, used);
}

// ------------------------------------------------------------- systems

PropSet stutter_ap(const std::vector<std::string>& first_order) {
  PropSet ap{kHash, kDollar, kDollarPrime};
  for (const auto& y : first_order) ap.insert(number_prop(y, Encoding::Stutter));
  return ap;
}

namespace {

// One fully connected component per alphabet; every vertex is initial.
TransitionSystem components(const std::vector<PropSet>& alphabets) {
  PropSet ap;
  std::vector<std::string> ids;
  std::vector<PropSet> labels;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> initial;
  for (std::size_t c = 0; c < alphabets.size(); ++c) {
    const auto& items = alphabets[c].items();
    ap = ap.united(alphabets[c]);
    const std::size_t first = ids.size(), count = std::size_t{1} << items.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      PropSet label;
      for (std::size_t b = 0; b < items.size(); ++b)
        if (mask >> b & 1U) label.insert(items[b]);
      ids.push_back("c" + std::to_string(c) + "v" + std::to_string(mask));
      labels.push_back(label);
      initial.push_back(first + mask);
    }
    for (std::size_t u = first; u < first + count; ++u)
      for (std::size_t v = first; v < first + count; ++v) edges.emplace_back(u, v);
  }
  return TransitionSystem(ap, ids, labels, edges, initial);
}

} // namespace

TransitionSystem stutter_system(const std::vector<std::string>& first_order,
                                const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<PropSet> alphabets{PropSet{kHash}};
  for (const auto& y : first_order) alphabets.push_back(PropSet{number_prop(y, Encoding::Stutter), kDollar});
  alphabets.push_back(PropSet{kDollarPrime});
  std::set<PropSet> seen;
  for (const auto& [y2, y3] : pairs) {
    PropSet a{number_prop(y2, Encoding::Stutter), number_prop(y3, Encoding::Stutter)};
    if (seen.insert(a).second) alphabets.push_back(a);
  }
  return components(alphabets);
}

TransitionSystem context_system() { return components({PropSet{kHash}, PropSet{kDollar}}); }

LassoTrace encode_number(const std::string& y, std::size_t n, Encoding e) {
  const std::string p = number_prop(y, e);
  PropSet ap = e == Encoding::Stutter ? PropSet{p, kDollar} : PropSet{p};
  std::vector<PropSet> prefix(n + 1);
  prefix[n].insert(p);
  return canonicalize(LassoTrace(ap, prefix, {PropSet{}}));
}

LassoTrace encode_set(const std::vector<std::size_t>& members) { return set_trace(kHash, members); }

LassoTrace periodic_witness(const PeriodicWitnessSpec& spec, const std::string& prop, const std::string& mirror) {
  if (spec.period == 0) throw DomainError("period must be at least 1");
  LassoTrace base = periodic_trace(prop, spec.period);
  if (mirror.empty()) {
    if (spec.marker) throw DomainError("marker position without a mirror proposition");
    return base;
  }
  LassoTrace mark = spec.marker ? marker_trace(mirror, *spec.marker) : LassoTrace(PropSet{mirror}, {}, {PropSet{}});
  return canonicalize(pointwise_union(base, mark));
}

std::optional<std::size_t> min_eq1_solution(std::size_t n1, std::size_t n2) {
  if (n2 == 0) return std::nullopt;
  for (std::size_t z = 1; z <= n2 * (n1 + 1); ++z) {
    const std::size_t lhs = z * (n2 - 1) + n1; // = z′·n2
    if (lhs % n2 == 0 && lhs / n2 >= 1) return z;
  }
  return std::nullopt;
}

// ------------------------------------------------------------- formulas

namespace {

const GammaSet kNone{};

H::Formula A(const std::string& p, const std::string& x) { return H::atom(p, x); }
H::Formula F(H::Formula f) { return H::eventually(kNone, std::move(f)); }
H::Formula G(H::Formula f) { return H::always(kNone, std::move(f)); }
H::Formula X(H::Formula f) { return H::next(kNone, std::move(f)); }
H::Formula U(H::Formula a, H::Formula b) { return H::until(kNone, std::move(a), std::move(b)); }
GammaSet gamma(std::initializer_list<std::string> props) {
  std::vector<pltl::Formula> fs;
  for (const auto& p : props) fs.push_back(pltl::atom(p));
  return GammaSet(fs);
}

// G ⋀_{p ∈ ap \ keep} ¬p_x
H::Formula pure(const std::string& x, const PropSet& ap, std::initializer_list<std::string> keep) {
  std::vector<H::Formula> parts;
  for (const auto& p : ap)
    if (std::find(keep.begin(), keep.end(), p) == keep.end()) parts.push_back(H::neg(A(p, x)));
  return parts.empty() ? H::tt() : G(H::conj(parts));
}

// (¬p_x) U (p_x ∧ X G ¬p_x)
H::Formula singleton(const std::string& p, const std::string& x) {
  return U(H::neg(A(p, x)), H::land(A(p, x), X(G(H::neg(A(p, x))))));
}

class Translator {
public:
  Translator(Encoding e, const CompileOptions& opts, PropSet ap) : e_(e), opts_(opts), ap_(std::move(ap)) {}

  H::Formula run(const arith::Formula& f) {
    switch (f->op) {
      case Op::Not: return H::neg(run(f->lhs));
      case Op::Or: return H::lor(run(f->lhs), run(f->rhs));
      case Op::ExistsFirst:
      case Op::ForallFirst:
      case Op::ExistsSecond:
      case Op::ForallSecond: {
        const bool first = f->op == Op::ExistsFirst || f->op == Op::ForallFirst;
        const bool ex = f->op == Op::ExistsFirst || f->op == Op::ExistsSecond;
        const std::string x = trace_var(f->a);
        H::Formula guard;
        if (e_ == Encoding::Stutter) {
          const std::string p = first ? number_prop(f->a, e_) : kHash;
          guard = pure(x, ap_, {p});
          if (first) guard = H::land(guard, singleton(p, x));
        } else {
          guard = G(H::neg(A(kDollar, x)));
          if (first) guard = H::land(guard, singleton(kHash, x));
        }
        H::Formula body = run(f->lhs);
        return ex ? H::exists(x, H::land(guard, body)) : H::forall(x, H::implies(guard, body));
      }
      case Op::Member: return F(H::land(num(f->a), A(kHash, trace_var(f->b))));
      case Op::Less: return F(H::land(num(f->a), X(F(num(f->b)))));
      case Op::Add: {
        atoms_.push_back(f);
        return e_ == Encoding::Stutter ? stutter_add(f->a, f->b, f->c) : context_add(f->a, f->b, f->c);
      }
      case Op::Mul: {
        atoms_.push_back(f);
        return e_ == Encoding::Stutter ? stutter_mul(f->a, f->b, f->c) : context_mul(f->a, f->b, f->c);
      }
    }
    throw DomainError("unreachable");
  }

  const std::vector<arith::Formula>& atoms() const { return atoms_; }

  H::Formula pair(const std::string& x, const std::string& xp, const std::string& mirror) {
    return e_ == Encoding::Stutter ? stutter_pair(x, xp, mirror) : context_pair(x, xp);
  }

private:
  H::Formula num(const std::string& y) { return A(number_prop(y, e_), trace_var(y)); }
  std::string gadget(const std::string& base) { return base + std::to_string(counter_); }

  H::Formula stutter_add(const std::string& y1, const std::string& y2, const std::string& y3) {
    const std::string s = gadget("s");
    ++counter_;
    const std::string h2 = number_prop(y2, e_), h3 = number_prop(y3, e_);
    auto psi = H::land(G(H::iff(num(y2), A(h2, s))), G(H::iff(num(y3), A(h3, s))));
    auto shift = H::next(gamma({h2}), F(H::land(num(y1), X(A(h3, s)))));
    auto alpha = H::exists(s, H::land(psi, shift));
    return H::disj({H::land(num(y1), F(H::land(num(y2), num(y3)))),
                    H::land(num(y2), F(H::land(num(y1), num(y3)))),
                    H::conj({H::neg(num(y1)), H::neg(num(y2)), alpha})});
  }

  H::Formula stutter_pair(const std::string& x, const std::string& xp, const std::string& mirror) {
    auto d = A(kDollar, x), dp = A(kDollarPrime, xp);
    auto live = [&](const H::Formula& a) { return H::conj({a, G(F(a)), G(F(H::neg(a)))}); };
    auto a1 = H::conj({live(d), mirror.empty() ? pure(x, ap_, {kDollar}) : pure(x, ap_, {kDollar, mirror}),
                       live(dp), pure(xp, ap_, {kDollarPrime})});
    auto a2 = G(H::iff(d, dp));
    const GammaSet both = gamma({kDollar, kDollarPrime}), primed = gamma({kDollarPrime});
    auto on = H::implies(d, H::next(primed, U(H::land(d, H::neg(dp)),
                                              H::conj({H::neg(d), H::neg(dp), X(dp)}))));
    auto off = H::implies(H::neg(d), H::next(primed, U(H::land(H::neg(d), dp),
                                                       H::conj({d, dp, X(H::neg(dp))}))));
    auto a3 = H::always(both, H::land(on, off));
    return H::conj({a1, a2, a3});
  }

  H::Formula stutter_mul(const std::string& y1, const std::string& y2, const std::string& y3) {
    const std::string x = gadget("d"), xp = gadget("e");
    ++counter_;
    const std::string h3 = number_prop(y3, e_);
    auto d = A(kDollar, x);
    auto alpha = H::exists(
        x, H::exists(xp, H::conj({stutter_pair(x, xp, h3), U(d, H::land(H::neg(d), num(y1))),
                                  G(H::iff(num(y3), A(h3, x))),
                                  H::eventually(gamma({kDollar}), H::land(num(y2), A(h3, x)))})));
    return H::disj({H::land(num(y1), num(y3)), H::land(num(y2), num(y3)),
                    H::conj({H::neg(num(y1)), H::neg(num(y2)), alpha})});
  }

  H::Formula context_add(const std::string& y1, const std::string& y2, const std::string& y3) {
    const std::string x1 = trace_var(y1), x2 = trace_var(y2), x3 = trace_var(y3);
    auto inner = H::context({x2, x3}, F(H::land(num(y2), num(y3))));
    return H::context({x1, x3}, F(H::land(num(y1), inner)));
  }

  H::Formula context_pair(const std::string& x, const std::string& xp) {
    auto d = A(kDollar, x), dp = A(kDollar, xp);
    auto side = [&](const std::string& v) {
      auto a = A(kDollar, v);
      return H::conj({a, G(F(a)), G(F(H::neg(a))), G(H::neg(A(kHash, v)))});
    };
    auto a1 = H::land(side(x), side(xp));
    auto a2 = G(H::iff(d, dp));
    auto a3 = H::context({x}, U(d, H::land(H::neg(d), H::context({x, xp}, G(H::iff(d, H::neg(dp)))))));
    return H::conj({a1, a2, a3});
  }

  // Case 0 < n_a <= n_b, n_b >= 2 of y1·y2 = y3 with (a, b) = (y1, y2) or
  // (y2, y1): premise and conclusion.
  std::pair<H::Formula, H::Formula> context_case(const std::string& a, const std::string& b, const std::string& y3,
                                                 const std::string& tag) {
    const std::string x0 = tag + "a" + std::to_string(counter_), x0p = tag + "ap" + std::to_string(counter_);
    const std::string x1 = tag + "b" + std::to_string(counter_), x1p = tag + "bp" + std::to_string(counter_);
    auto premise = H::land(X(F(H::land(num(a), F(num(b))))), X(X(F(num(b)))));
    auto d0 = A(kDollar, x0), d1 = A(kDollar, x1);
    auto algn = H::land(H::iff(d0, H::neg(X(d0))), H::iff(d1, H::neg(X(d1))));
    auto walk = H::context({trace_var(y3), x0, x1}, U(H::neg(algn), H::land(algn, X(num(y3)))));
    auto last = H::context({trace_var(a), trace_var(y3), x0}, F(H::land(num(a), walk)));
    auto body = H::conj({context_pair(x0, x0p), context_pair(x1, x1p), U(d0, H::land(H::neg(d0), num(b))),
                         U(d1, H::land(H::neg(d1), X(num(b)))), last});
    auto concl = H::exists(x0, H::exists(x0p, H::exists(x1, H::exists(x1p, body))));
    return {premise, concl};
  }

  H::Formula context_mul(const std::string& y1, const std::string& y2, const std::string& y3) {
    auto psi1 = H::land(H::lor(num(y1), num(y2)), num(y3));
    auto psi2 = X(H::conj({num(y1), num(y2), num(y3)}));
    auto [p3, c3] = context_case(y1, y2, y3, "p");
    auto [p4, c4] = context_case(y2, y1, y3, "q");
    ++counter_;
    if (opts_.strict_fidelity) return H::disj({psi1, psi2, H::implies(p3, c3), H::implies(p4, c4)});
    return H::disj({psi1, psi2, H::land(p3, c3), H::land(p4, c4)});
  }

  Encoding e_;
  CompileOptions opts_;
  PropSet ap_;
  std::size_t counter_ = 0;
  std::vector<arith::Formula> atoms_;
};

void check_flat_sentence(const arith::Formula& f) {
  if (!arith::is_sentence(f)) throw DomainError("arithmetic input is not a sentence");
}

std::vector<std::string> atom_vars(const arith::Formula& atom) {
  std::vector<std::string> out;
  for (const auto* s : {&atom->a, &atom->b, &atom->c})
    if (!s->empty() && arith::is_first_order_name(*s) &&
        std::find(out.begin(), out.end(), *s) == out.end())
      out.push_back(*s);
  return out;
}

} // namespace

CompiledArtifact compile(const arith::Formula& input, Encoding e, const CompileOptions& opts) {
  check_flat_sentence(input);
  const arith::Formula f = separate_operands(input);
  const auto first = arith::first_order_vars(f);
  const auto second = arith::second_order_vars(f);
  Translator tr(e, opts, e == Encoding::Stutter ? stutter_ap(first) : PropSet{kHash, kDollar});
  H::Formula sentence = tr.run(f);

  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& a : tr.atoms())
    if (a->op == Op::Add) pairs.emplace_back(a->b, a->c);
  TransitionSystem ts = e == Encoding::Stutter ? stutter_system(first, pairs) : context_system();

  std::map<std::string, std::string> vars;
  for (const auto& v : first) vars[v] = trace_var(v);
  for (const auto& v : second) vars[v] = trace_var(v);
  return CompiledArtifact{std::move(ts), std::move(sentence), e, std::move(vars), tr.atoms()};
}

CompiledArtifact compile_stutter(const arith::Formula& f, const CompileOptions& opts) {
  return compile(f, Encoding::Stutter, opts);
}

CompiledArtifact compile_context(const arith::Formula& f, const CompileOptions& opts) {
  return compile(f, Encoding::Context, opts);
}

HyperFormula hyp_atom(const arith::Formula& atom, Encoding e, const CompileOptions& opts, const PropSet& ap) {
  if (!arith::is_atom(atom)) throw DomainError("hyp_atom expects an atom");
  PropSet alphabet = ap;
  if (e == Encoding::Stutter && alphabet.empty()) alphabet = stutter_ap(atom_vars(atom));
  const arith::Formula f = separate_operands(atom);
  if (f != atom) {
    // The copies are quantified, so they belong to the alphabet too.
    for (const auto& v : arith::first_order_vars(f)) alphabet.insert(number_prop(v, Encoding::Stutter));
  }
  return Translator(e, opts, alphabet).run(f);
}

HyperFormula periodic_pair(const std::string& x, const std::string& xp, Encoding e, const PropSet& ap,
                           const std::string& mirror) {
  PropSet alphabet = ap;
  if (alphabet.empty()) alphabet = e == Encoding::Stutter ? PropSet{kHash, kDollar, kDollarPrime} : PropSet{kHash, kDollar};
  if (!mirror.empty()) alphabet.insert(mirror);
  return Translator(e, {}, alphabet).pair(x, xp, mirror);
}

// ------------------------------------------------------------- gadgets

namespace {

struct Needs {
  std::size_t period = 0;
  std::size_t marker = 0;
};

Needs required(Relation r, std::size_t n1, std::size_t n2, std::size_t n3, Encoding e) {
  if (e == Encoding::Stutter) return r == Relation::Add ? Needs{0, n3} : Needs{n1, n3};
  return r == Relation::Add ? Needs{} : Needs{std::max(n1, n2), 0};
}

void add_gadget_witnesses(std::vector<LassoTrace>& out, const arith::Formula& atom, Encoding e, std::size_t periods,
                          const std::vector<std::size_t>& firsts, std::size_t markers) {
  if (e == Encoding::Context) {
    if (atom->op == Op::Mul)
      for (std::size_t m = 1; m <= periods; ++m) out.push_back(periodic_trace(kDollar, m));
    return;
  }
  const std::string h2 = number_prop(atom->b, e), h3 = number_prop(atom->c, e);
  if (atom->op == Op::Add) {
    for (auto a : firsts)
      for (std::size_t p = 0; p <= markers; ++p)
        out.push_back(canonicalize(pointwise_union(marker_trace(h2, a), marker_trace(h3, p))));
    return;
  }
  for (std::size_t m = 1; m <= periods; ++m) {
    out.push_back(periodic_witness({m, std::nullopt}, kDollar, h3));
    for (std::size_t p = 0; p <= markers; ++p) out.push_back(periodic_witness({m, p}, kDollar, h3));
    out.push_back(periodic_trace(kDollarPrime, m));
  }
}

} // namespace

GadgetResult verify_gadget_report(Relation r, std::size_t n1, std::size_t n2, std::size_t n3, Encoding e,
                                  const GadgetBounds& bounds, const CompileOptions& opts) {
  const std::string y1 = "y1", y2 = "y2", y3 = "y3";
  const arith::Formula atom = r == Relation::Add ? arith::add(y1, y2, y3) : arith::mul(y1, y2, y3);
  const Needs need = required(r, n1, n2, n3, e);

  GadgetResult res;
  res.max_period = bounds.max_period ? bounds.max_period : std::max({n1, n2, std::size_t{1}});
  res.max_marker = bounds.max_marker ? bounds.max_marker : std::max(n3, n1 * n2 + n1);
  if (res.max_period < need.period)
    throw BoundError("max-period " + std::to_string(res.max_period) + " is below the needed " +
                     std::to_string(need.period));
  if (res.max_marker < need.marker)
    throw BoundError("max-marker " + std::to_string(res.max_marker) + " is below the needed " +
                     std::to_string(need.marker));

  const HyperFormula f = hyp_atom(atom, e, opts, stutter_ap({y1, y2, y3}));
  const TransitionSystem ts = e == Encoding::Stutter
                                  ? stutter_system({y1, y2, y3}, r == Relation::Add
                                                                     ? std::vector<std::pair<std::string, std::string>>{{y2, y3}}
                                                                     : std::vector<std::pair<std::string, std::string>>{})
                                  : context_system();

  std::vector<LassoTrace> universe;
  add_gadget_witnesses(universe, atom, e, res.max_period, {n2}, res.max_marker);
  auto enumerated = enumerate_ts_traces(ts, bounds.enum_prefix, bounds.enum_loop);
  universe.insert(universe.end(), enumerated.begin(), enumerated.end());
  universe = dedup_canonical(universe);
  res.universe_size = universe.size();

  Assignment a;
  const std::size_t ns[3] = {n1, n2, n3};
  const std::string ys[3] = {y1, y2, y3};
  for (int j = 0; j < 3; ++j)
    a[trace_var(ys[j])] = PointedTrace{std::make_shared<const LassoTrace>(encode_number(ys[j], ns[j], e)), 0};

  VarSet ctx = H::all_vars(f);
  EvalConfig cfg;
  cfg.until_cutoff = bounds.until_cutoff;
  const Verdict v = eval(universe, a, ctx, f, cfg);
  if (v.unknown()) throw BoundError("gadget evaluation inconclusive (" + v.reason + ")");
  res.holds = v.holds();
  return res;
}

bool verify_gadget(Relation r, std::size_t n1, std::size_t n2, std::size_t n3, Encoding e,
                   const GadgetBounds& bounds, const CompileOptions& opts) {
  return verify_gadget_report(r, n1, n2, n3, e, bounds, opts).holds;
}

std::vector<LassoTrace> witness_universe(const CompiledArtifact& art, std::size_t max_value) {
  std::vector<LassoTrace> out;
  const Encoding e = art.encoding;
  std::vector<std::size_t> values;
  for (std::size_t n = 0; n <= max_value; ++n) values.push_back(n);
  for (const auto& [v, x] : art.var_map) {
    if (arith::is_first_order_name(v)) {
      for (auto n : values) out.push_back(encode_number(v, n, e));
    } else {
      const std::size_t top = std::min<std::size_t>(max_value, 4);
      for (std::size_t mask = 0; mask < (std::size_t{1} << (top + 1)); ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i <= top; ++i)
          if (mask >> i & 1U) members.push_back(i);
        out.push_back(encode_set(members));
      }
    }
  }
  for (const auto& atom : art.atoms) add_gadget_witnesses(out, atom, e, std::max<std::size_t>(max_value, 1), values, max_value);
  return dedup_canonical(out);
}

} // namespace ghyltl
