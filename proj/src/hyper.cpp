#include "ghyltl/hyper.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ghyltl/error.hpp"
#include "lexer.hpp"

namespace ghyltl::hyper {

namespace {

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Formula unary_node(Op op, Formula f, GammaSet g = {}) {
  Node n{op, {}, {}, {}, std::move(g), std::move(f), nullptr};
  return make(std::move(n));
}

Formula binary_node(Op op, Formula a, Formula b, GammaSet g = {}) {
  Node n{op, {}, {}, {}, std::move(g), std::move(a), std::move(b)};
  return make(std::move(n));
}

} // namespace

Formula tt() {
  static const Formula t = make(Node{Op::True, {}, {}, {}, {}, nullptr, nullptr});
  return t;
}
Formula ff() { return neg(tt()); }

Formula atom(std::string prop, std::string var) {
  if (prop.empty() || var.empty()) throw DomainError("atom needs a proposition and a variable");
  if (var.find('_') != std::string::npos) throw DomainError("variable '" + var + "' must not contain '_'");
  return make(Node{Op::Atom, std::move(prop), std::move(var), {}, {}, nullptr, nullptr});
}

Formula neg(Formula f) { return unary_node(Op::Not, std::move(f)); }
Formula lor(Formula a, Formula b) { return binary_node(Op::Or, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return neg(lor(neg(std::move(a)), neg(std::move(b)))); }
Formula implies(Formula a, Formula b) { return lor(neg(std::move(a)), std::move(b)); }
Formula iff(Formula a, Formula b) { return land(implies(a, b), implies(b, a)); }

Formula context(std::vector<std::string> vars, Formula f) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.empty()) throw DomainError("context set must be nonempty");
  return make(Node{Op::Context, {}, {}, std::move(vars), {}, std::move(f), nullptr});
}

Formula next(GammaSet g, Formula f) { return unary_node(Op::Next, std::move(f), std::move(g)); }
Formula until(GammaSet g, Formula a, Formula b) {
  return binary_node(Op::Until, std::move(a), std::move(b), std::move(g));
}
Formula yesterday(GammaSet g, Formula f) { return unary_node(Op::Yesterday, std::move(f), std::move(g)); }
Formula since(GammaSet g, Formula a, Formula b) {
  return binary_node(Op::Since, std::move(a), std::move(b), std::move(g));
}
Formula eventually(GammaSet g, Formula f) { return until(std::move(g), tt(), std::move(f)); }
Formula always(GammaSet g, Formula f) { return neg(eventually(std::move(g), neg(std::move(f)))); }
Formula once(GammaSet g, Formula f) { return since(std::move(g), tt(), std::move(f)); }
Formula historically(GammaSet g, Formula f) { return neg(once(std::move(g), neg(std::move(f)))); }

Formula exists(std::string x, Formula f) {
  return make(Node{Op::Exists, {}, std::move(x), {}, {}, std::move(f), nullptr});
}
Formula forall(std::string x, Formula f) {
  return make(Node{Op::Forall, {}, std::move(x), {}, {}, std::move(f), nullptr});
}

Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return tt();
  Formula r = fs.back();
  for (std::size_t k = fs.size() - 1; k-- > 0;) r = land(fs[k], r);
  return r;
}

Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return ff();
  Formula r = fs.back();
  for (std::size_t k = fs.size() - 1; k-- > 0;) r = lor(fs[k], r);
  return r;
}

int compare(const Formula& a, const Formula& b) {
  if (a == b) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (a->prop != b->prop) return a->prop < b->prop ? -1 : 1;
  if (a->var != b->var) return a->var < b->var ? -1 : 1;
  if (a->context != b->context) return a->context < b->context ? -1 : 1;
  if (int c = GammaSet::compare(a->gamma, b->gamma)) return c;
  if (a->lhs)
    if (int c = compare(a->lhs, b->lhs)) return c;
  if (a->rhs)
    if (int c = compare(a->rhs, b->rhs)) return c;
  return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_op(const Formula& f, Op op) { return f && f->op == op; }

std::string gamma_text(const GammaSet& g) {
  std::string s = "[";
  bool first = true;
  for (const auto& th : g) {
    if (!first) s += ", ";
    first = false;
    s += pltl::to_string(th);
  }
  return s + "]";
}

std::string print(const Formula& f);

// Quantifiers extend as far right as possible, so they need parentheses
// whenever they are an operand.
std::string operand(const Formula& f) {
  if (is_op(f, Op::Exists) || is_op(f, Op::Forall)) return "(" + print(f) + ")";
  return print(f);
}

std::string print(const Formula& f) {
  switch (f->op) {
    case Op::True: return "true";
    case Op::Atom: return f->prop + "_" + f->var;
    case Op::Not: {
      const auto& g = f->lhs;
      if (is_op(g, Op::True)) return "false";
      if (is_op(g, Op::Or) && is_op(g->lhs, Op::Not) && is_op(g->rhs, Op::Not))
        return "(" + operand(g->lhs->lhs) + " & " + operand(g->rhs->lhs) + ")";
      if (is_op(g, Op::Until) && is_op(g->lhs, Op::True) && is_op(g->rhs, Op::Not))
        return "G" + gamma_text(g->gamma) + " " + operand(g->rhs->lhs);
      if (is_op(g, Op::Since) && is_op(g->lhs, Op::True) && is_op(g->rhs, Op::Not))
        return "H" + gamma_text(g->gamma) + " " + operand(g->rhs->lhs);
      return "!" + operand(g);
    }
    case Op::Or:
      if (is_op(f->lhs, Op::Not) && !is_op(f->lhs->lhs, Op::True))
        return "(" + operand(f->lhs->lhs) + " -> " + operand(f->rhs) + ")";
      return "(" + operand(f->lhs) + " | " + operand(f->rhs) + ")";
    case Op::Context: {
      std::string s = "C{";
      for (std::size_t k = 0; k < f->context.size(); ++k) s += (k ? "," : "") + f->context[k];
      return s + "} " + operand(f->lhs);
    }
    case Op::Next: return "X" + gamma_text(f->gamma) + " " + operand(f->lhs);
    case Op::Yesterday: return "Y" + gamma_text(f->gamma) + " " + operand(f->lhs);
    case Op::Until:
      if (is_op(f->lhs, Op::True)) return "F" + gamma_text(f->gamma) + " " + operand(f->rhs);
      return "(" + operand(f->lhs) + " U" + gamma_text(f->gamma) + " " + operand(f->rhs) + ")";
    case Op::Since:
      if (is_op(f->lhs, Op::True)) return "O" + gamma_text(f->gamma) + " " + operand(f->rhs);
      return "(" + operand(f->lhs) + " S" + gamma_text(f->gamma) + " " + operand(f->rhs) + ")";
    case Op::Exists: return "exists " + f->var + ". " + print(f->lhs);
    case Op::Forall: return "forall " + f->var + ". " + print(f->lhs);
  }
  return {};
}

} // namespace

std::string to_string(const Formula& f) { return print(f); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

using ghyltl::detail::Lexer;
using ghyltl::detail::Tok;

class Parser {
public:
  explicit Parser(Lexer& lx) : lx_(lx) {}

  Formula iff_level() {
    Formula l = implies_level();
    while (lx_.accept(Tok::DArrow)) l = iff(l, implies_level());
    return l;
  }

private:
  Formula implies_level() {
    Formula l = or_level();
    if (lx_.accept(Tok::Arrow)) return implies(l, implies_level());
    return l;
  }
  Formula or_level() {
    Formula l = and_level();
    while (lx_.accept(Tok::Bar)) l = lor(l, and_level());
    return l;
  }
  Formula and_level() {
    Formula l = temporal_level();
    while (lx_.accept(Tok::Amp)) l = land(l, temporal_level());
    return l;
  }
  Formula temporal_level() {
    Formula l = unary();
    if (lx_.at_ident("U")) {
      lx_.next();
      GammaSet g = gamma();
      return until(std::move(g), l, temporal_level());
    }
    if (lx_.at_ident("S")) {
      lx_.next();
      GammaSet g = gamma();
      return since(std::move(g), l, temporal_level());
    }
    return l;
  }

  // Optional `[θ1, ..., θk]`; absent brackets mean Γ = ∅.
  GammaSet gamma() {
    std::vector<pltl::Formula> fs;
    if (!lx_.accept(Tok::LBrack)) return {};
    if (!lx_.accept(Tok::RBrack)) {
      do fs.push_back(pltl::detail::parse_from(lx_));
      while (lx_.accept(Tok::Comma));
      lx_.expect(Tok::RBrack, "']'");
    }
    return GammaSet(std::move(fs));
  }

  std::string variable() {
    auto t = lx_.expect(Tok::Ident, "a trace variable");
    if (t.text.find('_') != std::string::npos) Lexer::fail("trace variables must not contain '_'", t);
    return t.text;
  }

  Formula unary() {
    if (lx_.accept(Tok::Bang)) return neg(unary());
    if (lx_.accept(Tok::LParen)) {
      Formula f = iff_level();
      lx_.expect(Tok::RParen, "')'");
      return f;
    }
    if (!lx_.at(Tok::Ident)) lx_.fail("expected a formula");
    const Token t = lx_.peek();
    const std::string& w = t.text;
    if (w == "true") return lx_.next(), tt();
    if (w == "false") return lx_.next(), ff();
    if (w == "forall" || w == "exists") {
      lx_.next();
      std::string x = variable();
      lx_.expect(Tok::Dot, "'.'");
      Formula body = iff_level();
      return w == "forall" ? forall(std::move(x), std::move(body)) : exists(std::move(x), std::move(body));
    }
    if (w == "C" && lx_.peek(1).kind == Tok::LBrace) {
      lx_.next();
      lx_.next();
      std::vector<std::string> vars;
      if (lx_.at(Tok::RBrace)) lx_.fail("context set must be nonempty");
      do vars.push_back(variable());
      while (lx_.accept(Tok::Comma));
      lx_.expect(Tok::RBrace, "'}'");
      return context(std::move(vars), unary());
    }
    if (w == "X" || w == "Y" || w == "F" || w == "G" || w == "O" || w == "H") {
      lx_.next();
      GammaSet g = gamma();
      Formula f = unary();
      switch (w[0]) {
        case 'X': return next(std::move(g), std::move(f));
        case 'Y': return yesterday(std::move(g), std::move(f));
        case 'F': return eventually(std::move(g), std::move(f));
        case 'G': return always(std::move(g), std::move(f));
        case 'O': return once(std::move(g), std::move(f));
        default: return historically(std::move(g), std::move(f));
      }
    }
    if (w == "U" || w == "S") lx_.fail("misplaced operator");
    const auto cut = w.rfind('_');
    if (cut == std::string::npos || cut == 0 || cut + 1 == w.size())
      Lexer::fail("atoms are written prop_var", t);
    lx_.next();
    return atom(w.substr(0, cut), w.substr(cut + 1));
  }

  using Token = ghyltl::detail::Token;
  Lexer& lx_;
};

} // namespace

Formula parse(std::string_view text) {
  Lexer lx(text);
  Parser p(lx);
  Formula f = p.iff_level();
  if (!lx.at(Tok::End)) lx.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Syntactic queries

namespace {

bool is_temporal(Op op) {
  return op == Op::Next || op == Op::Until || op == Op::Yesterday || op == Op::Since;
}

bool is_quantifier(Op op) { return op == Op::Exists || op == Op::Forall; }

bool any_node(const Formula& f, const std::function<bool(const Node&)>& pred) {
  if (pred(*f)) return true;
  return (f->lhs && any_node(f->lhs, pred)) || (f->rhs && any_node(f->rhs, pred));
}

} // namespace

std::vector<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&, std::set<std::string>&)> go = [&](const Formula& g,
                                                                        std::set<std::string>& bound) {
    if (g->op == Op::Atom && !bound.count(g->var)) out.insert(g->var);
    if (is_quantifier(g->op)) {
      bool fresh = bound.insert(g->var).second;
      go(g->lhs, bound);
      if (fresh) bound.erase(g->var);
      return;
    }
    if (g->lhs) go(g->lhs, bound);
    if (g->rhs) go(g->rhs, bound);
  };
  std::set<std::string> bound;
  go(f, bound);
  return {out.begin(), out.end()};
}

std::vector<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  any_node(f, [&](const Node& n) {
    if (!n.var.empty()) out.insert(n.var);
    out.insert(n.context.begin(), n.context.end());
    return false;
  });
  return {out.begin(), out.end()};
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

PropSet props(const Formula& f) {
  PropSet out;
  any_node(f, [&](const Node& n) {
    if (n.op == Op::Atom) out.insert(n.prop);
    for (const auto& th : n.gamma)
      for (const auto& p : pltl::atoms(th)) out.insert(p);
    return false;
  });
  return out;
}

std::size_t size(const Formula& f) {
  std::size_t n = 0;
  any_node(f, [&](const Node&) {
    ++n;
    return false;
  });
  return n;
}

Prefix split_prefix(const Formula& f) {
  Prefix p;
  Formula g = f;
  while (is_quantifier(g->op)) {
    p.quantifiers.emplace_back(g->op == Op::Exists, g->var);
    g = g->lhs;
  }
  p.matrix = g;
  return p;
}

Formula join_prefix(const std::vector<std::pair<bool, std::string>>& qs, Formula matrix) {
  for (auto it = qs.rbegin(); it != qs.rend(); ++it)
    matrix = it->first ? exists(it->second, matrix) : forall(it->second, matrix);
  return matrix;
}

bool quantifier_free(const Formula& f) {
  return !any_node(f, [](const Node& n) { return is_quantifier(n.op); });
}

bool is_prenex(const Formula& f) { return quantifier_free(split_prefix(f).matrix); }

bool temporally_past_free(const Formula& f) {
  return !any_node(f, [](const Node& n) { return n.op == Op::Yesterday || n.op == Op::Since; });
}

bool has_context(const Formula& f) {
  return any_node(f, [](const Node& n) { return n.op == Op::Context; });
}

bool all_gamma_empty(const Formula& f) {
  return !any_node(f, [](const Node& n) { return !n.gamma.empty(); });
}

bool all_gamma_past_free(const Formula& f) {
  return !any_node(f, [](const Node& n) { return !n.gamma.past_free(); });
}

bool quantifier_under_temporal(const Formula& f) {
  return any_node(f, [](const Node& n) {
    if (!is_temporal(n.op) && n.op != Op::Context) return false;
    return !quantifier_free(n.lhs) || (n.rhs && !quantifier_free(n.rhs));
  });
}

Fragment fragment_of(const Formula& f) {
  const bool base = is_prenex(f) && temporally_past_free(f);
  if (base && !has_context(f) && all_gamma_empty(f)) return Fragment::HyperLTL;
  if (base && !has_context(f) && all_gamma_past_free(f)) return Fragment::HyperLTL_S;
  if (base && all_gamma_empty(f)) return Fragment::HyperLTL_C;
  return Fragment::GHyLTL_SC;
}

std::string fragment_name(Fragment fr) {
  switch (fr) {
    case Fragment::HyperLTL: return "HyperLTL";
    case Fragment::HyperLTL_S: return "HyperLTL_S";
    case Fragment::HyperLTL_C: return "HyperLTL_C";
    case Fragment::GHyLTL_SC: return "GHyLTL_S+C";
  }
  return {};
}

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& m) {
  if (m.empty()) return f;
  Node n = *f;
  auto sub = [&](const std::string& v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  switch (f->op) {
    case Op::True: return f;
    case Op::Atom: n.var = sub(f->var); return make(std::move(n));
    case Op::Exists:
    case Op::Forall: {
      auto inner = m;
      inner.erase(f->var);
      n.lhs = rename_free(f->lhs, inner);
      return make(std::move(n));
    }
    case Op::Context: {
      std::vector<std::string> vars;
      for (const auto& v : f->context) vars.push_back(sub(v));
      return context(std::move(vars), rename_free(f->lhs, m));
    }
    default:
      if (n.lhs) n.lhs = rename_free(f->lhs, m);
      if (n.rhs) n.rhs = rename_free(f->rhs, m);
      return make(std::move(n));
  }
}

} // namespace ghyltl::hyper
