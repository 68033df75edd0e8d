#include "ghyltl/pltl.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "ghyltl/error.hpp"
#include "lexer.hpp"

namespace ghyltl::pltl {

namespace {

Formula make(Op op, std::string atom = {}, Formula lhs = nullptr, Formula rhs = nullptr) {
  return std::make_shared<const Node>(Node{op, std::move(atom), std::move(lhs), std::move(rhs)});
}

} // namespace

Formula tt() {
  static const Formula t = make(Op::True);
  return t;
}
Formula ff() { return neg(tt()); }
Formula atom(std::string p) { return make(Op::Atom, std::move(p)); }
Formula neg(Formula f) { return make(Op::Not, {}, std::move(f)); }
Formula lor(Formula a, Formula b) { return make(Op::Or, {}, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return neg(lor(neg(std::move(a)), neg(std::move(b)))); }
Formula implies(Formula a, Formula b) { return lor(neg(std::move(a)), std::move(b)); }
Formula iff(Formula a, Formula b) { return land(implies(a, b), implies(b, a)); }
Formula next(Formula f) { return make(Op::Next, {}, std::move(f)); }
Formula until(Formula a, Formula b) { return make(Op::Until, {}, std::move(a), std::move(b)); }
Formula yesterday(Formula f) { return make(Op::Yesterday, {}, std::move(f)); }
Formula since(Formula a, Formula b) { return make(Op::Since, {}, std::move(a), std::move(b)); }
Formula eventually(Formula f) { return until(tt(), std::move(f)); }
Formula always(Formula f) { return neg(eventually(neg(std::move(f)))); }
Formula once(Formula f) { return since(tt(), std::move(f)); }
Formula historically(Formula f) { return neg(once(neg(std::move(f)))); }

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
  if (a->atom != b->atom) return a->atom < b->atom ? -1 : 1;
  if (a->lhs) {
    if (int c = compare(a->lhs, b->lhs)) return c;
  }
  if (a->rhs) {
    if (int c = compare(a->rhs, b->rhs)) return c;
  }
  return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_op(const Formula& f, Op op) { return f && f->op == op; }

// Recognizers for the sugar produced by the builders.
bool as_and(const Formula& f, Formula& a, Formula& b) {
  if (!is_op(f, Op::Not) || !is_op(f->lhs, Op::Or)) return false;
  const auto& o = f->lhs;
  if (!is_op(o->lhs, Op::Not) || !is_op(o->rhs, Op::Not)) return false;
  a = o->lhs->lhs;
  b = o->rhs->lhs;
  return true;
}

bool as_eventually(const Formula& f, Formula& g) {
  if (!is_op(f, Op::Until) || !is_op(f->lhs, Op::True)) return false;
  g = f->rhs;
  return true;
}

bool as_once(const Formula& f, Formula& g) {
  if (!is_op(f, Op::Since) || !is_op(f->lhs, Op::True)) return false;
  g = f->rhs;
  return true;
}

std::string print(const Formula& f) {
  Formula a, b;
  switch (f->op) {
    case Op::True: return "true";
    case Op::Atom: return f->atom;
    case Op::Not:
      if (is_op(f->lhs, Op::True)) return "false";
      if (as_and(f, a, b)) return "(" + print(a) + " & " + print(b) + ")";
      if (as_eventually(f->lhs, a) && is_op(a, Op::Not)) return "G " + print(a->lhs);
      if (as_once(f->lhs, a) && is_op(a, Op::Not)) return "H " + print(a->lhs);
      return "!" + print(f->lhs);
    case Op::Or:
      if (is_op(f->lhs, Op::Not) && !is_op(f->lhs->lhs, Op::True))
        return "(" + print(f->lhs->lhs) + " -> " + print(f->rhs) + ")";
      return "(" + print(f->lhs) + " | " + print(f->rhs) + ")";
    case Op::Next: return "X " + print(f->lhs);
    case Op::Yesterday: return "Y " + print(f->lhs);
    case Op::Until:
      if (as_eventually(f, a)) return "F " + print(a);
      return "(" + print(f->lhs) + " U " + print(f->rhs) + ")";
    case Op::Since:
      if (as_once(f, a)) return "O " + print(a);
      return "(" + print(f->lhs) + " S " + print(f->rhs) + ")";
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

bool reserved(const std::string& w) {
  static const char* words[] = {"X", "U", "Y", "S", "F", "G", "O", "H", "true", "false"};
  return std::find(std::begin(words), std::end(words), w) != std::end(words);
}

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
      return until(l, temporal_level());
    }
    if (lx_.at_ident("S")) {
      lx_.next();
      return since(l, temporal_level());
    }
    return l;
  }
  Formula unary() {
    if (lx_.accept(Tok::Bang)) return neg(unary());
    if (lx_.accept(Tok::LParen)) {
      Formula f = iff_level();
      lx_.expect(Tok::RParen, "')'");
      return f;
    }
    if (!lx_.at(Tok::Ident)) lx_.fail("expected a formula");
    const std::string w = lx_.peek().text;
    if (w == "true") return lx_.next(), tt();
    if (w == "false") return lx_.next(), ff();
    if (w == "X") return lx_.next(), next(unary());
    if (w == "Y") return lx_.next(), yesterday(unary());
    if (w == "F") return lx_.next(), eventually(unary());
    if (w == "G") return lx_.next(), always(unary());
    if (w == "O") return lx_.next(), once(unary());
    if (w == "H") return lx_.next(), historically(unary());
    if (reserved(w)) lx_.fail("misplaced operator");
    return atom(lx_.next().text);
  }

  Lexer& lx_;
};

} // namespace

Formula detail::parse_from(ghyltl::detail::Lexer& lx) {
  Parser p(lx);
  return p.iff_level();
}

Formula parse(std::string_view text) {
  Lexer lx(text);
  Parser p(lx);
  Formula f = p.iff_level();
  if (!lx.at(Tok::End)) lx.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Syntactic queries

std::size_t depth(const Formula& f) {
  std::size_t d = 0;
  if (f->lhs) d = std::max(d, depth(f->lhs));
  if (f->rhs) d = std::max(d, depth(f->rhs));
  return f->op == Op::True || f->op == Op::Atom ? 0 : d + 1;
}

PropSet atoms(const Formula& f) {
  PropSet out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g->op == Op::Atom) out.insert(g->atom);
    if (g->lhs) go(g->lhs);
    if (g->rhs) go(g->rhs);
  };
  go(f);
  return out;
}

bool past_free(const Formula& f) {
  if (f->op == Op::Yesterday || f->op == Op::Since) return false;
  return (!f->lhs || past_free(f->lhs)) && (!f->rhs || past_free(f->rhs));
}

void check_atoms(const Formula& f, const PropSet& ap) {
  for (const auto& p : atoms(f))
    if (!ap.contains(p)) throw DomainError("unknown proposition '" + p + "'");
}

// ---------------------------------------------------------------------------
// Valuation profiles

namespace {

ValuationProfile tabulate(std::size_t threshold, std::size_t period,
                          const std::function<bool(std::size_t)>& value) {
  ValuationProfile r;
  r.threshold = threshold;
  r.period = period;
  r.bits.resize(threshold + period);
  for (std::size_t i = 0; i < threshold + period; ++i) r.bits[i] = value(i);
  return r;
}

void minimize(ValuationProfile& p) {
  const std::size_t t = p.threshold;
  for (std::size_t d = 1; d < p.period; ++d) {
    if (p.period % d != 0) continue;
    bool ok = true;
    for (std::size_t k = d; k < p.period && ok; ++k) ok = p.bits[t + k] == p.bits[t + k % d];
    if (ok) {
      p.period = d;
      break;
    }
  }
  p.bits.resize(t + p.period);
  while (p.threshold > 0 && p.bits[p.threshold - 1] == p.bits[p.threshold - 1 + p.period]) {
    --p.threshold;
    p.bits.pop_back();
  }
}

ValuationProfile profile(const LassoTrace& t, const Formula& f) {
  ValuationProfile r;
  switch (f->op) {
    case Op::True:
      r = tabulate(0, 1, [](std::size_t) { return true; });
      break;
    case Op::Atom:
      r = tabulate(t.prefix_length(), t.loop_length(),
                   [&](std::size_t i) { return t.holds(f->atom, i); });
      break;
    case Op::Not: {
      r = profile(t, f->lhs);
      r.bits.flip();
      break;
    }
    case Op::Or: {
      auto a = profile(t, f->lhs), b = profile(t, f->rhs);
      r = tabulate(std::max(a.threshold, b.threshold), std::lcm(a.period, b.period),
                   [&](std::size_t i) { return a.at(i) || b.at(i); });
      break;
    }
    case Op::Next: {
      auto a = profile(t, f->lhs);
      r = tabulate(a.threshold > 0 ? a.threshold - 1 : 0, a.period,
                   [&](std::size_t i) { return a.at(i + 1); });
      break;
    }
    case Op::Yesterday: {
      auto a = profile(t, f->lhs);
      r = tabulate(a.threshold + 1, a.period, [&](std::size_t i) { return i > 0 && a.at(i - 1); });
      break;
    }
    case Op::Until: {
      auto a = profile(t, f->lhs), b = profile(t, f->rhs);
      const std::size_t T = std::max(a.threshold, b.threshold);
      const std::size_t P = std::lcm(a.period, b.period);
      r.threshold = T;
      r.period = P;
      r.bits.assign(T + P, false);
      // Periodic part: a witness for b, if any, lies within one period.
      for (std::size_t i = T; i < T + P; ++i) {
        for (std::size_t j = i; j < i + P; ++j) {
          if (b.at(j)) {
            r.bits[i] = true;
            break;
          }
          if (!a.at(j)) break;
        }
      }
      for (std::size_t i = T; i-- > 0;) r.bits[i] = b.at(i) || (a.at(i) && r.at(i + 1));
      break;
    }
    case Op::Since: {
      auto a = profile(t, f->lhs), b = profile(t, f->rhs);
      const std::size_t T = std::max(a.threshold, b.threshold);
      const std::size_t P = std::lcm(a.period, b.period);
      std::vector<bool> v;
      std::map<std::pair<std::size_t, bool>, std::size_t> seen;
      for (std::size_t i = 0;; ++i) {
        bool cur = b.at(i) || (i > 0 && a.at(i) && v.back());
        if (i >= T) {
          auto key = std::make_pair((i - T) % P, cur);
          if (auto it = seen.find(key); it != seen.end()) {
            r.threshold = it->second;
            r.period = i - it->second;
            r.bits = std::move(v);
            break;
          }
          seen.emplace(key, i);
        }
        v.push_back(cur);
      }
      break;
    }
  }
  minimize(r);
  return r;
}

} // namespace

ValuationProfile valuation_profile(const LassoTrace& t, const Formula& f) { return profile(t, f); }

bool eval(const LassoTrace& t, std::size_t i, const Formula& f) { return profile(t, f).at(i); }

} // namespace ghyltl::pltl
