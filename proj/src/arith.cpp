#include "ghyltl/arith.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "ghyltl/error.hpp"
#include "lexer.hpp"

namespace ghyltl::arith {

using ghyltl::detail::Lexer;
using ghyltl::detail::Tok;

namespace {

Formula make(Op op, std::string a = {}, std::string b = {}, std::string c = {}, Formula l = nullptr,
             Formula r = nullptr) {
  return std::make_shared<const Node>(Node{op, std::move(a), std::move(b), std::move(c), std::move(l), std::move(r)});
}

void require_first(const std::string& v) {
  if (!is_first_order_name(v)) throw DomainError("'" + v + "' is not a first-order variable");
}

} // namespace

bool is_first_order_name(std::string_view name) {
  return !name.empty() && std::islower(static_cast<unsigned char>(name[0])) &&
         name.find('_') == std::string_view::npos;
}

bool is_second_order_name(std::string_view name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0])) &&
         name.find('_') == std::string_view::npos;
}

Formula add(std::string y1, std::string y2, std::string y3) {
  require_first(y1), require_first(y2), require_first(y3);
  return make(Op::Add, std::move(y1), std::move(y2), std::move(y3));
}

Formula mul(std::string y1, std::string y2, std::string y3) {
  require_first(y1), require_first(y2), require_first(y3);
  return make(Op::Mul, std::move(y1), std::move(y2), std::move(y3));
}

Formula less(std::string y1, std::string y2) {
  require_first(y1), require_first(y2);
  return make(Op::Less, std::move(y1), std::move(y2));
}

Formula member(std::string y, std::string Y) {
  require_first(y);
  if (!is_second_order_name(Y)) throw DomainError("'" + Y + "' is not a second-order variable");
  return make(Op::Member, std::move(y), std::move(Y));
}

Formula neg(Formula f) { return make(Op::Not, {}, {}, {}, std::move(f)); }
Formula lor(Formula a, Formula b) { return make(Op::Or, {}, {}, {}, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return neg(lor(neg(std::move(a)), neg(std::move(b)))); }
Formula implies(Formula a, Formula b) { return lor(neg(std::move(a)), std::move(b)); }
Formula iff(Formula a, Formula b) { return land(implies(a, b), implies(b, a)); }

Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) throw DomainError("empty conjunction");
  Formula out = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) out = land(fs[i], out);
  return out;
}

Formula exists(std::string var, Formula f) {
  if (is_first_order_name(var)) return make(Op::ExistsFirst, std::move(var), {}, {}, std::move(f));
  if (is_second_order_name(var)) return make(Op::ExistsSecond, std::move(var), {}, {}, std::move(f));
  throw DomainError("invalid variable name '" + var + "'");
}

Formula forall(std::string var, Formula f) {
  if (is_first_order_name(var)) return make(Op::ForallFirst, std::move(var), {}, {}, std::move(f));
  if (is_second_order_name(var)) return make(Op::ForallSecond, std::move(var), {}, {}, std::move(f));
  throw DomainError("invalid variable name '" + var + "'");
}

bool is_atom(const Formula& f) {
  return f->op == Op::Add || f->op == Op::Mul || f->op == Op::Less || f->op == Op::Member;
}

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->a != b->a || a->b != b->b || a->c != b->c) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

namespace {

bool is_and(const Formula& f) {
  return f->op == Op::Not && f->lhs->op == Op::Or && f->lhs->lhs->op == Op::Not && f->lhs->rhs->op == Op::Not;
}

bool is_quantifier(Op op) {
  return op == Op::ExistsFirst || op == Op::ForallFirst || op == Op::ExistsSecond || op == Op::ForallSecond;
}

std::string print(const Formula& f);

// Quantifiers extend as far right as possible, so they are parenthesized as
// operands.
std::string operand(const Formula& f) {
  if (is_atom(f)) return print(f);
  if (f->op == Op::Not && !is_and(f)) return print(f);
  return "(" + print(f) + ")";
}

std::string print(const Formula& f) {
  switch (f->op) {
    case Op::Add: return f->a + " + " + f->b + " = " + f->c;
    case Op::Mul: return f->a + " * " + f->b + " = " + f->c;
    case Op::Less: return f->a + " < " + f->b;
    case Op::Member: return f->a + " in " + f->b;
    case Op::Not:
      if (is_and(f)) return operand(f->lhs->lhs->lhs) + " & " + operand(f->lhs->rhs->lhs);
      return "!" + operand(f->lhs);
    case Op::Or: return operand(f->lhs) + " | " + operand(f->rhs);
    case Op::ExistsFirst:
    case Op::ExistsSecond: return "exists " + f->a + ". " + print(f->lhs);
    case Op::ForallFirst:
    case Op::ForallSecond: return "forall " + f->a + ". " + print(f->lhs);
  }
  return {};
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto use = [&](const std::string& v) {
    if (!v.empty() && !bound.count(v)) out.insert(v);
  };
  switch (f->op) {
    case Op::Add:
    case Op::Mul: use(f->a), use(f->b), use(f->c); return;
    case Op::Less:
    case Op::Member: use(f->a), use(f->b); return;
    case Op::Not: collect_free(f->lhs, bound, out); return;
    case Op::Or:
      collect_free(f->lhs, bound, out);
      collect_free(f->rhs, bound, out);
      return;
    default: {
      const bool fresh = bound.insert(f->a).second;
      collect_free(f->lhs, bound, out);
      if (fresh) bound.erase(f->a);
    }
  }
}

void collect_bound(const Formula& f, bool first, std::vector<std::string>& out) {
  if (!f) return;
  if (is_quantifier(f->op)) {
    const bool fo = f->op == Op::ExistsFirst || f->op == Op::ForallFirst;
    if (fo == first && std::find(out.begin(), out.end(), f->a) == out.end()) out.push_back(f->a);
  }
  collect_bound(f->lhs, first, out);
  collect_bound(f->rhs, first, out);
}

} // namespace

std::string to_string(const Formula& f) { return print(f); }

std::vector<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return {out.begin(), out.end()};
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

std::vector<std::string> first_order_vars(const Formula& f) {
  std::vector<std::string> out;
  collect_bound(f, true, out);
  return out;
}

std::vector<std::string> second_order_vars(const Formula& f) {
  std::vector<std::string> out;
  collect_bound(f, false, out);
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

TermPtr term(Term::Kind k, std::string name, std::size_t value, TermPtr l = nullptr, TermPtr r = nullptr) {
  return std::make_shared<const Term>(Term{k, std::move(name), value, std::move(l), std::move(r)});
}

NestedPtr nested(Nested n) { return std::make_shared<const Nested>(std::move(n)); }

NestedPtr nnot(NestedPtr f) { return nested({Nested::Not, nullptr, nullptr, {}, {}, std::move(f), nullptr}); }
NestedPtr nor(NestedPtr a, NestedPtr b) {
  return nested({Nested::Or, nullptr, nullptr, {}, {}, std::move(a), std::move(b)});
}
NestedPtr nand(NestedPtr a, NestedPtr b) { return nnot(nor(nnot(std::move(a)), nnot(std::move(b)))); }

bool reserved(const std::string& w) { return w == "exists" || w == "forall" || w == "in"; }

class Parser {
public:
  explicit Parser(std::string_view text) : lx_(text) {}

  NestedPtr run() {
    NestedPtr f = formula();
    if (!lx_.at(Tok::End)) lx_.fail("unexpected token");
    return f;
  }

private:
  NestedPtr formula() {
    NestedPtr a = implication();
    while (lx_.accept(Tok::DArrow)) {
      NestedPtr b = implication();
      a = nand(nor(nnot(a), b), nor(nnot(b), a));
    }
    return a;
  }

  NestedPtr implication() {
    NestedPtr a = disjunction();
    if (lx_.accept(Tok::Arrow)) return nor(nnot(a), implication());
    return a;
  }

  NestedPtr disjunction() {
    NestedPtr a = conjunction();
    while (lx_.accept(Tok::Bar)) a = nor(a, conjunction());
    return a;
  }

  NestedPtr conjunction() {
    NestedPtr a = unary();
    while (lx_.accept(Tok::Amp)) a = nand(a, unary());
    return a;
  }

  NestedPtr unary() {
    if (lx_.accept(Tok::Bang)) return nnot(unary());
    if (lx_.at_ident("exists") || lx_.at_ident("forall")) {
      const bool ex = lx_.next().text == "exists";
      auto tok = lx_.expect(Tok::Ident, "variable");
      const std::string v = tok.text;
      if (reserved(v) || (!is_first_order_name(v) && !is_second_order_name(v)))
        Lexer::fail("invalid variable name", tok);
      lx_.expect(Tok::Dot, "'.'");
      NestedPtr body = formula();
      return nested({ex ? Nested::Exists : Nested::Forall, nullptr, nullptr, v, {}, body, nullptr});
    }
    if (lx_.at(Tok::LParen)) {
      // Either a parenthesized formula or an atom starting with a
      // parenthesized term.
      const auto m = lx_.mark();
      try {
        return atom();
      } catch (const ParseError&) {
        lx_.reset(m);
      }
      lx_.next();
      NestedPtr f = formula();
      lx_.expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  NestedPtr atom() {
    if (lx_.at(Tok::Ident) && lx_.peek(1).kind == Tok::Ident && lx_.peek(1).text == "in") {
      auto y = lx_.next();
      lx_.next();
      auto s = lx_.expect(Tok::Ident, "set variable");
      if (!is_first_order_name(y.text) || reserved(y.text)) Lexer::fail("expected a first-order variable", y);
      if (!is_second_order_name(s.text)) Lexer::fail("expected a second-order variable", s);
      return nested({Nested::Member, nullptr, nullptr, y.text, s.text, nullptr, nullptr});
    }
    TermPtr l = sum();
    Nested::Kind k;
    if (lx_.accept(Tok::Eq)) k = Nested::Eq;
    else if (lx_.accept(Tok::Less)) k = Nested::Less;
    else lx_.fail("expected '=' or '<'");
    TermPtr r = sum();
    return nested({k, l, r, {}, {}, nullptr, nullptr});
  }

  TermPtr sum() {
    TermPtr a = product();
    while (lx_.accept(Tok::Plus)) a = term(Term::Plus, {}, 0, a, product());
    return a;
  }

  TermPtr product() {
    TermPtr a = primary();
    while (lx_.accept(Tok::Star)) a = term(Term::Times, {}, 0, a, primary());
    return a;
  }

  TermPtr primary() {
    if (lx_.accept(Tok::LParen)) {
      TermPtr t = sum();
      lx_.expect(Tok::RParen, "')'");
      return t;
    }
    if (lx_.at(Tok::Number)) {
      auto tok = lx_.next();
      if (tok.text.size() > 6) Lexer::fail("numeral too large", tok);
      return term(Term::Num, {}, std::stoul(tok.text));
    }
    auto tok = lx_.expect(Tok::Ident, "term");
    if (reserved(tok.text) || !is_first_order_name(tok.text))
      Lexer::fail("expected a first-order variable", tok);
    return term(Term::Var, tok.text, 0);
  }

  Lexer lx_;
};

// ------------------------------------------------------------- flattening

void term_vars(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == Term::Var) out.insert(t->name);
  term_vars(t->lhs, out);
  term_vars(t->rhs, out);
}

void nested_vars(const NestedPtr& f, std::set<std::string>& out) {
  if (!f) return;
  term_vars(f->left, out);
  term_vars(f->right, out);
  if (!f->var.empty()) out.insert(f->var);
  if (!f->set.empty()) out.insert(f->set);
  nested_vars(f->lhs, out);
  nested_vars(f->rhs, out);
}

class Flattener {
public:
  explicit Flattener(std::set<std::string> used) : used_(std::move(used)) {}

  Formula run(const NestedPtr& f) {
    switch (f->kind) {
      case Nested::Not: return neg(run(f->lhs));
      case Nested::Or: return lor(run(f->lhs), run(f->rhs));
      case Nested::Exists: return exists(f->var, run(f->lhs));
      case Nested::Forall: return forall(f->var, run(f->lhs));
      case Nested::Member: return member(f->var, f->set);
      case Nested::Less:
      case Nested::Eq: return relation(*f);
    }
    throw DomainError("unreachable");
  }

private:
  struct Local {
    std::vector<std::string> vars;
    std::vector<Formula> defs;
    std::map<std::size_t, std::string> numerals;
  };

  std::string fresh(const std::string& base) {
    for (std::size_t k = 0;; ++k) {
      std::string n = base + std::to_string(k);
      if (used_.insert(n).second) return n;
    }
  }

  std::string numeral(std::size_t k, Local& loc) {
    if (auto it = loc.numerals.find(k); it != loc.numerals.end()) return it->second;
    std::string v;
    if (k == 0) {
      v = fresh("z");
      loc.defs.push_back(add(v, v, v));
    } else if (k == 1) {
      const std::string z = numeral(0, loc);
      v = fresh("o");
      loc.defs.push_back(mul(v, v, v));
      loc.defs.push_back(less(z, v));
    } else {
      const std::string prev = numeral(k - 1, loc);
      const std::string one = numeral(1, loc);
      v = fresh("k");
      loc.defs.push_back(add(prev, one, v));
    }
    loc.vars.push_back(v);
    loc.numerals[k] = v;
    return v;
  }

  // A variable denoting t; definitions go to `loc`.
  std::string name(const TermPtr& t, Local& loc) {
    switch (t->kind) {
      case Term::Var: return t->name;
      case Term::Num: return numeral(t->value, loc);
      default: {
        const std::string v = fresh("t");
        loc.vars.push_back(v);
        define(t, v, loc);
        return v;
      }
    }
  }

  // Adds the flat atom "t = v" for a compound t.
  void define(const TermPtr& t, const std::string& v, Local& loc) {
    const std::string a = name(t->lhs, loc);
    const std::string b = name(t->rhs, loc);
    loc.defs.push_back(t->kind == Term::Plus ? add(a, b, v) : mul(a, b, v));
  }

  static bool compound(const TermPtr& t) { return t->kind == Term::Plus || t->kind == Term::Times; }

  Formula relation(const Nested& f) {
    Local loc;
    Formula core;
    if (f.kind == Nested::Less) {
      const std::string a = name(f.left, loc);
      const std::string b = name(f.right, loc);
      core = less(a, b);
    } else if (compound(f.left) && !compound(f.right)) {
      const std::string d = name(f.right, loc);
      core = equation(f.left, d, loc);
    } else if (compound(f.right)) {
      const std::string d = name(f.left, loc);
      core = equation(f.right, d, loc);
    } else {
      const std::string a = name(f.left, loc);
      const std::string b = name(f.right, loc);
      core = land(neg(less(a, b)), neg(less(b, a)));
    }
    std::vector<Formula> parts = loc.defs;
    parts.push_back(core);
    Formula out = conj(parts);
    for (auto it = loc.vars.rbegin(); it != loc.vars.rend(); ++it) out = exists(*it, out);
    return out;
  }

  // "t = d" as one flat atom plus definitions of t's operands.
  Formula equation(const TermPtr& t, const std::string& d, Local& loc) {
    const std::string a = name(t->lhs, loc);
    const std::string b = name(t->rhs, loc);
    return t->kind == Term::Plus ? add(a, b, d) : mul(a, b, d);
  }

  std::set<std::string> used_;
};

} // namespace

NestedPtr parse_nested(std::string_view text) { return Parser(text).run(); }

Formula flatten(const NestedPtr& f) {
  std::set<std::string> used;
  nested_vars(f, used);
  return Flattener(std::move(used)).run(f);
}

Formula parse(std::string_view text) { return flatten(parse_nested(text)); }

// -------------------------------------------------------------- evaluation

namespace {

class Evaluator {
public:
  Evaluator(std::size_t n, std::size_t bit_cap) : n_(n), bits_(std::min(n, bit_cap) + 1) {
    if (bits_ > 20) throw DomainError("set quantifier range too large");
  }

  bool run(const Formula& f) {
    switch (f->op) {
      case Op::Add: return first(f->a) + first(f->b) == first(f->c);
      case Op::Mul: return first(f->a) * first(f->b) == first(f->c);
      case Op::Less: return first(f->a) < first(f->b);
      case Op::Member: {
        const std::uint64_t y = first(f->a);
        return y < bits_ && ((second(f->b) >> y) & 1U);
      }
      case Op::Not: return !run(f->lhs);
      case Op::Or: return run(f->lhs) || run(f->rhs);
      case Op::ExistsFirst:
      case Op::ForallFirst:
      case Op::ExistsSecond:
      case Op::ForallSecond: return quantified(f);
    }
    return false;
  }

private:
  struct Item {
    Formula f;
    bool negated;
    std::vector<std::string> free;
  };

  static bool existential(Op op) { return op == Op::ExistsFirst || op == Op::ExistsSecond; }
  static bool universal(Op op) { return op == Op::ForallFirst || op == Op::ForallSecond; }

  // f (or ¬f when `neg`) as a conjunction of items.
  static void split(const Formula& f, bool neg, std::vector<Item>& out) {
    if (f->op == Op::Not) return split(f->lhs, !neg, out);
    if (neg && f->op == Op::Or) {
      split(f->lhs, true, out);
      split(f->rhs, true, out);
      return;
    }
    out.push_back({f, neg, free_vars(f)});
  }

  // A block of like quantifiers is searched by backtracking: each conjunct
  // of the matrix is tested as soon as its free variables are bound, so
  // functional atoms such as k+o=t prune the search immediately.
  bool quantified(const Formula& f) {
    const bool ex = existential(f->op);
    std::vector<std::pair<std::string, bool>> vars; // name, first-order
    Formula body = f;
    while (ex ? existential(body->op) : universal(body->op)) {
      vars.emplace_back(body->a, body->op == Op::ExistsFirst || body->op == Op::ForallFirst);
      body = body->lhs;
    }
    std::vector<Item> items;
    split(body, !ex, items);

    // items[i] is checked right after binding vars[stage[i]].
    std::vector<std::vector<const Item*>> at(vars.size());
    for (const auto& it : items) {
      std::size_t stage = 0;
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (std::find(it.free.begin(), it.free.end(), vars[k].first) != it.free.end()) stage = k;
      at[stage].push_back(&it);
    }

    std::vector<std::pair<std::optional<std::uint64_t>, bool>> saved;
    for (const auto& [name, fo] : vars) {
      auto& m = fo ? first_ : second_;
      auto it = m.find(name);
      saved.emplace_back(it == m.end() ? std::nullopt : std::optional(it->second), fo);
    }
    const bool found = search(vars, at, 0);
    for (std::size_t k = vars.size(); k-- > 0;) restore(vars[k].second ? first_ : second_, vars[k].first, saved[k].first);
    return ex ? found : !found;
  }

  bool search(const std::vector<std::pair<std::string, bool>>& vars,
              const std::vector<std::vector<const Item*>>& at, std::size_t k) {
    if (k == vars.size()) return true;
    const auto& [name, fo] = vars[k];
    auto& m = fo ? first_ : second_;
    const std::uint64_t end = fo ? n_ + 1 : (std::uint64_t{1} << bits_);
    for (std::uint64_t v = 0; v < end; ++v) {
      m[name] = v;
      bool ok = true;
      for (const Item* it : at[k])
        if (run(it->f) == it->negated) {
          ok = false;
          break;
        }
      if (ok && search(vars, at, k + 1)) return true;
    }
    return false;
  }

  static void restore(std::map<std::string, std::uint64_t>& m, const std::string& k,
                      const std::optional<std::uint64_t>& v) {
    if (v) m[k] = *v;
    else m.erase(k);
  }

  std::uint64_t first(const std::string& v) const {
    auto it = first_.find(v);
    if (it == first_.end()) throw DomainError("free variable '" + v + "'");
    return it->second;
  }

  std::uint64_t second(const std::string& v) const {
    auto it = second_.find(v);
    if (it == second_.end()) throw DomainError("free variable '" + v + "'");
    return it->second;
  }

  std::uint64_t n_;
  std::size_t bits_;
  std::map<std::string, std::uint64_t> first_;
  std::map<std::string, std::uint64_t> second_;
};

} // namespace

bool eval_bounded(const Formula& f, std::size_t n, std::size_t bit_cap) {
  if (n < 1) throw DomainError("bound must be at least 1");
  if (!is_sentence(f)) throw DomainError("eval_bounded expects a sentence");
  return Evaluator(n, bit_cap).run(f);
}

} // namespace ghyltl::arith
