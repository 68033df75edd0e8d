#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ghyltl::arith {

// Flat second-order arithmetic over (ℕ, +, ·, <, ∈). Lower-case names are
// first-order, upper-case names second-order.

enum class Op { Add, Mul, Less, Member, Not, Or, ExistsFirst, ForallFirst, ExistsSecond, ForallSecond };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string a; ///< Add/Mul: y1; Less: y1; Member: y; quantifiers: the variable
  std::string b; ///< Add/Mul: y2; Less: y2; Member: Y
  std::string c; ///< Add/Mul: y3
  Formula lhs;
  Formula rhs;
};

bool is_first_order_name(std::string_view name);
bool is_second_order_name(std::string_view name);

Formula add(std::string y1, std::string y2, std::string y3);
Formula mul(std::string y1, std::string y2, std::string y3);
Formula less(std::string y1, std::string y2);
Formula member(std::string y, std::string Y);
Formula neg(Formula f);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula conj(const std::vector<Formula>& fs);
/// First- or second-order quantifier, chosen by the case of `var`.
Formula exists(std::string var, Formula f);
Formula forall(std::string var, Formula f);

bool is_atom(const Formula& f);
bool equal(const Formula& a, const Formula& b);

/// Flat concrete syntax; parse(to_string(f)) is equal to f.
std::string to_string(const Formula& f);

std::vector<std::string> free_vars(const Formula& f);
bool is_sentence(const Formula& f);
/// Bound variables in order of first binding, first-order then second-order.
std::vector<std::string> first_order_vars(const Formula& f);
std::vector<std::string> second_order_vars(const Formula& f);

// Nested input syntax: terms over +, *, numerals and parentheses on both
// sides of `=` and `<`.

struct Term;
using TermPtr = std::shared_ptr<const Term>;
struct Term {
  enum Kind { Var, Num, Plus, Times } kind;
  std::string name;
  std::size_t value = 0;
  TermPtr lhs;
  TermPtr rhs;
};

struct Nested;
using NestedPtr = std::shared_ptr<const Nested>;
struct Nested {
  enum Kind { Eq, Less, Member, Not, Or, Exists, Forall } kind;
  TermPtr left;
  TermPtr right;
  std::string var;  ///< Member: element variable; quantifiers: bound variable
  std::string set;  ///< Member: set variable
  NestedPtr lhs;
  NestedPtr rhs;
};

/// Throws ParseError on malformed input or misuse of the variable sorts.
NestedPtr parse_nested(std::string_view text);

/// Rewrites every atom into the four flat forms with locally quantified
/// auxiliaries. Constants: zero is the z with z+z=z, one is the o with
/// o·o=o ∧ z<o, k+1 is the t with k+o=t. An equation between two variables
/// becomes ¬(a<b) ∧ ¬(b<a).
Formula flatten(const NestedPtr& f);

/// parse_nested followed by flatten.
Formula parse(std::string_view text);

/// First-order quantifiers over {0..n}, second-order over all subsets of
/// {0..min(n, bit_cap)}. Exact when the sentence's quantifiers are
/// semantically bounded by n. Throws DomainError on free variables.
bool eval_bounded(const Formula& f, std::size_t n, std::size_t bit_cap = 12);

} // namespace ghyltl::arith
