#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ghyltl/traces.hpp"

namespace ghyltl::pltl {

enum class Op { True, Atom, Not, Or, Next, Until, Yesterday, Since };

struct Node;
using Formula = std::shared_ptr<const Node>;

/// Core PLTL syntax. Sugar (and, implies, F, G, ...) is expanded by the
/// builders below, so every formula is made of these eight node kinds.
struct Node {
  Op op;
  std::string atom;
  Formula lhs;
  Formula rhs;
};

Formula tt();
Formula ff();
Formula atom(std::string p);
Formula neg(Formula f);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula next(Formula f);
Formula until(Formula a, Formula b);
Formula yesterday(Formula f);
Formula since(Formula a, Formula b);
Formula eventually(Formula f);
Formula always(Formula f);
Formula once(Formula f);
Formula historically(Formula f);
Formula conj(const std::vector<Formula>& fs);
Formula disj(const std::vector<Formula>& fs);

bool equal(const Formula& a, const Formula& b);
/// Structural total order (used for sets of formulas).
int compare(const Formula& a, const Formula& b);

/// Concrete syntax that parse() maps back to an equal AST.
std::string to_string(const Formula& f);

/// Throws ParseError with a line/column on malformed input.
Formula parse(std::string_view text);

std::size_t depth(const Formula& f);
PropSet atoms(const Formula& f);
bool past_free(const Formula& f);

/// Rejects atoms outside `ap` with a DomainError.
void check_atoms(const Formula& f, const PropSet& ap);

/// (σ, i) ⊨ f. Propositions absent from the trace's alphabet read as false.
bool eval(const LassoTrace& t, std::size_t i, const Formula& f);

/// Truth of f along σ: bits[i] for i < threshold, then periodic with `period`.
struct ValuationProfile {
  std::size_t threshold = 0;
  std::size_t period = 1;
  std::vector<bool> bits;

  bool at(std::size_t i) const {
    return i < threshold ? bits[i] : bits[threshold + (i - threshold) % period];
  }
};

/// Minimal-threshold, minimal-period description of f's valuation on t.
ValuationProfile valuation_profile(const LassoTrace& t, const Formula& f);

} // namespace ghyltl::pltl

namespace ghyltl {
using PltlFormula = pltl::Formula;
}
