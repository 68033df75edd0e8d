#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ghyltl/hyper.hpp"
#include "ghyltl/semantics.hpp"
#include "ghyltl/traces.hpp"

namespace ghyltl {

/// Reserved proposition marking positions; rendered `hash` in concrete syntax.
inline const std::string kHash = "hash";

/// ∅^i {hash} ∅^ω for i = 0..b.
std::vector<LassoTrace> pos_traces(std::size_t b);

/// ¬Y[] (p_x | !p_x): holds exactly when x sits at position 0.
hyper::Formula origin_marker(const std::string& x, const std::string& prop = kHash);

/// (G[] ⋀_{a∈ap} ¬a_x) ∧ ((¬hash_x) U[] (hash_x ∧ X[] G[] ¬hash_x)), evaluated in
/// context {x}: x is bound to a position trace.
hyper::Formula position_shape(const std::string& x, const PropSet& ap);

/// Prenex sentence over ap ∪ {hash} such that L ⊨ f iff L ∪ pos_traces(∞) ⊨ result.
/// Prenex inputs are returned unchanged. Throws DomainError if f uses `hash`
/// or if a Γ that has to be simulated does not step by one on position traces.
hyper::Formula prenexify(const hyper::Formula& f);

/// Pulls quantifiers out through boolean connectives only (bound variables
/// renamed apart). Throws DomainError if a quantifier sits under a temporal
/// or context operator. Exact for past-free formulas over nonempty models.
hyper::Formula hoist(const hyper::Formula& f);

struct PrenexCheck {
  Verdict verdict;            ///< verdict at the stabilization bound
  std::size_t bound = 0;      ///< B at which two consecutive bounds agreed
  bool stabilized = false;
  std::vector<Truth> history; ///< verdict for B = 0, 1, ...
};

/// Evaluates the prenex sentence on L ∪ pos_traces(B) for increasing B until
/// the verdicts at B and B+1 agree past the joint horizon of L (longest
/// prefix plus lcm of loop lengths), or max_b is reached.
PrenexCheck check_with_positions(const std::vector<LassoTrace>& L, const hyper::Formula& prenex,
                                 std::size_t max_b, const EvalConfig& cfg = {});

} // namespace ghyltl
