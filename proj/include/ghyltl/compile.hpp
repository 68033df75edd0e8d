#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghyltl/arith.hpp"
#include "ghyltl/hyper.hpp"
#include "ghyltl/semantics.hpp"
#include "ghyltl/traces.hpp"

namespace ghyltl {

// Reserved propositions of the arithmetic encodings. `hash` (see transform.hpp)
// marks numbers and set members in the context encoding and set members in
// the stutter encoding; `hy_<y>` marks the first-order variable y in the
// stutter encoding.
inline const std::string kDollar = "dlr";
inline const std::string kDollarPrime = "dlrp";

enum class Encoding { Stutter, Context };
std::string to_string(Encoding e);
/// "stutter" or "context"; throws DomainError otherwise.
Encoding parse_encoding(std::string_view s);

enum class Relation { Add, Mul };
std::string to_string(Relation r);

struct CompileOptions {
  /// Context multiplication as the literal ψ1 ∨ ψ2 ∨ ψ3 ∨ ψ4 with ψ3, ψ4
  /// implications (by default the case guards are conjoined instead).
  bool strict_fidelity = false;
};

struct CompiledArtifact {
  TransitionSystem system;
  HyperFormula sentence;
  Encoding encoding;
  std::map<std::string, std::string> var_map; ///< arithmetic variable → trace variable
  std::vector<arith::Formula> atoms;          ///< compiled atoms, operands pairwise distinct
};

/// Rewrites + and · atoms with a repeated operand, e.g. y+y=z, into
/// ∃c. (c = y ∧ y+c=z); both encodings need three distinct traces.
arith::Formula separate_operands(const arith::Formula& f);

/// Trace variable standing for an arithmetic variable.
std::string trace_var(const std::string& arith_var);
/// Proposition marking the value of first-order y (`hy_y` or `hash`).
std::string number_prop(const std::string& y, Encoding e);

/// Both require a flat sentence; DomainError otherwise.
CompiledArtifact compile_stutter(const arith::Formula& f, const CompileOptions& opts = {});
CompiledArtifact compile_context(const arith::Formula& f, const CompileOptions& opts = {});
CompiledArtifact compile(const arith::Formula& f, Encoding e, const CompileOptions& opts = {});

/// The translation of one flat atom, free in the trace variables of its
/// arithmetic variables. `ap` is the stutter alphabet used by purity guards
/// (ignored by the context encoding; derived from the atom when empty).
HyperFormula hyp_atom(const arith::Formula& atom, Encoding e, const CompileOptions& opts = {},
                      const PropSet& ap = {});

/// α1 ∧ α2 ∧ α3 over x, x′: both traces are $-block traces with one common
/// block length. In the stutter encoding x also may carry `mirror`.
HyperFormula periodic_pair(const std::string& x, const std::string& xp, Encoding e, const PropSet& ap = {},
                           const std::string& mirror = {});

/// Stutter alphabet for the given first-order variables.
PropSet stutter_ap(const std::vector<std::string>& first_order);
/// Tr = (2^{hash})^ω ∪ ⋃_y (2^{hy_y, dlr})^ω ∪ (2^{dlrp})^ω ∪ ⋃_(y2,y3) (2^{hy_y2, hy_y3})^ω,
/// one fully connected component per alphabet; `pairs` lists the operands
/// y2, y3 of every addition atom.
TransitionSystem stutter_system(const std::vector<std::string>& first_order,
                                const std::vector<std::pair<std::string, std::string>>& pairs);
/// Tr = (2^{hash})^ω ∪ (2^{dlr})^ω.
TransitionSystem context_system();

/// ∅^n {marker} ∅^ω over the alphabet of the variable's component.
LassoTrace encode_number(const std::string& y, std::size_t n, Encoding e);
/// The finite set as a trace over {hash}.
LassoTrace encode_set(const std::vector<std::size_t>& members);

struct PeriodicWitnessSpec {
  std::size_t period = 1;            ///< block length m0
  std::optional<std::size_t> marker; ///< position of the mirrored marker, if any
};

/// {prop}^m ∅^m repeated, plus `mirror` at spec.marker when given.
LassoTrace periodic_witness(const PeriodicWitnessSpec& spec, const std::string& prop,
                            const std::string& mirror = {});

/// Least z >= 1 with z·(n2−1) = z′·n2 − n1 for some z′ >= 1, searched up to
/// z = n2·(n1+1); nullopt if there is none in range.
std::optional<std::size_t> min_eq1_solution(std::size_t n1, std::size_t n2);

struct GadgetBounds {
  std::size_t max_period = 0; ///< longest block length of constructed witnesses; 0 derives it
  std::size_t max_marker = 0; ///< last marker position of constructed witnesses; 0 derives it
  std::size_t enum_prefix = 1; ///< enumerated family: lasso bounds on the gadget's system
  std::size_t enum_loop = 1;
  std::size_t until_cutoff = 4000;
};

struct GadgetResult {
  bool holds = false;
  std::size_t universe_size = 0;
  std::size_t max_period = 0;
  std::size_t max_marker = 0;
};

/// Evaluates hyp(y1 ∘ y2 = y3) under x_yj ↦ encode_number(yj, nj) over the
/// constructed witnesses plus a bounded enumeration of the gadget's system.
/// Throws BoundError if the bounds cannot hold the needed witnesses or the
/// evaluation is inconclusive.
GadgetResult verify_gadget_report(Relation r, std::size_t n1, std::size_t n2, std::size_t n3, Encoding e,
                                  const GadgetBounds& bounds = {}, const CompileOptions& opts = {});
bool verify_gadget(Relation r, std::size_t n1, std::size_t n2, std::size_t n3, Encoding e,
                   const GadgetBounds& bounds = {}, const CompileOptions& opts = {});

/// Traces of the artifact's system that encode values up to max_value and
/// the gadget witnesses for them; meant as `extra` for check_ts.
std::vector<LassoTrace> witness_universe(const CompiledArtifact& art, std::size_t max_value);

} // namespace ghyltl
