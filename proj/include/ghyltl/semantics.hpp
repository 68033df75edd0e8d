#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ghyltl/hyper.hpp"
#include "ghyltl/stutter.hpp"
#include "ghyltl/traces.hpp"

namespace ghyltl {

struct EvalConfig {
  std::size_t until_cutoff = 200; ///< hard bound K on Until iterations
  std::size_t cycle_margin = 2;   ///< extra loop multiples before positions are folded
  bool cycle_detection = true;    ///< off: plain K-bounded unrolling
};

enum class Truth { Holds, Fails, Unknown };

struct Verdict {
  Truth truth = Truth::Unknown;
  std::string reason;          ///< limiting bound when truth is Unknown
  std::optional<bool> bounded; ///< value on the bounded universe, when one was computed

  bool holds() const noexcept { return truth == Truth::Holds; }
  bool fails() const noexcept { return truth == Truth::Fails; }
  bool unknown() const noexcept { return truth == Truth::Unknown; }
};

std::string to_string(Truth t);

/// Instrumentation hook: one event per successor/predecessor step of a
/// temporal operator, and one per finished Since walk.
struct StepEvent {
  enum Kind { Succ, Pred, SinceDone } kind;
  std::vector<std::string> context; ///< current context C
  std::vector<std::string> moved;   ///< coordinates the step touched
  std::size_t steps = 0;            ///< SinceDone: predecessor steps taken
  std::size_t start_max_pos = 0;    ///< SinceDone: max position of the moving coordinates at entry
};
using StepObserver = std::function<void(const StepEvent&)>;

/// (L, a, c) ⊨ f. Free variables of f must be bound by `a`.
Verdict eval(const std::vector<LassoTrace>& L, const Assignment& a, const VarSet& c,
             const HyperFormula& f, const EvalConfig& cfg = {}, const StepObserver* observer = nullptr);

/// (L, ∅, VAR) ⊨ f for a sentence f; VAR is every variable name in f.
Verdict check_traceset(const std::vector<LassoTrace>& L, const HyperFormula& f, const EvalConfig& cfg = {});

/// Quantifier occurrences classified by the quantifier they act as after
/// pushing negations inward.
struct QuantifierPolarity {
  bool existential = false;
  bool universal = false;
};
QuantifierPolarity quantifier_polarity(const HyperFormula& f);

struct TsCheck {
  Verdict verdict;
  std::size_t universe_size = 0;
  bool exact_universe = false; ///< the bounded universe is all of Tr(T)
  std::vector<std::string> warnings;
};

/// Model checking against the traces of `ts` up to the given lasso bounds,
/// optionally extended by `extra` traces (each must be a trace of ts).
/// Holds/fails are only reported when they are sound for Tr(T).
TsCheck check_ts(const TransitionSystem& ts, const HyperFormula& f, std::size_t max_prefix,
                 std::size_t max_loop, const EvalConfig& cfg = {}, const std::vector<LassoTrace>& extra = {});

/// First trace set L (by size from 1, then lexicographically over the
/// enumeration order) with |L| <= max_traces and L ⊨ f.
std::optional<std::vector<LassoTrace>> bounded_sat(const HyperFormula& f, std::size_t max_traces,
                                                   std::size_t max_prefix, std::size_t max_loop,
                                                   const PropSet& ap, const EvalConfig& cfg = {});

} // namespace ghyltl
