#pragma once

// Independent oracles and random generators shared by the unit tests and the
// acceptance suite.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "ghyltl/hyper.hpp"
#include "ghyltl/pltl.hpp"
#include "ghyltl/traces.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

/// Unroll length |prefix| + (depth(f)+2)·|loop| used by brute_pltl.
std::size_t brute_horizon(const ghyltl::LassoTrace& t, const ghyltl::pltl::Formula& f);

/// PLTL truth at i < brute_horizon(t, f), computed on the unrolled lasso
/// whose last position wraps back one loop length; Until is a least fixpoint.
bool brute_pltl(const ghyltl::LassoTrace& t, std::size_t i, const ghyltl::pltl::Formula& f);

/// Reference evaluator for prenex, past-free, context-free sentences with
/// every Γ empty: quantifiers enumerate L, the matrix is evaluated on the
/// synchronous product of the bound traces (threshold max prefix, period lcm
/// of loops). Throws std::logic_error outside that fragment.
bool reference_hyperltl(const std::vector<ghyltl::LassoTrace>& L, const ghyltl::hyper::Formula& sentence);

ghyltl::LassoTrace random_lasso(Rng& rng, const ghyltl::PropSet& ap, std::size_t max_prefix, std::size_t max_loop);

struct PltlShape {
  std::size_t depth = 4;
  bool past = true;
};
ghyltl::pltl::Formula random_pltl(Rng& rng, const std::vector<std::string>& ap, const PltlShape& shape);

struct HyperShape {
  std::size_t depth = 3;          ///< temporal/boolean nesting of the matrix
  std::size_t max_quantifiers = 3;
  bool gamma = false;              ///< nonempty Γ sets (past-free PLTL, depth <= 2)
  bool gamma_past = false;         ///< allow past operators inside Γ
  bool contexts = false;
  bool hyper_past = false;         ///< hyper-level Y and S
};
ghyltl::hyper::Formula random_prenex_sentence(Rng& rng, const std::vector<std::string>& ap, const HyperShape& shape);

std::vector<ghyltl::LassoTrace> random_model(Rng& rng, const ghyltl::PropSet& ap, std::size_t max_traces,
                                             std::size_t max_prefix, std::size_t max_loop);

} // namespace testsupport
