#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghyltl/stutter.hpp"

namespace ghyltl::hyper {

enum class Op { True, Atom, Not, Or, Context, Next, Until, Yesterday, Since, Exists, Forall };

struct Node;
using Formula = std::shared_ptr<const Node>;

/// Core GHyLTL_S+C syntax; sugar is expanded by the builders.
struct Node {
  Op op;
  std::string prop;                 ///< Atom
  std::string var;                  ///< Atom, Exists, Forall
  std::vector<std::string> context; ///< Context: sorted, nonempty
  GammaSet gamma;                   ///< Next, Until, Yesterday, Since
  Formula lhs;
  Formula rhs;
};

Formula tt();
Formula ff();
Formula atom(std::string prop, std::string var);
Formula neg(Formula f);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula context(std::vector<std::string> vars, Formula f);
Formula next(GammaSet g, Formula f);
Formula until(GammaSet g, Formula a, Formula b);
Formula yesterday(GammaSet g, Formula f);
Formula since(GammaSet g, Formula a, Formula b);
Formula eventually(GammaSet g, Formula f);
Formula always(GammaSet g, Formula f);
Formula once(GammaSet g, Formula f);
Formula historically(GammaSet g, Formula f);
Formula exists(std::string x, Formula f);
Formula forall(std::string x, Formula f);
Formula conj(const std::vector<Formula>& fs);
Formula disj(const std::vector<Formula>& fs);

int compare(const Formula& a, const Formula& b);
bool equal(const Formula& a, const Formula& b);

std::string to_string(const Formula& f);

/// Throws ParseError (line/column) on malformed input.
Formula parse(std::string_view text);

std::vector<std::string> free_vars(const Formula& f);
/// Every variable name occurring anywhere (bound, free, or in a context).
std::vector<std::string> all_vars(const Formula& f);
bool is_sentence(const Formula& f);
/// Propositions used in atoms and inside Γ sets.
PropSet props(const Formula& f);
std::size_t size(const Formula& f);

/// Quantifier prefix (true = exists) and quantifier-free matrix; only
/// meaningful when is_prenex(f).
struct Prefix {
  std::vector<std::pair<bool, std::string>> quantifiers;
  Formula matrix;
};
Prefix split_prefix(const Formula& f);
Formula join_prefix(const std::vector<std::pair<bool, std::string>>& qs, Formula matrix);

bool is_prenex(const Formula& f);
bool quantifier_free(const Formula& f);
/// No hyper-level Y or S.
bool temporally_past_free(const Formula& f);
bool has_context(const Formula& f);
bool all_gamma_empty(const Formula& f);
bool all_gamma_past_free(const Formula& f);
/// Does some quantifier occur inside a temporal or context operator?
bool quantifier_under_temporal(const Formula& f);

enum class Fragment { HyperLTL, HyperLTL_S, HyperLTL_C, GHyLTL_SC };
Fragment fragment_of(const Formula& f);
std::string fragment_name(Fragment fr);

/// Renames free occurrences of variables (atoms and context sets).
Formula rename_free(const Formula& f, const std::map<std::string, std::string>& m);

} // namespace ghyltl::hyper

namespace ghyltl {
using HyperFormula = hyper::Formula;
}
