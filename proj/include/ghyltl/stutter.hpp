#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ghyltl/pltl.hpp"
#include "ghyltl/traces.hpp"

namespace ghyltl {

/// A finite set Γ of PLTL formulas, kept sorted by structure.
class GammaSet {
public:
  GammaSet() = default;
  GammaSet(std::initializer_list<pltl::Formula> fs);
  explicit GammaSet(std::vector<pltl::Formula> fs);

  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<pltl::Formula>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool past_free() const;
  std::string to_string() const;

  friend bool operator==(const GammaSet& a, const GammaSet& b) { return compare(a, b) == 0; }
  friend bool operator<(const GammaSet& a, const GammaSet& b) { return compare(a, b) < 0; }
  static int compare(const GammaSet& a, const GammaSet& b);

private:
  std::vector<pltl::Formula> members_;
};

/// Changepoint membership along one trace: exact below `threshold`, periodic
/// with `period` from there on.
struct ChangepointProfile {
  std::vector<std::size_t> proper;      ///< proper changepoints below threshold + period
  std::optional<std::size_t> tail_start; ///< set iff proper changepoints are finite
  std::size_t threshold = 0;
  std::size_t period = 1;
  std::vector<bool> bits;                ///< membership, length threshold + period

  bool is_changepoint(std::size_t i) const {
    return i < threshold ? bits[i] : bits[threshold + (i - threshold) % period];
  }
  std::size_t succ(std::size_t i) const;
  std::optional<std::size_t> pred(std::size_t i) const;
};

bool is_proper_changepoint(const LassoTrace& t, const GammaSet& g, std::size_t i);
ChangepointProfile changepoint_profile(const LassoTrace& t, const GammaSet& g);

PointedTrace gamma_succ(const PointedTrace& pt, const GammaSet& g);
std::optional<PointedTrace> gamma_pred(const PointedTrace& pt, const GammaSet& g);

using Assignment = std::map<std::string, PointedTrace>;
using VarSet = std::vector<std::string>;

/// Moves exactly the coordinates in c to their Γ-successor.
/// Throws DomainError if c is empty or names an unbound variable.
Assignment assign_succ(const Assignment& a, const GammaSet& g, const VarSet& c);

/// Defined iff every coordinate in c has a Γ-predecessor.
std::optional<Assignment> assign_pred(const Assignment& a, const GammaSet& g, const VarSet& c);

/// Memo table of changepoint profiles keyed by (trace, Γ); safe for
/// concurrent use.
class ProfileCache {
public:
  std::shared_ptr<const ChangepointProfile> get(const TracePtr& t, const GammaSet& g);

private:
  std::shared_mutex mu_;
  std::map<std::pair<const LassoTrace*, GammaSet>,
           std::pair<TracePtr, std::shared_ptr<const ChangepointProfile>>> table_;
};

} // namespace ghyltl
