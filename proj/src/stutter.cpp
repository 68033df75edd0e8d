#include "ghyltl/stutter.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "ghyltl/error.hpp"

namespace ghyltl {

GammaSet::GammaSet(std::initializer_list<pltl::Formula> fs) : GammaSet(std::vector<pltl::Formula>(fs)) {}

GammaSet::GammaSet(std::vector<pltl::Formula> fs) : members_(std::move(fs)) {
  auto less = [](const pltl::Formula& a, const pltl::Formula& b) { return pltl::compare(a, b) < 0; };
  std::sort(members_.begin(), members_.end(), less);
  members_.erase(std::unique(members_.begin(), members_.end(), pltl::equal), members_.end());
}

bool GammaSet::past_free() const {
  return std::all_of(members_.begin(), members_.end(), pltl::past_free);
}

std::string GammaSet::to_string() const {
  std::string s = "[";
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (k) s += ", ";
    s += pltl::to_string(members_[k]);
  }
  return s + "]";
}

int GammaSet::compare(const GammaSet& a, const GammaSet& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k)
    if (int c = pltl::compare(a.members_[k], b.members_[k])) return c;
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

// ---------------------------------------------------------------------------

std::size_t ChangepointProfile::succ(std::size_t i) const {
  // Beyond the threshold every period contains a changepoint, so this is
  // bounded by threshold + period steps.
  std::size_t j = i + 1;
  while (!is_changepoint(j)) ++j;
  return j;
}

std::optional<std::size_t> ChangepointProfile::pred(std::size_t i) const {
  if (i == 0) return std::nullopt;
  std::size_t j = i - 1;
  while (!is_changepoint(j)) --j; // 0 is always a changepoint
  return j;
}

ChangepointProfile changepoint_profile(const LassoTrace& t, const GammaSet& g) {
  std::vector<pltl::ValuationProfile> vals;
  std::size_t T = 0, P = 1;
  for (const auto& theta : g) {
    vals.push_back(pltl::valuation_profile(t, theta));
    T = std::max(T, vals.back().threshold + 1);
    P = std::lcm(P, vals.back().period);
  }
  T = std::max<std::size_t>(T, 1);
  auto proper = [&](std::size_t i) {
    if (i == 0) return true;
    for (const auto& v : vals)
      if (v.at(i) != v.at(i - 1)) return true;
    return false;
  };

  ChangepointProfile r;
  bool infinite = false;
  for (std::size_t i = 0; i < T + P; ++i) {
    if (!proper(i)) continue;
    r.proper.push_back(i);
    infinite = infinite || i >= T;
  }
  if (infinite) {
    r.threshold = T;
    r.period = P;
    r.bits.resize(T + P);
    for (std::size_t i = 0; i < T + P; ++i) r.bits[i] = proper(i);
  } else {
    r.tail_start = r.proper.back() + 1;
    r.threshold = *r.tail_start;
    r.period = 1;
    r.bits.resize(r.threshold + 1);
    for (std::size_t i = 0; i <= r.threshold; ++i) r.bits[i] = i >= r.threshold || proper(i);
  }
  return r;
}

bool is_proper_changepoint(const LassoTrace& t, const GammaSet& g, std::size_t i) {
  if (i == 0) return true;
  for (const auto& theta : g)
    if (pltl::eval(t, i, theta) != pltl::eval(t, i - 1, theta)) return true;
  return false;
}

PointedTrace gamma_succ(const PointedTrace& pt, const GammaSet& g) {
  return {pt.trace, changepoint_profile(*pt.trace, g).succ(pt.pos)};
}

std::optional<PointedTrace> gamma_pred(const PointedTrace& pt, const GammaSet& g) {
  if (pt.pos == 0) return std::nullopt;
  auto j = changepoint_profile(*pt.trace, g).pred(pt.pos);
  if (!j) return std::nullopt;
  return PointedTrace{pt.trace, *j};
}

namespace {

void check_context(const Assignment& a, const VarSet& c) {
  if (c.empty()) throw DomainError("context must be nonempty");
  for (const auto& x : c)
    if (!a.count(x)) throw DomainError("variable '" + x + "' is not bound by the assignment");
}

} // namespace

Assignment assign_succ(const Assignment& a, const GammaSet& g, const VarSet& c) {
  check_context(a, c);
  Assignment r = a;
  for (const auto& x : c) r[x] = gamma_succ(a.at(x), g);
  return r;
}

std::optional<Assignment> assign_pred(const Assignment& a, const GammaSet& g, const VarSet& c) {
  check_context(a, c);
  Assignment r = a;
  for (const auto& x : c) {
    auto p = gamma_pred(a.at(x), g);
    if (!p) return std::nullopt;
    r[x] = *p;
  }
  return r;
}

std::shared_ptr<const ChangepointProfile> ProfileCache::get(const TracePtr& t, const GammaSet& g) {
  auto key = std::make_pair(t.get(), g);
  {
    std::shared_lock lock(mu_);
    if (auto it = table_.find(key); it != table_.end()) return it->second.second;
  }
  auto prof = std::make_shared<const ChangepointProfile>(changepoint_profile(*t, g));
  std::unique_lock lock(mu_);
  auto [it, _] = table_.emplace(key, std::make_pair(t, prof));
  return it->second.second;
}

} // namespace ghyltl
