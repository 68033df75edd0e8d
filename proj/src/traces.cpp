#include "ghyltl/traces.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ghyltl/error.hpp"

namespace ghyltl {

// ---------------------------------------------------------------------------
// PropSet

PropSet::PropSet(std::initializer_list<std::string> props)
    : PropSet(std::vector<std::string>(props)) {}

PropSet::PropSet(std::vector<std::string> props) : props_(std::move(props)) {
  std::sort(props_.begin(), props_.end());
  props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
}

bool PropSet::contains(std::string_view p) const {
  auto it = std::lower_bound(props_.begin(), props_.end(), p,
                             [](const std::string& a, std::string_view b) { return a < b; });
  return it != props_.end() && *it == p;
}

void PropSet::insert(std::string p) {
  auto it = std::lower_bound(props_.begin(), props_.end(), p);
  if (it == props_.end() || *it != p) props_.insert(it, std::move(p));
}

bool PropSet::subset_of(const PropSet& other) const {
  return std::includes(other.props_.begin(), other.props_.end(), props_.begin(), props_.end());
}

bool PropSet::disjoint_from(const PropSet& other) const {
  for (const auto& p : props_)
    if (other.contains(p)) return false;
  return true;
}

PropSet PropSet::united(const PropSet& other) const {
  std::vector<std::string> out;
  std::set_union(props_.begin(), props_.end(), other.props_.begin(), other.props_.end(),
                 std::back_inserter(out));
  PropSet r;
  r.props_ = std::move(out);
  return r;
}

std::string PropSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < props_.size(); ++i) {
    if (i) s += ",";
    s += props_[i];
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// LassoTrace

LassoTrace::LassoTrace(PropSet ap, std::vector<PropSet> prefix, std::vector<PropSet> loop)
    : ap_(std::move(ap)), prefix_(std::move(prefix)), loop_(std::move(loop)) {
  if (loop_.empty()) throw DomainError("lasso trace needs a nonempty loop");
  for (const auto& l : prefix_)
    if (!l.subset_of(ap_)) throw DomainError("letter " + l.to_string() + " not over " + ap_.to_string());
  for (const auto& l : loop_)
    if (!l.subset_of(ap_)) throw DomainError("letter " + l.to_string() + " not over " + ap_.to_string());
}

const PropSet& LassoTrace::letter(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return loop_[(i - prefix_.size()) % loop_.size()];
}

std::string LassoTrace::to_string() const {
  std::string s;
  for (const auto& l : prefix_) s += l.to_string();
  s += "(";
  for (const auto& l : loop_) s += l.to_string();
  return s + ")^w";
}

const PropSet& letter(const LassoTrace& t, std::size_t i) { return t.letter(i); }

std::size_t lcm_size(std::size_t a, std::size_t b) { return std::lcm(a, b); }

// ---------------------------------------------------------------------------
// Canonical form

LassoTrace canonicalize(const LassoTrace& t) {
  std::vector<PropSet> prefix = t.prefix();
  std::vector<PropSet> loop = t.loop();

  // Primitive root of the loop.
  const std::size_t n = loop.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t k = d; k < n && periodic; ++k) periodic = loop[k] == loop[k % d];
    if (periodic) {
      loop.resize(d);
      break;
    }
  }

  // Roll the prefix into the loop.
  while (!prefix.empty() && prefix.back() == loop.back()) {
    prefix.pop_back();
    std::rotate(loop.rbegin(), loop.rbegin() + 1, loop.rend());
  }
  return LassoTrace(t.ap(), std::move(prefix), std::move(loop));
}

std::vector<LassoTrace> dedup_canonical(const std::vector<LassoTrace>& traces) {
  std::vector<LassoTrace> out;
  std::set<LassoTrace> seen;
  for (const auto& t : traces) {
    auto c = canonicalize(t);
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

std::vector<PropSet> all_letters(const PropSet& ap) {
  const auto& items = ap.items();
  if (items.size() > 20) throw DomainError("alphabet too large to enumerate");
  std::vector<PropSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
    std::vector<std::string> props;
    for (std::size_t b = 0; b < items.size(); ++b)
      if (mask & (std::size_t{1} << b)) props.push_back(items[b]);
    out.emplace_back(std::move(props));
  }
  return out;
}

// All words of the given length over `letters`, in lexicographic order.
void words(const std::vector<PropSet>& letters, std::size_t len,
           const std::function<void(const std::vector<PropSet>&)>& sink) {
  std::vector<std::size_t> idx(len, 0);
  std::vector<PropSet> w(len, letters.front());
  while (true) {
    sink(w);
    std::size_t k = len;
    while (k > 0) {
      --k;
      if (++idx[k] < letters.size()) {
        w[k] = letters[idx[k]];
        break;
      }
      idx[k] = 0;
      w[k] = letters[0];
      if (k == 0) return;
    }
    if (len == 0) return;
  }
}

} // namespace

std::vector<LassoTrace> enumerate_lassos(const PropSet& ap, std::size_t max_prefix,
                                         std::size_t max_loop) {
  if (max_loop == 0) throw DomainError("enumerate_lassos: max_loop must be at least 1");
  const auto letters = all_letters(ap);
  std::vector<LassoTrace> out;
  for (std::size_t a = 0; a <= max_prefix; ++a)
    for (std::size_t b = 1; b <= max_loop; ++b)
      words(letters, a, [&](const std::vector<PropSet>& prefix) {
        words(letters, b, [&](const std::vector<PropSet>& loop) { out.emplace_back(ap, prefix, loop); });
      });
  return out;
}

std::vector<LassoTrace> enumerate_ts_traces(const TransitionSystem& ts, std::size_t max_prefix,
                                            std::size_t max_loop, std::vector<std::string>* warnings) {
  if (max_loop == 0) throw DomainError("enumerate_ts_traces: max_loop must be at least 1");
  if (ts.initial().empty()) {
    if (warnings) warnings->push_back("transition system has no initial vertex; Tr(T) is empty");
    return {};
  }
  std::set<LassoTrace> seen;
  std::vector<LassoTrace> out;
  std::vector<std::size_t> run;

  auto emit = [&](std::size_t a) {
    std::vector<PropSet> prefix, loop;
    for (std::size_t k = 0; k < run.size(); ++k) (k < a ? prefix : loop).push_back(ts.label(run[k]));
    LassoTrace t(ts.ap(), std::move(prefix), std::move(loop));
    if (seen.insert(t).second) out.push_back(std::move(t));
  };

  std::function<void()> extend = [&] {
    // Close the loop at every admissible split point.
    const std::size_t len = run.size();
    for (std::size_t a = 0; a < len && a <= max_prefix; ++a) {
      const std::size_t b = len - a;
      if (b < 1 || b > max_loop) continue;
      const auto& succ = ts.successors(run.back());
      if (std::find(succ.begin(), succ.end(), run[a]) != succ.end()) emit(a);
    }
    if (len >= max_prefix + max_loop) return;
    for (auto v : ts.successors(run.back())) {
      run.push_back(v);
      extend();
      run.pop_back();
    }
  };

  for (auto v0 : ts.initial()) {
    run.assign(1, v0);
    extend();
  }
  return out;
}

LassoTrace pointwise_union(const LassoTrace& a, const LassoTrace& b) {
  if (!a.ap().disjoint_from(b.ap()))
    throw DomainError("pointwise_union: alphabets " + a.ap().to_string() + " and " + b.ap().to_string() +
                      " overlap");
  const std::size_t pre = std::max(a.prefix_length(), b.prefix_length());
  const std::size_t per = std::lcm(a.loop_length(), b.loop_length());
  std::vector<PropSet> prefix, loop;
  for (std::size_t i = 0; i < pre; ++i) prefix.push_back(a.letter(i).united(b.letter(i)));
  for (std::size_t i = pre; i < pre + per; ++i) loop.push_back(a.letter(i).united(b.letter(i)));
  return LassoTrace(a.ap().united(b.ap()), std::move(prefix), std::move(loop));
}

LassoTrace marker_trace(const std::string& marker, std::size_t n) {
  std::vector<PropSet> prefix(n + 1);
  prefix[n] = PropSet{marker};
  return LassoTrace(PropSet{marker}, std::move(prefix), {PropSet{}});
}

LassoTrace set_trace(const std::string& marker, const std::vector<std::size_t>& members) {
  std::size_t len = 0;
  for (auto m : members) len = std::max(len, m + 1);
  std::vector<PropSet> prefix(len);
  for (auto m : members) prefix[m] = PropSet{marker};
  return LassoTrace(PropSet{marker}, std::move(prefix), {PropSet{}});
}

LassoTrace periodic_trace(const std::string& prop, std::size_t period) {
  return block_trace(prop, {period, period});
}

LassoTrace block_trace(const std::string& prop, const std::vector<std::size_t>& blocks) {
  if (blocks.empty() || blocks.size() % 2 != 0) throw DomainError("block_trace needs an even number of blocks");
  std::vector<PropSet> loop;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (blocks[j] == 0) throw DomainError("block_trace: blocks must be nonempty");
    for (std::size_t k = 0; k < blocks[j]; ++k) loop.push_back(j % 2 == 0 ? PropSet{prop} : PropSet{});
  }
  return LassoTrace(PropSet{prop}, {}, std::move(loop));
}

// ---------------------------------------------------------------------------
// TransitionSystem

TransitionSystem::TransitionSystem(PropSet ap, std::vector<std::string> ids, std::vector<PropSet> labels,
                                   std::vector<std::pair<std::size_t, std::size_t>> edges,
                                   std::vector<std::size_t> initial)
    : ap_(std::move(ap)), ids_(std::move(ids)), labels_(std::move(labels)), edges_(std::move(edges)),
      initial_(std::move(initial)) {
  if (ids_.empty()) throw DomainError("transition system needs at least one vertex");
  if (labels_.size() != ids_.size()) throw DomainError("labeling must be total on vertices");
  for (const auto& l : labels_)
    if (!l.subset_of(ap_)) throw DomainError("label " + l.to_string() + " not over " + ap_.to_string());
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
  succ_.assign(ids_.size(), {});
  for (auto [u, v] : edges_) {
    if (u >= ids_.size() || v >= ids_.size()) throw DomainError("edge refers to an unknown vertex");
    succ_[u].push_back(v);
  }
  for (auto v : initial_)
    if (v >= ids_.size()) throw DomainError("initial vertex out of range");
  for (std::size_t v = 0; v < ids_.size(); ++v)
    if (succ_[v].empty()) throw DomainError("vertex '" + ids_[v] + "' has no outgoing edge");
}

bool TransitionSystem::accepts(const LassoTrace& trace) const {
  const std::size_t len = trace.prefix_length() + trace.loop_length();
  auto next = [&](std::size_t i) { return i + 1 < len ? i + 1 : trace.prefix_length(); };
  const std::size_t n = size();
  // alive[i * n + v]: (position i, vertex v) has an infinite continuation.
  std::vector<char> alive(len * n, 0);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t v = 0; v < n; ++v) alive[i * n + v] = labels_[v] == trace.letter(i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t v = 0; v < n; ++v) {
        if (!alive[i * n + v]) continue;
        bool ok = false;
        for (auto w : succ_[v]) ok = ok || alive[next(i) * n + w];
        if (!ok) {
          alive[i * n + v] = 0;
          changed = true;
        }
      }
  }
  for (auto v : initial_)
    if (alive[v]) return true;
  return false;
}

std::optional<std::vector<LassoTrace>> TransitionSystem::finite_traces() const {
  // Subset construction on labels: deterministic, every state has a successor,
  // so Tr(T) is in bijection with the infinite paths of the result.
  using State = std::vector<std::size_t>;
  std::map<State, std::size_t> index;
  std::vector<State> states;
  std::vector<std::vector<std::size_t>> dsucc;
  std::vector<std::size_t> roots;

  auto intern = [&](State s) {
    auto [it, fresh] = index.emplace(s, states.size());
    if (fresh) {
      states.push_back(std::move(s));
      dsucc.emplace_back();
    }
    return it->second;
  };
  {
    std::map<PropSet, State> by_label;
    for (auto v : initial_) by_label[labels_[v]].push_back(v);
    for (auto& [_, s] : by_label) roots.push_back(intern(s));
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    std::map<PropSet, std::set<std::size_t>> by_label;
    for (auto v : states[k])
      for (auto w : succ_[v]) by_label[labels_[w]].insert(w);
    for (auto& [_, s] : by_label) {
      auto id = intern(State(s.begin(), s.end()));
      dsucc[k].push_back(id);
    }
  }

  // Tarjan SCC to find states lying on a cycle.
  const std::size_t n = states.size();
  std::vector<int> low(n, -1), num(n, -1), comp(n, -1);
  std::vector<std::size_t> stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> dfs = [&](std::size_t u) {
    low[u] = num[u] = counter++;
    stack.push_back(u);
    on_stack[u] = 1;
    for (auto w : dsucc[u]) {
      if (num[w] < 0) {
        dfs(w);
        low[u] = std::min(low[u], low[w]);
      } else if (on_stack[w]) {
        low[u] = std::min(low[u], num[w]);
      }
    }
    if (low[u] == num[u]) {
      while (true) {
        auto w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = ncomp;
        if (w == u) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t u = 0; u < n; ++u)
    if (num[u] < 0) dfs(u);
  std::vector<std::size_t> comp_size(ncomp, 0);
  for (std::size_t u = 0; u < n; ++u) ++comp_size[comp[u]];
  auto cyclic = [&](std::size_t u) {
    if (comp_size[comp[u]] > 1) return true;
    return std::find(dsucc[u].begin(), dsucc[u].end(), u) != dsucc[u].end();
  };
  for (std::size_t u = 0; u < n; ++u)
    if (cyclic(u) && dsucc[u].size() > 1) return std::nullopt;

  auto label_of = [&](std::size_t u) { return labels_[states[u].front()]; };
  std::vector<LassoTrace> out;
  std::vector<PropSet> path;
  std::function<void(std::size_t)> walk = [&](std::size_t u) {
    if (cyclic(u)) {
      std::vector<PropSet> loop;
      std::size_t w = u;
      do {
        loop.push_back(label_of(w));
        w = dsucc[w].front();
      } while (w != u);
      out.push_back(canonicalize(LassoTrace(ap_, path, std::move(loop))));
      return;
    }
    path.push_back(label_of(u));
    for (auto w : dsucc[u]) walk(w);
    path.pop_back();
  };
  for (auto r : roots) walk(r);
  return dedup_canonical(out);
}

} // namespace ghyltl
