#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace testsupport {

using namespace ghyltl;

namespace {

// Position graph of an unrolled lasso: positions 0..n-1, succ(n-1) = wrap.
struct Graph {
  std::size_t n;
  std::size_t wrap;
  std::size_t succ(std::size_t j) const { return j + 1 < n ? j + 1 : wrap; }
};

std::vector<bool> least_until(const Graph& g, const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> v(g.n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = g.n; j-- > 0;) {
      const bool nv = b[j] || (a[j] && v[g.succ(j)]);
      if (nv != v[j]) v[j] = nv, changed = true;
    }
  }
  return v;
}

std::vector<bool> brute_vec(const Graph& g, const LassoTrace& t, const pltl::Formula& f) {
  using pltl::Op;
  std::vector<bool> v(g.n);
  switch (f->op) {
    case Op::True: std::fill(v.begin(), v.end(), true); break;
    case Op::Atom:
      for (std::size_t j = 0; j < g.n; ++j) v[j] = t.holds(f->atom, j);
      break;
    case Op::Not: {
      auto a = brute_vec(g, t, f->lhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = !a[j];
      break;
    }
    case Op::Or: {
      auto a = brute_vec(g, t, f->lhs), b = brute_vec(g, t, f->rhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = a[j] || b[j];
      break;
    }
    case Op::Next: {
      auto a = brute_vec(g, t, f->lhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = a[g.succ(j)];
      break;
    }
    case Op::Until: v = least_until(g, brute_vec(g, t, f->lhs), brute_vec(g, t, f->rhs)); break;
    case Op::Yesterday: {
      auto a = brute_vec(g, t, f->lhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = j > 0 && a[j - 1];
      break;
    }
    case Op::Since: {
      auto a = brute_vec(g, t, f->lhs), b = brute_vec(g, t, f->rhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = b[j] || (j > 0 && a[j] && v[j - 1]);
      break;
    }
  }
  return v;
}

} // namespace

std::size_t brute_horizon(const LassoTrace& t, const pltl::Formula& f) {
  return t.prefix_length() + (pltl::depth(f) + 2) * t.loop_length();
}

bool brute_pltl(const LassoTrace& t, std::size_t i, const pltl::Formula& f) {
  const std::size_t n = brute_horizon(t, f);
  if (i >= n) throw std::logic_error("position beyond the unroll horizon");
  Graph g{n, n - t.loop_length()};
  return brute_vec(g, t, f)[i];
}

namespace {

struct Product {
  std::vector<const LassoTrace*> traces; // by variable index
  std::map<std::string, std::size_t> index;
  Graph graph;
};

std::vector<bool> matrix_vec(const Product& pr, const hyper::Formula& f) {
  using hyper::Op;
  const Graph& g = pr.graph;
  std::vector<bool> v(g.n);
  switch (f->op) {
    case Op::True: std::fill(v.begin(), v.end(), true); break;
    case Op::Atom: {
      const LassoTrace* t = pr.traces.at(pr.index.at(f->var));
      for (std::size_t j = 0; j < g.n; ++j) v[j] = t->holds(f->prop, j);
      break;
    }
    case Op::Not: {
      auto a = matrix_vec(pr, f->lhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = !a[j];
      break;
    }
    case Op::Or: {
      auto a = matrix_vec(pr, f->lhs), b = matrix_vec(pr, f->rhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = a[j] || b[j];
      break;
    }
    case Op::Next: {
      if (!f->gamma.empty()) throw std::logic_error("reference evaluator: nonempty Γ");
      auto a = matrix_vec(pr, f->lhs);
      for (std::size_t j = 0; j < g.n; ++j) v[j] = a[g.succ(j)];
      break;
    }
    case Op::Until:
      if (!f->gamma.empty()) throw std::logic_error("reference evaluator: nonempty Γ");
      v = least_until(g, matrix_vec(pr, f->lhs), matrix_vec(pr, f->rhs));
      break;
    default: throw std::logic_error("reference evaluator: operator outside the fragment");
  }
  return v;
}

} // namespace

bool reference_hyperltl(const std::vector<LassoTrace>& L, const hyper::Formula& sentence) {
  if (!hyper::is_prenex(sentence)) throw std::logic_error("reference evaluator: not prenex");
  const auto pre = hyper::split_prefix(sentence);
  const auto& qs = pre.quantifiers;
  std::vector<const LassoTrace*> chosen(qs.size());
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < qs.size(); ++k) index[qs[k].second] = k; // innermost binder wins

  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == qs.size()) {
      Product pr;
      pr.index = index;
      pr.traces = chosen;
      std::size_t p = 0, l = 1;
      for (auto* t : chosen) {
        p = std::max(p, t->prefix_length());
        l = std::lcm(l, t->loop_length());
      }
      pr.graph = Graph{p + l, p};
      return matrix_vec(pr, pre.matrix)[0];
    }
    const bool ex = qs[k].first;
    for (const auto& t : L) {
      chosen[k] = &t;
      if (go(k + 1) == ex) return ex;
    }
    return !ex;
  };
  return go(0);
}

LassoTrace random_lasso(Rng& rng, const PropSet& ap, std::size_t max_prefix, std::size_t max_loop) {
  std::uniform_int_distribution<std::size_t> pl(0, max_prefix), ll(1, max_loop);
  std::bernoulli_distribution coin(0.5);
  auto letter = [&] {
    PropSet s;
    for (const auto& p : ap)
      if (coin(rng)) s.insert(p);
    return s;
  };
  std::vector<PropSet> prefix(pl(rng)), loop(ll(rng));
  for (auto& s : prefix) s = letter();
  for (auto& s : loop) s = letter();
  return LassoTrace(ap, prefix, loop);
}

pltl::Formula random_pltl(Rng& rng, const std::vector<std::string>& ap, const PltlShape& shape) {
  std::uniform_int_distribution<std::size_t> pick_atom(0, ap.size() - 1);
  std::function<pltl::Formula(std::size_t)> gen = [&](std::size_t d) -> pltl::Formula {
    const int ops = shape.past ? 7 : 5;
    const int k = d == 0 ? 0 : std::uniform_int_distribution<int>(0, ops)(rng);
    switch (k) {
      case 0:
      case 1: return std::uniform_int_distribution<int>(0, 9)(rng) == 0 ? pltl::tt() : pltl::atom(ap[pick_atom(rng)]);
      case 2: return pltl::neg(gen(d - 1));
      case 3: return pltl::lor(gen(d - 1), gen(d - 1));
      case 4: return pltl::next(gen(d - 1));
      case 5: return pltl::until(gen(d - 1), gen(d - 1));
      case 6: return pltl::yesterday(gen(d - 1));
      default: return pltl::since(gen(d - 1), gen(d - 1));
    }
  };
  return gen(shape.depth);
}

hyper::Formula random_prenex_sentence(Rng& rng, const std::vector<std::string>& ap, const HyperShape& shape) {
  const std::size_t nq = std::uniform_int_distribution<std::size_t>(1, shape.max_quantifiers)(rng);
  std::vector<std::string> vars;
  for (std::size_t k = 0; k < nq; ++k) vars.push_back("x" + std::to_string(k));
  std::uniform_int_distribution<std::size_t> pv(0, vars.size() - 1), pa(0, ap.size() - 1);
  std::bernoulli_distribution coin(0.5);

  auto gamma = [&]() -> GammaSet {
    if (!shape.gamma || coin(rng)) return {};
    std::vector<pltl::Formula> fs;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    for (std::size_t k = 0; k < n; ++k) fs.push_back(random_pltl(rng, ap, {2, shape.gamma_past}));
    return GammaSet(fs);
  };
  std::function<hyper::Formula(std::size_t)> gen = [&](std::size_t d) -> hyper::Formula {
    int ops = 5;
    if (shape.contexts) ops = 6;
    if (shape.hyper_past) ops = 8;
    int k = d == 0 ? 0 : std::uniform_int_distribution<int>(0, ops)(rng);
    if (!shape.contexts && k == 6) k = 5;
    switch (k) {
      case 0:
      case 1: return hyper::atom(ap[pa(rng)], vars[pv(rng)]);
      case 2: return hyper::neg(gen(d - 1));
      case 3: return hyper::lor(gen(d - 1), gen(d - 1));
      case 4: return hyper::next(gamma(), gen(d - 1));
      case 5: return hyper::until(gamma(), gen(d - 1), gen(d - 1));
      case 6: {
        std::vector<std::string> c;
        for (const auto& v : vars)
          if (coin(rng)) c.push_back(v);
        if (c.empty()) c.push_back(vars[pv(rng)]);
        return hyper::context(c, gen(d - 1));
      }
      case 7: return hyper::yesterday(gamma(), gen(d - 1));
      default: return hyper::since(gamma(), gen(d - 1), gen(d - 1));
    }
  };
  hyper::Formula f = gen(shape.depth);
  for (std::size_t k = nq; k-- > 0;) f = coin(rng) ? hyper::exists(vars[k], f) : hyper::forall(vars[k], f);
  return f;
}

std::vector<LassoTrace> random_model(Rng& rng, const PropSet& ap, std::size_t max_traces, std::size_t max_prefix,
                                     std::size_t max_loop) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_traces)(rng);
  std::vector<LassoTrace> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(random_lasso(rng, ap, max_prefix, max_loop));
  return out;
}

} // namespace testsupport
