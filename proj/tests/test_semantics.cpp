#include <algorithm>
#include <memory>

#include "doctest.h"
#include "ghyltl/compile.hpp"
#include "ghyltl/error.hpp"
#include "ghyltl/semantics.hpp"
#include "support.hpp"

using namespace ghyltl;
using hyper::parse;

namespace {

const char* kNoninterference = "forall x. forall y. G (i_x <-> i_y) -> G (o_x <-> o_y)";

LassoTrace empty_word() { return LassoTrace({}, {}, {{}}); }
LassoTrace always_p() { return LassoTrace({"p"}, {}, {{"p"}}); }

Assignment bind(std::initializer_list<std::pair<std::string, LassoTrace>> xs) {
  Assignment a;
  for (const auto& [x, t] : xs) a[x] = {std::make_shared<const LassoTrace>(t), 0};
  return a;
}

} // namespace

TEST_CASE("free formulas under an assignment") {
  const auto a = bind({{"x", marker_trace("hash", 3)}});
  CHECK(eval({}, a, {"x"}, parse("F[] hash_x")).holds());
  CHECK(eval({}, a, {"x"}, parse("X X X hash_x")).holds());
  CHECK(eval({}, a, {"x"}, parse("!Y[] true")).holds());
}

TEST_CASE("periodic pair with equal and unequal periods") {
  const auto f = periodic_pair("x", "xq", Encoding::Context);
  CHECK(eval({}, bind({{"x", periodic_trace(kDollar, 3)}, {"xq", periodic_trace(kDollar, 3)}}), {"x", "xq"}, f).holds());
  CHECK(eval({}, bind({{"x", periodic_trace(kDollar, 3)}, {"xq", block_trace(kDollar, {3, 2})}}), {"x", "xq"}, f).fails());
}

TEST_CASE("sentences on trace sets") {
  CHECK(check_traceset({empty_word()}, parse(kNoninterference)).holds());
  CHECK(check_traceset({empty_word()}, parse("exists x. p_x")).fails());
  CHECK(check_traceset({empty_word(), always_p()}, parse("exists x. exists y. G[] (p_x & !p_y)")).holds());
  const LassoTrace in1({"i", "o"}, {{"i"}}, {{}});
  const LassoTrace in1_out({"i", "o"}, {{"i"}, {"o"}}, {{}});
  CHECK(check_traceset({in1, in1_out}, parse(kNoninterference)).fails());
  CHECK_THROWS_AS(check_traceset({empty_word()}, parse("p_x")), DomainError);
}

TEST_CASE("quantifiers rebind at the origin") {
  // y is bound to the origin even though x has moved on.
  const LassoTrace t({"p"}, {{}}, {{"p"}});
  CHECK(check_traceset({t}, parse("forall x. X exists y. (p_x & !p_y)")).holds());
}

TEST_CASE("quantifier duality") {
  testsupport::Rng rng(21);
  for (int k = 0; k < 150; ++k) {
    const auto L = testsupport::random_model(rng, {"p", "q"}, 3, 3, 2);
    const auto f = testsupport::random_prenex_sentence(rng, {"p", "q"}, {2, 2, true, false, true, false});
    if (f->op != hyper::Op::Forall) continue;
    const auto dual = hyper::neg(hyper::exists(f->var, hyper::neg(f->lhs)));
    CHECK(check_traceset(L, f).truth == check_traceset(L, dual).truth);
  }
}

TEST_CASE("until cutoff without cycle detection") {
  EvalConfig cfg;
  cfg.cycle_detection = false;
  cfg.until_cutoff = 5;
  const auto v = check_traceset({empty_word()}, parse("exists x. F p_x"), cfg);
  CHECK(v.unknown());
  CHECK(v.reason.find("until-cutoff") != std::string::npos);
  CHECK(check_traceset({empty_word()}, parse("exists x. F p_x")).fails());
}

TEST_CASE("since walks are bounded by the starting position") {
  testsupport::Rng rng(22);
  std::size_t walks = 0;
  StepObserver obs = [&](const StepEvent& e) {
    if (e.kind != StepEvent::SinceDone) return;
    ++walks;
    CHECK(e.steps <= e.start_max_pos + 1);
  };
  for (int k = 0; k < 100; ++k) {
    const auto L = testsupport::random_model(rng, {"p", "q"}, 2, 3, 2);
    const auto f = testsupport::random_prenex_sentence(rng, {"p", "q"}, {3, 2, true, true, true, true});
    auto pre = hyper::split_prefix(f);
    Assignment a;
    for (const auto& [ex, x] : pre.quantifiers) a[x] = {std::make_shared<const LassoTrace>(L[0]), 0};
    VarSet all;
    for (const auto& [ex, x] : pre.quantifiers) all.push_back(x);
    eval(L, a, all, hyper::next({}, pre.matrix), {}, &obs);
  }
  CHECK(walks > 0);
}

TEST_CASE("temporal steps stay inside the current context") {
  testsupport::Rng rng(23);
  std::size_t steps = 0;
  StepObserver obs = [&](const StepEvent& e) {
    if (e.kind == StepEvent::SinceDone) return;
    ++steps;
    for (const auto& x : e.moved) CHECK(std::find(e.context.begin(), e.context.end(), x) != e.context.end());
  };
  for (int k = 0; k < 100; ++k) {
    const auto L = testsupport::random_model(rng, {"p", "q"}, 3, 3, 2);
    const auto f = testsupport::random_prenex_sentence(rng, {"p", "q"}, {3, 3, true, false, true, true});
    auto pre = hyper::split_prefix(f);
    Assignment a;
    VarSet all;
    for (std::size_t i = 0; i < pre.quantifiers.size(); ++i) {
      a[pre.quantifiers[i].second] = {std::make_shared<const LassoTrace>(L[i % L.size()]), 0};
      all.push_back(pre.quantifiers[i].second);
    }
    eval(L, a, all, pre.matrix, {}, &obs);
  }
  CHECK(steps > 0);
}

TEST_CASE("fragments") {
  CHECK(hyper::fragment_of(parse("forall x. forall y. G[] (p_x <-> p_y)")) == hyper::Fragment::HyperLTL);
  CHECK(hyper::fragment_of(parse("forall x. G[p] q_x")) == hyper::Fragment::HyperLTL_S);
  CHECK(hyper::fragment_of(parse("forall x. forall y. C{x} F p_x")) == hyper::Fragment::HyperLTL_C);
  CHECK(hyper::fragment_of(parse("forall x. F exists y. p_y")) == hyper::Fragment::GHyLTL_SC);
  CHECK(hyper::fragment_of(parse("forall x. O p_x")) == hyper::Fragment::GHyLTL_SC);
}

TEST_CASE("model checking transition systems") {
  SUBCASE("exact universe") {
    TransitionSystem ts(PropSet{"p"}, {"v"}, {PropSet{}}, {{0, 0}}, {0});
    const auto r = check_ts(ts, parse("forall x. G[] !p_x"), 1, 1);
    CHECK(r.verdict.holds());
    CHECK(r.exact_universe);
  }
  SUBCASE("existential witness in a component") {
    const auto ts = context_system();
    for (std::size_t p = 0; p <= 2; ++p)
      CHECK(check_ts(ts, parse("exists x. G[] !dlr_x"), p, 1).verdict.holds());
  }
  SUBCASE("alternation is only bounded") {
    const auto r = check_ts(context_system(), parse("forall x. exists y. G (hash_x <-> X hash_y)"), 2, 2);
    CHECK(r.verdict.unknown());
    CHECK(r.verdict.bounded.has_value());
  }
  SUBCASE("empty initial set") {
    TransitionSystem ts(PropSet{"p"}, {"v"}, {PropSet{}}, {{0, 0}}, {});
    const auto r = check_ts(ts, parse("forall x. p_x"), 1, 1);
    CHECK(r.verdict.holds());
    CHECK_FALSE(r.warnings.empty());
  }
}

TEST_CASE("bounded satisfiability") {
  CHECK_FALSE(bounded_sat(parse("exists x. p_x & !p_x"), 2, 2, 2, {"p"}));
  const auto m = bounded_sat(parse("exists x. F[] p_x"), 1, 0, 1, {"p"});
  REQUIRE(m);
  REQUIRE(m->size() == 1);
  CHECK((*m)[0] == always_p());
  const auto ni = parse(kNoninterference);
  const auto n = bounded_sat(ni, 2, 1, 1, hyper::props(ni));
  REQUIRE(n);
  CHECK(n->size() == 1);
}

TEST_CASE("parse and print round trip") {
  testsupport::Rng rng(24);
  for (int k = 0; k < 200; ++k) {
    const auto f = testsupport::random_prenex_sentence(rng, {"p", "q"}, {3, 3, true, true, true, true});
    CHECK(hyper::equal(parse(hyper::to_string(f)), f));
  }
  CHECK_THROWS_AS(parse("forall x. C{} p_x"), ParseError);
}
