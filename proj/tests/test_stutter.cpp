#include <memory>

#include "doctest.h"
#include "ghyltl/error.hpp"
#include "ghyltl/stutter.hpp"
#include "support.hpp"

using namespace ghyltl;

namespace {

const auto kHash3 = std::make_shared<const LassoTrace>(marker_trace("hash", 3));
const GammaSet kOnHash{pltl::atom("hash")};

PointedTrace at(const TracePtr& t, std::size_t i) { return {t, i}; }

} // namespace

TEST_CASE("proper changepoints") {
  CHECK(is_proper_changepoint(*kHash3, kOnHash, 0));
  CHECK(is_proper_changepoint(*kHash3, kOnHash, 3));
  CHECK(is_proper_changepoint(*kHash3, kOnHash, 4));
  CHECK_FALSE(is_proper_changepoint(*kHash3, kOnHash, 2));
  CHECK_FALSE(is_proper_changepoint(*kHash3, {}, 1));
}

TEST_CASE("changepoint profiles") {
  SUBCASE("empty gamma") {
    const auto prof = changepoint_profile(*kHash3, {});
    CHECK(prof.proper == std::vector<std::size_t>{0});
    REQUIRE(prof.tail_start);
    CHECK(*prof.tail_start == 1);
    for (std::size_t i = 0; i < 10; ++i) CHECK(prof.is_changepoint(i));
  }
  SUBCASE("finitely many flips") {
    const auto prof = changepoint_profile(*kHash3, kOnHash);
    CHECK(prof.proper == std::vector<std::size_t>{0, 3, 4});
    REQUIRE(prof.tail_start);
    CHECK(*prof.tail_start == 5);
  }
  SUBCASE("infinitely many flips") {
    const auto prof = changepoint_profile(LassoTrace({"p"}, {}, {{"p"}, {}}), GammaSet{pltl::atom("p")});
    CHECK_FALSE(prof.tail_start);
    for (std::size_t i = 0; i < 10; ++i) CHECK(prof.is_changepoint(i));
  }
}

TEST_CASE("successor and predecessor") {
  for (std::size_t i = 0; i < 6; ++i) CHECK(gamma_succ(at(kHash3, i), {}).pos == i + 1);
  CHECK(gamma_succ(at(kHash3, 0), kOnHash).pos == 3);
  CHECK(gamma_succ(at(kHash3, 4), kOnHash).pos == 5);
  CHECK_FALSE(gamma_pred(at(kHash3, 0), kOnHash));
  CHECK(gamma_pred(at(kHash3, 3), {})->pos == 2);
  CHECK(gamma_pred(at(kHash3, 4), kOnHash)->pos == 3);
  CHECK(gamma_pred(at(kHash3, 3), kOnHash)->pos == 0);
}

TEST_CASE("steps are monotone and invert at changepoints") {
  testsupport::Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    auto t = std::make_shared<const LassoTrace>(testsupport::random_lasso(rng, {"p", "q"}, 4, 3));
    const GammaSet g{testsupport::random_pltl(rng, {"p", "q"}, {2, true})};
    const auto prof = changepoint_profile(*t, g);
    for (std::size_t i = 0; i < 15; ++i) {
      const auto s = gamma_succ(at(t, i), g);
      CHECK(s.pos > i);
      if (auto p = gamma_pred(at(t, i), g)) CHECK(p->pos < i);
      if (prof.is_changepoint(i)) CHECK(gamma_pred(s, g)->pos == i);
    }
  }
}

TEST_CASE("assignment successor") {
  const auto t = std::make_shared<const LassoTrace>(LassoTrace({"p"}, {}, {{}}));
  Assignment a{{"x", at(t, 0)}, {"y", at(t, 0)}};
  const auto one = assign_succ(a, {}, {"x"});
  CHECK(one.at("x").pos == 1);
  CHECK(one.at("y").pos == 0);
  const auto both = assign_succ(a, {}, {"x", "y"});
  CHECK(both.at("x").pos == 1);
  CHECK(both.at("y").pos == 1);
  CHECK_THROWS_AS(assign_succ(a, {}, {"z"}), DomainError);
  CHECK_THROWS_AS(assign_succ(a, {}, {}), DomainError);
}

TEST_CASE("addition step moves every context coordinate to its next changepoint") {
  // n1 = 5, n2 = 4; the step is indexed by the marker of y2.
  const std::size_t n1 = 5, n2 = 4;
  auto y1 = std::make_shared<const LassoTrace>(marker_trace("hy_y1", n1));
  auto y2 = std::make_shared<const LassoTrace>(marker_trace("hy_y2", n2));
  auto y3 = std::make_shared<const LassoTrace>(marker_trace("hy_y3", n1 + n2));
  auto x = std::make_shared<const LassoTrace>(
      pointwise_union(marker_trace("hy_y2", n2), marker_trace("hy_y3", n1 + n2)));
  Assignment a{{"x1", at(y1, 0)}, {"x2", at(y2, 0)}, {"x3", at(y3, 0)}, {"x", at(x, 0)}};
  const auto b = assign_succ(a, GammaSet{pltl::atom("hy_y2")}, {"x1", "x2", "x3", "x"});
  CHECK(b.at("x1").pos == 1);
  CHECK(b.at("x2").pos == 4);
  CHECK(b.at("x3").pos == 1);
  CHECK(b.at("x").pos == 4);
}

TEST_CASE("assignment predecessor only needs the moving coordinates") {
  const auto t = std::make_shared<const LassoTrace>(LassoTrace({"p"}, {}, {{}}));
  CHECK_FALSE(assign_pred({{"x", at(t, 0)}, {"y", at(t, 2)}}, {}, {"x", "y"}));
  const auto p = assign_pred({{"x", at(t, 0)}, {"y", at(t, 2)}}, {}, {"y"});
  REQUIRE(p);
  CHECK(p->at("x").pos == 0);
  CHECK(p->at("y").pos == 1);
  const auto q = assign_pred({{"x", at(t, 2)}, {"y", at(t, 5)}}, {}, {"x", "y"});
  REQUIRE(q);
  CHECK(q->at("x").pos == 1);
  CHECK(q->at("y").pos == 4);
}

TEST_CASE("iterated predecessors terminate") {
  const auto t = std::make_shared<const LassoTrace>(LassoTrace({"p"}, {}, {{"p"}, {}}));
  std::optional<Assignment> a = Assignment{{"x", at(t, 7)}, {"y", at(t, 3)}};
  std::size_t steps = 0;
  while ((a = assign_pred(*a, GammaSet{pltl::atom("p")}, {"x", "y"}))) ++steps;
  CHECK(steps <= 7);
}

TEST_CASE("profile cache returns shared profiles") {
  ProfileCache cache;
  const auto p1 = cache.get(kHash3, kOnHash);
  const auto p2 = cache.get(kHash3, kOnHash);
  CHECK(p1 == p2);
  CHECK(p1->tail_start == std::optional<std::size_t>{5});
}
