#include <memory>

#include "doctest.h"
#include "ghyltl/error.hpp"
#include "ghyltl/transform.hpp"
#include "prenex_corpus.hpp"
#include "support.hpp"

using namespace ghyltl;
using hyper::parse;

TEST_CASE("position traces") {
  CHECK(pos_traces(0).size() == 1);
  const auto three = pos_traces(2);
  REQUIRE(three.size() == 3);
  const auto shape = pltl::parse("(!hash) U (hash & X G !hash)");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(three[i].prefix_length() == i + 1);
    CHECK(three[i].loop_length() == 1);
    CHECK(three[i].holds(kHash, i));
    CHECK(pltl::eval(three[i], 0, shape));
  }
}

TEST_CASE("origin marker") {
  const auto t = std::make_shared<const LassoTrace>(marker_trace(kHash, 3));
  const auto f = origin_marker("x");
  CHECK(eval({}, {{"x", {t, 0}}}, {"x"}, f).holds());
  CHECK(eval({}, {{"x", {t, 3}}}, {"x"}, f).fails());
  Assignment a{{"x", {t, 3}}};
  std::size_t steps = 0;
  while (!eval({}, a, {"x"}, f).holds()) {
    a = *assign_pred(a, {}, {"x"});
    ++steps;
  }
  CHECK(steps == 3);
}

TEST_CASE("prenex inputs are returned unchanged") {
  const auto f = parse("forall x. exists y. G[] (p_x <-> q_y)");
  CHECK(prenexify(f) == f);
}

TEST_CASE("a quantifier under G becomes a position quantifier") {
  const auto f = parse("exists x. G[] exists xq. (p_xq <-> p_x)");
  const auto p = prenexify(f);
  CHECK(hyper::is_prenex(p));
  CHECK(hyper::to_string(p).find("F[] (hash_pos0 & C{x} ") != std::string::npos);
}

TEST_CASE("prenexify rejects what it cannot simulate") {
  CHECK_THROWS_AS(prenexify(parse("exists x. G[Y Y true] exists y. p_y")), DomainError);
  CHECK_THROWS_AS(prenexify(parse("exists x. F exists y. hash_y")), DomainError);
  CHECK_THROWS_AS(prenexify(parse("F p_x")), DomainError);
}

TEST_CASE("corpus outputs are prenex and agree with the originals") {
  testsupport::Rng rng(31);
  for (const auto& text : testsupport::kPrenexCorpus) {
    CAPTURE(text);
    const auto f = parse(text);
    const auto p = prenexify(f);
    CHECK(hyper::is_prenex(p));
    CHECK(hyper::equal(parse(hyper::to_string(p)), p));
    for (int m = 0; m < 2; ++m) {
      const auto L = testsupport::random_model(rng, {"p", "q"}, 2, 3, 2);
      const auto got = check_with_positions(L, p, 8);
      CHECK(got.stabilized);
      CHECK(got.verdict.truth == check_traceset(L, f).truth);
    }
  }
}

TEST_CASE("hoist pulls quantifiers through booleans") {
  const auto h = hoist(parse("(exists x. p_x) & !(exists x. q_x)"));
  CHECK(hyper::is_prenex(h));
  CHECK(hyper::to_string(h) == "exists x. forall x0. (p_x & !q_x0)");
  CHECK_THROWS_AS(hoist(parse("exists x. F exists y. p_y")), DomainError);
}
