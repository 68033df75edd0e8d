#include "doctest.h"
#include "ghyltl/compile.hpp"
#include "ghyltl/error.hpp"
#include "ghyltl/transform.hpp"

using namespace ghyltl;

TEST_CASE("membership atoms") {
  CHECK(hyper::equal(hyp_atom(arith::member("y", "Y"), Encoding::Stutter), hyper::parse("F[] (hy_y_xy & hash_xY)")));
  CHECK(hyper::equal(hyp_atom(arith::member("y", "Y"), Encoding::Context), hyper::parse("F[] (hash_xy & hash_xY)")));
}

TEST_CASE("addition instances") {
  for (Encoding e : {Encoding::Stutter, Encoding::Context}) {
    CAPTURE(to_string(e));
    CHECK(verify_gadget(Relation::Add, 5, 4, 9, e));
    CHECK_FALSE(verify_gadget(Relation::Add, 5, 4, 8, e));
    for (std::size_t n3 = 0; n3 <= 6; ++n3) CHECK(verify_gadget(Relation::Add, 0, 3, n3, e) == (n3 == 3));
  }
}

TEST_CASE("multiplication instances") {
  CHECK(verify_gadget(Relation::Mul, 3, 7, 21, Encoding::Context));
  CHECK_FALSE(verify_gadget(Relation::Mul, 3, 7, 20, Encoding::Context));
  CHECK(verify_gadget(Relation::Mul, 1, 1, 1, Encoding::Context));
  CHECK_FALSE(verify_gadget(Relation::Mul, 1, 1, 2, Encoding::Context));
  CHECK(verify_gadget(Relation::Mul, 2, 3, 6, Encoding::Stutter));
  CHECK_FALSE(verify_gadget(Relation::Mul, 2, 3, 5, Encoding::Stutter));
  for (Encoding e : {Encoding::Stutter, Encoding::Context})
    for (std::size_t k = 0; k <= 6; ++k) CHECK(verify_gadget(Relation::Mul, 0, k, 0, e));
}

TEST_CASE("the literal implication form accepts wrong products") {
  CompileOptions strict;
  strict.strict_fidelity = true;
  const auto guarded = hyp_atom(arith::mul("a", "b", "c"), Encoding::Context);
  const auto literal = hyp_atom(arith::mul("a", "b", "c"), Encoding::Context, strict);
  CHECK_FALSE(hyper::equal(guarded, literal));
  CHECK(verify_gadget(Relation::Mul, 0, 2, 3, Encoding::Context, {}, strict));
  CHECK_FALSE(verify_gadget(Relation::Mul, 0, 2, 3, Encoding::Context));
}

TEST_CASE("insufficient gadget bounds are reported") {
  GadgetBounds b;
  b.max_period = 2;
  CHECK_THROWS_AS(verify_gadget(Relation::Mul, 3, 7, 21, Encoding::Context, b), BoundError);
  GadgetBounds m;
  m.max_marker = 4;
  CHECK_THROWS_AS(verify_gadget(Relation::Add, 5, 4, 9, Encoding::Stutter, m), BoundError);
}

TEST_CASE("compiled sentences land in the expected fragments") {
  const auto f = arith::parse("exists a. exists b. exists c. a + b = c & a * b = c");
  CHECK(hyper::fragment_of(hoist(compile(f, Encoding::Stutter).sentence)) == hyper::Fragment::HyperLTL_S);
  CHECK(hyper::fragment_of(hoist(compile(f, Encoding::Context).sentence)) == hyper::Fragment::HyperLTL_C);
  CHECK_THROWS_AS(compile(arith::parse("a < b"), Encoding::Stutter), DomainError);
}

TEST_CASE("systems of the encodings") {
  const auto ctx = context_system();
  CHECK(ctx.ap() == PropSet{"dlr", "hash"});
  const auto traces = enumerate_ts_traces(ctx, 2, 2);
  for (const auto& t : traces) {
    bool has_hash = false, has_dlr = false;
    for (std::size_t i = 0; i < t.prefix_length() + t.loop_length(); ++i) {
      has_hash |= t.holds("hash", i);
      has_dlr |= t.holds("dlr", i);
    }
    CHECK_FALSE((has_hash && has_dlr));
  }
  const auto st = stutter_system({"y", "z"}, {{"y", "z"}});
  CHECK(st.accepts(encode_number("y", 3, Encoding::Stutter)));
  CHECK(st.accepts(encode_set({0, 2})));
  CHECK(st.accepts(periodic_trace(kDollarPrime, 2)));
  CHECK(st.accepts(pointwise_union(marker_trace("hy_y", 1), marker_trace("hy_z", 2))));
  CHECK_FALSE(st.accepts(pointwise_union(marker_trace("hash", 1), marker_trace("hy_y", 2))));
}

TEST_CASE("repeated operands are separated") {
  const auto f = separate_operands(arith::parse("forall y. forall z. y + y = z"));
  CHECK(arith::to_string(f) == "forall y. forall z. exists yc0. (!yc0 < y & !y < yc0) & y + yc0 = z");
  const auto doubled = arith::parse("exists y. exists z. y + y = z & 3 < z & z < 5");
  const auto art = compile(doubled, Encoding::Context);
  const auto r = check_ts(art.system, art.sentence, 0, 1, {}, witness_universe(art, 5));
  CHECK(r.verdict.holds());
}

TEST_CASE("bounded end-to-end agreement with arithmetic") {
  const char* corpus[] = {
      "exists a. exists b. exists c. a + b = c & a < b & b < c",
      "exists a. exists b. exists c. a * b = c & a < b & b < c",
      "exists a. exists b. a < b & b < a",
      "exists a. exists b. exists c. a + b = c & c < a",
      "exists a. exists b. exists c. a * b = c & a < c & b < a",
      "exists a. exists Y. a in Y & exists b. b < a & b in Y",
  };
  for (const std::string text : corpus) {
    CAPTURE(text);
    const auto f = arith::parse(text);
    const bool want = arith::eval_bounded(f, 12);
    for (Encoding e : {Encoding::Stutter, Encoding::Context}) {
      CAPTURE(to_string(e));
      const auto art = compile(f, e);
      const auto r = check_ts(art.system, art.sentence, 0, 1, {}, witness_universe(art, 6));
      REQUIRE(r.verdict.bounded.has_value());
      CHECK(*r.verdict.bounded == want);
      if (want) CHECK(r.verdict.holds());
    }
  }
}
