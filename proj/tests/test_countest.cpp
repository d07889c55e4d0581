#include <doctest.h>

#include "memsest/countest.hpp"
#include "memsest/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace memsest;
using testsupport::Rng;
using namespace oracles;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidInput;
}

} // namespace

TEST_CASE("snippet conditions count 60 and 20 on any box containing [21, 100]") {
  Rng rng(2);
  auto pre = parse_conjunction("x > 20 && x <= 100");
  for (int i = 0; i < 50; ++i) {
    Domains d{{"x", {rng.in(-100000, 21), rng.in(100, 100000)}}};
    if (i == 0)
      d["x"] = {-1000, 1000};
    PathCondition t{pre}, f{pre};
    t.constraints.push_back(parse_constraint("x - 10 > 30"));
    f.constraints.push_back(parse_constraint("x - 10 <= 30"));
    CHECK(model_count(t, d) == 60);
    CHECK(model_count(f, d) == 20);
  }
}

TEST_CASE("affine conjunctions match brute force") {
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    Case c = random_case(rng, false);
    PathCondition pc = condition_of(c);
    CAPTURE(render(pc));
    std::uint64_t expected = brute(c.cons, c.box);
    CHECK(model_count(pc, domains_of(c)) == expected);
    CHECK(model_count_serial(pc, domains_of(c)) == expected);
  }
}

TEST_CASE("non-affine conjunctions match brute force") {
  Rng rng(202);
  for (int i = 0; i < 200; ++i) {
    Case c = random_case(rng, true);
    PathCondition pc = condition_of(c);
    CAPTURE(render(pc));
    std::uint64_t expected = brute(c.cons, c.box);
    CHECK(model_count(pc, domains_of(c)) == expected);
    CHECK(model_count_serial(pc, domains_of(c)) == expected);
  }
}

TEST_CASE("unconstrained variables multiply the count") {
  Domains d{{"x", {0, 9}}, {"y", {1, 3}}};
  CHECK(model_count(PathCondition{}, d) == 30);
  CHECK(model_count(PathCondition{parse_conjunction("x < 5")}, d) == 15);
  CHECK(model_count(PathCondition{parse_conjunction("x < 5 && x > 7")}, d) == 0);
}

TEST_CASE("errors") {
  Domains d{{"x", {0, 9}}};
  CHECK(code_of([&] { model_count(PathCondition{parse_conjunction("y > 0")}, d); }) == Errc::UnboundedDomain);
  Domains big{{"x", {0, 100000}}, {"y", {0, 100000}}};
  CHECK(code_of([&] { model_count(PathCondition{parse_conjunction("x * y > 7")}, big); }) == Errc::BudgetExceeded);
  Domains huge{{"a", {0, 1 << 20}}, {"b", {0, 1 << 20}}, {"c", {0, 1 << 20}}, {"d", {0, 1 << 20}}};
  CHECK(code_of([&] { model_count(PathCondition{}, huge); }) == Errc::CountOverflow);
  CHECK(code_of([] { parse_domain("x=5..1"); }) == Errc::InvalidInput);
  CHECK(code_of([] { parse_domain("x:1..5"); }) == Errc::InvalidInput);
  CHECK(parse_domain("x=-1000..1000") == std::pair<std::string, VarDomain>{"x", {-1000, 1000}});
}

TEST_CASE("weighted estimate") {
  Estimate e = estimate_performance({{"path_0", 60, 3}, {"path_1", 20, 2}});
  CHECK(e.fraction() == "220/80");
  CHECK(e.weighted_sum == 220);
  CHECK(e.total_weight == 80);
  CHECK(e.decimal() == "2.75");
  CHECK(e.value == Rational(11, 4));

  CHECK(estimate_performance({{"a", 1, 6}, {"b", 1, 4}, {"c", 1, 2}, {"d", 1, 0}}).decimal() == "3");
  CHECK(estimate_performance({{"a", 0, 9}, {"b", 3, 1}}).decimal() == "1");
  CHECK(code_of([] { estimate_performance({}); }) == Errc::EmptyOrZeroWeight);
  CHECK(code_of([] { estimate_performance({{"a", 0, 9}}); }) == Errc::EmptyOrZeroWeight);
}

TEST_CASE("decimal rendering rounds half up") {
  CHECK(render_decimal(Rational(1, 3)) == "0.333333");
  CHECK(render_decimal(Rational(2, 3)) == "0.666667");
  CHECK(render_decimal(Rational(1, 2000000)) == "0.000001");
  CHECK(render_decimal(Rational(1, 2000001)) == "0");
  CHECK(render_decimal(Rational(1, 8), 2) == "0.13");
  CHECK(render_decimal(Rational(7)) == "7");
  CHECK(render_decimal(Rational(999999999, 1000000000)) == "1");
}

TEST_CASE("counts CSV round trip") {
  Estimate e = estimate_performance({{"path_0", 60, 3}, {"path_1", 20, 2}});
  std::string csv = counts_csv(e);
  CHECK(csv == "path_id,delta,pind\npath_0,60,3\npath_1,20,2\nweighted,80,2.75\n");
  auto back = parse_counts_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[1].path_id == "path_1");
  CHECK(back[1].delta == 20);
  CHECK(back[1].pind == 2);
}
