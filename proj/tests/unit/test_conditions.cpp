#include "support.hpp"

#include "vilab/conditions.hpp"
#include "vilab/problems.hpp"
#include "vilab/projection.hpp"

#include <doctest.h>

using namespace vilab;
using vilab::testing::vec;

TEST_SUITE("conditions") {

TEST_CASE("operator classification on the one-dimensional example") {
  const auto p = vilab::testing::neg_identity();
  const auto reports = classify_operator(p, 10000, 1);
  const auto& mono = find_report(reports, ConditionKind::MONOTONE);
  CHECK(mono.verdict == Verdict::VIOLATED);
  REQUIRE(mono.witness.has_value());
  CHECK(mono.witness->y.has_value());
  CHECK(mono.witness->value < 0.0);
  CHECK(reevaluate_witness(p, mono) == doctest::Approx(mono.witness->value));

  CHECK(find_report(reports, ConditionKind::MINTY).verdict == Verdict::VIOLATED);
  for (double c : {-1.0, 0.0, 1.0}) CHECK(minty_residual(p, vec({c}), 2001, 0) > 0.0);
}

TEST_CASE("Minty residual values") {
  const auto p = vilab::testing::neg_identity();
  // min over x of -x(x - 1) is -2 at x = -1; min of -x^2 is -1
  CHECK(minty_residual(p, vec({1.0}), 2001, 0) == doctest::Approx(2.0));
  CHECK(minty_residual(p, vec({0.0}), 2001, 0) == doctest::Approx(1.0));
  CHECK(minty_residual(vilab::testing::rotation(), Vector::Zero(2), 4096, 0) == 0.0);
}

TEST_CASE("skew operator is monotone but not strongly monotone") {
  const auto reports = classify_operator(vilab::testing::rotation(), 10000, 3);
  CHECK(find_report(reports, ConditionKind::MONOTONE).satisfied());
  CHECK(find_report(reports, ConditionKind::PSEUDO_MONOTONE).satisfied());
  CHECK_FALSE(find_report(reports, ConditionKind::STRONGLY_MONOTONE).satisfied());
}

TEST_CASE("indefinite diagonal operator is not quasi-monotone") {
  const auto& p = get_problem("indef-diag-ball").problem;
  const auto reports = classify_operator(p, 10000, 7);
  const auto& quasi = find_report(reports, ConditionKind::QUASI_MONOTONE);
  CHECK(quasi.verdict == Verdict::VIOLATED);
  // a concrete pair on the first axis: <F(y), x - y> = -0.1 * -0.3 > 0 but
  // <F(x), x - y> = 0.2 * -0.3 < 0
  const Vector x = vec({-0.2, 0.0}), y = vec({0.1, 0.0});
  CHECK(p.evaluate(y).dot(x - y) > 0.0);
  CHECK(p.evaluate(x).dot(x - y) < 0.0);
}

TEST_CASE("GP* along the one-dimensional orbit") {
  const auto p = vilab::testing::neg_identity();
  const auto r = check_sequence_condition(p, ConditionKind::GP_STAR, vec({0.5}), 0.5, 1.0, 50,
                                          p.declared_solutions);
  CHECK(r.satisfied());
  REQUIRE(r.uniform_candidate.has_value());
  CHECK(p.declared_solutions[*r.uniform_candidate][0] == 1.0);
}

TEST_CASE("GP* on the rotation is violated at the first term") {
  const auto p = vilab::testing::rotation();
  const double eps = 0.01, t = 0.5, delta = 1.0;
  const auto r = check_sequence_condition(p, ConditionKind::GP_STAR, vec({eps, 0.0}), t, delta,
                                          100, p.declared_solutions);
  CHECK(r.verdict == Verdict::VIOLATED);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->k.value() == 0);
  const double expression = -2 * (1 + delta) * t * t * eps * eps + t * t * eps * eps;
  CHECK(r.witness->value == doctest::Approx(expression).epsilon(1e-9));
  CHECK(std::abs(r.witness->value - (-7.5e-5)) < 1e-12);
}

TEST_CASE("local Minty on the indefinite diagonal operator") {
  const auto& p = get_problem("indef-diag-ball").problem;
  const std::vector<Vector> cand{vec({1.0, 0.0})};
  const auto r = check_sequence_condition(p, ConditionKind::LOCAL_MINTY, vec({0.3, 0.4}), 0.5, 1.0,
                                          50, cand);
  CHECK(r.satisfied());
}

TEST_CASE("sequence values match hand formulas") {
  const auto p = vilab::testing::rotation();
  const Vector x = vec({0.3, -0.2});
  const Vector c = Vector::Zero(2);
  const double t = 0.4, delta = 0.5;
  const Vector m = grad_proj_map(p, x, t);
  CHECK(sequence_condition_value(p, ConditionKind::LOCAL_MINTY, x, c, t, delta) ==
        doctest::Approx(p.evaluate(x).dot(x - c)));
  CHECK(sequence_condition_value(p, ConditionKind::LOCAL_MINTY_STAR, x, c, t, delta) ==
        doctest::Approx(p.evaluate(x).dot(m - c)));
  CHECK(sequence_condition_value(p, ConditionKind::GP, x, c, t, delta) ==
        doctest::Approx(4 * (1 + delta) * t * p.evaluate(m).dot(m - c) + (m - x).squaredNorm()));
  CHECK(sequence_condition_value(p, ConditionKind::GP_STAR, x, c, t, delta) ==
        doctest::Approx(2 * (1 + delta) * t * p.evaluate(x).dot(m - c) + (m - x).squaredNorm()));
}

TEST_CASE("sequence checks need candidates") {
  const auto p = vilab::testing::rotation();
  CHECK_THROWS_AS(check_sequence_condition(p, ConditionKind::GP, vec({0.1, 0.0}), 0.5, 1.0, 10, {}),
                  ConfigError);
}

TEST_CASE("candidate solutions recover the solution set on a grid") {
  const auto cands = candidate_solutions(vilab::testing::neg_identity());
  CHECK(cands.size() == 3);
}

TEST_CASE("condition names round-trip") {
  for (int i = 0; i <= static_cast<int>(ConditionKind::GP_STAR); ++i) {
    const auto kind = static_cast<ConditionKind>(i);
    CHECK(condition_from_string(to_string(kind)) == kind);
  }
  CHECK(condition_from_string("gp-star") == ConditionKind::GP_STAR);
  CHECK_THROWS_AS(condition_from_string("nope"), ConfigError);
}

}
