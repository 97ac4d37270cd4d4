#include "support.hpp"

#include "vilab/games.hpp"
#include "vilab/merit.hpp"

#include <doctest.h>

using namespace vilab;
using vilab::testing::vec;

TEST_SUITE("games") {

TEST_CASE("analytic and numeric partial gradients agree") {
  for (const auto& g : game_library()) {
    CAPTURE(g.name);
    CHECK(gradient_cross_check(g) < 1e-6);
  }
}

TEST_CASE("game_to_vi stacks the partial gradients") {
  const auto saddle = game_to_vi(get_game("bilinear-saddle"));
  CHECK((saddle.evaluate(vec({0.3, -0.4})) - vec({-0.4, -0.3})).norm() < 1e-15);

  const auto decoupled = game_to_vi(get_game("decoupled-convex"));
  CHECK((decoupled.evaluate(vec({0.3, -0.4})) - vec({0.6, -0.8})).norm() < 1e-15);
  CHECK(gap(decoupled, Vector::Zero(2)) == 0.0);

  const auto degenerate = game_to_vi(get_game("neg-square-degenerate"));
  CHECK(degenerate.evaluate(vec({0.5, 0.0}))[0] == -1.0);

  // finite-difference path
  const auto duel = game_to_vi(get_game("nonconvex-duel"));
  CHECK((duel.evaluate(vec({0.5, 0.25})) - vec({-0.75, 0.0})).norm() < 1e-8);
}

TEST_CASE("equilibrium classes at known points") {
  SUBCASE("saddle origin") {
    const auto r = classify_equilibrium(get_game("bilinear-saddle"), vec({0.0}), vec({0.0}), 2001, 1);
    CHECK(r.is_qne.satisfied());
    CHECK(r.is_ne.satisfied());
    CHECK(r.is_mne.satisfied());
  }
  SUBCASE("decoupled origin") {
    const auto r = classify_equilibrium(get_game("decoupled-convex"), vec({0.0}), vec({0.0}), 2001, 1);
    CHECK(r.is_qne.satisfied());
    CHECK(r.is_ne.satisfied());
    CHECK(r.is_mne.satisfied());
  }
  SUBCASE("degenerate game at x = 1") {
    const auto r =
        classify_equilibrium(get_game("neg-square-degenerate"), vec({1.0}), vec({0.0}), 2001, 1);
    CHECK(r.is_qne.satisfied());
    CHECK(r.is_ne.satisfied());
    CHECK(r.is_mne.verdict == Verdict::VIOLATED);
    REQUIRE(r.is_mne.witness.has_value());
    CHECK(r.is_mne.witness->point[0] < 0.0);
  }
  SUBCASE("infeasible point") {
    CHECK_THROWS_AS(classify_equilibrium(get_game("bilinear-saddle"), vec({2.0}), vec({0.0}), 10, 1),
                    InfeasiblePointError);
  }
}

TEST_CASE("Minty optimality on scalar objectives") {
  auto r = check_minty_optimality(get_objective("square"), vec({0.0}), 2001, 1);
  CHECK(r.minty.satisfied());
  CHECK(r.global.satisfied());

  r = check_minty_optimality(get_objective("neg-square"), vec({1.0}), 2001, 1);
  CHECK(r.minty.verdict == Verdict::VIOLATED);
  REQUIRE(r.minty.witness.has_value());
  CHECK(r.minty.witness->point[0] >= -1.0);
  CHECK(r.minty.witness->point[0] < 0.0);
  CHECK(r.global.satisfied());

  r = check_minty_optimality(get_objective("neg-square"), vec({0.0}), 2001, 1);
  CHECK(r.minty.verdict == Verdict::VIOLATED);
  CHECK(r.global.verdict == Verdict::VIOLATED);
}

TEST_CASE("unknown names") {
  CHECK_THROWS_AS(get_game("nope"), ConfigError);
  CHECK_THROWS_AS(get_objective("nope"), ConfigError);
}

}
