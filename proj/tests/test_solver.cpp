#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "relcoll/errors.hpp"
#include "relcoll/solver.hpp"

using namespace relcoll;

namespace {

DensityField small_two_bump() {
  const Vec3 a{0.8, 0.0, 0.0};
  return DensityField::sample(3.0, 6, [a](const Vec3& v) {
    return std::exp(-energy(v - a)) + std::exp(-energy(v + a));
  });
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("stable step size") {
    StepOptions o;
    const std::vector<double> l{0.0, 4.0, 1.0};
    CHECK(stable_dt(l, o, 10.0) == doctest::Approx(0.1));
    o.dt_max = 1.0;
    CHECK(stable_dt(l, o, 10.0) == doctest::Approx(0.125));
    CHECK(stable_dt(l, o, 0.05) == 0.05);
    CHECK(stable_dt(std::vector<double>{0.0}, o, 3.0) == 1.0);
    // A leftover of rounding size is absorbed into the step.
    CHECK(stable_dt(l, o, 0.125 + 1e-16) == 0.125 + 1e-16);
  }

  TEST_CASE("step size errors") {
    const StepOptions o;
    CHECK_THROWS_AS(stable_dt(std::vector<double>{1e13}, o, 1.0), StagnationError);
    CHECK_THROWS_AS(stable_dt(std::vector<double>{NAN}, o, 1.0), NumericalError);
    CHECK_THROWS_AS(stable_dt(std::vector<double>{1.0}, o, 0.0), std::invalid_argument);
    StepOptions bad;
    bad.safety = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.safety = 0.5;
    bad.dt_max = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("Euler update arithmetic") {
    DensityField f(1.0, 2);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0;
    const SolverState s{0.0, f, 0, 0.0};
    CollisionTerms t{std::vector<double>(8, 2.0), std::vector<double>(8, 3.0)};
    const SolverState n = advance(s, t, 0.1);
    CHECK(n.t == doctest::Approx(0.1));
    CHECK(n.step_index == 1);
    CHECK(n.dt_last == 0.1);
    CHECK(n.f[5] == doctest::Approx(0.9).epsilon(1e-15));
    t.gain[3] = INFINITY;
    try {
      (void)advance(s, t, 0.1);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("node 3") != std::string::npos);
    }
    CollisionTerms short_terms{std::vector<double>(2), std::vector<double>(2)};
    CHECK_THROWS_AS(advance(s, short_terms, 0.1), std::invalid_argument);
  }

  TEST_CASE("vacuum advances at dt_max") {
    const DensityField f(2.0, 3);
    RunOptions o;
    o.t_end = 0.25;
    const auto recs = run(f, {}, {2, 4}, o);
    REQUIRE(recs.size() == 4);
    CHECK(recs[1].dt == doctest::Approx(0.1));
    CHECK(recs[3].dt == doctest::Approx(0.05));
    CHECK(recs.back().t == 0.25);
    CHECK(recs.back().mass == 0.0);
  }

  TEST_CASE("t_end = 0 yields the initial record only") {
    RunOptions o;
    o.t_end = 0.0;
    const auto recs = run(small_two_bump(), {}, {2, 4}, o);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].t == 0.0);
    CHECK(recs[0].dt == 0.0);
    CHECK(recs[0].L_ratio_min > 0.0);
  }

  TEST_CASE("projected run conserves the invariants, lowers entropy and keeps f non-negative") {
    RunOptions o;
    o.t_end = 0.05;
    o.norms = {{2.0, 0.0}};
    std::size_t calls = 0;
    const auto recs = run(small_two_bump(), {}, {3, 6}, o,
                          [&calls](const DiagnosticsRecord& r, const SolverState& s) {
                            ++calls;
                            CHECK(r.t == s.t);
                            CHECK(r.min_f >= 0.0);
                          });
    CHECK(calls == recs.size());
    REQUIRE(recs.size() > 2);
    const auto& a = recs.front();
    const auto& b = recs.back();
    CHECK(b.t == 0.05);
    CHECK(std::abs(b.mass - a.mass) < 1e-13 * a.mass);
    CHECK(std::abs(b.px - a.px) < 1e-12 * a.energy);
    CHECK(std::abs(b.energy - a.energy) < 1e-13 * a.energy);
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].entropy <= recs[i - 1].entropy + 1e-12);
  }

  TEST_CASE("single step respects the time limit") {
    const SolverState s{0.0, small_two_bump(), 0, 0.0};
    StepOptions o;
    o.scheme = GainScheme::interpolate;
    const SolverState n = step(s, {}, {2, 4}, o, 1e-6);
    CHECK(n.t == 1e-6);
    CHECK(n.step_index == 1);
  }

  TEST_CASE("invalid inputs are rejected before integrating") {
    RunOptions o;
    o.t_end = -1.0;
    CHECK_THROWS_AS(run(small_two_bump(), {}, {2, 4}, o), std::invalid_argument);
    DensityField neg = small_two_bump();
    neg[0] = -1.0;
    o.t_end = 0.1;
    CHECK_THROWS_AS(run(neg, {}, {2, 4}, o), std::invalid_argument);
  }
}
