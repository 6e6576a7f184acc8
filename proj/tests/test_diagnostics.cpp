#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "relcoll/diagnostics.hpp"
#include "relcoll/kinematics.hpp"

using namespace relcoll;

TEST_SUITE("diagnostics") {
  TEST_CASE("moments of a two-node field") {
    DensityField f(1.0, 2);  // h = 1, nodes at +-0.5
    f[f.index(1, 1, 1)] = 2.0;
    f[f.index(0, 1, 1)] = 1.0;
    const Moments m = moments(f);
    CHECK(m.mass == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(m.momentum.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.momentum.y == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(m.energy == doctest::Approx(3.0 * std::sqrt(1.75)).epsilon(1e-15));
  }

  TEST_CASE("entropy and weighted norms") {
    DensityField f(1.0, 2);
    f[0] = 2.0;
    f[1] = 1.0;
    CHECK(entropy(f) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(lp_norm(f, 2.0, 0.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    const double e = std::sqrt(1.75);
    CHECK(lp_norm(f, 1.0, 2.0) == doctest::Approx(3.0 * e * e).epsilon(1e-14));
    CHECK_THROWS_AS(lp_norm(f, 0.5, 0.0), std::invalid_argument);
    f[2] = -1.0;
    CHECK_THROWS_AS(entropy(f), std::invalid_argument);
  }

  TEST_CASE("exponent formulas") {
    CHECK(exponent_n(2.0) == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
    CHECK(exponent_n(9.0) == doctest::Approx(3.6).epsilon(1e-15));
    CHECK(exponent_theta(9.0) == doctest::Approx(0.1875).epsilon(1e-15));
    CHECK(exponent_theta(2.0) == 0.4);
    CHECK(exponent_n(6.0, Branch::low) == 2.0);
    CHECK(exponent_n(6.0, Branch::high) == 2.0);
    CHECK(exponent_theta(6.0, Branch::low) == 0.4);
    CHECK(exponent_theta(6.0, Branch::high) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(weight_m(2.0, 3.0) == doctest::Approx(6.65).epsilon(1e-14));
    CHECK(weight_m(6.0, 3.0, Branch::low) == doctest::Approx(16.75).epsilon(1e-14));
    CHECK(weight_m(6.0, 3.0, Branch::high) == doctest::Approx(16.75).epsilon(1e-14));
    for (double p : {1.5, 2.0, 3.0, 6.0, 9.0, 12.0}) {
      const double th = exponent_theta(p);
      CHECK(std::abs(1.0 / exponent_n(p) - th - (1.0 - th) / p) < 1e-12);
    }
  }

  TEST_CASE("branch convention and domain errors") {
    CHECK(branch_for(6.0) == Branch::low);
    CHECK(branch_for(6.5) == Branch::high);
    CHECK_THROWS_AS(exponent_n(1.0), std::invalid_argument);
    CHECK_THROWS_AS(exponent_n(3.0, Branch::high), std::invalid_argument);
    CHECK_THROWS_AS(exponent_theta(2.0, Branch::high), std::invalid_argument);
    CHECK_THROWS_AS(weight_m(2.0, 2.0), std::invalid_argument);
  }

  TEST_CASE("diagnostics record and loss ratios") {
    DensityField f = DensityField::sample(2.0, 4, [](const Vec3& v) { return std::exp(-energy(v)); });
    std::vector<double> loss(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) loss[i] = 2.0 * energy(f.node(i));
    const std::vector<NormSpec> norms{{2.0, 0.0}, {1.0, 1.0}};
    const DiagnosticsRecord r = compute_record(f, loss, norms, 0.5, 0.1);
    CHECK(r.t == 0.5);
    CHECK(r.dt == 0.1);
    CHECK(r.mass == doctest::Approx(moments(f).mass).epsilon(1e-15));
    CHECK(r.L_ratio_min == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.L_ratio_max == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(r.lp_norms.size() == 2);
    CHECK(r.lp_norms[1] == doctest::Approx(r.energy).epsilon(1e-14));
    CHECK(r.min_f > 0.0);
    const RatioRange rr = loss_ratio_range(f, loss, 1.0);
    CHECK(rr.min == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(loss_ratio_range(f, loss, 0.1), std::invalid_argument);
  }
}
