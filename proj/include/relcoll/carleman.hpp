#pragma once

// Relativistic Carleman representation of the collision integral.
//
// For fixed (v, v') the post-collisional constraint confines v_* to the
// hypersurface
//
//   E = { v_* : gbar/2 + (-v_*^0 (v^0 - v'^0) + v_* . (v - v')) / gbar = 0,
//         v^0 + v_*^0 - v'^0 >= 1 },
//
// carrying the measure d pi = r^2 (gbar / (r |v - v'|)) dr d psi once the
// polar angle of v_* about (v - v') is fixed by the delta constraint.
//
// The weak form  int dv int dv_* int d omega  w sigma A(v, v_*, v')  is
// evaluated two ways: directly over the omega sphere, and over (v, v', pi).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relcoll/collision_operator.hpp"
#include "relcoll/cross_section.hpp"
#include "relcoll/kinematics.hpp"

namespace relcoll {

/// Polar cosine of v_* about (v - v') fixed by the delta constraint at radius
/// |v_*| = r. nullopt when |cos| > 1 or the energy factor u fails.
/// Throws DegeneratePairError when v == v_prime.
std::optional<double> hypersurface_cos(double r, const Momentum& v, const Momentum& v_prime);

/// gbar/2 + (-v_*^0 (v^0 - v'^0) + v_* . (v - v')) / gbar.
double delta_residual(const Momentum& v, const Momentum& v_prime, const Vec3& v_star);

/// u(v^0 + v_*^0 - v'^0): true when the argument is >= 1.
bool energy_admissible(const Momentum& v, const Momentum& v_prime, const Vec3& v_star);

/// Admissible radial interval [r_lo, r_hi] of the hypersurface, clipped to
/// r_max. Both endpoint conditions (|cos phi*| = 1 and the u threshold) have
/// closed forms, so no root finding is needed.
struct RadialWindow {
  double r_lo = 0.0;
  double r_hi = 0.0;
  bool empty() const { return !(r_hi > r_lo); }
};
RadialWindow admissible_window(const Momentum& v, const Momentum& v_prime, double r_max);

struct HypersurfacePoint {
  double r = 0.0;
  double cos_phi_star = 0.0;
  double psi = 0.0;
  Momentum v_star;
  double weight = 0.0;  // quadrature weight including the d pi Jacobian
};

/// Quadrature nodes of d pi_{v_*} over the admissible window: Gauss-Legendre
/// in tau with r = r_lo + (r_max - r_lo) tau^2 (removes the square-root edge
/// at r_lo), uniform in psi. Throws DegeneratePairError when v == v_prime.
std::vector<HypersurfacePoint> hypersurface_points(const Momentum& v, const Momentum& v_prime,
                                                   int n_r, int n_psi, double r_max);

/// int F d pi_{v_*}.
double hypersurface_integral(const std::function<double(const Momentum&)>& F, const Momentum& v,
                             const Momentum& v_prime, int n_r, int n_psi, double r_max);

/// A(v, v_*, v'). Must be negligible when any argument leaves the grid box.
/// Either a general callable or a product a(v) b(v_*) c(v'); the product form
/// lets the quadratures hoist the outer factors and skip pairs where they vanish.
class TestFunction {
 public:
  using General = std::function<double(const Vec3& v, const Vec3& v_star, const Vec3& v_prime)>;
  using Factor = std::function<double(const Vec3&)>;

  TestFunction() = default;
  TestFunction(General general) : general_(std::move(general)) {}  // NOLINT(google-explicit-constructor)

  static TestFunction product(Factor on_v, Factor on_v_star, Factor on_v_prime);

  bool separable() const { return !general_; }
  double operator()(const Vec3& v, const Vec3& v_star, const Vec3& v_prime) const {
    if (general_) return general_(v, v_star, v_prime);
    return on_v_(v) * on_v_star_(v_star) * on_v_prime_(v_prime);
  }
  double on_v(const Vec3& v) const { return on_v_(v); }
  double on_v_star(const Vec3& v) const { return on_v_star_(v); }
  double on_v_prime(const Vec3& v) const { return on_v_prime_(v); }

 private:
  General general_;
  Factor on_v_;
  Factor on_v_star_;
  Factor on_v_prime_;
};

struct NamedTestFunction {
  std::string name;
  TestFunction fn;
};

/// Grids shared by both weak-form evaluations.
struct WeakFormGrid {
  double half_width = 4.0;
  int n = 12;
  AngularGrid angular{8, 16};
  int n_r = 32;
  int n_psi = 16;
  // Replace the excluded v = v' cell by the direction-averaged limit of the
  // inner integral instead of dropping it.
  bool diagonal_limit = true;

  double r_max() const;
  void validate() const;
};

/// int dv int dv_* int d omega (g sqrt(s) / (v^0 v_*^0)) sigma A(v, v_*, v'),
/// one result per test function.
std::vector<double> weak_form_direct(std::span<const TestFunction> tests, const WeakFormGrid& grid,
                                     const ScatteringKernel& kernel);

/// int dv/v^0 int dv'/v'^0 int d pi/v_*^0 (s/2) (sigma/gbar) A, with sigma/gbar
/// taken from carleman_weight so no 1/gbar is ever formed.
std::vector<double> weak_form_carleman(std::span<const TestFunction> tests,
                                       const WeakFormGrid& grid, const ScatteringKernel& kernel);

double weak_form_direct(const TestFunction& test, const WeakFormGrid& grid,
                        const ScatteringKernel& kernel);
double weak_form_carleman(const TestFunction& test, const WeakFormGrid& grid,
                          const ScatteringKernel& kernel);

/// Structurally different compactly concentrated test functions used by
/// `verify carleman` and the acceptance suite.
std::vector<NamedTestFunction> standard_test_battery(double half_width);

struct EquivalenceReport {
  std::vector<std::string> names;
  std::vector<double> direct;
  std::vector<double> carleman;
  std::vector<double> ratio;
  double kappa = 0.0;                    // mean ratio
  double coefficient_of_variation = 0.0;  // stddev / mean of the ratios
  double max_pair_deviation = 0.0;       // max |ratio / kappa - 1|
};

EquivalenceReport compare_representations(std::span<const NamedTestFunction> battery,
                                          const WeakFormGrid& grid,
                                          const ScatteringKernel& kernel);

}  // namespace relcoll
