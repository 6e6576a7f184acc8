#pragma once

// Forward-Euler integration of df/dt = Q(f, f) on the momentum grid.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "relcoll/collision_operator.hpp"
#include "relcoll/cross_section.hpp"
#include "relcoll/density_field.hpp"
#include "relcoll/diagnostics.hpp"

namespace relcoll {

struct SolverState {
  double t = 0.0;
  DensityField f;
  std::int64_t step_index = 0;
  double dt_last = 0.0;  // 0 before the first step
};

/// Discretisation of the collision terms driving the update.
///   projection   collision_terms_projected: mass, momentum and energy exact
///   interpolate  collision_terms: gain by trilinear interpolation of f(v')
enum class GainScheme { projection, interpolate };

struct StepOptions {
  double safety = 0.5;  // dt * max Lf; in (0, 1]
  double dt_max = 0.1;  // cap used when max Lf is small or zero
  GainScheme scheme = GainScheme::projection;

  void validate() const;
};

/// Collision terms of f under the chosen scheme.
CollisionTerms evaluate_terms(const DensityField& f, const ScatteringKernel& kernel,
                              const AngularGrid& ang, GainScheme scheme);

/// Step size safety / max Lf, capped by dt_max and by t_limit - t. Returns
/// `remaining` itself when the leftover would be rounding-sized.
/// Throws StagnationError when safety / max Lf < 1e-12.
double stable_dt(std::span<const double> loss_rate, const StepOptions& opts, double remaining);

/// One Euler step f + dt (Q+ - f Lf) from precomputed collision terms of
/// state.f. Every node stays >= 0 because dt Lf <= safety <= 1.
/// Throws NumericalError on a non-finite result.
SolverState advance(const SolverState& state, const CollisionTerms& terms, double dt);

/// Evaluates the collision terms of state.f and advances by stable_dt,
/// never past t_limit.
SolverState step(const SolverState& state, const ScatteringKernel& kernel, const AngularGrid& ang,
                 const StepOptions& opts = {},
                 double t_limit = std::numeric_limits<double>::infinity());

struct RunOptions {
  double t_end = 1.0;
  StepOptions step;
  std::vector<NormSpec> norms;
};

/// Called once for the initial state and after every accepted step.
using Observer = std::function<void(const DiagnosticsRecord&, const SolverState&)>;

/// Integrates from t = 0 to t_end. t_end = 0 yields the initial record only.
/// One collision-term evaluation per step drives the update; the L_ratio
/// diagnostics always use the full loss rate loss_rates(f).
std::vector<DiagnosticsRecord> run(const DensityField& initial, const ScatteringKernel& kernel,
                                   const AngularGrid& ang, const RunOptions& opts,
                                   const Observer& observer = {});

}  // namespace relcoll
