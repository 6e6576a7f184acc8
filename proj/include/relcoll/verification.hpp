#pragma once

// Seeded invariant ensemble for the collision kinematics.

#include <cstdint>
#include <string>
#include <vector>

#include "relcoll/collision_operator.hpp"
#include "relcoll/cross_section.hpp"
#include "relcoll/density_field.hpp"

namespace relcoll {

struct KinematicsEnsembleOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 7;
  double component_bound = 5.0;  // components uniform in [-bound, bound]
};

/// Worst residual of each invariant over the ensemble.
struct KinematicsReport {
  std::int64_t samples = 0;
  double momentum_conservation = 0.0;  // max |v + v_* - v' - v'_*| component, absolute
  double energy_conservation = 0.0;    // max |v0 + vs0 - v'0 - v's0|, absolute
  double g_invariance = 0.0;           // max |g(v', v'_*) - g| / g
  double pythagorean = 0.0;            // max |g^2 - gbar^2 - gtilde^2| / g^2
  double half_angle = 0.0;             // max |sin(theta/2) - gbar/g|
  double cos_identity = 0.0;           // max |cos theta - (gtilde^2 - gbar^2)/g^2|
  double on_shell = 0.0;               // max |energy(v') - closed-form v'0|
  double s_identity = 0.0;             // max |s - g^2 - 4|, absolute
  double moller = 0.0;                 // max |2 v_mol v0 vs0 - g sqrt(s)| / (g sqrt(s))
  double moller_max = 0.0;             // max v_mol (must stay below 2)
  std::int64_t coercive_violations = 0;  // |v-vs|/sqrt(v0 vs0) <= g <= |v-vs| failures
  std::int64_t bound_violations = 0;     // g^2 < g sqrt(s) <= 4 v0 vs0 and gamma >= 1 failures
  double seconds = 0.0;

  struct Check {
    std::string name;
    double value;
    double tolerance;
    bool pass;
  };
  /// Each invariant against its tolerance.
  std::vector<Check> checks() const;
  bool passed() const;
};

KinematicsReport verify_kinematics(const KinematicsEnsembleOptions& opts = {});

/// max_v |Q(f, f)(v)| for a field invariant under the 48 reflections and
/// axis permutations of the cube. Q is evaluated only on the fundamental
/// wedge of nodes (|v_x| >= |v_y| >= |v_z|), 1/48 of the grid.
/// Throws invalid_argument when f is not symmetric to 1e-12 relative.
double max_abs_Q_octahedral(const DensityField& f, const ScatteringKernel& kernel,
                            const AngularGrid& ang);

}  // namespace relcoll
