#pragma once

// Hard-ball cross-section with Grad cutoff:
//   sigma(g, theta) = C_phi g * C sin(theta),   supported on cos(theta) >= 0.

#include <functional>

namespace relcoll {

struct ScatteringKernel {
  double c_phi = 1.0;
  double c_ang = 1.0;

  /// Throws std::invalid_argument unless both constants are positive and finite.
  void validate() const;
};

double sigma(const ScatteringKernel& kernel, double g, double cos_theta);

/// sigma / g_bar evaluated analytically as 2 C_phi C g_tilde / g on the
/// support g_tilde >= g_bar. Finite as g_bar -> 0. Throws DegeneratePairError
/// when g == 0 and std::invalid_argument when g^2 != g_bar^2 + g_tilde^2.
double carleman_weight(const ScatteringKernel& kernel, double g, double g_bar, double g_tilde);

/// Hemisphere integral of sigma_0: C pi^2 / 2.
double angular_mass(const ScatteringKernel& kernel);

/// Product rule for the same integral: Gauss-Legendre in theta on [0, pi/2]
/// (n_polar nodes) times a uniform azimuth rule (n_azimuth nodes).
double hemisphere_quadrature(const ScatteringKernel& kernel, int n_polar, int n_azimuth = 4);

using AngularFunction = std::function<double(double g, double theta)>;

/// [raw(g, theta) + raw(g, pi - theta)] * 1{cos theta >= 0}.
AngularFunction symmetrize(AngularFunction raw);

}  // namespace relcoll
