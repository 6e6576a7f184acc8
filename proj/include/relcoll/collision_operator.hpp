#pragma once

// Direct quadrature of the collision operator Q = Q+ - f L f on a momentum
// grid: midpoint rule in v_*, Gauss(theta) x uniform(azimuth) in omega.

#include <cstddef>
#include <span>
#include <vector>

#include "relcoll/cross_section.hpp"
#include "relcoll/density_field.hpp"
#include "relcoll/kinematics.hpp"

namespace relcoll {

/// Scattering-direction rule on the support hemisphere cos(theta) >= 0.
/// n_mu Gauss-Legendre nodes in theta on [0, pi/2], n_az uniform azimuths
/// phi_j = 2 pi j / n_az. The polar axis is the centre-of-momentum direction
/// of v, so theta at a node is exactly the scattering angle.
struct AngularGrid {
  int n_mu = 8;
  int n_az = 16;

  void validate() const;
};

/// Flattened node table for an AngularGrid.
struct AngularNodes {
  std::vector<double> sin_cos;  // sin(theta) cos(phi)
  std::vector<double> sin_sin;  // sin(theta) sin(phi)
  std::vector<double> cos_t;
  std::vector<double> sin_t;
  std::vector<double> measure;  // quadrature weight for d omega

  explicit AngularNodes(const AngularGrid& grid);
  std::size_t size() const { return cos_t.size(); }

  /// sum over nodes of measure * sigma_0 (the discrete angular mass).
  double sigma0_sum(const ScatteringKernel& kernel) const;
};

/// L f(v) = int dv_* int d omega v_mol sigma f(v_*). Throws DomainError
/// when v is outside the grid.
double loss_L(const DensityField& f, const ScatteringKernel& kernel, const AngularGrid& ang,
              const Momentum& v);

/// Q+(f, h)(v) with trilinear interpolation of f(v'), h(v'_*).
double gain_direct(const DensityField& f, const DensityField& h, const ScatteringKernel& kernel,
                   const AngularGrid& ang, const Momentum& v);

/// Gain and loss-rate fields of Q(f, f), one value per grid node.
struct CollisionTerms {
  std::vector<double> gain;       // Q+(f, f)
  std::vector<double> loss_rate;  // L f
};

/// Full-grid evaluation. Uses the exchange symmetry of the pair sum: the
/// quadrature for (v, v_*) and (v_*, v) touches the same post-collisional
/// products, so each unordered pair is visited once.
CollisionTerms collision_terms(const DensityField& f, const ScatteringKernel& kernel,
                               const AngularGrid& ang);

/// Conservative projection form used by the solver. Each accepted outcome
/// (v', v'_*) of a node pair (v, v_*) is assigned to the node pair nearest v'
/// whose index sum equals that of (v, v_*), blended with weight r with a
/// second such pair from the same cell so that v^0 + v_*^0 is matched.
/// The collision exchanges w (f f_* - F') between (v, v_*) and the projected
/// pairs, with F' = (f_l f_m)^(1-r) (f_l2 f_m2)^r. Consequences on the grid:
/// Q {1, v, v^0} sums vanish to round-off, sum Q ln f <= 0, and sampled
/// Juttner fields exp(a + b.v + c v^0) are stationary. Both directions are
/// split into a non-negative gain and a loss rate so the Euler step keeps
/// f >= 0. Outcomes with no admissible pair inside the grid are rejected in
/// both directions.
CollisionTerms collision_terms_projected(const DensityField& f, const ScatteringKernel& kernel,
                                         const AngularGrid& ang);

/// Gain and loss rate at the listed node indices only.
CollisionTerms collision_terms_at(const DensityField& f, const ScatteringKernel& kernel,
                                  const AngularGrid& ang, std::span<const std::size_t> nodes);

/// L f at every node. O(N^6) with no angular loop.
std::vector<double> loss_rates(const DensityField& f, const ScatteringKernel& kernel,
                               const AngularGrid& ang);

/// Q(f, f) = Q+ - f L f at every node.
std::vector<double> collision_Q(const DensityField& f, const ScatteringKernel& kernel,
                                const AngularGrid& ang);

}  // namespace relcoll
