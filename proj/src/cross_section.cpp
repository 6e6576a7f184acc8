#include "relcoll/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relcoll/errors.hpp"
#include "relcoll/quadrature.hpp"

namespace relcoll {

void ScatteringKernel::validate() const {
  if (!(c_phi > 0.0) || !std::isfinite(c_phi)) {
    throw std::invalid_argument("ScatteringKernel: c_phi must be positive");
  }
  if (!(c_ang > 0.0) || !std::isfinite(c_ang)) {
    throw std::invalid_argument("ScatteringKernel: c_ang must be positive");
  }
}

double sigma(const ScatteringKernel& kernel, double g, double cos_theta) {
  if (std::abs(cos_theta) > 1.0 + 1e-12) {
    throw std::invalid_argument("sigma: |cos theta| > 1");
  }
  if (cos_theta < 0.0) return 0.0;
  const double c = std::min(cos_theta, 1.0);
  const double sin_theta = std::sqrt((1.0 - c) * (1.0 + c));
  return kernel.c_phi * g * kernel.c_ang * sin_theta;
}

double carleman_weight(const ScatteringKernel& kernel, double g, double g_bar, double g_tilde) {
  if (g == 0.0) throw DegeneratePairError("carleman_weight: g = 0");
  const double g2 = g * g;
  if (std::abs(g2 - g_bar * g_bar - g_tilde * g_tilde) > 1e-8 * g2) {
    throw std::invalid_argument("carleman_weight: g^2 != g_bar^2 + g_tilde^2");
  }
  if (g_tilde < g_bar) return 0.0;
  return 2.0 * kernel.c_phi * kernel.c_ang * g_tilde / g;
}

double angular_mass(const ScatteringKernel& kernel) {
  return kernel.c_ang * std::numbers::pi * std::numbers::pi / 2.0;
}

double hemisphere_quadrature(const ScatteringKernel& kernel, int n_polar, int n_azimuth) {
  if (n_azimuth < 1) throw std::invalid_argument("hemisphere_quadrature: n_azimuth < 1");
  const QuadratureRule rule = gauss_legendre(n_polar, 0.0, std::numbers::pi / 2.0);
  // sigma_0 is azimuth independent, so the azimuth rule contributes its total weight.
  double polar = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double st = std::sin(rule.nodes[i]);
    polar += rule.weights[i] * st * kernel.c_ang * st;
  }
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  double total = 0.0;
  for (int j = 0; j < n_azimuth; ++j) total += dphi * polar;
  return total;
}

AngularFunction symmetrize(AngularFunction raw) {
  return [raw = std::move(raw)](double g, double theta) {
    if (std::cos(theta) < 0.0) return 0.0;
    return raw(g, theta) + raw(g, std::numbers::pi - theta);
  };
}

}  // namespace relcoll
