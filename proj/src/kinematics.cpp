#include "relcoll/kinematics.hpp"

#include <algorithm>
#include <stdexcept>

#include "relcoll/errors.hpp"

namespace relcoll {

Momentum::Momentum(double x, double y, double z) : v_{x, y, z} {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw std::invalid_argument("Momentum: non-finite component");
  }
}

Momentum::Momentum(const Vec3& v) : Momentum(v.x, v.y, v.z) {}

double energy(const Momentum& v) { return v.energy(); }

double relative_momentum(const Momentum& v, const Momentum& v_star) {
  return std::sqrt(detail::relative_momentum_sq(v.vec(), v.energy(), v_star.vec(), v_star.energy()));
}

double s_invariant(const Momentum& v, const Momentum& v_star) {
  return 2.0 + 2.0 * detail::minkowski_product(v.vec(), v.energy(), v_star.vec(), v_star.energy());
}

double moller_velocity(const Momentum& v, const Momentum& v_star) {
  const Vec3 a = (1.0 / v.energy()) * v.vec();
  const Vec3 b = (1.0 / v_star.energy()) * v_star.vec();
  return clamped_sqrt(norm2(a - b) - norm2(cross(a, b)));
}

double g_bar(const Momentum& v, const Momentum& v_prime) { return relative_momentum(v, v_prime); }

double g_tilde(const Momentum& v_prime, const Momentum& v_star) {
  return relative_momentum(v_prime, v_star);
}

CollisionPair CollisionPair::make(const Momentum& v, const Momentum& v_star) {
  CollisionPair p{v, v_star};
  p.g = relative_momentum(v, v_star);
  p.s = s_invariant(v, v_star);
  p.gamma = (v.energy() + v_star.energy()) / std::sqrt(p.s);
  return p;
}

bool PairFrame::build(const Vec3& v, double v0, const Vec3& vs, double vs0) {
  total = v + vs;
  half_total = 0.5 * total;
  e_total = v0 + vs0;
  const double g2 = detail::relative_momentum_sq(v, v0, vs, vs0);
  g = std::sqrt(g2);
  if (g == 0.0) return false;
  s = 2.0 + 2.0 * detail::minkowski_product(v, v0, vs, vs0);
  sqrt_s = std::sqrt(s);

  // (gamma - 1) / |P|^2 written so that P -> 0 needs no special case.
  const double proj = 1.0 / (sqrt_s * (e_total + sqrt_s));
  const Vec3 d = v - vs;
  const double inv_boost = 1.0 / (e_total * (e_total + sqrt_s));
  axis = (1.0 / g) * (d - (dot(total, d) * inv_boost) * total);
  axis = (1.0 / norm(axis)) * axis;
  e1 = orthonormal_to(axis);
  e2 = cross(axis, e1);

  const double half_g = 0.5 * g;
  a1 = half_g * (e1 + (dot(total, e1) * proj) * total);
  a2 = half_g * (e2 + (dot(total, e2) * proj) * total);
  a3 = 0.5 * d;
  return true;
}

Vec3 cm_direction(const Momentum& v, const Momentum& v_star) {
  PairFrame f;
  if (!f.build(v.vec(), v.energy(), v_star.vec(), v_star.energy())) {
    throw DegeneratePairError("cm_direction: coincident momenta (g = 0)");
  }
  return f.axis;
}

PostCollision post_collision(const Momentum& v, const Momentum& v_star, const Vec3& omega) {
  if (std::abs(norm(omega) - 1.0) > 1e-12) {
    throw std::invalid_argument("post_collision: omega is not a unit vector");
  }
  const Vec3 total = v.vec() + v_star.vec();
  const double e_total = v.energy() + v_star.energy();
  const double g = relative_momentum(v, v_star);
  const double s = s_invariant(v, v_star);
  const double sqrt_s = std::sqrt(s);
  const double proj = 1.0 / (sqrt_s * (e_total + sqrt_s));

  const Vec3 shift = 0.5 * g * (omega + (dot(total, omega) * proj) * total);
  PostCollision out;
  out.v_prime = Momentum(0.5 * total + shift);
  out.v_star_prime = Momentum(0.5 * total - shift);

  const double de = g / (2.0 * sqrt_s) * dot(total, omega);
  out.energy_prime = 0.5 * e_total + de;
  out.energy_star_prime = 0.5 * e_total - de;

  out.g_bar = g_bar(v, out.v_prime);
  out.g_tilde = g_tilde(out.v_prime, v_star);
  out.cos_theta = g > 0.0 ? scattering_cos(v, v_star, out.v_prime, out.v_star_prime) : 1.0;
  return out;
}

double scattering_cos(const Momentum& v, const Momentum& v_star, const Momentum& v_prime,
                      const Momentum& v_star_prime) {
  const double g = relative_momentum(v, v_star);
  if (g == 0.0) throw DegeneratePairError("scattering_cos: g(v, v_star) = 0");
  // a0 - b0 = (a - b).(a + b) / (a0 + b0), free of cancellation.
  const auto energy_gap = [](const Momentum& a, const Momentum& b) {
    return dot(a.vec() - b.vec(), a.vec() + b.vec()) / (a.energy() + b.energy());
  };
  const double d0 = energy_gap(v, v_star);
  const double d0p = energy_gap(v_prime, v_star_prime);
  const double c =
      (-d0 * d0p + dot(v.vec() - v_star.vec(), v_prime.vec() - v_star_prime.vec())) / (g * g);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace relcoll
