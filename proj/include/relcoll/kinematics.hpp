#pragma once

// Two-body relativistic collision kinematics in the centre-of-momentum
// parameterisation. Natural units: c = 1, rest mass = 1.

#include <cmath>

#include "relcoll/vec3.hpp"

namespace relcoll {

/// On-shell energy v^0 = sqrt(1 + |v|^2).
inline double energy(const Vec3& v) { return std::sqrt(1.0 + norm2(v)); }

/// Momentum 3-vector with finite components.
class Momentum {
 public:
  constexpr Momentum() = default;
  Momentum(double x, double y, double z);
  explicit Momentum(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  double energy() const { return relcoll::energy(v_); }

 private:
  Vec3 v_{};
};

double energy(const Momentum& v);

/// g = sqrt(-(v0 - vs0)^2 + |v - vs|^2), evaluated without cancellation.
double relative_momentum(const Momentum& v, const Momentum& v_star);

/// s = (v0 + vs0)^2 - |v + vs|^2. Equals g^2 + 4.
double s_invariant(const Momentum& v, const Momentum& v_star);

/// Moller velocity from the velocity-difference formula. Equals
/// g sqrt(s) / (2 v0 vs0).
double moller_velocity(const Momentum& v, const Momentum& v_star);

/// g(v, v') and g(v', v_*): the same formula applied to the stated pair.
double g_bar(const Momentum& v, const Momentum& v_prime);
double g_tilde(const Momentum& v_prime, const Momentum& v_star);

struct CollisionPair {
  Momentum v;
  Momentum v_star;
  double g = 0.0;
  double s = 4.0;
  double gamma = 1.0;

  static CollisionPair make(const Momentum& v, const Momentum& v_star);
};

struct PostCollision {
  Momentum v_prime;
  Momentum v_star_prime;
  double cos_theta = 1.0;
  double g_bar = 0.0;
  double g_tilde = 0.0;
  // Closed-form post-collisional energies (independent of energy(v')).
  double energy_prime = 1.0;
  double energy_star_prime = 1.0;
};

/// Post-collisional momenta for scattering direction `omega` (unit vector,
/// tolerance 1e-12). Throws std::invalid_argument for non-unit omega.
PostCollision post_collision(const Momentum& v, const Momentum& v_star, const Vec3& omega);

/// cos(theta) from the Minkowski product of relative four-momenta, clamped to
/// [-1, 1]. Throws DegeneratePairError when g(v, v_star) == 0.
double scattering_cos(const Momentum& v, const Momentum& v_star, const Momentum& v_prime,
                      const Momentum& v_star_prime);

/// Direction of v in the centre-of-momentum frame of (v, v_star); the polar
/// axis for which cos(theta) = axis . omega. Throws DegeneratePairError at g = 0.
Vec3 cm_direction(const Momentum& v, const Momentum& v_star);

namespace detail {

// v0 vs0 - v.vs, which is >= 1, computed without cancellation.
inline double minkowski_product(const Vec3& a, double a0, const Vec3& b, double b0) {
  const double prod = a0 * b0;
  const double d = dot(a, b);
  if (d <= 0.0) return prod - d;
  const Vec3 cr = cross(a, b);
  return (1.0 + norm2(a) + norm2(b) + norm2(cr)) / (prod + d);
}

inline double relative_momentum_sq(const Vec3& a, double a0, const Vec3& b, double b0) {
  const Vec3 d = a - b;
  const Vec3 p = a + b;
  const double e = a0 + b0;
  const double de = dot(d, p) / e;  // = a0 - b0
  const double g2 = norm2(d) - de * de;
  return g2 > 0.0 ? g2 : 0.0;
}

}  // namespace detail

/// Everything the collision loops need about one ordered pair. Built once
/// per (v, v_*) and reused across the angular nodes.
struct PairFrame {
  Vec3 half_total;  // (v + v_*) / 2
  Vec3 total;       // v + v_*
  double e_total = 2.0;
  double s = 4.0;
  double sqrt_s = 2.0;
  double g = 0.0;
  Vec3 axis;  // centre-of-momentum direction of v
  Vec3 e1;
  Vec3 e2;
  // Images of (e1, e2, axis) under (g/2)(I + P P^T / (sqrt(s)(E + sqrt(s)))).
  Vec3 a1;
  Vec3 a2;
  Vec3 a3;

  /// Returns false when g == 0 (no frame exists; the kernel vanishes there).
  bool build(const Vec3& v, double v0, const Vec3& vs, double vs0);

  /// v' for the scattering direction sin(t)cos(p) e1 + sin(t)sin(p) e2 + cos(t) axis.
  Vec3 post(double sin_t_cos_p, double sin_t_sin_p, double cos_t) const {
    return half_total + sin_t_cos_p * a1 + sin_t_sin_p * a2 + cos_t * a3;
  }
};

}  // namespace relcoll
