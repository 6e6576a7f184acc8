#include "relcoll/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "relcoll/collision_operator.hpp"
#include "relcoll/kinematics.hpp"

namespace relcoll {

std::vector<KinematicsReport::Check> KinematicsReport::checks() const {
  const auto c = [](std::string name, double value, double tol) {
    return Check{std::move(name), value, tol, value <= tol};
  };
  return {
      c("momentum_conservation", momentum_conservation, 1e-10),
      c("energy_conservation", energy_conservation, 1e-10),
      c("g_invariance", g_invariance, 1e-10),
      c("pythagorean", pythagorean, 1e-9),
      c("half_angle", half_angle, 1e-9),
      c("cos_identity", cos_identity, 1e-10),
      c("on_shell_energy", on_shell, 1e-10),
      c("s_identity", s_identity, 1e-12),
      c("moller_identity", moller, 1e-10),
      Check{"moller_below_2", moller_max, 2.0, moller_max < 2.0},
      c("coercive_violations", static_cast<double>(coercive_violations), 0.0),
      c("bound_violations", static_cast<double>(bound_violations), 0.0),
  };
}

bool KinematicsReport::passed() const {
  const auto all = checks();
  return std::all_of(all.begin(), all.end(), [](const Check& c) { return c.pass; });
}

KinematicsReport verify_kinematics(const KinematicsEnsembleOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("verify_kinematics: samples must be >= 1");
  if (!(opts.component_bound > 0.0)) {
    throw std::invalid_argument("verify_kinematics: component_bound must be > 0");
  }
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> comp(-opts.component_bound, opts.component_bound);
  std::normal_distribution<double> gauss(0.0, 1.0);

  KinematicsReport r;
  r.samples = opts.samples;
  const auto upd = [](double& worst, double x) { worst = std::max(worst, x); };
  for (std::int64_t n = 0; n < opts.samples; ++n) {
    const Momentum v(comp(rng), comp(rng), comp(rng));
    const Momentum vs(comp(rng), comp(rng), comp(rng));
    Vec3 w{gauss(rng), gauss(rng), gauss(rng)};
    w = (1.0 / norm(w)) * w;

    const double v0 = v.energy();
    const double vs0 = vs.energy();
    const double g = relative_momentum(v, vs);
    if (g == 0.0) continue;
    const double s = s_invariant(v, vs);
    const PostCollision pc = post_collision(v, vs, w);
    const Momentum& vp = pc.v_prime;
    const Momentum& vsp = pc.v_star_prime;

    const Vec3 dp = v.vec() + vs.vec() - vp.vec() - vsp.vec();
    upd(r.momentum_conservation, std::max({std::abs(dp.x), std::abs(dp.y), std::abs(dp.z)}));
    upd(r.energy_conservation, std::abs(v0 + vs0 - vp.energy() - vsp.energy()));
    upd(r.g_invariance, std::abs(relative_momentum(vp, vsp) - g) / g);

    const double g2 = g * g;
    const double gb = pc.g_bar;
    const double gt = pc.g_tilde;
    upd(r.pythagorean, std::abs(g2 - gb * gb - gt * gt) / g2);
    const double c = pc.cos_theta;
    upd(r.half_angle, std::abs(std::sqrt(std::max(0.0, 0.5 * (1.0 - c))) - gb / g));
    upd(r.cos_identity, std::abs(c - (gt * gt - gb * gb) / g2));
    upd(r.on_shell, std::max(std::abs(vp.energy() - pc.energy_prime),
                             std::abs(vsp.energy() - pc.energy_star_prime)));
    upd(r.s_identity, std::abs(s - g2 - 4.0));

    const double vm = moller_velocity(v, vs);
    const double gs = g * std::sqrt(s);
    upd(r.moller, std::abs(2.0 * vm * v0 * vs0 - gs) / gs);
    upd(r.moller_max, vm);

    const double dist = norm(v.vec() - vs.vec());
    const double slack = 1e-12 * std::max(1.0, dist);
    if (dist / std::sqrt(v0 * vs0) > g + slack || g > dist + slack) ++r.coercive_violations;
    const double gamma = (v0 + vs0) / std::sqrt(s);
    if (!(g2 < gs) || gs > 4.0 * v0 * vs0 || gamma < 1.0 - 1e-15) ++r.bound_violations;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double max_abs_Q_octahedral(const DensityField& f, const ScatteringKernel& kernel,
                            const AngularGrid& ang) {
  const int n = f.n();
  const auto mirror = [n](int i) { return n - 1 - i; };
  const auto at = [&f](int i, int j, int k) { return f[f.index(i, j, k)]; };
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) scale = std::max(scale, std::abs(f[i]));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double ref = at(i, j, k);
        const double images[] = {at(mirror(i), j, k), at(i, mirror(j), k), at(i, j, mirror(k)),
                                 at(j, i, k), at(i, k, j)};
        for (double x : images) {
          if (std::abs(x - ref) > 1e-12 * scale) {
            throw std::invalid_argument("max_abs_Q_octahedral: field is not cube-symmetric");
          }
        }
      }
    }
  }
  std::vector<std::size_t> wedge;
  const int lo = n / 2;
  for (int i = lo; i < n; ++i) {
    for (int j = lo; j <= i; ++j) {
      for (int k = lo; k <= j; ++k) wedge.push_back(f.index(i, j, k));
    }
  }
  const CollisionTerms terms = collision_terms_at(f, kernel, ang, wedge);
  double out = 0.0;
  for (std::size_t m = 0; m < wedge.size(); ++m) {
    out = std::max(out, std::abs(terms.gain[m] - f[wedge[m]] * terms.loss_rate[m]));
  }
  return out;
}

}  // namespace relcoll
