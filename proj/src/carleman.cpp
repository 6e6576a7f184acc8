#include "relcoll/carleman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "relcoll/errors.hpp"
#include "relcoll/parallel.hpp"
#include "relcoll/quadrature.hpp"
#include "relcoll/summation.hpp"

namespace relcoll {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Geometry of the hypersurface for one (v, v') pair.
struct Hypersurface {
  Vec3 v;
  double v0 = 1.0;
  double gap0 = 0.0;  // v^0 - v'^0
  double dist = 0.0;  // |v - v'|
  double gbar = 0.0;
  double gbar2 = 0.0;
  Vec3 e1, e2, e3;
  RadialWindow window;

  bool build(const Vec3& v_in, double v0_in, const Vec3& vp, double vp0, double r_max) {
    v = v_in;
    v0 = v0_in;
    const Vec3 d = v_in - vp;
    dist = norm(d);
    gbar2 = detail::relative_momentum_sq(v_in, v0_in, vp, vp0);
    gbar = std::sqrt(gbar2);
    if (dist == 0.0 || gbar == 0.0) return false;
    gap0 = dot(d, v_in + vp) / (v0_in + vp0);
    e3 = (1.0 / dist) * d;
    e1 = orthonormal_to(e3);
    e2 = cross(e3, e1);

    // |cos phi*| <= 1  <=>  r^0 >= x_plus (positive root of the squared
    // condition); u-factor  <=>  r^0 >= 1 - gap0.
    const double x_plus =
        0.5 * (-gap0 + std::sqrt(gap0 * gap0 + 4.0 * gap0 * gap0 / gbar2 + gbar2 + 4.0));
    const double x_lo = std::max({x_plus, 1.0 - gap0, 1.0});
    window.r_lo = std::sqrt(std::max(x_lo * x_lo - 1.0, 0.0));
    window.r_hi = r_max;
    return true;
  }

  double cos_phi(double r) const {
    const double r0 = std::sqrt(1.0 + r * r);
    return (2.0 * r0 * gap0 - gbar2) / (2.0 * r * dist);
  }

  double r_of(double tau) const {
    return window.r_lo + (window.r_hi - window.r_lo) * tau * tau;
  }

  Vec3 point(double r, double cp, double cpsi, double spsi) const {
    const double sp = std::sqrt(std::max(0.0, (1.0 - cp) * (1.0 + cp)));
    return r * (sp * (cpsi * e1 + spsi * e2) + cp * e3);
  }

  Vec3 point_at(double tau, double cpsi, double spsi) const {
    const double r = r_of(tau);
    if (r == 0.0) return {};
    return point(r, std::clamp(cos_phi(r), -1.0, 1.0), cpsi, spsi);
  }

  // d pi weight per unit tau and unit psi.
  double jacobian(double tau) const {
    const double r = r_of(tau);
    return 2.0 * (window.r_hi - window.r_lo) * tau * r * gbar / dist;
  }

  // >= 0 exactly where g(v', v_*) >= gbar, i.e. cos(theta) >= 0.
  double cutoff(const Vec3& vs) const {
    return detail::minkowski_product(v, v0, vs, energy(vs)) - 1.0 - gbar2;
  }
};

struct TauRule {
  QuadratureRule unit;  // Gauss-Legendre on [0, 1]
  explicit TauRule(int n) : unit(gauss_legendre(n, 0.0, 1.0)) {}
};

// Root of f on [a, b] given a sign change, by the Illinois variant of false
// position with a bisection fallback; stops when the bracket is below 1e-13.
template <class F>
double find_root(F&& f, double a, double fa, double b, double fb) {
  int side = 0;
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    double x = (a * fb - b * fa) / (fb - fa);
    if (!(x > a && x < b)) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx >= 0.0) == (fa >= 0.0)) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (std::abs(fx) < 1e-15 * (1.0 + std::abs(fa) + std::abs(fb))) return x;
  }
  return 0.5 * (a + b);
}

// Calls fn(weight, v_star) for every quadrature point on the hypersurface.
// With split_cutoff, each psi line is cut at the roots of the cutoff
// indicator and only the supported pieces are integrated.
template <class Fn>
void integrate_hypersurface(const Hypersurface& hs, const TauRule& rule, int n_psi,
                            bool split_cutoff, Fn&& fn) {
  if (hs.window.empty()) return;
  const std::size_t nt = rule.unit.size();
  const double dpsi = kTwoPi / n_psi;

  std::vector<double> samples_tau;
  std::vector<double> samples_c;
  std::vector<double> cuts;

  for (int k = 0; k < n_psi; ++k) {
    const double psi = dpsi * k;
    const double cpsi = std::cos(psi);
    const double spsi = std::sin(psi);

    const auto emit = [&](double a, double b) {
      const double len = b - a;
      for (std::size_t q = 0; q < nt; ++q) {
        const double tau = a + len * rule.unit.nodes[q];
        const double w = rule.unit.weights[q] * len * hs.jacobian(tau) * dpsi;
        if (w == 0.0) continue;
        fn(w, hs.point_at(tau, cpsi, spsi));
      }
    };

    if (!split_cutoff) {
      emit(0.0, 1.0);
      continue;
    }

    samples_tau.clear();
    samples_c.clear();
    samples_tau.push_back(0.0);
    for (std::size_t q = 0; q < nt; ++q) samples_tau.push_back(rule.unit.nodes[q]);
    samples_tau.push_back(1.0);
    bool any_pos = false;
    bool any_neg = false;
    for (double t : samples_tau) {
      const double c = hs.cutoff(hs.point_at(t, cpsi, spsi));
      samples_c.push_back(c);
      (c >= 0.0 ? any_pos : any_neg) = true;
    }
    if (!any_pos) continue;
    if (!any_neg) {
      emit(0.0, 1.0);
      continue;
    }

    cuts.clear();
    cuts.push_back(0.0);
    for (std::size_t q = 0; q + 1 < samples_tau.size(); ++q) {
      if ((samples_c[q] >= 0.0) == (samples_c[q + 1] >= 0.0)) continue;
      cuts.push_back(find_root(
          [&](double t) { return hs.cutoff(hs.point_at(t, cpsi, spsi)); }, samples_tau[q],
          samples_c[q], samples_tau[q + 1], samples_c[q + 1]));
    }
    cuts.push_back(1.0);
    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
      const double a = cuts[q];
      const double b = cuts[q + 1];
      if (b <= a) continue;
      if (hs.cutoff(hs.point_at(0.5 * (a + b), cpsi, spsi)) >= 0.0) emit(a, b);
    }
  }
}

Hypersurface make_hypersurface(const Momentum& v, const Momentum& v_prime, double r_max) {
  Hypersurface hs;
  if (!hs.build(v.vec(), v.energy(), v_prime.vec(), v_prime.energy(), r_max)) {
    throw DegeneratePairError("hypersurface: v == v' (gbar = 0)");
  }
  return hs;
}

struct NodeTable {
  std::vector<Vec3> p;
  std::vector<double> p0;
  double cell_volume = 0.0;

  explicit NodeTable(const WeakFormGrid& grid) {
    const DensityField shape(grid.half_width, grid.n);
    cell_volume = shape.cell_volume();
    p.resize(shape.size());
    p0.resize(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
      p[i] = shape.node(i);
      p0[i] = energy(p[i]);
    }
  }
};

// Per-node values of the outer factors a(v) and c(v') of separable tests;
// general tests get 1 so the product stays a neutral multiplier.
struct FactorTables {
  std::vector<char> separable;  // per test
  std::vector<double> on_v;     // [t * n + i]
  std::vector<double> on_vs;
  std::vector<double> on_vp;
  bool all_separable = true;

  FactorTables(std::span<const TestFunction> tests, const NodeTable& nodes) {
    const std::size_t n = nodes.p.size();
    const std::size_t m = tests.size();
    separable.resize(m);
    on_v.assign(m * n, 1.0);
    on_vs.assign(m * n, 1.0);
    on_vp.assign(m * n, 1.0);
    for (std::size_t t = 0; t < m; ++t) {
      separable[t] = tests[t].separable();
      if (!separable[t]) {
        all_separable = false;
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        on_v[t * n + i] = tests[t].on_v(nodes.p[i]);
        on_vs[t * n + i] = tests[t].on_v_star(nodes.p[i]);
        on_vp[t * n + i] = tests[t].on_v_prime(nodes.p[i]);
      }
    }
  }
};

// Directions used to average the inner Carleman integral over the v = v'
// cell: 6 faces and 8 corners of the cube.
std::vector<Vec3> diagonal_directions() {
  std::vector<Vec3> dirs = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const double c = 1.0 / std::sqrt(3.0);
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) dirs.push_back({sx * c, sy * c, sz * c});
    }
  }
  return dirs;
}

}  // namespace

std::optional<double> hypersurface_cos(double r, const Momentum& v, const Momentum& v_prime) {
  const Hypersurface hs = make_hypersurface(v, v_prime, std::numeric_limits<double>::max());
  if (!(r > 0.0)) return std::nullopt;
  const double c = hs.cos_phi(r);
  if (std::abs(c) > 1.0) return std::nullopt;
  const double r0 = std::sqrt(1.0 + r * r);
  if (!(v.energy() + r0 - v_prime.energy() >= 1.0)) return std::nullopt;
  return c;
}

double delta_residual(const Momentum& v, const Momentum& v_prime, const Vec3& v_star) {
  const double gbar = relative_momentum(v, v_prime);
  if (gbar == 0.0) throw DegeneratePairError("delta_residual: gbar = 0");
  const Vec3 d = v.vec() - v_prime.vec();
  const double gap0 = dot(d, v.vec() + v_prime.vec()) / (v.energy() + v_prime.energy());
  return 0.5 * gbar + (-energy(v_star) * gap0 + dot(v_star, d)) / gbar;
}

bool energy_admissible(const Momentum& v, const Momentum& v_prime, const Vec3& v_star) {
  return v.energy() + energy(v_star) - v_prime.energy() >= 1.0;
}

RadialWindow admissible_window(const Momentum& v, const Momentum& v_prime, double r_max) {
  return make_hypersurface(v, v_prime, r_max).window;
}

std::vector<HypersurfacePoint> hypersurface_points(const Momentum& v, const Momentum& v_prime,
                                                   int n_r, int n_psi, double r_max) {
  if (n_r < 1 || n_psi < 1) throw std::invalid_argument("hypersurface_points: bad node counts");
  const Hypersurface hs = make_hypersurface(v, v_prime, r_max);
  const TauRule rule(n_r);
  std::vector<HypersurfacePoint> out;
  if (hs.window.empty()) return out;
  const double dpsi = kTwoPi / n_psi;
  for (int k = 0; k < n_psi; ++k) {
    const double psi = dpsi * k;
    for (std::size_t q = 0; q < rule.unit.size(); ++q) {
      const double tau = rule.unit.nodes[q];
      const double r = hs.r_of(tau);
      if (r == 0.0) continue;
      HypersurfacePoint pt;
      pt.r = r;
      pt.cos_phi_star = std::clamp(hs.cos_phi(r), -1.0, 1.0);
      pt.psi = psi;
      pt.v_star = Momentum(hs.point(r, pt.cos_phi_star, std::cos(psi), std::sin(psi)));
      pt.weight = rule.unit.weights[q] * hs.jacobian(tau) * dpsi;
      out.push_back(pt);
    }
  }
  return out;
}

double hypersurface_integral(const std::function<double(const Momentum&)>& F, const Momentum& v,
                             const Momentum& v_prime, int n_r, int n_psi, double r_max) {
  if (n_r < 1 || n_psi < 1) throw std::invalid_argument("hypersurface_integral: bad node counts");
  const Hypersurface hs = make_hypersurface(v, v_prime, r_max);
  const TauRule rule(n_r);
  double acc = 0.0;
  integrate_hypersurface(hs, rule, n_psi, false,
                         [&](double w, const Vec3& vs) { acc += w * F(Momentum(vs)); });
  return acc;
}

TestFunction TestFunction::product(Factor on_v, Factor on_v_star, Factor on_v_prime) {
  if (!on_v || !on_v_star || !on_v_prime) {
    throw std::invalid_argument("TestFunction::product: empty factor");
  }
  TestFunction f;
  f.on_v_ = std::move(on_v);
  f.on_v_star_ = std::move(on_v_star);
  f.on_v_prime_ = std::move(on_v_prime);
  return f;
}

double WeakFormGrid::r_max() const { return std::sqrt(3.0) * half_width + 4.0; }

void WeakFormGrid::validate() const {
  if (!(half_width > 0.0)) throw std::invalid_argument("WeakFormGrid: half_width must be > 0");
  if (n < 1) throw std::invalid_argument("WeakFormGrid: n must be >= 1");
  if (n_r < 1 || n_psi < 1) throw std::invalid_argument("WeakFormGrid: n_r, n_psi must be >= 1");
  angular.validate();
}

std::vector<double> weak_form_direct(std::span<const TestFunction> tests, const WeakFormGrid& grid,
                                     const ScatteringKernel& kernel) {
  grid.validate();
  const NodeTable nodes(grid);
  const AngularNodes ang(grid.angular);
  const FactorTables factors(tests, nodes);
  const std::size_t n = nodes.p.size();
  const std::size_t m = tests.size();
  std::vector<double> per_node(n * m, 0.0);
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel
  {
    std::vector<double> acc(m);
    std::vector<double> inner(m);
    std::vector<double> outer(m);
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < ni; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const Vec3& v = nodes.p[i];
      for (std::size_t j = 0; j < n; ++j) {
        bool live = !factors.all_separable;
        for (std::size_t t = 0; t < m; ++t) {
          outer[t] = factors.on_v[t * n + i] * factors.on_vs[t * n + j];
          live = live || outer[t] != 0.0;
        }
        if (!live) continue;
        PairFrame frame;
        if (!frame.build(v, nodes.p0[i], nodes.p[j], nodes.p0[j])) continue;
        // (g sqrt(s) / (v0 vs0)) * C_phi g * C; sin(theta) comes from the node.
        const double rate = frame.g * frame.sqrt_s / (nodes.p0[i] * nodes.p0[j]) * kernel.c_phi *
                            frame.g * kernel.c_ang;
        std::fill(inner.begin(), inner.end(), 0.0);
        for (std::size_t q = 0; q < ang.size(); ++q) {
          const Vec3 vp = frame.post(ang.sin_cos[q], ang.sin_sin[q], ang.cos_t[q]);
          const double w = ang.measure[q] * ang.sin_t[q];
          for (std::size_t t = 0; t < m; ++t) {
            if (outer[t] == 0.0) continue;
            inner[t] += w * (factors.separable[t] ? tests[t].on_v_prime(vp)
                                                  : tests[t](v, nodes.p[j], vp));
          }
        }
        for (std::size_t t = 0; t < m; ++t) acc[t] += rate * outer[t] * inner[t];
      }
      for (std::size_t t = 0; t < m; ++t) per_node[t * n + i] = acc[t];
    }
  }

  const double vol2 = nodes.cell_volume * nodes.cell_volume;
  std::vector<double> out(m);
  for (std::size_t t = 0; t < m; ++t) {
    out[t] = vol2 * pairwise_sum(std::span<const double>(per_node).subspan(t * n, n));
  }
  return out;
}

std::vector<double> weak_form_carleman(std::span<const TestFunction> tests,
                                       const WeakFormGrid& grid, const ScatteringKernel& kernel) {
  grid.validate();
  const NodeTable nodes(grid);
  const TauRule rule(grid.n_r);
  const FactorTables factors(tests, nodes);
  const double r_max = grid.r_max();
  const std::size_t n = nodes.p.size();
  const std::size_t m = tests.size();
  std::vector<double> per_node(n * m, 0.0);
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);
  const std::vector<Vec3> diag_dirs = diagonal_directions();
  const double diag_eps = 1e-4 * 2.0 * grid.half_width / grid.n;
  const double weight_scale = 2.0 * kernel.c_phi * kernel.c_ang;

#pragma omp parallel
  {
    std::vector<double> acc(m);
    std::vector<double> inner(m);
    Hypersurface hs;

    std::vector<double> outer(m);

    // Inner hypersurface integral for one (v, v') into `inner`, with the
    // outer factors of separable tests already in `outer`.
    const auto pair_integral = [&](const Vec3& v, double v0, const Vec3& vp, double vp0) {
      std::fill(inner.begin(), inner.end(), 0.0);
      bool live = !factors.all_separable;
      for (std::size_t t = 0; t < m; ++t) live = live || outer[t] != 0.0;
      if (!live) return;
      if (!hs.build(v, v0, vp, vp0, r_max)) return;
      integrate_hypersurface(hs, rule, grid.n_psi, true, [&](double w, const Vec3& vs) {
        const double vs0 = energy(vs);
        const double g2 = 2.0 * (detail::minkowski_product(v, v0, vs, vs0) - 1.0);
        if (!(g2 > 0.0)) return;
        const double gt2 = g2 - hs.gbar2;
        if (gt2 < hs.gbar2) return;
        // (s / 2) * carleman_weight / v_*^0
        const double cw = weight_scale * std::sqrt(gt2 / g2);
        const double factor = w * 0.5 * (g2 + 4.0) * cw / vs0;
        for (std::size_t t = 0; t < m; ++t) {
          if (outer[t] == 0.0) continue;
          inner[t] += factor * (factors.separable[t] ? tests[t].on_v_star(vs) : tests[t](v, vs, vp));
        }
      });
      for (std::size_t t = 0; t < m; ++t) inner[t] *= outer[t];
    };

#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < ni; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const Vec3& v = nodes.p[i];
      const double v0 = nodes.p0[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (static_cast<std::ptrdiff_t>(j) == i) continue;
        for (std::size_t t = 0; t < m; ++t) {
          outer[t] = factors.on_v[t * n + i] * factors.on_vp[t * n + j];
        }
        pair_integral(v, v0, nodes.p[j], nodes.p0[j]);
        for (std::size_t t = 0; t < m; ++t) acc[t] += inner[t] / nodes.p0[j];
      }
      if (grid.diagonal_limit) {
        std::vector<double> diag(m, 0.0);
        for (const Vec3& dir : diag_dirs) {
          const Vec3 vp = v + diag_eps * dir;
          for (std::size_t t = 0; t < m; ++t) {
            outer[t] = factors.separable[t] ? tests[t].on_v(v) * tests[t].on_v_prime(vp) : 1.0;
          }
          pair_integral(v, v0, vp, energy(vp));
          for (std::size_t t = 0; t < m; ++t) diag[t] += inner[t];
        }
        for (std::size_t t = 0; t < m; ++t) acc[t] += diag[t] / (diag_dirs.size() * v0);
      }
      for (std::size_t t = 0; t < m; ++t) per_node[t * n + i] = acc[t] / v0;
    }
  }

  const double vol2 = nodes.cell_volume * nodes.cell_volume;
  std::vector<double> out(m);
  for (std::size_t t = 0; t < m; ++t) {
    out[t] = vol2 * pairwise_sum(std::span<const double>(per_node).subspan(t * n, n));
  }
  return out;
}

double weak_form_direct(const TestFunction& test, const WeakFormGrid& grid,
                        const ScatteringKernel& kernel) {
  return weak_form_direct(std::span<const TestFunction>(&test, 1), grid, kernel).front();
}

double weak_form_carleman(const TestFunction& test, const WeakFormGrid& grid,
                          const ScatteringKernel& kernel) {
  return weak_form_carleman(std::span<const TestFunction>(&test, 1), grid, kernel).front();
}

std::vector<NamedTestFunction> standard_test_battery(double half_width) {
  const auto gauss = [](const Vec3& x, double a) { return std::exp(-a * norm2(x)); };
  // Smooth bump with compact support in the ball of radius `radius`.
  const auto bump = [](const Vec3& x, double radius) {
    const double q = norm2(x) / (radius * radius);
    return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
  };
  const double box = 0.25 * half_width;

  const auto g = [gauss](double a, Vec3 shift = {}) {
    return [gauss, a, shift](const Vec3& x) { return gauss(x - shift, a); };
  };
  const auto ellipsoid = [](double ax, double ay, double az) {
    return [ax, ay, az](const Vec3& x) {
      return std::exp(-(x.x * x.x / ax + x.y * x.y / ay + x.z * x.z / az));
    };
  };
  const auto with_energy = [](TestFunction::Factor f) {
    return [f](const Vec3& x) { return energy(x) * f(x); };
  };
  const auto ball = [bump](double radius) {
    return [bump, radius](const Vec3& x) { return bump(x, radius); };
  };
  const auto cell = [box](const Vec3& x) {
    return std::abs(x.x) < box && std::abs(x.y) < box && std::abs(x.z) < box ? 1.0 : 0.0;
  };
  const Vec3 a{0.8, 0.0, 0.0};
  const Vec3 b{0.0, 0.6, -0.3};
  const double radius = 0.6 * half_width;

  std::vector<NamedTestFunction> out;
  out.push_back({"gaussian_product", TestFunction::product(g(1.0), g(1.0), g(1.0))});
  out.push_back({"shifted_gaussians", TestFunction::product(g(1.0, a), g(1.2, -1.0 * a), g(0.9, b))});
  out.push_back({"anisotropic_bump",
                 TestFunction::product(ellipsoid(1.5, 0.6, 0.9), ellipsoid(0.7, 1.4, 0.8),
                                       ellipsoid(0.9, 0.9, 1.6))});
  out.push_back({"cell_indicator", TestFunction::product(cell, g(1.0), g(0.8))});
  out.push_back({"energy_weighted",
                 TestFunction::product(g(1.1), with_energy(g(0.9)), with_energy(g(1.2)))});
  out.push_back({"compact_bump", TestFunction::product(ball(radius), ball(radius), ball(radius))});
  return out;
}

EquivalenceReport compare_representations(std::span<const NamedTestFunction> battery,
                                          const WeakFormGrid& grid,
                                          const ScatteringKernel& kernel) {
  std::vector<TestFunction> fns;
  EquivalenceReport rep;
  for (const auto& t : battery) {
    fns.push_back(t.fn);
    rep.names.push_back(t.name);
  }
  rep.direct = weak_form_direct(fns, grid, kernel);
  rep.carleman = weak_form_carleman(fns, grid, kernel);
  double sum = 0.0;
  for (std::size_t t = 0; t < fns.size(); ++t) {
    rep.ratio.push_back(rep.direct[t] / rep.carleman[t]);
    sum += rep.ratio.back();
  }
  if (rep.ratio.empty()) return rep;
  rep.kappa = sum / rep.ratio.size();
  double var = 0.0;
  for (double r : rep.ratio) {
    var += (r - rep.kappa) * (r - rep.kappa);
    rep.max_pair_deviation = std::max(rep.max_pair_deviation, std::abs(r / rep.kappa - 1.0));
  }
  rep.coefficient_of_variation = std::sqrt(var / rep.ratio.size()) / std::abs(rep.kappa);
  return rep;
}

}  // namespace relcoll
