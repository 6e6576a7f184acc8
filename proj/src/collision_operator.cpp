#include "relcoll/collision_operator.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relcoll/errors.hpp"
#include "relcoll/parallel.hpp"
#include "relcoll/quadrature.hpp"

namespace relcoll {

void AngularGrid::validate() const {
  if (n_mu < 2) throw std::invalid_argument("AngularGrid: n_mu must be >= 2");
  if (n_az < 4) throw std::invalid_argument("AngularGrid: n_az must be >= 4");
}

AngularNodes::AngularNodes(const AngularGrid& grid) {
  grid.validate();
  const QuadratureRule polar = gauss_legendre(grid.n_mu, 0.0, std::numbers::pi / 2.0);
  const double dphi = 2.0 * std::numbers::pi / grid.n_az;
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const double st = std::sin(polar.nodes[i]);
    const double ct = std::cos(polar.nodes[i]);
    for (int j = 0; j < grid.n_az; ++j) {
      const double phi = dphi * j;
      sin_cos.push_back(st * std::cos(phi));
      sin_sin.push_back(st * std::sin(phi));
      cos_t.push_back(ct);
      sin_t.push_back(st);
      measure.push_back(polar.weights[i] * st * dphi);
    }
  }
}

double AngularNodes::sigma0_sum(const ScatteringKernel& kernel) const {
  double total = 0.0;
  for (std::size_t q = 0; q < size(); ++q) total += measure[q] * kernel.c_ang * sin_t[q];
  return total;
}

namespace {

// Per-node data reused across the pair loops.
struct GridNodes {
  std::vector<Vec3> p;
  std::vector<double> p0;

  explicit GridNodes(const DensityField& f) : p(f.size()), p0(f.size()) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      p[i] = f.node(i);
      p0[i] = energy(p[i]);
    }
  }
};

// sum_omega measure * sin(theta) * f(v') h(v'_*) for one pair frame.
inline double angular_gain_sum(const PairFrame& frame, const AngularNodes& nodes,
                               const Interpolator& f, const Interpolator& h) {
  double acc = 0.0;
  const std::size_t n = nodes.size();
  for (std::size_t q = 0; q < n; ++q) {
    const Vec3 vp = frame.post(nodes.sin_cos[q], nodes.sin_sin[q], nodes.cos_t[q]);
    const double fv = f(vp);
    if (fv == 0.0) continue;
    const double hv = h(frame.total - vp);
    acc += nodes.measure[q] * nodes.sin_t[q] * fv * hv;
  }
  return acc;
}

// v_mol * Phi(g) * C = (g sqrt(s) / (2 v0 vs0)) * C_phi g * C.
inline double pair_rate(const PairFrame& frame, double v0, double vs0,
                        const ScatteringKernel& kernel) {
  return frame.g * frame.sqrt_s / (2.0 * v0 * vs0) * kernel.c_phi * frame.g * kernel.c_ang;
}

// Same rate from g^2 and s alone, for loops that need no scattering frame.
inline double pair_rate(const Vec3& v, double v0, const Vec3& vs, double vs0,
                        const ScatteringKernel& kernel) {
  const double g2 = detail::relative_momentum_sq(v, v0, vs, vs0);
  const double s = 2.0 + 2.0 * detail::minkowski_product(v, v0, vs, vs0);
  return g2 * std::sqrt(s) / (2.0 * v0 * vs0) * kernel.c_phi * kernel.c_ang;
}

// Trilinear spreading stencil of a point onto the node lattice. Fails when
// the point is outside the hull of the nodes, where the 8 corners would not
// all exist.
// Two-pair energy projection of an outcome (v', v'_*) onto nodes. With I the
// index sum of the colliding nodes, every candidate pair (l, I - l) carries
// momentum v + v_* exactly; blending the pair anchored at the vertex nearest
// v' with a vertex of the same cell on the other side of v^0 + v_*^0 matches
// the energy as well.
struct Projection {
  std::size_t a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  double r = 0.0;  // weight of (a2, b2)
};

class Projector {
 public:
  explicit Projector(const DensityField& f, std::span<const double> node_energy)
      : origin_(f.coord(0)),
        inv_h_(1.0 / f.spacing()),
        n_(f.n()),
        sy_(f.n()),
        sx_(static_cast<std::size_t>(f.n()) * f.n()),
        e_(node_energy) {
    for (int c = 0; c < 8; ++c) {
      offsets_[c] = static_cast<std::ptrdiff_t>((c >> 2 & 1) * sx_ + (c >> 1 & 1) * sy_ + (c & 1));
    }
  }

  static std::array<int, 3> split(std::size_t idx, int n) {
    const int k = static_cast<int>(idx % n);
    const int j = static_cast<int>((idx / n) % n);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    return {i, j, k};
  }

  // sum: index sum of the colliding nodes; e0: their energy sum.
  bool project(const Vec3& vp, const std::array<int, 3>& sum, double e0, Projection& out) const {
    const double t[3] = {(vp.x - origin_) * inv_h_, (vp.y - origin_) * inv_h_,
                         (vp.z - origin_) * inv_h_};
    int lo[3];
    int near_bits = 0;
    // Bit c of `valid` is set when vertex lo + bits(c) and its partner
    // sum - lo - bits(c) both lie on the grid (bit 2 of c is the x offset).
    unsigned valid = 0xFF;
    constexpr unsigned kLow[3] = {0x0F, 0x33, 0x55};
    for (int d = 0; d < 3; ++d) {
      if (!(t[d] > -0.5 && t[d] < n_ - 0.5)) return false;
      // Shifted truncation is floor / round here since t > -0.5.
      lo[d] = static_cast<int>(t[d] + 1.0) - 1;
      near_bits = near_bits << 1 | (static_cast<int>(t[d] + 0.5) - lo[d]);
    }
    for (int d = 0; d < 3; ++d) {
      const int min_l = std::max(0, sum[d] - (n_ - 1));
      const int max_l = std::min(n_ - 1, sum[d]);
      if (lo[d] >= min_l && lo[d] + 1 <= max_l) continue;
      const bool ok0 = lo[d] >= min_l && lo[d] <= max_l;
      const bool ok1 = lo[d] + 1 >= min_l && lo[d] + 1 <= max_l;
      valid &= (ok0 ? kLow[d] : 0u) | (ok1 ? ~kLow[d] & 0xFFu : 0u);
    }
    if (!(valid >> near_bits & 1u)) return false;
    // Vertex lo + bits(c) pairs with sum - lo - bits(c); both move by the same stride offset.
    const std::ptrdiff_t base_a = (static_cast<std::ptrdiff_t>(lo[0]) * n_ + lo[1]) * n_ + lo[2];
    const std::ptrdiff_t base_b =
        (static_cast<std::ptrdiff_t>(sum[0] - lo[0]) * n_ + (sum[1] - lo[1])) * n_ + (sum[2] - lo[2]);
    const std::ptrdiff_t near_off = offsets_[near_bits];
    out.a1 = static_cast<std::size_t>(base_a + near_off);
    out.b1 = static_cast<std::size_t>(base_b - near_off);
    const double en = e_[out.a1] + e_[out.b1];
    if (en == e0) {
      out.a2 = out.a1;
      out.b2 = out.b1;
      out.r = 0.0;
      return true;
    }
    // Closest pair energy on the far side of e0: minimise sign * e over
    // candidates with sign * e >= sign * e0.
    const double sign = en < e0 ? 1.0 : -1.0;
    const double threshold = sign * e0;
    double best_key = std::numeric_limits<double>::infinity();
    std::ptrdiff_t best_off = near_off;
    valid &= ~(1u << near_bits);
    for (int c = 0; c < 8; ++c) {
      const bool usable = valid >> c & 1u;
      const std::ptrdiff_t off = usable ? offsets_[c] : near_off;  // never read off-grid
      const double key = sign * (e_[base_a + off] + e_[base_b - off]);
      const bool better = usable && key >= threshold && key < best_key;
      best_key = better ? key : best_key;
      best_off = better ? off : best_off;
    }
    if (best_off == near_off) return false;
    const double best = sign * best_key;
    out.a2 = static_cast<std::size_t>(base_a + best_off);
    out.b2 = static_cast<std::size_t>(base_b - best_off);
    out.r = (e0 - en) / (best - en);
    return true;
  }

 private:
  double origin_;
  double inv_h_;
  int n_;
  std::size_t sy_;
  std::size_t sx_;
  std::span<const double> e_;
  std::array<std::ptrdiff_t, 8> offsets_{};
};

void check_inside(const DensityField& f, const Momentum& v, const char* who) {
  if (!f.contains(v.vec())) {
    throw DomainError(std::string(who) + ": momentum outside the grid domain");
  }
}

}  // namespace

double loss_L(const DensityField& f, const ScatteringKernel& kernel, const AngularGrid& ang,
              const Momentum& v) {
  check_inside(f, v, "loss_L");
  const AngularNodes nodes(ang);
  const double ang_sum = nodes.sigma0_sum(kernel) / kernel.c_ang;
  const GridNodes grid(f);
  const double v0 = v.energy();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] == 0.0) continue;
    PairFrame frame;
    if (!frame.build(v.vec(), v0, grid.p[j], grid.p0[j])) continue;
    acc += pair_rate(frame, v0, grid.p0[j], kernel) * f[j];
  }
  return acc * ang_sum * f.cell_volume();
}

double gain_direct(const DensityField& f, const DensityField& h, const ScatteringKernel& kernel,
                   const AngularGrid& ang, const Momentum& v) {
  if (!f.same_grid(h)) throw std::invalid_argument("gain_direct: f and h must share a grid");
  check_inside(f, v, "gain_direct");
  const AngularNodes nodes(ang);
  const GridNodes grid(f);
  const Interpolator fi(f);
  const Interpolator hi(h);
  const double v0 = v.energy();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    PairFrame frame;
    if (!frame.build(v.vec(), v0, grid.p[j], grid.p0[j])) continue;
    acc += pair_rate(frame, v0, grid.p0[j], kernel) * angular_gain_sum(frame, nodes, fi, hi);
  }
  return acc * f.cell_volume();
}

CollisionTerms collision_terms(const DensityField& f, const ScatteringKernel& kernel,
                               const AngularGrid& ang) {
  const AngularNodes nodes(ang);
  const double ang_sum = nodes.sigma0_sum(kernel) / kernel.c_ang;
  const GridNodes grid(f);
  const Interpolator fi(f);
  const std::size_t n = f.size();
  const double vol = f.cell_volume();

  const int workers = max_threads();
  std::vector<std::vector<double>> gain_part(workers, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> loss_part(workers, std::vector<double>(n, 0.0));

#pragma omp parallel
  {
    std::vector<double>& gain = gain_part[thread_id()];
    std::vector<double>& loss = loss_part[thread_id()];
#pragma omp for schedule(static, 1)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        PairFrame frame;
        if (!frame.build(grid.p[i], grid.p0[i], grid.p[j], grid.p0[j])) continue;
        const double rate = pair_rate(frame, grid.p0[i], grid.p0[j], kernel);
        const double w = rate * angular_gain_sum(frame, nodes, fi, fi);
        gain[i] += w;
        gain[j] += w;
        loss[i] += rate * f[j];
        loss[j] += rate * f[i];
      }
    }
  }

  CollisionTerms out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int t = 0; t < workers; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      out.gain[i] += gain_part[t][i];
      out.loss_rate[i] += loss_part[t][i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.gain[i] *= vol;
    out.loss_rate[i] *= vol * ang_sum;
  }
  return out;
}

CollisionTerms collision_terms_projected(const DensityField& f, const ScatteringKernel& kernel,
                                         const AngularGrid& ang) {
  const AngularNodes nodes(ang);
  const GridNodes grid(f);
  const std::size_t n = f.size();
  const double vol = f.cell_volume();
  const Projector proj(f, grid.p0);
  std::vector<double> node_w(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) node_w[q] = nodes.measure[q] * nodes.sin_t[q];
  std::vector<double> log_f(n);
  std::vector<double> inv_f(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_f[i] = f[i] > 0.0 ? std::log(f[i]) : -std::numeric_limits<double>::infinity();
    inv_f[i] = f[i] > 0.0 ? 1.0 / f[i] : 0.0;
  }

  const int workers = max_threads();
  std::vector<std::vector<double>> gain_part(workers, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> loss_part(workers, std::vector<double>(n, 0.0));

#pragma omp parallel
  {
    std::vector<double>& gain = gain_part[thread_id()];
    std::vector<double>& loss = loss_part[thread_id()];
    Projection pr;
#pragma omp for schedule(static, 1)
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = Projector::split(i, f.n());
      for (std::size_t j = i + 1; j < n; ++j) {
        PairFrame frame;
        if (!frame.build(grid.p[i], grid.p0[i], grid.p[j], grid.p0[j])) continue;
        const auto jj = Projector::split(j, f.n());
        const std::array<int, 3> sum{ii[0] + jj[0], ii[1] + jj[1], ii[2] + jj[2]};
        const double e0 = grid.p0[i] + grid.p0[j];
        const double rate = pair_rate(frame, grid.p0[i], grid.p0[j], kernel);
        const double ff = f[i] * f[j];
        double accepted = 0.0;
        double inverse = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
          const Vec3 vp = frame.post(nodes.sin_cos[q], nodes.sin_sin[q], nodes.cos_t[q]);
          if (!proj.project(vp, sum, e0, pr)) continue;
          const double w = rate * node_w[q];
          const double r1 = 1.0 - pr.r;
          accepted += w;
          // Forward: (i, j) -> projected pairs.
          if (ff > 0.0) {
            gain[pr.a1] += r1 * w * ff;
            gain[pr.b1] += r1 * w * ff;
            gain[pr.a2] += pr.r * w * ff;
            gain[pr.b2] += pr.r * w * ff;
          }
          // Inverse: projected pairs -> (i, j) at the geometric blend of their products.
          double log_fp = 0.0;
          if (r1 > 0.0) log_fp += r1 * (log_f[pr.a1] + log_f[pr.b1]);
          if (pr.r > 0.0) log_fp += pr.r * (log_f[pr.a2] + log_f[pr.b2]);
          const double fp = std::exp(log_fp);
          if (fp == 0.0) continue;
          inverse += w * fp;
          loss[pr.a1] += r1 * w * fp * inv_f[pr.a1];
          loss[pr.b1] += r1 * w * fp * inv_f[pr.b1];
          loss[pr.a2] += pr.r * w * fp * inv_f[pr.a2];
          loss[pr.b2] += pr.r * w * fp * inv_f[pr.b2];
        }
        gain[i] += inverse;
        gain[j] += inverse;
        loss[i] += accepted * f[j];
        loss[j] += accepted * f[i];
      }
    }
  }

  CollisionTerms out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int t = 0; t < workers; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      out.gain[i] += gain_part[t][i];
      out.loss_rate[i] += loss_part[t][i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.gain[i] *= vol;
    out.loss_rate[i] *= vol;
  }
  return out;
}

CollisionTerms collision_terms_at(const DensityField& f, const ScatteringKernel& kernel,
                                  const AngularGrid& ang, std::span<const std::size_t> which) {
  const AngularNodes nodes(ang);
  const double ang_sum = nodes.sigma0_sum(kernel) / kernel.c_ang;
  const GridNodes grid(f);
  const Interpolator fi(f);
  const double vol = f.cell_volume();
  for (std::size_t i : which) {
    if (i >= f.size()) throw std::out_of_range("collision_terms_at: node index out of range");
  }
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(which.size());
  CollisionTerms out{std::vector<double>(which.size(), 0.0),
                     std::vector<double>(which.size(), 0.0)};

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t a = 0; a < m; ++a) {
    const std::size_t i = which[a];
    double gain = 0.0;
    double loss = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      PairFrame frame;
      if (!frame.build(grid.p[i], grid.p0[i], grid.p[j], grid.p0[j])) continue;
      const double rate = pair_rate(frame, grid.p0[i], grid.p0[j], kernel);
      gain += rate * angular_gain_sum(frame, nodes, fi, fi);
      loss += rate * f[j];
    }
    out.gain[a] = gain * vol;
    out.loss_rate[a] = loss * vol * ang_sum;
  }
  return out;
}

std::vector<double> loss_rates(const DensityField& f, const ScatteringKernel& kernel,
                               const AngularGrid& ang) {
  const AngularNodes nodes(ang);
  const double ang_sum = nodes.sigma0_sum(kernel) / kernel.c_ang;
  const GridNodes grid(f);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
  std::vector<double> out(f.size(), 0.0);
  const double scale = ang_sum * f.cell_volume();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (f[j] == 0.0) continue;
      acc += pair_rate(grid.p[i], grid.p0[i], grid.p[j], grid.p0[j], kernel) * f[j];
    }
    out[i] = acc * scale;
  }
  return out;
}

std::vector<double> collision_Q(const DensityField& f, const ScatteringKernel& kernel,
                                const AngularGrid& ang) {
  const CollisionTerms terms = collision_terms(f, kernel, ang);
  std::vector<double> q(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) q[i] = terms.gain[i] - f[i] * terms.loss_rate[i];
  return q;
}

}  // namespace relcoll
