#include "relcoll/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "relcoll/kinematics.hpp"
#include "relcoll/summation.hpp"

namespace relcoll {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_branch(double p, Branch branch, const char* fn) {
  require(p > 1.0 && std::isfinite(p), fn);
  if (branch == Branch::high) require(p > 3.0, fn);
}

}  // namespace

double lp_norm(const DensityField& f, double p, double k) {
  require(p >= 1.0 && std::isfinite(p), "lp_norm: p must be >= 1");
  require(std::isfinite(k), "lp_norm: k must be finite");
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    const double w = k == 0.0 ? 1.0 : std::pow(energy(f.node(i)), k);
    terms[i] = a == 0.0 ? 0.0 : w * (p == 1.0 ? a : std::pow(a, p));
  }
  const double sum = pairwise_sum(terms) * f.cell_volume();
  return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
}

double entropy(const DensityField& f) {
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f[i];
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("entropy: node " + std::to_string(i) +
                                  " is negative or non-finite");
    }
    terms[i] = x > 0.0 ? x * std::log(x) : 0.0;
  }
  return pairwise_sum(terms) * f.cell_volume();
}

Moments moments(const DensityField& f) {
  const std::size_t n = f.size();
  std::vector<double> buf(5 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 v = f.node(i);
    buf[i] = f[i];
    buf[n + i] = f[i] * v.x;
    buf[2 * n + i] = f[i] * v.y;
    buf[3 * n + i] = f[i] * v.z;
    buf[4 * n + i] = f[i] * energy(v);
  }
  const std::span<const double> all(buf);
  const double h3 = f.cell_volume();
  Moments m;
  m.mass = pairwise_sum(all.subspan(0, n)) * h3;
  m.momentum = {pairwise_sum(all.subspan(n, n)) * h3, pairwise_sum(all.subspan(2 * n, n)) * h3,
                pairwise_sum(all.subspan(3 * n, n)) * h3};
  m.energy = pairwise_sum(all.subspan(4 * n, n)) * h3;
  return m;
}

Branch branch_for(double p) { return p <= 6.0 ? Branch::low : Branch::high; }

double exponent_n(double q) {
  require(q > 1.0 && std::isfinite(q), "exponent_n: q must be > 1");
  return exponent_n(q, branch_for(q));
}

double exponent_n(double q, Branch branch) {
  check_branch(q, branch, "exponent_n: q out of range for branch");
  if (branch == Branch::low) return 5.0 * q / (3.0 + 2.0 * q);
  return q * (q - 3.0) / (2.0 * q - 3.0);
}

double exponent_theta(double p) {
  require(p > 1.0 && std::isfinite(p), "exponent_theta: p must be > 1");
  return exponent_theta(p, branch_for(p));
}

double exponent_theta(double p, Branch branch) {
  check_branch(p, branch, "exponent_theta: p out of range for branch");
  if (branch == Branch::low) return 2.0 / 5.0;
  return p / ((p - 1.0) * (p - 3.0));
}

double weight_m(double p, double eta) {
  require(p > 1.0 && std::isfinite(p), "weight_m: p must be > 1");
  return weight_m(p, eta, branch_for(p));
}

double weight_m(double p, double eta, Branch branch) {
  check_branch(p, branch, "weight_m: p out of range for branch");
  require(eta > 2.0 && std::isfinite(eta), "weight_m: eta must be > 2");
  if (branch == Branch::low) {
    return (3.0 + 2.0 * p) * (2.0 * p - 1.0) / (5.0 * p) * eta + (3.0 + 2.0 * p) / (10.0 * p);
  }
  return (2.0 * p - 3.0) * (2.0 * p - 1.0) / (p * (p - 3.0)) * eta +
         (2.0 * p - 3.0) / (2.0 * p * (p - 3.0));
}

DiagnosticsRecord compute_record(const DensityField& f, std::span<const double> loss_rate,
                                 std::span<const NormSpec> norms, double t, double dt) {
  if (loss_rate.size() != f.size()) {
    throw std::invalid_argument("compute_record: loss_rate size does not match the field");
  }
  DiagnosticsRecord r;
  r.t = t;
  r.dt = dt;
  const Moments m = moments(f);
  r.mass = m.mass;
  r.px = m.momentum.x;
  r.py = m.momentum.y;
  r.pz = m.momentum.z;
  r.energy = m.energy;
  r.entropy = entropy(f);
  const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
  r.min_f = *lo;
  r.max_f = *hi;
  const RatioRange ratio =
      loss_ratio_range(f, loss_rate, std::numeric_limits<double>::infinity());
  r.L_ratio_min = ratio.min;
  r.L_ratio_max = ratio.max;
  r.norm_specs.assign(norms.begin(), norms.end());
  for (const NormSpec& s : norms) r.lp_norms.push_back(lp_norm(f, s.p, s.k));
  return r;
}

RatioRange loss_ratio_range(const DensityField& f, std::span<const double> loss_rate,
                            double max_radius) {
  if (loss_rate.size() != f.size()) {
    throw std::invalid_argument("loss_ratio_range: loss_rate size does not match the field");
  }
  RatioRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 v = f.node(i);
    if (norm(v) > max_radius) continue;
    const double ratio = loss_rate[i] / energy(v);
    out.min = std::min(out.min, ratio);
    out.max = std::max(out.max, ratio);
    any = true;
  }
  if (!any) throw std::invalid_argument("loss_ratio_range: no node within max_radius");
  return out;
}

}  // namespace relcoll
