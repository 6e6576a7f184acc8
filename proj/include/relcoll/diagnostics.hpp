#pragma once

// Grid observables (moments, entropy, weighted L^p norms) and the exponent
// formulas n, theta, m of the L^p propagation estimate.

#include <span>
#include <vector>

#include "relcoll/density_field.hpp"
#include "relcoll/vec3.hpp"

namespace relcoll {

/// (sum_nodes (v^0)^k |f|^p h^3)^(1/p). Throws std::invalid_argument for p < 1.
double lp_norm(const DensityField& f, double p, double k);

/// sum f ln f h^3 with 0 ln 0 = 0. Throws std::invalid_argument on a negative
/// or non-finite node.
double entropy(const DensityField& f);

struct Moments {
  double mass = 0.0;
  Vec3 momentum;
  double energy = 0.0;
};

/// Midpoint sums of f {1, v, v^0} h^3, the same rule the operator uses.
Moments moments(const DensityField& f);

/// The formulas are split at 6; `low` is the (1, 6] expression and `high`
/// the [6, inf) one. Each branch can be evaluated on its own, e.g. to
/// compare them at the split point.
enum class Branch { low, high };

/// Branch chosen by the half-open convention: low on (1, 6], high on (6, inf).
Branch branch_for(double p);

/// 5q/(3+2q) (low) or q(q-3)/(2q-3) (high). Throws std::invalid_argument for
/// q <= 1, or q <= 3 on the high branch.
double exponent_n(double q);
double exponent_n(double q, Branch branch);

/// 2/5 (low) or p/((p-1)(p-3)) (high). Throws std::invalid_argument for
/// p <= 1, or p <= 3 on the high branch.
double exponent_theta(double p);
double exponent_theta(double p, Branch branch);

/// m = ((2p-1) eta + 1/2) / n(p) written out per branch. Throws
/// std::invalid_argument for p <= 1, eta <= 2, or p <= 3 on the high branch.
double weight_m(double p, double eta);
double weight_m(double p, double eta, Branch branch);

/// One requested weighted norm.
struct NormSpec {
  double p = 2.0;
  double k = 0.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;  // step that produced this state; 0 for the initial record
  double mass = 0.0;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double min_f = 0.0;
  double max_f = 0.0;
  double L_ratio_min = 0.0;  // min over nodes of Lf(v) / v^0
  double L_ratio_max = 0.0;
  std::vector<NormSpec> norm_specs;
  std::vector<double> lp_norms;  // aligned with norm_specs
};

/// Record for field `f` with loss rates `loss_rate` (Lf per node).
DiagnosticsRecord compute_record(const DensityField& f, std::span<const double> loss_rate,
                                 std::span<const NormSpec> norms, double t, double dt);

struct RatioRange {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of Lf(v) / v^0 over nodes with |v| <= max_radius.
/// Throws std::invalid_argument when no node qualifies.
RatioRange loss_ratio_range(const DensityField& f, std::span<const double> loss_rate,
                            double max_radius);

}  // namespace relcoll
