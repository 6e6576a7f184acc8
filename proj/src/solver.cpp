#include "relcoll/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relcoll/errors.hpp"

namespace relcoll {

namespace {

constexpr double kStagnationDt = 1e-12;
// A remainder this small relative to the interval is accumulated rounding in t.
constexpr double kSnapFraction = 1e-9;

}  // namespace

void StepOptions::validate() const {
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw std::invalid_argument("StepOptions: safety must be in (0, 1]");
  }
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) {
    throw std::invalid_argument("StepOptions: dt_max must be positive and finite");
  }
}

CollisionTerms evaluate_terms(const DensityField& f, const ScatteringKernel& kernel,
                              const AngularGrid& ang, GainScheme scheme) {
  switch (scheme) {
    case GainScheme::projection:
      return collision_terms_projected(f, kernel, ang);
    case GainScheme::interpolate:
      return collision_terms(f, kernel, ang);
  }
  throw std::logic_error("evaluate_terms: unhandled scheme");
}

double stable_dt(std::span<const double> loss_rate, const StepOptions& opts, double remaining) {
  opts.validate();
  if (!(remaining > 0.0)) throw std::invalid_argument("stable_dt: remaining time must be > 0");
  double max_l = 0.0;
  for (double l : loss_rate) {
    if (!std::isfinite(l)) throw NumericalError("stable_dt: non-finite loss rate");
    max_l = std::max(max_l, l);
  }
  double dt = opts.dt_max;
  if (max_l > 0.0) {
    const double limit = opts.safety / max_l;
    if (limit < kStagnationDt) {
      std::ostringstream msg;
      msg << "time step stagnated: safety / max Lf = " << limit << " < " << kStagnationDt;
      throw StagnationError(msg.str());
    }
    dt = std::min(dt, limit);
  }
  if (remaining - dt <= kSnapFraction * remaining) return remaining;
  return dt;
}

SolverState advance(const SolverState& state, const CollisionTerms& terms, double dt) {
  const DensityField& f = state.f;
  if (terms.gain.size() != f.size() || terms.loss_rate.size() != f.size()) {
    throw std::invalid_argument("advance: collision terms do not match the field");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("advance: dt must be > 0");
  SolverState next{state.t + dt, f, state.step_index + 1, dt};
  for (std::size_t i = 0; i < f.size(); ++i) {
    // dt Lf <= safety <= 1 up to rounding; the clamp only absorbs that rounding.
    const double keep = std::max(0.0, 1.0 - dt * terms.loss_rate[i]);
    const double value = f[i] * keep + dt * terms.gain[i];
    if (!std::isfinite(value)) {
      const Vec3 v = f.node(i);
      std::ostringstream msg;
      msg << "non-finite value at step " << next.step_index << " (t = " << state.t
          << ", dt = " << dt << "): node " << i << " v = (" << v.x << ", " << v.y << ", " << v.z
          << ") f = " << f[i] << " gain = " << terms.gain[i] << " Lf = " << terms.loss_rate[i];
      throw NumericalError(msg.str());
    }
    next.f[i] = value;
  }
  return next;
}

SolverState step(const SolverState& state, const ScatteringKernel& kernel, const AngularGrid& ang,
                 const StepOptions& opts, double t_limit) {
  const CollisionTerms terms = evaluate_terms(state.f, kernel, ang, opts.scheme);
  const double dt = stable_dt(terms.loss_rate, opts, t_limit - state.t);
  SolverState next = advance(state, terms, dt);
  if (dt == t_limit - state.t) next.t = t_limit;
  return next;
}

std::vector<DiagnosticsRecord> run(const DensityField& initial, const ScatteringKernel& kernel,
                                   const AngularGrid& ang, const RunOptions& opts,
                                   const Observer& observer) {
  if (!(opts.t_end >= 0.0) || !std::isfinite(opts.t_end)) {
    throw std::invalid_argument("run: t_end must be finite and >= 0");
  }
  opts.step.validate();
  kernel.validate();
  ang.validate();
  initial.validate();

  std::vector<DiagnosticsRecord> out;
  SolverState state{0.0, initial, 0, 0.0};
  const auto emit = [&](const CollisionTerms* terms) {
    // The interpolation scheme's loss rate is loss_rates(f) already.
    const std::vector<double> full = terms && opts.step.scheme == GainScheme::interpolate
                                         ? terms->loss_rate
                                         : loss_rates(state.f, kernel, ang);
    out.push_back(compute_record(state.f, full, opts.norms, state.t, state.dt_last));
    if (observer) observer(out.back(), state);
  };

  if (opts.t_end == 0.0) {
    emit(nullptr);
    return out;
  }

  CollisionTerms terms = evaluate_terms(state.f, kernel, ang, opts.step.scheme);
  emit(&terms);
  while (state.t < opts.t_end) {
    const double remaining = opts.t_end - state.t;
    const double dt = stable_dt(terms.loss_rate, opts.step, remaining);
    state = advance(state, terms, dt);
    if (dt == remaining) state.t = opts.t_end;
    if (state.t < opts.t_end) {
      terms = evaluate_terms(state.f, kernel, ang, opts.step.scheme);
      emit(&terms);
    } else {
      emit(nullptr);
    }
  }
  return out;
}

}  // namespace relcoll
