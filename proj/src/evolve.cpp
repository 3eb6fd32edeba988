#include "spincollapse/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spincollapse/errors.hpp"

namespace spincollapse {

long step_count(const TrajectoryConfig& traj) {
  if (!(traj.dt > 0.0)) throw ConfigError("must be > 0", "trajectory.dt");
  if (!(traj.t_max >= traj.dt)) throw ConfigError("must be >= dt", "trajectory.t_max");
  if (traj.record_stride < 1) throw ConfigError("must be >= 1", "trajectory.record_stride");
  return std::lround(traj.t_max / traj.dt);
}

TrajectoryRecord evolve(const Hamiltonian& h, const StateVector& psi0, const TrajectoryConfig& traj,
                        const ChebyshevConfig& cheb, const Observer& observer) {
  const long n_steps = step_count(traj);
  if (psi0.size() != h.dimension()) throw UsageError("state vector dimension mismatch");
  const double mu = h.couplings().mu();
  const SiteLayout& layout = h.layout();
  const double r_linear = h.linear().norm_bound();
  const double half_na = 0.5 * layout.num_apparatus();

  TrajectoryRecord rec;
  ChebyshevPropagator prop(cheb);
  StateVector psi = psi0;
  StateVector trial;
  long extra_matvecs = 0;

  double e0 = 0.0, h0 = 0.0, scale = 1.0;
  auto record = [&](long step) {
    ObservableRecord r = observe(h, psi, static_cast<double>(step) * traj.dt);
    extra_matvecs += 2;
    if (step == 0) {
      e0 = r.E_U;
      h0 = r.H_mean;
      scale = std::max(std::abs(e0), h.couplings().config.exchange);
    }
    const double norm_drift = std::abs(r.norm * r.norm - 1.0);
    const double e_drift = std::abs(r.E_U - e0) / scale;
    rec.max_norm_drift = std::max(rec.max_norm_drift, norm_drift);
    rec.max_energy_drift = std::max(rec.max_energy_drift, e_drift);
    rec.max_plain_energy_drift = std::max(rec.max_plain_energy_drift, std::abs(r.H_mean - h0) / scale);
    rec.rows.push_back(r);
    if (observer) observer(r);
    if (norm_drift > traj.norm_tolerance) {
      std::ostringstream os;
      os << "norm drift " << norm_drift << " exceeds tolerance " << traj.norm_tolerance
         << " at step " << step << " (t = " << r.t << ")";
      throw IntegrityError(os.str(), step, norm_drift);
    }
    if (e_drift > traj.energy_tolerance) {
      std::ostringstream os;
      os << "relative E_U drift " << e_drift << " exceeds tolerance " << traj.energy_tolerance
         << " at step " << step << " (t = " << r.t << ")";
      throw IntegrityError(os.str(), step, e_drift);
    }
  };

  auto propagate = [&](double field, const StateVector& from, StateVector& to) {
    const FieldValue f{field};
    prop.propagate([&](const StateVector& v, StateVector& w) { h.apply_frozen(f, v, w); },
                   r_linear + mu * std::abs(field) * half_na, from, traj.dt, to);
  };

  record(0);
  double b_prev = 0.0;
  bool have_prev = false;
  for (long step = 1; step <= n_steps; ++step) {
    const double b0 = magnetization_field(psi, layout).b_tilde;
    if (mu == 0.0 || traj.field_scheme == FieldScheme::StepStart) {
      propagate(b0, psi, trial);
    } else {
      // Solve g(p) = (b0 + B[U(p) psi]) / 2 - p = 0 by secant iteration,
      // starting from a linear extrapolation of the field to mid-step.
      double p = have_prev ? b0 + 0.5 * (b0 - b_prev) : b0;
      double p_old = 0.0, g_old = 0.0;
      double residual = 0.0;
      for (int it = 0; it < traj.max_field_iterations; ++it) {
        propagate(p, psi, trial);
        const double g = 0.5 * (b0 + magnetization_field(trial, layout).b_tilde) - p;
        residual = std::abs(g);
        if (residual <= traj.field_tolerance) break;
        double next = p + g;
        if (it > 0 && g != g_old) next = p - g * (p - p_old) / (g - g_old);
        p_old = p;
        g_old = g;
        p = next;
      }
      rec.max_field_residual = std::max(rec.max_field_residual, residual);
    }
    std::swap(psi, trial);
    b_prev = b0;
    have_prev = true;
    rec.steps = step;
    if (step % traj.record_stride == 0 || step == n_steps) record(step);
  }
  rec.matvecs = prop.matvecs() + extra_matvecs;
  rec.final_state = std::move(psi);
  return rec;
}

TrajectoryRecord evolve(const CouplingSet& c, const StateVector& psi0, const TrajectoryConfig& traj,
                        const ChebyshevConfig& cheb, const Observer& observer) {
  return evolve(Hamiltonian(c), psi0, traj, cheb, observer);
}

}  // namespace spincollapse
