#pragma once

#include <functional>
#include <vector>

#include "spincollapse/chebyshev.hpp"
#include "spincollapse/model.hpp"
#include "spincollapse/observables.hpp"

namespace spincollapse {

// How the mean field is frozen within one time step.
enum class FieldScheme {
  // Field taken from the state at the start of the step. First order; E_U
  // decreases by mu/2 (B(t+dt) - B(t))^2 every step.
  StepStart,
  // Field solved self-consistently as the average of its start and end
  // values. Second order, and E_U is conserved up to the iteration tolerance.
  Midpoint,
};

struct TrajectoryConfig {
  double dt = 0.05;
  double t_max = 200.0;
  int record_stride = 10;
  double norm_tolerance = 1e-9;
  // Relative to max(|E_U(0)|, J).
  double energy_tolerance = 1e-6;
  FieldScheme field_scheme = FieldScheme::Midpoint;
  double field_tolerance = 1e-13;
  int max_field_iterations = 12;
};

struct TrajectoryRecord {
  std::vector<ObservableRecord> rows;
  long steps = 0;
  long matvecs = 0;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;        // relative, E_U
  double max_plain_energy_drift = 0.0;  // relative, <H>
  double max_field_residual = 0.0;      // midpoint self-consistency residual
  StateVector final_state;
};

using Observer = std::function<void(const ObservableRecord&)>;

// Number of steps covering [0, t_max]: round(t_max / dt).
long step_count(const TrajectoryConfig& traj);

// Integrates i dpsi/dt = (H_linear + H_B[psi]) psi. Every step holds the
// field fixed and advances with one Chebyshev propagation; observables are
// evaluated at t = 0, every record_stride steps, and at the final step.
// Throws IntegrityError when norm or E_U drift leaves its tolerance.
TrajectoryRecord evolve(const Hamiltonian& h, const StateVector& psi0, const TrajectoryConfig& traj,
                        const ChebyshevConfig& cheb, const Observer& observer = {});
TrajectoryRecord evolve(const CouplingSet& c, const StateVector& psi0, const TrajectoryConfig& traj,
                        const ChebyshevConfig& cheb, const Observer& observer = {});

}  // namespace spincollapse
