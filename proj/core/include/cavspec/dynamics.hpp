#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cavspec/model.hpp"

namespace cavspec {

/// Weak-excitation linearized equations of motion, dv/dt = A v + b, with state
/// ordering [cavity amplitude, coherence per transition in ladder order].
/// A always has eigenvalues with strictly negative real part (asserted at
/// construction), so the steady state exists and is unique.
struct LinearSystem {
  Eigen::MatrixXcd coefficient;          // A
  Eigen::VectorXcd drive;                // b
  double max_eigenvalue_magnitude = 0.0; // max |eig(A)|, cached for step-size checks

  Eigen::Index dim() const { return coefficient.rows(); }
};

/// Validating constructor; throws NumericalError if A is not stable.
LinearSystem make_linear_system(Eigen::MatrixXcd coefficient, Eigen::VectorXcd drive);

/// Assemble the linearized system at probe detuning dp:
///   da/dt       = -[kappa + i(delta_c - dp)] a + i sum_i G_i s_i + drive
///   ds_i/dt     = -[gamma_i/2 - i(dp - Delta_i)] s_i + i G_i a
/// Its steady-state cavity amplitude equals the closed-form transmission
/// numerator drive / (kappa + i(delta_c - dp) - i chi) exactly.
LinearSystem linear_system(const SystemConfig& config, double dp);

struct Trajectory {
  std::vector<double> times;             // increasing, starts at 0
  std::vector<Eigen::VectorXcd> states;
};

/// Classical fixed-step fourth-order Runge-Kutta integration to t_end.
/// Throws NumericalError when dt exceeds the stability limit 2.6 / max|eig(A)|
/// (the error message suggests a workable dt).
Trajectory integrate(const LinearSystem& sys, const Eigen::VectorXcd& initial, double dt,
                     double t_end);

/// Direct steady-state solve A v = -b.
Eigen::VectorXcd steady_state(const LinearSystem& sys);

}  // namespace cavspec
