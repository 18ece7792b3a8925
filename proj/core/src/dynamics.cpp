#include "cavspec/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cavspec/errors.hpp"

namespace cavspec {

LinearSystem make_linear_system(Eigen::MatrixXcd coefficient, Eigen::VectorXcd drive) {
  if (coefficient.rows() != coefficient.cols() || coefficient.rows() < 1) {
    throw ValidationError("linear system: coefficient matrix must be square and non-empty");
  }
  if (drive.size() != coefficient.rows()) {
    throw ValidationError("linear system: drive vector size must match the matrix");
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(coefficient, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("linear system: eigensolver did not converge during stability check");
  }
  double max_re = -std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < coefficient.rows(); ++i) {
    max_re = std::max(max_re, solver.eigenvalues()(i).real());
    max_abs = std::max(max_abs, std::abs(solver.eigenvalues()(i)));
  }
  if (!(max_re < 0.0)) {
    std::ostringstream os;
    os << "linear system: not stable, max Re(eig) = " << max_re;
    throw NumericalError(os.str());
  }
  LinearSystem sys;
  sys.coefficient = std::move(coefficient);
  sys.drive = std::move(drive);
  sys.max_eigenvalue_magnitude = max_abs;
  return sys;
}

LinearSystem linear_system(const SystemConfig& config, double dp) {
  config.validate();
  const auto m = static_cast<Eigen::Index>(config.ladder.size());
  const std::complex<double> iunit(0.0, 1.0);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(m + 1);
  a(0, 0) = -std::complex<double>(config.cavity.kappa, config.cavity.delta_c - dp);
  b(0) = config.cavity.drive;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double g = config.coupling.strengths[idx];
    a(0, i + 1) = iunit * g;
    a(i + 1, 0) = iunit * g;
    a(i + 1, i + 1) = -std::complex<double>(config.ladder.decays[idx] / 2.0,
                                            -(dp - config.ladder.offsets[idx]));
  }
  return make_linear_system(std::move(a), std::move(b));
}

Trajectory integrate(const LinearSystem& sys, const Eigen::VectorXcd& initial, double dt,
                     double t_end) {
  if (!(dt > 0.0)) throw ValidationError("integrate: dt must be > 0");
  if (!(t_end >= dt)) throw ValidationError("integrate: t_end must be >= dt");
  if (initial.size() != sys.dim()) {
    throw ValidationError("integrate: initial state size must match the system");
  }
  if (sys.max_eigenvalue_magnitude > 0.0 && dt > 2.6 / sys.max_eigenvalue_magnitude) {
    std::ostringstream os;
    os << "integrate: dt = " << dt << " exceeds the stability limit "
       << 2.6 / sys.max_eigenvalue_magnitude << "; try dt <= "
       << 2.0 / sys.max_eigenvalue_magnitude;
    throw NumericalError(os.str());
  }

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  Eigen::VectorXcd v = initial;
  traj.times.push_back(0.0);
  traj.states.push_back(v);
  const Eigen::MatrixXcd& a = sys.coefficient;
  const Eigen::VectorXcd& b = sys.drive;
  for (std::size_t s = 1; s <= steps; ++s) {
    const Eigen::VectorXcd k1 = a * v + b;
    const Eigen::VectorXcd k2 = a * (v + (0.5 * dt) * k1) + b;
    const Eigen::VectorXcd k3 = a * (v + (0.5 * dt) * k2) + b;
    const Eigen::VectorXcd k4 = a * (v + dt * k3) + b;
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back(dt * static_cast<double>(s));
    traj.states.push_back(v);
  }
  return traj;
}

Eigen::VectorXcd steady_state(const LinearSystem& sys) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.coefficient);
  Eigen::VectorXcd v = lu.solve(-sys.drive);
  const double resid = (sys.coefficient * v + sys.drive).norm();
  const double scale = sys.coefficient.norm() * v.norm() + sys.drive.norm();
  if (!(resid <= 1e-10 * std::max(scale, 1e-300))) {
    std::ostringstream os;
    os << "steady_state: linear solve residual " << resid << " too large";
    throw NumericalError(os.str());
  }
  return v;
}

}  // namespace cavspec
