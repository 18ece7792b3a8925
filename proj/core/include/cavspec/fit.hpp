#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "cavspec/model.hpp"

namespace cavspec {

/// Parameters the fitter can adjust. GCommon ties the three coupling
/// strengths together (the default); G2..G4 free them per transition.
enum class FitParam { GCommon, G2, G3, G4, Kappa, DeltaC, Scale, Offset };

const char* fit_param_name(FitParam p);
FitParam fit_param_from_name(const std::string& name);  // throws ValidationError

/// Fully resolved physical parameter set for the forward model
///   model(dp) = scale * |t(dp - offset)|^2.
struct FitParams {
  std::array<double, 3> strengths{0.0, 0.0, 0.0};
  double kappa = 1.0;
  double delta_c = 0.0;
  double scale = 1.0;
  double offset = 0.0;
};

struct FitProblem {
  // Observations; weight empty means uniform. Weights multiply residuals.
  std::vector<double> dp;
  std::vector<double> intensity;
  std::vector<double> weight;

  TransitionLadder ladder;  // level structure is fixed, three transitions

  std::vector<FitParam> free;
  FitParams baseline;  // values of the non-free parameters (and fallback initials)
  std::map<FitParam, std::pair<double, double>> bounds;  // overrides of the defaults
  std::map<FitParam, double> initial;                    // overrides of the baseline
  int max_iterations = 500;

  void validate() const;
  std::pair<double, double> bounds_for(FitParam p) const;
};

double get_fit_param(const FitParams& params, FitParam p);
void set_fit_param(FitParams& params, FitParam p, double value);

/// Weighted residual vector model(dp_k; params) - intensity_k. The free
/// parameters must lie within the problem's bounds.
std::vector<double> residuals(const FitProblem& problem, const FitParams& params);

enum class DiffScheme { Forward, Central };

/// Finite-difference Jacobian of the residual vector with respect to the free
/// parameters (physical values, columns in problem.free order).
Eigen::MatrixXd residual_jacobian(const FitProblem& problem, const FitParams& at,
                                  DiffScheme scheme, double rel_step = 1e-7);

struct FitResult {
  FitParams parameters;
  double residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
  double jacobian_condition = 0.0;
  std::vector<double> residual_norm_history;  // accepted steps only, non-increasing
};

/// Damped least squares over the transmission forward model. Coupling and
/// kappa are optimized as log values so positivity holds without boundary
/// sticking; other parameters are linear. Bounds are enforced by projection.
/// Convergence: relative residual-norm change < 1e-10 or gradient max-norm
/// < 1e-8. Hitting the iteration cap returns converged = false, no exception.
FitResult fit_spectrum(const FitProblem& problem);

}  // namespace cavspec
