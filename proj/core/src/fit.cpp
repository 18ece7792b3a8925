#include "cavspec/fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavspec/errors.hpp"
#include "cavspec/response.hpp"

namespace cavspec {

namespace {

constexpr std::array<FitParam, 8> kAllParams = {
    FitParam::GCommon, FitParam::G2,     FitParam::G3,    FitParam::G4,
    FitParam::Kappa,   FitParam::DeltaC, FitParam::Scale, FitParam::Offset,
};

bool is_log_param(FitParam p) {
  switch (p) {
    case FitParam::GCommon:
    case FitParam::G2:
    case FitParam::G3:
    case FitParam::G4:
    case FitParam::Kappa:
      return true;
    default:
      return false;
  }
}

std::pair<double, double> default_bounds(FitParam p) {
  switch (p) {
    case FitParam::GCommon:
    case FitParam::G2:
    case FitParam::G3:
    case FitParam::G4:
    case FitParam::Kappa:
      return {1e-4, 1e4};
    case FitParam::Scale:
      return {1e-6, 1e6};
    case FitParam::DeltaC:
    case FitParam::Offset:
      return {-1e4, 1e4};
  }
  return {0.0, 0.0};
}

double model_intensity(const TransitionLadder& ladder, const FitParams& p, double dp) {
  const double x = dp - p.offset;
  std::complex<double> chi(0.0, 0.0);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double g2 = p.strengths[i] * p.strengths[i];
    chi += std::complex<double>(0.0, g2) /
           std::complex<double>(ladder.decays[i] / 2.0, -(x - ladder.offsets[i]));
  }
  const std::complex<double> den =
      std::complex<double>(p.kappa, p.delta_c - x) - std::complex<double>(0.0, 1.0) * chi;
  return p.scale * std::norm(p.kappa / den);
}

std::vector<double> compute_residuals(const FitProblem& prob, const FitParams& p) {
  std::vector<double> r(prob.dp.size());
  const bool weighted = !prob.weight.empty();
  for (std::size_t k = 0; k < prob.dp.size(); ++k) {
    r[k] = model_intensity(prob.ladder, p, prob.dp[k]) - prob.intensity[k];
    if (weighted) r[k] *= prob.weight[k];
  }
  return r;
}

}  // namespace

const char* fit_param_name(FitParam p) {
  switch (p) {
    case FitParam::GCommon: return "g_common";
    case FitParam::G2: return "g2";
    case FitParam::G3: return "g3";
    case FitParam::G4: return "g4";
    case FitParam::Kappa: return "kappa";
    case FitParam::DeltaC: return "delta_c";
    case FitParam::Scale: return "scale";
    case FitParam::Offset: return "offset";
  }
  return "?";
}

FitParam fit_param_from_name(const std::string& name) {
  for (FitParam p : kAllParams) {
    if (name == fit_param_name(p)) return p;
  }
  throw ValidationError("fit: unknown parameter name '" + name + "'");
}

double get_fit_param(const FitParams& params, FitParam p) {
  switch (p) {
    case FitParam::GCommon:  // the common value is the first strength by construction
    case FitParam::G2: return params.strengths[0];
    case FitParam::G3: return params.strengths[1];
    case FitParam::G4: return params.strengths[2];
    case FitParam::Kappa: return params.kappa;
    case FitParam::DeltaC: return params.delta_c;
    case FitParam::Scale: return params.scale;
    case FitParam::Offset: return params.offset;
  }
  return 0.0;
}

void set_fit_param(FitParams& params, FitParam p, double value) {
  switch (p) {
    case FitParam::GCommon:
      params.strengths = {value, value, value};
      break;
    case FitParam::G2: params.strengths[0] = value; break;
    case FitParam::G3: params.strengths[1] = value; break;
    case FitParam::G4: params.strengths[2] = value; break;
    case FitParam::Kappa: params.kappa = value; break;
    case FitParam::DeltaC: params.delta_c = value; break;
    case FitParam::Scale: params.scale = value; break;
    case FitParam::Offset: params.offset = value; break;
  }
}

std::pair<double, double> FitProblem::bounds_for(FitParam p) const {
  auto it = bounds.find(p);
  return it != bounds.end() ? it->second : default_bounds(p);
}

void FitProblem::validate() const {
  ladder.validate();
  if (ladder.size() != 3) {
    throw ValidationError("fit: the forward model expects a three-transition ladder");
  }
  if (dp.size() != intensity.size() || (!weight.empty() && weight.size() != dp.size())) {
    throw ValidationError("fit: data columns must have equal length");
  }
  if (free.empty()) throw ValidationError("fit.free: at least one free parameter required");
  for (std::size_t i = 0; i < free.size(); ++i) {
    for (std::size_t j = i + 1; j < free.size(); ++j) {
      if (free[i] == free[j]) throw ValidationError("fit.free: duplicate parameter");
    }
  }
  const bool common = std::find(free.begin(), free.end(), FitParam::GCommon) != free.end();
  const bool per = std::find(free.begin(), free.end(), FitParam::G2) != free.end() ||
                   std::find(free.begin(), free.end(), FitParam::G3) != free.end() ||
                   std::find(free.begin(), free.end(), FitParam::G4) != free.end();
  if (common && per) {
    throw ValidationError("fit.free: g_common cannot be combined with per-transition couplings");
  }
  if (dp.size() < free.size() + 2) {
    throw ValidationError("fit: need at least number-of-free-parameters + 2 data points");
  }
  for (FitParam p : kAllParams) {
    const auto [lo, hi] = bounds_for(p);
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw ValidationError(std::string("fit.bounds.") + fit_param_name(p) +
                            ": bounds must be finite with lower < upper");
    }
    if (is_log_param(p) && !(lo > 0.0)) {
      throw ValidationError(std::string("fit.bounds.") + fit_param_name(p) +
                            ": lower bound must be > 0 for a positive parameter");
    }
  }
  for (FitParam p : free) {
    const auto [lo, hi] = bounds_for(p);
    const auto it = initial.find(p);
    const double x0 = it != initial.end() ? it->second : get_fit_param(baseline, p);
    if (!(x0 >= lo && x0 <= hi)) {
      std::ostringstream os;
      os << "fit.initial." << fit_param_name(p) << ": " << x0 << " outside bounds [" << lo
         << ", " << hi << "]";
      throw ValidationError(os.str());
    }
  }
  if (max_iterations < 1) throw ValidationError("fit.max_iterations: must be >= 1");
}

std::vector<double> residuals(const FitProblem& problem, const FitParams& params) {
  problem.validate();
  for (FitParam p : problem.free) {
    const auto [lo, hi] = problem.bounds_for(p);
    const double v = get_fit_param(params, p);
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << "residuals: " << fit_param_name(p) << " = " << v << " outside bounds [" << lo << ", "
         << hi << "]";
      throw ValidationError(os.str());
    }
  }
  return compute_residuals(problem, params);
}

Eigen::MatrixXd residual_jacobian(const FitProblem& problem, const FitParams& at,
                                  DiffScheme scheme, double rel_step) {
  if (!(rel_step > 0.0)) throw ValidationError("residual_jacobian: rel_step must be > 0");
  const auto n = static_cast<Eigen::Index>(problem.dp.size());
  const auto np = static_cast<Eigen::Index>(problem.free.size());
  Eigen::MatrixXd jac(n, np);
  const std::vector<double> r0 =
      scheme == DiffScheme::Forward ? compute_residuals(problem, at) : std::vector<double>{};
  for (Eigen::Index j = 0; j < np; ++j) {
    const FitParam p = problem.free[static_cast<std::size_t>(j)];
    const double x = get_fit_param(at, p);
    const double h = rel_step * std::max(1.0, std::abs(x));
    FitParams hi = at;
    set_fit_param(hi, p, x + h);
    const std::vector<double> rp = compute_residuals(problem, hi);
    if (scheme == DiffScheme::Forward) {
      for (Eigen::Index k = 0; k < n; ++k) {
        jac(k, j) = (rp[static_cast<std::size_t>(k)] - r0[static_cast<std::size_t>(k)]) / h;
      }
    } else {
      FitParams lo = at;
      set_fit_param(lo, p, x - h);
      const std::vector<double> rm = compute_residuals(problem, lo);
      for (Eigen::Index k = 0; k < n; ++k) {
        jac(k, j) =
            (rp[static_cast<std::size_t>(k)] - rm[static_cast<std::size_t>(k)]) / (2.0 * h);
      }
    }
  }
  return jac;
}

FitResult fit_spectrum(const FitProblem& problem) {
  problem.validate();
  const auto np = static_cast<Eigen::Index>(problem.free.size());
  const auto n = static_cast<Eigen::Index>(problem.dp.size());

  // Optimization variables: log(x) for strictly positive parameters, x otherwise.
  Eigen::VectorXd lo_u(np), hi_u(np), u(np);
  for (Eigen::Index j = 0; j < np; ++j) {
    const FitParam p = problem.free[static_cast<std::size_t>(j)];
    const auto [lo, hi] = problem.bounds_for(p);
    const auto it = problem.initial.find(p);
    const double x0 = it != problem.initial.end() ? it->second : get_fit_param(problem.baseline, p);
    if (is_log_param(p)) {
      lo_u(j) = std::log(lo);
      hi_u(j) = std::log(hi);
      u(j) = std::log(x0);
    } else {
      lo_u(j) = lo;
      hi_u(j) = hi;
      u(j) = x0;
    }
  }

  const auto physical = [&](const Eigen::VectorXd& uu) {
    FitParams p = problem.baseline;
    for (Eigen::Index j = 0; j < np; ++j) {
      const FitParam fp = problem.free[static_cast<std::size_t>(j)];
      set_fit_param(p, fp, is_log_param(fp) ? std::exp(uu(j)) : uu(j));
    }
    return p;
  };
  const auto project = [&](Eigen::VectorXd uu) {
    for (Eigen::Index j = 0; j < np; ++j) uu(j) = std::clamp(uu(j), lo_u(j), hi_u(j));
    return uu;
  };
  const auto eval = [&](const Eigen::VectorXd& uu) {
    const std::vector<double> r = compute_residuals(problem, physical(uu));
    return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())).eval();
  };
  const auto jacobian_u = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& r0) {
    Eigen::MatrixXd jac(n, np);
    for (Eigen::Index j = 0; j < np; ++j) {
      double h = 1e-7 * std::max(1.0, std::abs(uu(j)));
      if (uu(j) + h > hi_u(j)) h = -h;  // step inward at the upper bound
      Eigen::VectorXd up = uu;
      up(j) += h;
      jac.col(j) = (eval(up) - r0) / h;
    }
    return jac;
  };

  Eigen::VectorXd r = eval(u);
  double norm = r.norm();
  FitResult result;
  result.residual_norm_history.push_back(norm);

  double damping = 1e-3;
  bool converged = false;
  int iter = 0;
  Eigen::MatrixXd jac;
  for (iter = 1; iter <= problem.max_iterations; ++iter) {
    jac = jacobian_u(u, r);
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() < 1e-8) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    bool accepted = false;
    for (int inner = 0; inner < 25; ++inner) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index j = 0; j < np; ++j) {
        damped(j, j) += damping * std::max(jtj(j, j), 1e-12);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      const Eigen::VectorXd u_try = project(u + step);
      const Eigen::VectorXd r_try = eval(u_try);
      const double norm_try = r_try.norm();
      if (norm_try <= norm) {
        const double rel_change = (norm - norm_try) / std::max(norm, 1e-300);
        u = u_try;
        r = r_try;
        norm = norm_try;
        result.residual_norm_history.push_back(norm);
        damping = std::max(damping * 0.3, 1e-14);
        accepted = true;
        if (rel_change < 1e-10) converged = true;
        break;
      }
      damping *= 4.0;
      if (damping > 1e15) break;
    }
    if (!accepted) {
      converged = grad.cwiseAbs().maxCoeff() < 1e-8;
      break;
    }
    if (converged) break;
  }

  result.parameters = physical(u);
  result.residual_rms = norm / std::sqrt(static_cast<double>(n));
  result.iterations = std::min(iter, problem.max_iterations);
  result.converged = converged;
  if (jac.size() > 0) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const double smin = svd.singularValues().minCoeff();
    result.jacobian_condition =
        smin > 0.0 ? svd.singularValues().maxCoeff() / smin : std::numeric_limits<double>::infinity();
  }
  return result;
}

}  // namespace cavspec
