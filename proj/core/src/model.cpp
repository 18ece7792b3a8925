#include "cavspec/model.hpp"

#include <cmath>
#include <sstream>

#include "cavspec/errors.hpp"

namespace cavspec {

namespace {

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(field) + ": must be finite");
  }
}

void require_positive(double v, const char* field) {
  require_finite(v, field);
  if (v <= 0.0) {
    std::ostringstream os;
    os << field << ": must be > 0 (got " << v << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

FrequencyQuantity convert(FrequencyQuantity q, Unit target, double gamma_mhz) {
  require_positive(gamma_mhz, "gamma_mhz");
  require_finite(q.value, "value");
  if (q.unit == target) return q;
  if (target == Unit::MHz) return {q.value * gamma_mhz, Unit::MHz};
  return {q.value / gamma_mhz, Unit::Gamma};
}

void TransitionLadder::validate() const {
  if (offsets.empty()) {
    throw ValidationError("ladder.offsets: at least one transition required");
  }
  if (decays.size() != offsets.size() || labels.size() != offsets.size()) {
    throw ValidationError("ladder: offsets, decays and labels must have equal length");
  }
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    require_finite(offsets[i], "ladder.offsets[]");
    require_positive(decays[i], "ladder.decays[]");
    if (i > 0 && !(offsets[i - 1] < offsets[i])) {
      throw ValidationError("ladder.offsets: must be strictly increasing");
    }
  }
}

TransitionLadder build_from_splittings(double delta23, double delta34,
                                       const std::array<double, 3>& gammas) {
  require_positive(delta23, "delta23");
  require_positive(delta34, "delta34");
  require_positive(gammas[0], "gammas[0]");
  require_positive(gammas[1], "gammas[1]");
  require_positive(gammas[2], "gammas[2]");
  TransitionLadder ladder;
  ladder.offsets = {-(delta34 + delta23), -delta34, 0.0};
  ladder.decays = {gammas[0], gammas[1], gammas[2]};
  ladder.labels = {"|2>", "|3>", "|4>"};
  ladder.validate();
  return ladder;
}

CollectiveCoupling CollectiveCoupling::uniform(double g_sqrt_n, std::size_t count) {
  CollectiveCoupling c;
  c.strengths.assign(count, g_sqrt_n);
  c.validate();
  return c;
}

void CollectiveCoupling::validate() const {
  for (double g : strengths) {
    require_finite(g, "coupling.strengths[]");
    if (g < 0.0) {
      throw ValidationError("coupling.strengths[]: must be >= 0");
    }
  }
}

double coupling_from_dipole(double mu, double omega_c, double mode_volume) {
  require_positive(mu, "mu");
  require_positive(omega_c, "omega_c");
  require_positive(mode_volume, "mode_volume");
  constexpr double hbar = 1.054571817e-34;   // J s
  constexpr double eps0 = 8.8541878128e-12;  // F / m
  return mu * std::sqrt(omega_c / (2.0 * hbar * eps0 * mode_volume));
}

void CavityParams::validate() const {
  require_positive(kappa, "cavity.kappa");
  require_finite(delta_c, "cavity.delta_c");
  require_positive(drive, "cavity.drive");
}

void ScanGrid::validate() const {
  require_finite(dp_min, "scan.dp_min");
  require_finite(dp_max, "scan.dp_max");
  if (!(dp_min < dp_max)) {
    throw ValidationError("scan: dp_min must be < dp_max");
  }
  if (points < 2) {
    throw ValidationError("scan.points: must be >= 2");
  }
}

std::vector<double> ScanGrid::sample() const {
  validate();
  std::vector<double> dp(static_cast<std::size_t>(points));
  const double step = (dp_max - dp_min) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) {
    dp[static_cast<std::size_t>(i)] = dp_min + step * static_cast<double>(i);
  }
  dp.back() = dp_max;
  return dp;
}

void SystemConfig::validate() const {
  ladder.validate();
  coupling.validate();
  cavity.validate();
  grid.validate();
  if (coupling.size() != ladder.size()) {
    throw ValidationError("coupling.strengths: length must match the number of transitions");
  }
}

}  // namespace cavspec
