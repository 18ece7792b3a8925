#include "cavspec/response.hpp"

#include <sstream>

#include "cavspec/errors.hpp"

namespace cavspec {

std::complex<double> susceptibility(const TransitionLadder& ladder,
                                    const CollectiveCoupling& coupling, double dp) {
  if (coupling.size() != ladder.size()) {
    throw ValidationError("susceptibility: coupling length must match the ladder");
  }
  std::complex<double> chi(0.0, 0.0);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double g2 = coupling.strengths[i] * coupling.strengths[i];
    const std::complex<double> den(ladder.decays[i] / 2.0, -(dp - ladder.offsets[i]));
    chi += std::complex<double>(0.0, g2) / den;
  }
  return chi;
}

std::complex<double> transmission_amplitude(const CavityParams& cavity,
                                            std::complex<double> chi, double dp) {
  cavity.validate();
  const std::complex<double> den =
      std::complex<double>(cavity.kappa, cavity.delta_c - dp) - std::complex<double>(0.0, 1.0) * chi;
  return cavity.kappa / den;
}

Spectrum scan_spectrum(const SystemConfig& config) {
  config.validate();
  Spectrum s;
  s.dp = config.grid.sample();
  s.amplitude.resize(s.dp.size());
  s.intensity.resize(s.dp.size());
  for (std::size_t k = 0; k < s.dp.size(); ++k) {
    const std::complex<double> chi = susceptibility(config.ladder, config.coupling, s.dp[k]);
    const std::complex<double> amp = transmission_amplitude(config.cavity, chi, s.dp[k]);
    double inten = std::norm(amp);
    if (!(inten > 0.0) || inten > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "scan_spectrum: intensity " << inten << " at dp=" << s.dp[k]
         << " violates the (0, 1] bound";
      throw NumericalError(os.str());
    }
    // rounding guard: the exact value never exceeds 1
    if (inten > 1.0) inten = 1.0;
    s.amplitude[k] = amp;
    s.intensity[k] = inten;
  }
  return s;
}

}  // namespace cavspec
