#pragma once

#include <complex>
#include <vector>

#include "cavspec/model.hpp"

namespace cavspec {

/// Sampled transmission spectrum. Amplitudes are normalized to the
/// empty-cavity resonant value, so intensity lies in (0, 1].
struct Spectrum {
  std::vector<double> dp;                       // strictly increasing probe detunings
  std::vector<std::complex<double>> amplitude;  // transmitted-field ratio
  std::vector<double> intensity;                // |amplitude|^2

  std::size_t size() const { return dp.size(); }
};

/// Collective atomic susceptibility
///   chi(dp) = sum_i  i G_i^2 / (gamma_i/2 - i (dp - Delta_i)).
/// Im chi > 0 whenever any coupling is nonzero; each term is a Lorentzian of
/// height 2 G_i^2 / gamma_i centered on its transition.
std::complex<double> susceptibility(const TransitionLadder& ladder,
                                    const CollectiveCoupling& coupling, double dp);

/// Normalized transmitted-field amplitude
///   t(dp) = kappa / (kappa + i (delta_c - dp) - i chi),
/// exactly 1 for the empty cavity on resonance. The denominator's real part is
/// kappa + Im chi >= kappa, so |t| <= 1 always.
std::complex<double> transmission_amplitude(const CavityParams& cavity,
                                            std::complex<double> chi, double dp);

/// Evaluate the transmission over the configured uniform grid. Deterministic:
/// identical output for identical configs. Throws NumericalError if the
/// boundedness invariant is violated (it cannot be, barring NaNs in inputs).
Spectrum scan_spectrum(const SystemConfig& config);

}  // namespace cavspec
