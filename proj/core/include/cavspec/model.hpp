#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace cavspec {

// Every rate and detuning in this library is stored in units of the common
// atomic decay rate Gamma (Gamma = 1). MHz appears only at the configuration
// boundary, converted through a caller-supplied Gamma-in-MHz calibration.

enum class Unit { Gamma, MHz };

struct FrequencyQuantity {
  double value = 0.0;
  Unit unit = Unit::Gamma;
};

/// Exact linear rescaling between Gamma-units and MHz. Same-unit conversion is
/// the identity; converting there and back reproduces the input to machine
/// precision. gamma_mhz must be > 0.
FrequencyQuantity convert(FrequencyQuantity q, Unit target, double gamma_mhz);

/// The cavity-coupled atomic transitions on the probe-detuning axis.
///
/// offsets[i] is the probe detuning at which the probe is resonant with
/// transition i, so resonances sit at non-positive values with the reference
/// transition pinned at 0 and transmission peaks, susceptibility features and
/// mode eigenvalues all share one axis.
struct TransitionLadder {
  std::vector<double> offsets;       // strictly increasing, Gamma-units
  std::vector<double> decays;        // excited-state decay rates, all > 0
  std::vector<std::string> labels;   // display names, one per transition

  std::size_t size() const { return offsets.size(); }
  void validate() const;
};

/// Build the three-transition ladder from the two excited-state splittings.
/// Offsets come out as [-(delta34 + delta23), -delta34, 0].
TransitionLadder build_from_splittings(double delta23, double delta34,
                                       const std::array<double, 3>& gammas);

/// Per-transition collective coupling strengths G_i = g_i * sqrt(N).
struct CollectiveCoupling {
  std::vector<double> strengths;  // >= 0, Gamma-units

  static CollectiveCoupling uniform(double g_sqrt_n, std::size_t count);
  std::size_t size() const { return strengths.size(); }
  void validate() const;
};

/// Single-atom coupling g = mu * sqrt(omega_c / (2 hbar eps0 V)), SI units.
/// Convenience calculator only; the forward model works with G = g sqrt(N).
double coupling_from_dipole(double mu, double omega_c, double mode_volume);

struct CavityParams {
  double kappa = 0.0;    // field decay half-width (HWHM of the empty-cavity line), > 0
  double delta_c = 0.0;  // cavity detuning from the reference transition
  double drive = 1.0;    // probe input amplitude; cancels under normalization

  void validate() const;
};

struct ScanGrid {
  double dp_min = 0.0;
  double dp_max = 0.0;
  int points = 0;  // >= 2

  void validate() const;
  /// Uniform samples, endpoints exact.
  std::vector<double> sample() const;
};

struct SystemConfig {
  TransitionLadder ladder;
  CollectiveCoupling coupling;
  CavityParams cavity;
  ScanGrid grid;

  void validate() const;
};

}  // namespace cavspec
