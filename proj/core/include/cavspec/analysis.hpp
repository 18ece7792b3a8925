#pragma once

#include <limits>
#include <span>
#include <vector>

#include "cavspec/modes.hpp"
#include "cavspec/response.hpp"

namespace cavspec {

/// Local maximum of a generic sampled series. Position and height are refined
/// by a quadratic through the maximum and its two neighbors; prominence is the
/// topographic prominence restricted to the scan window.
struct SeriesPeak {
  double position = 0.0;
  double height = 0.0;
  double prominence = 0.0;
};

std::vector<SeriesPeak> find_series_peaks(std::span<const double> x, std::span<const double> y,
                                          double min_prominence);

/// Transmission peak; heights live in (0, 1] like the spectrum itself.
struct Peak {
  double position = 0.0;
  double height = 0.0;
  double prominence = 0.0;
};

constexpr double kDefaultMinProminence = 0.005;

std::vector<Peak> find_peaks(const Spectrum& spectrum,
                             double min_prominence = kDefaultMinProminence);

/// Minimum total |distance| one-to-one assignment between peak positions and
/// mode eigenvalues. Pairs with residual above tol are reported unmatched.
struct ModeMatchReport {
  struct Pair {
    int peak_index;
    int mode_index;
    double residual;  // peak position minus eigenvalue
  };
  std::vector<Pair> matched;
  std::vector<int> unmatched_peaks;
  std::vector<int> unmatched_modes;
  double total_distance = 0.0;  // over matched pairs
};

ModeMatchReport match_peaks_to_modes(const std::vector<Peak>& peaks, const PolaritonModes& modes,
                                     double tol = std::numeric_limits<double>::infinity());

/// Root-mean-square intensity difference between two spectra on identical grids.
double spectrum_distance(const Spectrum& a, const Spectrum& b);

}  // namespace cavspec
