#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "cavspec/analysis.hpp"
#include "cavspec/dynamics.hpp"
#include "cavspec/modes.hpp"
#include "cavspec/response.hpp"

namespace cavspec::csv {

/// Shortest decimal representation that round-trips the double exactly
/// (up to 17 significant digits). '.' separator, locale independent.
std::string format(double v);

// Writers with frozen header schemas; byte-identical output for identical inputs.
void write_spectrum(std::ostream& os, const Spectrum& s);   // delta_p,re_amplitude,im_amplitude,intensity
void write_chi(std::ostream& os, const std::vector<double>& dp,
               const std::vector<std::complex<double>>& chi);  // delta_p,re_chi,im_chi
void write_modes(std::ostream& os, const PolaritonModes& modes);  // index,eigenvalue,photonic_fraction,w1..wM
void write_branches(std::ostream& os, const BranchScan& scan);    // delta_c,lambda_1..lambda_{M+1} (sorted)
void write_peaks(std::ostream& os, const std::vector<Peak>& peaks);  // position,height,prominence
void write_trajectory(std::ostream& os, const Trajectory& traj);

/// Input data for the fitter: header delta_p,intensity[,weight].
struct FitData {
  std::vector<double> dp;
  std::vector<double> intensity;
  std::vector<double> weight;  // empty when the column is absent
};

FitData read_fit_data(std::istream& is);

}  // namespace cavspec::csv
