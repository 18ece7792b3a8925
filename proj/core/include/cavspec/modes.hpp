#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cavspec/model.hpp"

namespace cavspec {

/// Real symmetric arrowhead matrix of the single-excitation sector:
/// diagonal [d_1 .. d_M, hub], border[i] couples the hub (photonic state) to
/// leaf i (shared atomic excitation on transition i). In the probe-detuning
/// convention the atomic entries are the ladder offsets and the hub entry is
/// the cavity detuning, so eigenvalues land directly on the spectrum axis.
struct ModeMatrix {
  std::vector<double> diagonal;  // size M+1, hub last
  std::vector<double> border;    // size M

  std::size_t dim() const { return diagonal.size(); }
  void validate() const;
};

ModeMatrix mode_matrix(const TransitionLadder& ladder, const CollectiveCoupling& coupling,
                       double delta_c);

/// Polariton (normal-mode) decomposition of a ModeMatrix.
struct PolaritonModes {
  std::vector<double> eigenvalues;            // ascending
  std::vector<std::vector<double>> weights;   // row k: squared eigenvector
                                              // components [atomic_1..atomic_M, photonic]
  std::vector<double> photonic_fraction;      // last weights column

  std::size_t size() const { return eigenvalues.size(); }
};

/// Full eigendecomposition via the arrowhead secular equation
///   f(lambda) = hub - lambda - sum_i border_i^2 / (d_i - lambda) = 0,
/// one root per interlacing interval, solved by safeguarded bisection.
/// Zero-coupling and degenerate leaves are deflated analytically. Throws
/// NumericalError on non-convergence or residual blow-up, never silently.
PolaritonModes eigenmodes(const ModeMatrix& m);

/// Characteristic polynomial det(lambda I - A), ascending coefficients
/// [c_0 .. c_dim], always monic. Expanded exactly from the arrowhead identity
///   det(A - lambda I) = (hub-lambda) prod_i (d_i-lambda)
///                       - sum_i border_i^2 prod_{j!=i} (d_j-lambda).
std::vector<double> characteristic_polynomial(const ModeMatrix& m);

/// The tabulated closed-form quartic for the equal-coupling four-level case
/// with splittings (2 delta, 4 delta), kept verbatim for the expansion audit:
///   lambda^4 + (dc + 10 d) lambda^3 + (24 d^2 - 3 G^2 - 10 d dc) lambda^2
///            + (20 d G^2 + 24 d^2 dc) lambda + 24 G^2 d^2.
/// Ascending coefficients [c_0 .. c_4]. See quartic_audit for the comparison.
std::vector<double> reference_quartic_coefficients(double g_sqrt_n, double delta,
                                                   double delta_c);

/// All roots of a real-coefficient polynomial (ascending coefficients) via
/// companion-matrix eigenvalues plus Newton polish. Requires a nonzero leading
/// coefficient; enforces |p(root)| <= 1e-8 * max|c_i| per root.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coefficients);

/// Comparison of the tabulated quartic against the exact determinant
/// expansion, under both sign conventions of the interaction matrix:
///  - energy-offset convention: leaves [0, 4d, 6d], hub -dc (levels measured
///    down from the reference transition);
///  - probe-detuning convention: leaves [-6d, -4d, 0], hub +dc (the internal
///    convention; the negative of the other matrix).
/// Disagreements are reported, never silently corrected.
struct QuarticAudit {
  double g_sqrt_n = 0.0;
  double delta = 0.0;
  double delta_c = 0.0;
  std::vector<double> reference;              // tabulated [c_0..c_4]
  std::vector<double> energy_expansion;       // det expansion, energy-offset convention
  std::vector<double> probe_expansion;        // det expansion, probe-detuning convention
  std::vector<bool> matches_energy;           // per-coefficient, reference vs energy_expansion
  std::vector<bool> matches_probe;            // per-coefficient, reference vs probe_expansion
  std::vector<std::complex<double>> reference_roots;
  std::vector<std::complex<double>> energy_roots;
  std::vector<double> probe_eigenvalues;      // eigenmodes of the internal matrix
  bool reference_matches_energy = false;      // all five coefficients agree
};

QuarticAudit quartic_audit(double g_sqrt_n, double delta, double delta_c);

/// Eigenvalue branches versus cavity detuning. branch[k][j] is the branch id
/// of the j-th (ascending) eigenvalue at sample k; ids follow branches through
/// crossings by linear prediction from the previous two samples, with local
/// step-halving where branches approach each other.
struct BranchScan {
  std::vector<double> delta_c;
  std::vector<PolaritonModes> modes;      // per sample, eigenvalues ascending
  std::vector<std::vector<int>> branch;
};

BranchScan branch_scan(const TransitionLadder& ladder, const CollectiveCoupling& coupling,
                       const std::vector<double>& dc_values);

}  // namespace cavspec
