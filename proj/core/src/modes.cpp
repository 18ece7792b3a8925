#include "cavspec/modes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cavspec/errors.hpp"

namespace cavspec {

namespace {

double matrix_scale(const ModeMatrix& m) {
  double s = 1.0;
  for (double d : m.diagonal) s = std::max(s, std::abs(d));
  for (double w : m.border) s = std::max(s, std::abs(w));
  return s;
}

struct EigenPair {
  double value;
  std::vector<double> vector;  // normalized, layout [leaf_1..leaf_M, hub]
};

// Secular function f(lambda) = hub - lambda - sum_i w_i^2 / (d_i - lambda),
// strictly decreasing between poles; exactly one root per interlacing interval.
class Secular {
 public:
  Secular(const std::vector<double>& leaves, const std::vector<double>& weights, double hub)
      : d_(leaves), hub_(hub) {
    w2_.reserve(weights.size());
    for (double w : weights) w2_.push_back(w * w);
  }

  double operator()(double lam) const {
    double f = hub_ - lam;
    for (std::size_t i = 0; i < d_.size(); ++i) f -= w2_[i] / (d_[i] - lam);
    return f;
  }

  // Bisection on (a, b) with f(a) > 0 > f(b), run to floating-point resolution.
  double root(double a, double b) const {
    if (a >= b) return a;
    if ((*this)(a) <= 0.0) return a;
    if ((*this)(b) >= 0.0) return b;
    for (int it = 0; it < 4000; ++it) {
      const double mid = a + 0.5 * (b - a);
      if (!(mid > a) || !(mid < b)) return mid;
      const double fm = (*this)(mid);
      if (fm > 0.0) {
        a = mid;
      } else if (fm < 0.0) {
        b = mid;
      } else {
        return mid;
      }
    }
    throw NumericalError("eigenmodes: secular bisection failed to converge");
  }

 private:
  std::vector<double> d_;
  std::vector<double> w2_;
  double hub_;
};

// Orthonormal basis of the complement of the unit vector u inside R^k,
// taken from the trailing columns of the Householder reflector mapping e_0 to u.
std::vector<std::vector<double>> complement_basis(const std::vector<double>& u) {
  const std::size_t k = u.size();
  std::vector<double> v = u;
  v[0] -= 1.0;
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  std::vector<std::vector<double>> basis;
  basis.reserve(k - 1);
  if (nv < 1e-14) {
    for (std::size_t j = 1; j < k; ++j) {
      std::vector<double> e(k, 0.0);
      e[j] = 1.0;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  for (double& x : v) x /= nv;
  for (std::size_t j = 1; j < k; ++j) {
    std::vector<double> col(k, 0.0);
    col[j] = 1.0;
    for (std::size_t i = 0; i < k; ++i) col[i] -= 2.0 * v[i] * v[j];
    basis.push_back(std::move(col));
  }
  return basis;
}

Eigen::MatrixXd dense_arrowhead(const ModeMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = m.diagonal[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a(i, n - 1) = m.border[static_cast<std::size_t>(i)];
    a(n - 1, i) = m.border[static_cast<std::size_t>(i)];
  }
  return a;
}

// Ascending-coefficient polynomial helpers for the determinant expansion.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_prod_linear(const std::vector<double>& roots_as_d) {
  // prod_i (d_i - lambda)
  Poly p{1.0};
  for (double d : roots_as_d) p = poly_mul(p, Poly{d, -1.0});
  return p;
}

}  // namespace

void ModeMatrix::validate() const {
  if (diagonal.size() < 2 || border.size() + 1 != diagonal.size()) {
    throw ValidationError("mode matrix: need diagonal of size M+1 and border of size M >= 1");
  }
  for (double d : diagonal) {
    if (!std::isfinite(d)) throw ValidationError("mode matrix: diagonal entries must be finite");
  }
  for (double w : border) {
    if (!std::isfinite(w)) throw ValidationError("mode matrix: border entries must be finite");
  }
}

ModeMatrix mode_matrix(const TransitionLadder& ladder, const CollectiveCoupling& coupling,
                       double delta_c) {
  ladder.validate();
  coupling.validate();
  if (coupling.size() != ladder.size()) {
    throw ValidationError("mode_matrix: coupling length must match the ladder");
  }
  if (!std::isfinite(delta_c)) throw ValidationError("mode_matrix: delta_c must be finite");
  ModeMatrix m;
  m.diagonal = ladder.offsets;
  m.diagonal.push_back(delta_c);
  m.border = coupling.strengths;
  return m;
}

PolaritonModes eigenmodes(const ModeMatrix& m) {
  m.validate();
  const std::size_t mcount = m.border.size();
  const double hub = m.diagonal[mcount];
  const double scale = matrix_scale(m);
  const double weight_floor = 1e-13 * scale;

  std::vector<EigenPair> pairs;
  pairs.reserve(mcount + 1);

  // Leaves with (numerically) zero coupling decouple exactly.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < mcount; ++i) {
    if (std::abs(m.border[i]) <= weight_floor) {
      EigenPair p;
      p.value = m.diagonal[i];
      p.vector.assign(mcount + 1, 0.0);
      p.vector[i] = 1.0;
      pairs.push_back(std::move(p));
    } else {
      active.push_back(i);
    }
  }

  // Group active leaves with identical diagonal value; each group of size k
  // contributes k-1 exact eigenvalues whose eigenvectors are orthogonal to the
  // border vector within the group, plus one effective leaf of weight ||w||.
  std::sort(active.begin(), active.end(),
            [&](std::size_t a, std::size_t b) { return m.diagonal[a] < m.diagonal[b]; });
  std::vector<double> red_d, red_w;
  std::size_t i = 0;
  while (i < active.size()) {
    std::size_t j = i;
    while (j < active.size() && m.diagonal[active[j]] == m.diagonal[active[i]]) ++j;
    const std::size_t k = j - i;
    double wnorm2 = 0.0;
    for (std::size_t t = i; t < j; ++t) {
      wnorm2 += m.border[active[t]] * m.border[active[t]];
    }
    const double wnorm = std::sqrt(wnorm2);
    if (k >= 2) {
      std::vector<double> u(k);
      for (std::size_t t = 0; t < k; ++t) u[t] = m.border[active[i + t]] / wnorm;
      for (auto& col : complement_basis(u)) {
        EigenPair p;
        p.value = m.diagonal[active[i]];
        p.vector.assign(mcount + 1, 0.0);
        for (std::size_t t = 0; t < k; ++t) p.vector[active[i + t]] = col[t];
        pairs.push_back(std::move(p));
      }
    }
    red_d.push_back(m.diagonal[active[i]]);
    red_w.push_back(wnorm);
    i = j;
  }

  if (red_d.empty()) {
    // Fully decoupled hub.
    EigenPair p;
    p.value = hub;
    p.vector.assign(mcount + 1, 0.0);
    p.vector[mcount] = 1.0;
    pairs.push_back(std::move(p));
  } else {
    const Secular f(red_d, red_w, hub);
    double asum = 0.0;
    for (double w : red_w) asum += std::abs(w);
    double lo = hub - asum, hi = hub + asum;
    for (std::size_t t = 0; t < red_d.size(); ++t) {
      lo = std::min(lo, red_d[t] - std::abs(red_w[t]));
      hi = std::max(hi, red_d[t] + std::abs(red_w[t]));
    }
    lo -= 1.0 + 1e-3 * scale;
    hi += 1.0 + 1e-3 * scale;

    std::vector<double> roots;
    roots.reserve(red_d.size() + 1);
    const double inf = std::numeric_limits<double>::infinity();
    roots.push_back(f.root(lo, std::nextafter(red_d.front(), -inf)));
    for (std::size_t t = 0; t + 1 < red_d.size(); ++t) {
      roots.push_back(f.root(std::nextafter(red_d[t], inf), std::nextafter(red_d[t + 1], -inf)));
    }
    roots.push_back(f.root(std::nextafter(red_d.back(), inf), hi));

    for (double lam : roots) {
      EigenPair p;
      p.value = lam;
      p.vector.assign(mcount + 1, 0.0);
      bool on_pole = false;
      for (std::size_t t = 0; t < mcount && !on_pole; ++t) {
        on_pole = std::find(active.begin(), active.end(), t) != active.end() &&
                  lam == m.diagonal[t];
      }
      if (on_pole) {
        // Root indistinguishable from a pole at double precision: the mode is
        // that bare leaf to working accuracy.
        for (std::size_t t : active) {
          if (lam == m.diagonal[t]) {
            p.vector[t] = 1.0;
            break;
          }
        }
      } else {
        double norm2 = 1.0;  // hub component 1 before normalization
        for (std::size_t t : active) {
          const double c = m.border[t] / (lam - m.diagonal[t]);
          p.vector[t] = c;
          norm2 += c * c;
        }
        p.vector[mcount] = 1.0;
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : p.vector) c *= inv;
      }
      pairs.push_back(std::move(p));
    }
  }

  if (pairs.size() != mcount + 1) {
    throw NumericalError("eigenmodes: internal eigenpair count mismatch");
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });

  PolaritonModes out;
  out.eigenvalues.reserve(pairs.size());
  out.weights.reserve(pairs.size());
  out.photonic_fraction.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.eigenvalues.push_back(p.value);
    std::vector<double> row(p.vector.size());
    double rsum = 0.0;
    for (std::size_t t = 0; t < p.vector.size(); ++t) {
      row[t] = p.vector[t] * p.vector[t];
      rsum += row[t];
    }
    if (std::abs(rsum - 1.0) > 1e-10) {
      throw NumericalError("eigenmodes: eigenvector normalization lost");
    }
    out.photonic_fraction.push_back(row.back());
    out.weights.push_back(std::move(row));
  }

  // Cross-mode sanity: completeness of the photonic column, trace identity,
  // and the eigen-equation residual of every pair.
  double photon_sum = 0.0;
  for (double p : out.photonic_fraction) photon_sum += p;
  if (std::abs(photon_sum - 1.0) > 1e-10) {
    throw NumericalError("eigenmodes: photonic fractions do not sum to 1");
  }
  const double trace = std::accumulate(m.diagonal.begin(), m.diagonal.end(), 0.0);
  const double esum = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), 0.0);
  if (std::abs(esum - trace) > 1e-10 * std::max(1.0, std::abs(trace) + scale)) {
    throw NumericalError("eigenmodes: eigenvalue sum deviates from the trace");
  }
  const Eigen::MatrixXd a = dense_arrowhead(m);
  for (const auto& p : pairs) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(p.vector.data(),
                                                          static_cast<Eigen::Index>(p.vector.size()));
    const double resid = (a * v - p.value * v).cwiseAbs().maxCoeff();
    if (resid > 1e-8 * scale) {
      std::ostringstream os;
      os << "eigenmodes: eigenpair residual " << resid << " exceeds tolerance";
      throw NumericalError(os.str());
    }
  }
  return out;
}

std::vector<double> characteristic_polynomial(const ModeMatrix& m) {
  m.validate();
  const std::size_t mcount = m.border.size();
  std::vector<double> leaves(m.diagonal.begin(), m.diagonal.begin() + static_cast<long>(mcount));
  const double hub = m.diagonal[mcount];

  Poly p = poly_mul(Poly{hub, -1.0}, poly_prod_linear(leaves));
  for (std::size_t i = 0; i < mcount; ++i) {
    std::vector<double> others;
    others.reserve(mcount - 1);
    for (std::size_t j = 0; j < mcount; ++j) {
      if (j != i) others.push_back(leaves[j]);
    }
    const Poly q = poly_prod_linear(others);
    const double w2 = m.border[i] * m.border[i];
    for (std::size_t t = 0; t < q.size(); ++t) p[t] -= w2 * q[t];
  }
  // det(A - lambda I) has leading coefficient (-1)^dim; flip to monic,
  // i.e. return det(lambda I - A).
  if ((mcount + 1) % 2 == 1) {
    for (double& c : p) c = -c;
  }
  return p;
}

std::vector<double> reference_quartic_coefficients(double g_sqrt_n, double delta,
                                                   double delta_c) {
  const double g2n = g_sqrt_n * g_sqrt_n;
  const double d = delta, dc = delta_c;
  return {
      24.0 * g2n * d * d,
      20.0 * d * g2n + 24.0 * d * d * dc,
      24.0 * d * d - 3.0 * g2n - 10.0 * d * dc,
      dc + 10.0 * d,
      1.0,
  };
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coefficients) {
  if (coefficients.size() < 2) {
    throw ValidationError("poly_roots: polynomial must have degree >= 1");
  }
  const double lead = coefficients.back();
  if (lead == 0.0 || !std::isfinite(lead)) {
    throw ValidationError("poly_roots: leading coefficient must be nonzero and finite");
  }
  const auto n = static_cast<Eigen::Index>(coefficients.size() - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 1; r < n; ++r) companion(r, r - 1) = 1.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    companion(r, n - 1) = -coefficients[static_cast<std::size_t>(r)] / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("poly_roots: companion eigensolver did not converge");
  }

  const auto horner = [&](std::complex<double> z) {
    std::complex<double> p(0.0, 0.0);
    for (std::size_t k = coefficients.size(); k-- > 0;) p = p * z + coefficients[k];
    return p;
  };
  const auto horner_d = [&](std::complex<double> z) {
    std::complex<double> p(0.0, 0.0);
    for (std::size_t k = coefficients.size(); k-- > 1;) {
      p = p * z + static_cast<double>(k) * coefficients[k];
    }
    return p;
  };

  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    std::complex<double> z = solver.eigenvalues()(r);
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> dp = horner_d(z);
      if (std::abs(dp) == 0.0) break;
      z -= horner(z) / dp;
    }
    roots[static_cast<std::size_t>(r)] = z;
  }
  std::sort(roots.begin(), roots.end(), [](std::complex<double> a, std::complex<double> b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  double cmax = 0.0;
  for (double c : coefficients) cmax = std::max(cmax, std::abs(c));
  for (const auto& z : roots) {
    if (std::abs(horner(z)) > 1e-8 * cmax) {
      std::ostringstream os;
      os << "poly_roots: residual " << std::abs(horner(z)) << " at root (" << z.real() << ", "
         << z.imag() << ") exceeds 1e-8 * max|c|";
      throw NumericalError(os.str());
    }
  }
  return roots;
}

QuarticAudit quartic_audit(double g_sqrt_n, double delta, double delta_c) {
  if (!std::isfinite(g_sqrt_n) || !std::isfinite(delta) || !std::isfinite(delta_c)) {
    throw ValidationError("quartic_audit: arguments must be finite");
  }
  QuarticAudit audit;
  audit.g_sqrt_n = g_sqrt_n;
  audit.delta = delta;
  audit.delta_c = delta_c;
  audit.reference = reference_quartic_coefficients(g_sqrt_n, delta, delta_c);

  ModeMatrix energy;
  energy.diagonal = {0.0, 4.0 * delta, 6.0 * delta, -delta_c};
  energy.border = {g_sqrt_n, g_sqrt_n, g_sqrt_n};
  audit.energy_expansion = characteristic_polynomial(energy);

  ModeMatrix probe;
  probe.diagonal = {-6.0 * delta, -4.0 * delta, 0.0, delta_c};
  probe.border = {g_sqrt_n, g_sqrt_n, g_sqrt_n};
  audit.probe_expansion = characteristic_polynomial(probe);

  double cscale = 1.0;
  for (double c : audit.reference) cscale = std::max(cscale, std::abs(c));
  for (double c : audit.energy_expansion) cscale = std::max(cscale, std::abs(c));
  const double tol = 1e-9 * cscale;
  audit.matches_energy.resize(5);
  audit.matches_probe.resize(5);
  for (std::size_t k = 0; k < 5; ++k) {
    audit.matches_energy[k] = std::abs(audit.reference[k] - audit.energy_expansion[k]) <= tol;
    audit.matches_probe[k] = std::abs(audit.reference[k] - audit.probe_expansion[k]) <= tol;
  }
  audit.reference_matches_energy =
      std::all_of(audit.matches_energy.begin(), audit.matches_energy.end(),
                  [](bool b) { return b; });

  audit.reference_roots = poly_roots(audit.reference);
  audit.energy_roots = poly_roots(audit.energy_expansion);
  audit.probe_eigenvalues = eigenmodes(probe).eigenvalues;
  return audit;
}

namespace {

double min_adjacent_gap(const std::vector<double>& sorted_values) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < sorted_values.size(); ++j) {
    g = std::min(g, sorted_values[j + 1] - sorted_values[j]);
  }
  return g;
}

// Tracks branch labels across the detuning scan. Predictions are linear
// extrapolations per branch; sorted eigenvalues are assigned the branch ids of
// the sorted predictions (the minimum-total-|distance| matching in 1-D).
class BranchTracker {
 public:
  explicit BranchTracker(std::size_t nmodes) : value_(nmodes), slope_(nmodes, 0.0) {}

  void seed(double dc, const std::vector<double>& eigenvalues) {
    dc_ = dc;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) value_[j] = eigenvalues[j];
    seeded_ = true;
  }

  std::vector<double> predict(double dc) const {
    std::vector<double> p(value_.size());
    for (std::size_t b = 0; b < value_.size(); ++b) p[b] = value_[b] + slope_[b] * (dc - dc_);
    return p;
  }

  // Assign branch ids to ascending eigenvalues at dc and advance the state.
  std::vector<int> advance(double dc, const std::vector<double>& eigenvalues) {
    const std::vector<double> pred = predict(dc);
    std::vector<int> order(pred.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pred[static_cast<std::size_t>(a)] < pred[static_cast<std::size_t>(b)]; });
    std::vector<int> ids(eigenvalues.size());
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) ids[j] = order[j];
    const double ddc = dc - dc_;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
      const auto b = static_cast<std::size_t>(ids[j]);
      if (ddc != 0.0) slope_[b] = (eigenvalues[j] - value_[b]) / ddc;
      value_[b] = eigenvalues[j];
    }
    dc_ = dc;
    return ids;
  }

  // Largest mismatch between sorted predictions and the fresh eigenvalues.
  double prediction_error(double dc, const std::vector<double>& eigenvalues) const {
    std::vector<double> pred = predict(dc);
    std::sort(pred.begin(), pred.end());
    double err = 0.0;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
      err = std::max(err, std::abs(pred[j] - eigenvalues[j]));
    }
    return err;
  }

  bool seeded() const { return seeded_; }

 private:
  std::vector<double> value_;
  std::vector<double> slope_;
  double dc_ = 0.0;
  bool seeded_ = false;
};

}  // namespace

BranchScan branch_scan(const TransitionLadder& ladder, const CollectiveCoupling& coupling,
                       const std::vector<double>& dc_values) {
  if (dc_values.empty()) throw ValidationError("branch_scan: dc_values must be non-empty");
  for (std::size_t k = 1; k < dc_values.size(); ++k) {
    if (!(dc_values[k - 1] < dc_values[k])) {
      throw ValidationError("branch_scan: dc_values must be strictly increasing");
    }
  }

  BranchScan scan;
  scan.delta_c = dc_values;
  scan.modes.reserve(dc_values.size());
  for (double dc : dc_values) {
    scan.modes.push_back(eigenmodes(mode_matrix(ladder, coupling, dc)));
  }

  const std::size_t nmodes = scan.modes.front().size();
  scan.branch.assign(dc_values.size(), std::vector<int>(nmodes, 0));
  for (std::size_t j = 0; j < nmodes; ++j) scan.branch[0][j] = static_cast<int>(j);

  BranchTracker tracker(nmodes);
  tracker.seed(dc_values[0], scan.modes[0].eigenvalues);

  const auto eigenvalues_at = [&](double dc) {
    return eigenmodes(mode_matrix(ladder, coupling, dc)).eigenvalues;
  };

  for (std::size_t k = 1; k < dc_values.size(); ++k) {
    // Step-halving walk from the previous sample: a pending point is labeled
    // only once the prediction error is small against the local branch
    // spacing, otherwise its left half is labeled first. Keeps every tracker
    // step unambiguous, so labels follow the actual eigenvalue curves through
    // near-crossings. Intermediate samples are labeling-only; the output
    // stays on the requested grid.
    double from_dc = dc_values[k - 1];
    const double target_dc = dc_values[k];
    int budget = 4000;
    std::vector<double> pending{target_dc};
    while (!pending.empty()) {
      const double at_dc = pending.back();
      const std::vector<double> fresh =
          at_dc == target_dc ? scan.modes[k].eigenvalues : eigenvalues_at(at_dc);
      const double err = tracker.prediction_error(at_dc, fresh);
      const double gap = min_adjacent_gap(fresh);
      const double span = at_dc - from_dc;
      if (err <= 0.25 * std::max(gap, 1e-12) || span <= 1e-9 * (1.0 + std::abs(at_dc)) ||
          --budget <= 0) {
        const std::vector<int> ids = tracker.advance(at_dc, fresh);
        if (at_dc == target_dc) scan.branch[k] = ids;
        from_dc = at_dc;
        pending.pop_back();
      } else {
        pending.push_back(from_dc + 0.5 * span);
      }
    }
  }
  return scan;
}

}  // namespace cavspec
