#include "cavspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavspec/errors.hpp"

namespace cavspec {

std::vector<SeriesPeak> find_series_peaks(std::span<const double> x, std::span<const double> y,
                                          double min_prominence) {
  if (x.size() != y.size()) throw ValidationError("find_peaks: x and y sizes differ");
  if (x.size() < 3) throw ValidationError("find_peaks: need at least 3 samples");
  if (!(min_prominence >= 0.0)) throw ValidationError("find_peaks: min_prominence must be >= 0");

  std::vector<SeriesPeak> out;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;

    // Topographic prominence: walk out on both sides until a higher sample
    // (or the window edge), track the lowest valley, take the higher of the two.
    double left_min = y[i];
    for (std::size_t j = i; j-- > 0;) {
      if (y[j] > y[i]) break;
      left_min = std::min(left_min, y[j]);
    }
    double right_min = y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) break;
      right_min = std::min(right_min, y[j]);
    }
    const double prominence = y[i] - std::max(left_min, right_min);
    if (prominence < min_prominence) continue;

    // Quadratic refinement through (i-1, i, i+1); offset stays within one step.
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double shift = 0.0;
    if (denom < 0.0) shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
    shift = std::clamp(shift, -1.0, 1.0);
    const double step = shift >= 0.0 ? x[i + 1] - x[i] : x[i] - x[i - 1];
    SeriesPeak p;
    p.position = x[i] + shift * step;
    p.height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift;
    p.prominence = prominence;
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(),
            [](const SeriesPeak& a, const SeriesPeak& b) { return a.position < b.position; });
  return out;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_prominence) {
  const auto raw = find_series_peaks(spectrum.dp, spectrum.intensity, min_prominence);
  std::vector<Peak> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    Peak p;
    p.position = r.position;
    p.height = std::min(r.height, 1.0);  // interpolation may overshoot the exact bound
    p.prominence = std::min(r.prominence, p.height);
    if (!(p.height > 0.0)) throw NumericalError("find_peaks: non-positive peak height");
    out.push_back(p);
  }
  return out;
}

ModeMatchReport match_peaks_to_modes(const std::vector<Peak>& peaks, const PolaritonModes& modes,
                                     double tol) {
  if (!(tol >= 0.0)) throw ValidationError("match_peaks_to_modes: tol must be >= 0");

  // Work on ascending peak positions (eigenvalues already are); the optimal
  // 1-D assignment is then order-preserving, so a small DP over
  // (peaks consumed, modes considered) finds it.
  std::vector<std::size_t> order(peaks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return peaks[a].position < peaks[b].position;
  });
  std::vector<double> p(peaks.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) p[i] = peaks[order[i]].position;
  const std::vector<double>& e = modes.eigenvalues;

  const bool swapped = p.size() > e.size();
  const std::vector<double>& few = swapped ? e : p;
  const std::vector<double>& many = swapped ? p : e;
  const std::size_t nf = few.size(), nm = many.size();

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(nf + 1, std::vector<double>(nm + 1, inf));
  for (std::size_t j = 0; j <= nm; ++j) cost[0][j] = 0.0;
  for (std::size_t i = 1; i <= nf; ++i) {
    for (std::size_t j = i; j <= nm; ++j) {
      const double take = cost[i - 1][j - 1] + std::abs(few[i - 1] - many[j - 1]);
      cost[i][j] = std::min(take, cost[i][j - 1]);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> assignment;  // (few idx, many idx)
  {
    std::size_t i = nf, j = nm;
    while (i > 0) {
      if (j > i && cost[i][j] == cost[i][j - 1]) {
        --j;
      } else {
        assignment.emplace_back(i - 1, j - 1);
        --i;
        --j;
      }
    }
  }
  std::reverse(assignment.begin(), assignment.end());

  ModeMatchReport report;
  std::vector<bool> peak_used(p.size(), false), mode_used(e.size(), false);
  for (auto [fi, mi] : assignment) {
    const std::size_t sorted_peak = swapped ? mi : fi;
    const std::size_t mode_idx = swapped ? fi : mi;
    const double resid = p[sorted_peak] - e[mode_idx];
    if (std::abs(resid) <= tol) {
      report.matched.push_back(
          {static_cast<int>(order[sorted_peak]), static_cast<int>(mode_idx), resid});
      report.total_distance += std::abs(resid);
      peak_used[order[sorted_peak]] = true;
      mode_used[mode_idx] = true;
    }
  }
  for (std::size_t i = 0; i < peak_used.size(); ++i) {
    if (!peak_used[i]) report.unmatched_peaks.push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < mode_used.size(); ++i) {
    if (!mode_used[i]) report.unmatched_modes.push_back(static_cast<int>(i));
  }
  return report;
}

double spectrum_distance(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw ValidationError("spectrum_distance: spectra must share a non-empty grid");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.dp[k] != b.dp[k]) {
      throw ValidationError("spectrum_distance: grids differ; resample first");
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a.intensity[k] - b.intensity[k];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

}  // namespace cavspec
