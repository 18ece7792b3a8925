#include "cavspec/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "cavspec/errors.hpp"

namespace cavspec::csv {

std::string format(double v) {
  std::array<char, 32> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericalError("csv: failed to format value");
  return {buf.data(), end};
}

void write_spectrum(std::ostream& os, const Spectrum& s) {
  os << "delta_p,re_amplitude,im_amplitude,intensity\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << format(s.dp[k]) << ',' << format(s.amplitude[k].real()) << ','
       << format(s.amplitude[k].imag()) << ',' << format(s.intensity[k]) << '\n';
  }
}

void write_chi(std::ostream& os, const std::vector<double>& dp,
               const std::vector<std::complex<double>>& chi) {
  os << "delta_p,re_chi,im_chi\n";
  for (std::size_t k = 0; k < dp.size(); ++k) {
    os << format(dp[k]) << ',' << format(chi[k].real()) << ',' << format(chi[k].imag()) << '\n';
  }
}

void write_modes(std::ostream& os, const PolaritonModes& modes) {
  const std::size_t m = modes.size() > 0 ? modes.weights.front().size() - 1 : 0;
  os << "index,eigenvalue,photonic_fraction";
  for (std::size_t i = 1; i <= m; ++i) os << ",w" << i;
  os << '\n';
  for (std::size_t k = 0; k < modes.size(); ++k) {
    os << k << ',' << format(modes.eigenvalues[k]) << ',' << format(modes.photonic_fraction[k]);
    for (std::size_t i = 0; i < m; ++i) os << ',' << format(modes.weights[k][i]);
    os << '\n';
  }
}

void write_branches(std::ostream& os, const BranchScan& scan) {
  const std::size_t n = scan.modes.empty() ? 0 : scan.modes.front().size();
  os << "delta_c";
  for (std::size_t j = 1; j <= n; ++j) os << ",lambda_" << j;
  os << '\n';
  for (std::size_t k = 0; k < scan.delta_c.size(); ++k) {
    os << format(scan.delta_c[k]);
    for (std::size_t j = 0; j < n; ++j) os << ',' << format(scan.modes[k].eigenvalues[j]);
    os << '\n';
  }
}

void write_peaks(std::ostream& os, const std::vector<Peak>& peaks) {
  os << "position,height,prominence\n";
  for (const auto& p : peaks) {
    os << format(p.position) << ',' << format(p.height) << ',' << format(p.prominence) << '\n';
  }
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const auto dim = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t,re_cavity,im_cavity";
  for (Eigen::Index i = 1; i < dim; ++i) os << ",re_coherence" << i << ",im_coherence" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format(traj.times[k]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      os << ',' << format(traj.states[k](i).real()) << ',' << format(traj.states[k](i).imag());
    }
    os << '\n';
  }
}

namespace {

double parse_field(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream os;
    os << "csv: line " << line_no << ": cannot parse number '" << field << "'";
    throw ValidationError(os.str());
  }
  return v;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

FitData read_fit_data(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("csv: empty input");
  const auto header = split_line(line);
  bool has_weight = false;
  if (header.size() == 2 && header[0] == "delta_p" && header[1] == "intensity") {
    has_weight = false;
  } else if (header.size() == 3 && header[0] == "delta_p" && header[1] == "intensity" &&
             header[2] == "weight") {
    has_weight = true;
  } else {
    throw ValidationError("csv: expected header 'delta_p,intensity[,weight]'");
  }

  FitData data;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << "csv: line " << line_no << ": expected " << header.size() << " fields, got "
         << fields.size();
      throw ValidationError(os.str());
    }
    data.dp.push_back(parse_field(fields[0], line_no));
    data.intensity.push_back(parse_field(fields[1], line_no));
    if (has_weight) data.weight.push_back(parse_field(fields[2], line_no));
  }
  if (data.dp.empty()) throw ValidationError("csv: no data rows");
  return data;
}

}  // namespace cavspec::csv
