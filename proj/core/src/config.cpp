#include "cavspec/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cavspec/errors.hpp"

namespace cavspec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError("config: " + path + ": " + message);
}

void require_keys(const json& node, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : node.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& require(const json& node, const std::string& path, const std::string& key) {
  const auto it = node.find(key);
  if (it == node.end()) {
    throw ValidationError("config: missing required key: " +
                          (path.empty() ? key : path + "." + key));
  }
  return *it;
}

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

// Frequencies are unit-tagged objects {"value": x, "unit": "Gamma"|"MHz"};
// result is always in Gamma-units.
double frequency_at(const json& node, const std::string& path,
                    const std::optional<double>& gamma_mhz) {
  if (!node.is_object()) fail(path, "expected {\"value\": number, \"unit\": \"Gamma\"|\"MHz\"}");
  require_keys(node, path, {"value", "unit"});
  const double value = number_at(require(node, path, "value"), path + ".value");
  const json& unit = require(node, path, "unit");
  if (!unit.is_string()) fail(path + ".unit", "expected \"Gamma\" or \"MHz\"");
  const std::string u = unit.get<std::string>();
  if (u == "Gamma") return value;
  if (u == "MHz") {
    if (!gamma_mhz) {
      fail(path + ".unit", "MHz requires units.gamma_mhz");
    }
    return convert({value, Unit::MHz}, Unit::Gamma, *gamma_mhz).value;
  }
  fail(path + ".unit", "expected \"Gamma\" or \"MHz\" (got \"" + u + "\")");
}

ParsedConfig parse_document(const json& doc) {
  require_keys(doc, "", {"meta", "units", "levels", "coupling", "cavity", "scan", "fit"});

  ParsedConfig out;

  if (doc.contains("meta")) {
    require_keys(doc["meta"], "meta", {"description"});
    if (doc["meta"].contains("description")) {
      if (!doc["meta"]["description"].is_string()) fail("meta.description", "expected a string");
      out.description = doc["meta"]["description"].get<std::string>();
    }
  }

  if (doc.contains("units")) {
    require_keys(doc["units"], "units", {"gamma_mhz"});
    if (doc["units"].contains("gamma_mhz")) {
      const double g = number_at(doc["units"]["gamma_mhz"], "units.gamma_mhz");
      if (!(g > 0.0)) fail("units.gamma_mhz", "must be > 0");
      out.gamma_mhz = g;
    }
  }

  const json& levels = require(doc, "", "levels");
  require_keys(levels, "levels", {"delta23", "delta34", "gammas"});
  const double delta23 = frequency_at(require(levels, "levels", "delta23"), "levels.delta23",
                                      out.gamma_mhz);
  const double delta34 = frequency_at(require(levels, "levels", "delta34"), "levels.delta34",
                                      out.gamma_mhz);
  std::array<double, 3> gammas = {1.0, 1.0, 1.0};
  if (levels.contains("gammas")) {
    const json& g = levels["gammas"];
    if (!g.is_array() || g.size() != 3) fail("levels.gammas", "expected an array of 3 frequencies");
    for (std::size_t i = 0; i < 3; ++i) {
      std::ostringstream os;
      os << "levels.gammas[" << i << "]";
      gammas[i] = frequency_at(g[i], os.str(), out.gamma_mhz);
    }
  }
  if (!(delta23 > 0.0)) fail("levels.delta23", "must be > 0");
  if (!(delta34 > 0.0)) fail("levels.delta34", "must be > 0");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(gammas[i] > 0.0)) {
      std::ostringstream os;
      os << "levels.gammas[" << i << "]";
      fail(os.str(), "must be > 0");
    }
  }
  out.system.ladder = build_from_splittings(delta23, delta34, gammas);

  const json& coupling = require(doc, "", "coupling");
  require_keys(coupling, "coupling", {"g_sqrt_n", "per_transition"});
  if (coupling.contains("g_sqrt_n") == coupling.contains("per_transition")) {
    fail("coupling", "exactly one of g_sqrt_n or per_transition required");
  }
  if (coupling.contains("g_sqrt_n")) {
    const double g = frequency_at(coupling["g_sqrt_n"], "coupling.g_sqrt_n", out.gamma_mhz);
    if (g < 0.0) fail("coupling.g_sqrt_n", "must be >= 0");
    out.system.coupling = CollectiveCoupling::uniform(g, 3);
  } else {
    const json& per = coupling["per_transition"];
    if (!per.is_array() || per.size() != 3) {
      fail("coupling.per_transition", "expected an array of 3 frequencies");
    }
    out.system.coupling.strengths.resize(3);
    for (std::size_t i = 0; i < 3; ++i) {
      std::ostringstream os;
      os << "coupling.per_transition[" << i << "]";
      const double g = frequency_at(per[i], os.str(), out.gamma_mhz);
      if (g < 0.0) fail(os.str(), "must be >= 0");
      out.system.coupling.strengths[i] = g;
    }
  }

  const json& cavity = require(doc, "", "cavity");
  require_keys(cavity, "cavity", {"kappa", "delta_c"});
  const double kappa = frequency_at(require(cavity, "cavity", "kappa"), "cavity.kappa",
                                    out.gamma_mhz);
  if (!(kappa > 0.0)) fail("cavity.kappa", "must be > 0");
  out.system.cavity.kappa = kappa;
  out.system.cavity.delta_c = frequency_at(require(cavity, "cavity", "delta_c"), "cavity.delta_c",
                                           out.gamma_mhz);

  const json& scan = require(doc, "", "scan");
  require_keys(scan, "scan", {"dp_min", "dp_max", "points"});
  out.system.grid.dp_min = frequency_at(require(scan, "scan", "dp_min"), "scan.dp_min",
                                        out.gamma_mhz);
  out.system.grid.dp_max = frequency_at(require(scan, "scan", "dp_max"), "scan.dp_max",
                                        out.gamma_mhz);
  const json& points = require(scan, "scan", "points");
  if (!points.is_number_integer()) fail("scan.points", "expected an integer");
  out.system.grid.points = points.get<int>();
  if (out.system.grid.points < 2) fail("scan.points", "must be >= 2");
  if (!(out.system.grid.dp_min < out.system.grid.dp_max)) {
    fail("scan.dp_min", "must be < scan.dp_max");
  }

  if (doc.contains("fit")) {
    const json& fit = doc["fit"];
    require_keys(fit, "fit", {"free", "initial", "lower", "upper", "max_iterations"});
    FitSpec spec;
    const json& free = require(fit, "fit", "free");
    if (!free.is_array() || free.empty()) fail("fit.free", "expected a non-empty array of names");
    for (const auto& name : free) {
      if (!name.is_string()) fail("fit.free", "entries must be parameter names");
      spec.free.push_back(fit_param_from_name(name.get<std::string>()));
    }
    const auto parse_param_map = [&](const char* key, auto&& store) {
      if (!fit.contains(key)) return;
      const json& node = fit[key];
      if (!node.is_object()) fail(std::string("fit.") + key, "expected an object");
      for (const auto& [pname, pvalue] : node.items()) {
        const FitParam p = fit_param_from_name(pname);
        const std::string path = std::string("fit.") + key + "." + pname;
        double v = 0.0;
        if (p == FitParam::Scale) {
          v = number_at(pvalue, path);
        } else {
          v = frequency_at(pvalue, path, out.gamma_mhz);
        }
        store(p, v);
      }
    };
    parse_param_map("initial", [&](FitParam p, double v) { spec.initial[p] = v; });
    std::map<FitParam, double> lower, upper;
    parse_param_map("lower", [&](FitParam p, double v) { lower[p] = v; });
    parse_param_map("upper", [&](FitParam p, double v) { upper[p] = v; });
    for (const auto& [p, lo] : lower) {
      const auto it = upper.find(p);
      if (it == upper.end()) {
        fail(std::string("fit.upper.") + fit_param_name(p), "missing (lower bound given)");
      }
      spec.bounds[p] = {lo, it->second};
    }
    for (const auto& [p, hi] : upper) {
      if (!lower.count(p)) {
        fail(std::string("fit.lower.") + fit_param_name(p), "missing (upper bound given)");
      }
    }
    if (fit.contains("max_iterations")) {
      const json& mi = fit["max_iterations"];
      if (!mi.is_number_integer()) fail("fit.max_iterations", "expected an integer");
      spec.max_iterations = mi.get<int>();
      if (spec.max_iterations < 1) fail("fit.max_iterations", "must be >= 1");
    }
    out.fit = std::move(spec);
  }

  out.system.validate();
  return out;
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: syntax error: ") + e.what());
  }
  return parse_document(doc);
}

ParsedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

FitProblem make_fit_problem(const ParsedConfig& config, const std::vector<double>& dp,
                            const std::vector<double>& intensity,
                            const std::vector<double>& weight) {
  if (!config.fit) throw ValidationError("config: missing fit section");
  FitProblem prob;
  prob.dp = dp;
  prob.intensity = intensity;
  prob.weight = weight;
  prob.ladder = config.system.ladder;
  prob.free = config.fit->free;
  prob.baseline.strengths = {config.system.coupling.strengths[0],
                             config.system.coupling.strengths[1],
                             config.system.coupling.strengths[2]};
  prob.baseline.kappa = config.system.cavity.kappa;
  prob.baseline.delta_c = config.system.cavity.delta_c;
  prob.initial = config.fit->initial;
  prob.bounds = config.fit->bounds;
  prob.max_iterations = config.fit->max_iterations;
  prob.validate();
  return prob;
}

}  // namespace cavspec
