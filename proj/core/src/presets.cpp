#include "cavspec/presets.hpp"

#include <sstream>

#include <json.hpp>

#include "cavspec/errors.hpp"

namespace cavspec {

namespace {

using nlohmann::json;

// Default Gamma-to-MHz calibration shipped with the rb85-d2 preset. This is
// the implementer-chosen natural-linewidth value for the 85Rb D2 line, not a
// fitted or measured input of any bundled scenario; override units.gamma_mhz
// to recalibrate.
constexpr double kRb85GammaMHz = 6.0666;

json freq(double value, const char* unit) { return json{{"value", value}, {"unit", unit}}; }

json gamma_units_doc(double delta23, double delta34, double kappa, double delta_c,
                     double dp_min, double dp_max, int points) {
  json doc;
  doc["levels"] = {{"delta23", freq(delta23, "Gamma")}, {"delta34", freq(delta34, "Gamma")}};
  doc["cavity"] = {{"kappa", freq(kappa, "Gamma")}, {"delta_c", freq(delta_c, "Gamma")}};
  doc["scan"] = {{"dp_min", freq(dp_min, "Gamma")}, {"dp_max", freq(dp_max, "Gamma")},
                 {"points", points}};
  return doc;
}

struct PresetDef {
  Preset meta;
  json document;  // without coupling when meta.coupling_required
};

std::vector<PresetDef> build_presets() {
  std::vector<PresetDef> defs;

  const auto fig2 = [&](const std::string& name, double delta_c, const char* panel) {
    PresetDef def;
    def.meta.name = name;
    std::ostringstream desc;
    desc << "Four-level demonstration set, panel " << panel
         << ": kappa=2, delta23=5, delta34=10, delta_c=" << delta_c
         << " (Gamma-units). Coupling g*sqrt(N) is a required input; 2.3, 3.3 and 4.3 are the"
            " documented variants.";
    def.meta.description = desc.str();
    def.meta.coupling_required = true;
    def.meta.coupling_suggestions = {2.3, 3.3, 4.3};
    def.document = gamma_units_doc(5.0, 10.0, 2.0, delta_c, -30.0, 20.0, 2001);
    def.document["meta"] = {{"description", def.meta.description}};
    return def;
  };
  defs.push_back(fig2("fig2a", 0.0, "a"));
  defs.push_back(fig2("fig2b", -5.0, "b"));
  defs.push_back(fig2("fig2c", -10.0, "c"));
  defs.push_back(fig2("fig2d", -12.5, "d"));

  {
    PresetDef def;
    def.meta.name = "fig3";
    def.meta.description =
        "Eigenvalue-branch demonstration set: g*sqrt(N)=10, kappa=2, delta23=5, delta34=10"
        " (Gamma-units); delta_c is the scan variable of the branches subcommand.";
    def.document = gamma_units_doc(5.0, 10.0, 2.0, 0.0, -40.0, 25.0, 2001);
    def.document["coupling"] = {{"g_sqrt_n", freq(10.0, "Gamma")}};
    def.document["meta"] = {{"description", def.meta.description}};
    defs.push_back(std::move(def));
  }
  {
    PresetDef def;
    def.meta.name = "fig6";
    def.meta.description =
        "Susceptibility demonstration set: g*sqrt(N)=4.5, delta_c=0, kappa=2, delta23=5,"
        " delta34=10 (Gamma-units).";
    def.document = gamma_units_doc(5.0, 10.0, 2.0, 0.0, -25.0, 10.0, 1401);
    def.document["coupling"] = {{"g_sqrt_n", freq(4.5, "Gamma")}};
    def.document["meta"] = {{"description", def.meta.description}};
    defs.push_back(std::move(def));
  }
  {
    PresetDef def;
    def.meta.name = "rb85-d2";
    def.meta.description =
        "85Rb D2 line, F=2 -> F'=1,2,3: kappa=10 MHz (half-width convention), delta23=31.7 MHz,"
        " delta34=60.3 MHz. delta_c defaults to 0 (resonant with F'=3); -31.7 MHz (midpoint of"
        " F'=2 and F'=3) and -78.1 MHz are the other documented panel values. For the detuned-"
        "far case -71.8 MHz and -76.15 MHz (midpoint of F'=1 and F'=2) circulate as alternative"
        " readings; this preset ships -78.1 MHz and leaves adjudication to the user. Coupling"
        " g*sqrt(N) must be supplied in MHz. units.gamma_mhz defaults to 6.0666 MHz, an"
        " implementer-chosen calibration.";
    def.meta.native_unit = Unit::MHz;
    def.meta.coupling_required = true;
    def.meta.coupling_suggestions = {};
    json doc;
    doc["units"] = {{"gamma_mhz", kRb85GammaMHz}};
    doc["levels"] = {{"delta23", freq(31.7, "MHz")}, {"delta34", freq(60.3, "MHz")}};
    doc["cavity"] = {{"kappa", freq(10.0, "MHz")}, {"delta_c", freq(0.0, "MHz")}};
    doc["scan"] = {{"dp_min", freq(-150.0, "MHz")}, {"dp_max", freq(80.0, "MHz")},
                   {"points", 2301}};
    doc["meta"] = {{"description", def.meta.description}};
    def.document = std::move(doc);
    defs.push_back(std::move(def));
  }
  return defs;
}

const std::vector<PresetDef>& preset_defs() {
  static const std::vector<PresetDef> defs = build_presets();
  return defs;
}

const PresetDef& preset_def(const std::string& name) {
  for (const auto& def : preset_defs()) {
    if (def.meta.name == name) return def;
  }
  std::ostringstream os;
  os << "unknown preset '" << name << "'; available:";
  for (const auto& def : preset_defs()) os << ' ' << def.meta.name;
  throw ValidationError(os.str());
}

}  // namespace

const std::vector<Preset>& preset_table() {
  static const std::vector<Preset> table = [] {
    std::vector<Preset> t;
    for (const auto& def : preset_defs()) t.push_back(def.meta);
    return t;
  }();
  return table;
}

const Preset& preset(const std::string& name) { return preset_def(name).meta; }

std::string render_preset(const std::string& name, const PresetOptions& options) {
  const PresetDef& def = preset_def(name);
  json doc = def.document;
  const char* unit = def.meta.native_unit == Unit::MHz ? "MHz" : "Gamma";
  if (options.g_sqrt_n) {
    doc["coupling"] = {{"g_sqrt_n", freq(*options.g_sqrt_n, unit)}};
  } else if (def.meta.coupling_required) {
    std::ostringstream os;
    os << "preset '" << name << "' requires a coupling value (--gN, in "
       << (def.meta.native_unit == Unit::MHz ? "MHz" : "Gamma-units") << ")";
    if (!def.meta.coupling_suggestions.empty()) {
      os << "; documented variants:";
      for (double g : def.meta.coupling_suggestions) os << ' ' << g;
    }
    throw ValidationError(os.str());
  }
  if (options.delta_c) {
    doc["cavity"]["delta_c"] = freq(*options.delta_c, unit);
  }
  return doc.dump(2) + "\n";
}

}  // namespace cavspec
