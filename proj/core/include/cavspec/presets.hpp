#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavspec/model.hpp"

namespace cavspec {

/// Named reference parameter set. The document is a complete JSON config
/// except that some presets leave the collective coupling as a required user
/// input (coupling_required). native_unit is the unit of user-facing overrides.
struct Preset {
  std::string name;
  std::string description;
  Unit native_unit = Unit::Gamma;
  bool coupling_required = false;
  std::vector<double> coupling_suggestions;  // documented variants, native unit
};

const std::vector<Preset>& preset_table();

/// Preset metadata by name; unknown names throw ValidationError whose message
/// lists the available presets.
const Preset& preset(const std::string& name);

struct PresetOptions {
  std::optional<double> g_sqrt_n;  // native unit of the preset
  std::optional<double> delta_c;   // native unit of the preset
};

/// Render the preset to a JSON config document, applying overrides.
/// Throws ValidationError if the preset requires a coupling and none is given.
std::string render_preset(const std::string& name, const PresetOptions& options);

}  // namespace cavspec
