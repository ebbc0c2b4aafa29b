// Scenario file loading: TOML-style sections and keys, strict validation.
//
// Required sections: [hose], [receiver], [autopilot], [disturbances],
// [tilc], [campaign] (plus the [disturbances.bow_wave] / [disturbances.affine]
// / [disturbances.gust] subsections). Unknown keys are rejected with the
// offending key named; every module validator runs at load.
#pragma once

#include <string>

#include "aartilc/sim_engine.hpp"

namespace aartilc {

// Structural parse: syntax, shapes, unknown-key rejection. Does not run the
// semantic validators (Scenario::validate does).
Scenario parse_scenario(const std::string& text);

// Load and, by default, fully validate. `analyze` loads without semantic
// validation so a failing gain set or offset map is reported by the
// certificate instead of aborting.
Scenario load_scenario(const std::string& path, bool validate = true);

}  // namespace aartilc
