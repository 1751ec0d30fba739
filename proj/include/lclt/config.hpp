#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "lclt/exact.hpp"
#include "lclt/model.hpp"
#include "lclt/montecarlo.hpp"
#include "lclt/verifier.hpp"

namespace lclt {

/// Builds a model from its JSON description:
///   {"dimension", "radius", "r0", "spin": {"lo", "hi", "step"?},
///    "coupling": {"kind": "nearest_neighbor" | "power_law" | "explicit",
///                 "strength"?, "exponent"?, "pairs"?: [[site, site, J]]},
///    "boundary": {"kind": "zero" | "constant" | "explicit" | "random",
///                 "value"?, "assignments"?: [[site, spin]], "seed"?}}
/// Sites are integer arrays of length dimension. Unknown keys, wrong types
/// and invalid values raise ConfigError.
GibbsModel model_from_json(const nlohmann::json& j);

/// Settings of one CLI run. Command parameters live under "commands",
/// keyed by command name.
struct RunConfig {
  std::optional<nlohmann::json> model_json;
  std::optional<GibbsModel> model;
  std::uint64_t seed = 1;
  std::string output_dir = "lclt_out";
  int t_points = 64;
  CVariant variant = CVariant::proved;
  std::uint64_t budget = EnumerationOptions{}.budget;
  int omega_samples = 8;
  std::map<std::string, double> tolerance_overrides;
  ChainSpec mc;
  nlohmann::json commands = nlohmann::json::object();

  EnumerationOptions enumeration() const { return {budget}; }
  /// Parameters of `command`, or an empty object.
  nlohmann::json command_params(const std::string& command) const;
};

RunConfig parse_run_config(const nlohmann::json& j);

/// Reads and parses a config file; malformed JSON raises ConfigError.
RunConfig load_run_config(const std::string& path);

struct FlagOverrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> t_points;
  std::optional<std::string> c_variant;
  std::optional<std::uint64_t> budget;
};

/// Command-line flags take precedence over the file.
void apply_overrides(RunConfig& cfg, const FlagOverrides& flags);

}  // namespace lclt
