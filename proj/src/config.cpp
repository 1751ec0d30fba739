#include "lclt/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lclt/errors.hpp"

namespace lclt {

namespace {

using nlohmann::json;

const std::set<std::string> kCommandKeys{"constants", "min-r0",  "identity-check", "graph-tables",
                                         "lemma-a",   "lemma-b", "prop1",          "integrals",
                                         "lclt-scan", "mc"};

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void allow_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + " is missing \"" + key + "\"");
  return *it;
}

long long as_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<long long>();
}

int as_int(const json& v, const std::string& what, long long lo, long long hi) {
  const long long x = as_integer(v, what);
  if (x < lo || x > hi)
    throw ConfigError(what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

std::uint64_t as_u64(const json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ConfigError(what + " must be a non-negative integer");
}

double as_real(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

Site as_site(const json& v, int dimension, const std::string& what) {
  if (!v.is_array() || static_cast<int>(v.size()) != dimension)
    throw ConfigError(what + " must be an integer array of length " + std::to_string(dimension));
  Site s;
  for (const auto& c : v) s.push_back(as_int(c, what + " coordinate", -(1LL << 30), 1LL << 30));
  return s;
}

Coupling coupling_from_json(const json& j, int d) {
  require_object(j, "model.coupling");
  const std::string kind = need(j, "kind", "model.coupling").is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "nearest_neighbor") {
    allow_keys(j, "model.coupling", {"kind", "strength"});
    return Coupling(NearestNeighbor{as_real(need(j, "strength", "model.coupling"), "coupling.strength")}, d);
  }
  if (kind == "power_law") {
    allow_keys(j, "model.coupling", {"kind", "strength", "exponent"});
    return Coupling(PowerLaw{as_real(need(j, "strength", "model.coupling"), "coupling.strength"),
                             as_real(need(j, "exponent", "model.coupling"), "coupling.exponent")},
                    d);
  }
  if (kind == "explicit") {
    allow_keys(j, "model.coupling", {"kind", "pairs"});
    const json& pairs = need(j, "pairs", "model.coupling");
    if (!pairs.is_array()) throw ConfigError("coupling.pairs must be an array");
    std::vector<std::tuple<Site, Site, double>> out;
    for (const auto& p : pairs) {
      if (!p.is_array() || p.size() != 3) throw ConfigError("each coupling pair must be [site, site, J]");
      out.emplace_back(as_site(p[0], d, "pair site"), as_site(p[1], d, "pair site"), as_real(p[2], "pair J"));
    }
    return Coupling(ExplicitPairs{out}, d);
  }
  throw ConfigError("coupling.kind must be nearest_neighbor, power_law or explicit");
}

Boundary boundary_from_json(const json& j, int d) {
  require_object(j, "model.boundary");
  const std::string kind = need(j, "kind", "model.boundary").is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "zero") {
    allow_keys(j, "model.boundary", {"kind"});
    return Boundary::free();
  }
  if (kind == "constant") {
    allow_keys(j, "model.boundary", {"kind", "value"});
    return Boundary::constant(as_int(need(j, "value", "model.boundary"), "boundary.value", -(1LL << 20), 1LL << 20));
  }
  if (kind == "random") {
    allow_keys(j, "model.boundary", {"kind", "seed"});
    return Boundary::random(as_u64(need(j, "seed", "model.boundary"), "boundary.seed"));
  }
  if (kind == "explicit") {
    allow_keys(j, "model.boundary", {"kind", "assignments"});
    const json& a = need(j, "assignments", "model.boundary");
    if (!a.is_array()) throw ConfigError("boundary.assignments must be an array");
    std::map<Site, int> out;
    for (const auto& p : a) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("each assignment must be [site, spin]");
      out[as_site(p[0], d, "assignment site")] = as_int(p[1], "assignment spin", -(1LL << 20), 1LL << 20);
    }
    return Boundary::explicit_sites(out);
  }
  throw ConfigError("boundary.kind must be zero, constant, explicit or random");
}

void validate_command_params(const json& commands) {
  require_object(commands, "commands");
  for (const auto& [name, params] : commands.items()) {
    if (!kCommandKeys.count(name)) throw ConfigError("unknown command \"" + name + "\" in commands");
    require_object(params, "commands." + name);
    const std::string where = "commands." + name;
    if (name == "min-r0") {
      allow_keys(params, where, {"r0_max"});
      if (params.contains("r0_max")) as_int(params["r0_max"], where + ".r0_max", 1, 100000);
    } else if (name == "identity-check") {
      allow_keys(params, where, {"models", "t_values"});
      if (params.contains("models")) as_int(params["models"], where + ".models", 1, 100000);
      if (params.contains("t_values")) as_int(params["t_values"], where + ".t_values", 1, 100000);
    } else if (name == "integrals") {
      allow_keys(params, where, {"A"});
      if (params.contains("A") && !(as_real(params["A"], where + ".A") > 0.0))
        throw ConfigError(where + ".A must be positive");
    } else if (name == "lclt-scan") {
      allow_keys(params, where, {"radii"});
      if (params.contains("radii")) {
        if (!params["radii"].is_array() || params["radii"].empty())
          throw ConfigError(where + ".radii must be a nonempty array");
        for (const auto& r : params["radii"]) as_int(r, where + ".radii entry", 0, 1 << 20);
      }
    } else {
      allow_keys(params, where, {});
    }
  }
}

}  // namespace

GibbsModel model_from_json(const json& j) {
  require_object(j, "model");
  allow_keys(j, "model", {"dimension", "radius", "r0", "spin", "coupling", "boundary"});
  const int d = as_int(need(j, "dimension", "model"), "model.dimension", 1, 8);
  const int radius = as_int(need(j, "radius", "model"), "model.radius", 0, 1 << 20);
  const int r0 = j.contains("r0") ? as_int(j["r0"], "model.r0", 1, 1 << 20) : 1;
  const json& spin = need(j, "spin", "model");
  require_object(spin, "model.spin");
  allow_keys(spin, "model.spin", {"lo", "hi", "step"});
  const int lo = as_int(need(spin, "lo", "model.spin"), "spin.lo", -(1LL << 20), 1LL << 20);
  const int hi = as_int(need(spin, "hi", "model.spin"), "spin.hi", -(1LL << 20), 1LL << 20);
  const int step = spin.contains("step") ? as_int(spin["step"], "spin.step", 1, 1 << 20) : 1;
  try {
    return GibbsModel(Box(d, radius, r0), SpinInterval(lo, hi, step), coupling_from_json(need(j, "coupling", "model"), d),
                      boundary_from_json(need(j, "boundary", "model"), d));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

json RunConfig::command_params(const std::string& command) const {
  auto it = commands.find(command);
  return it == commands.end() ? json::object() : *it;
}

RunConfig parse_run_config(const json& j) {
  require_object(j, "config");
  allow_keys(j, "config", {"model", "seed", "output_dir", "t_points", "c_variant", "budget", "omega_samples",
                           "tolerance_overrides", "mc", "commands"});
  RunConfig cfg;
  if (j.contains("model")) {
    cfg.model_json = j["model"];
    cfg.model = model_from_json(j["model"]);
  }
  if (j.contains("seed")) cfg.seed = as_u64(j["seed"], "seed");
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string() || j["output_dir"].get<std::string>().empty())
      throw ConfigError("output_dir must be a nonempty string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("t_points")) cfg.t_points = as_int(j["t_points"], "t_points", 2, 1 << 20);
  if (j.contains("c_variant")) {
    if (!j["c_variant"].is_string()) throw ConfigError("c_variant must be a string");
    cfg.variant = parse_c_variant(j["c_variant"].get<std::string>());
  }
  if (j.contains("budget")) {
    cfg.budget = as_u64(j["budget"], "budget");
    if (cfg.budget == 0) throw ConfigError("budget must be positive");
  }
  if (j.contains("omega_samples")) cfg.omega_samples = as_int(j["omega_samples"], "omega_samples", 0, 1 << 16);
  if (j.contains("tolerance_overrides")) {
    const json& t = j["tolerance_overrides"];
    require_object(t, "tolerance_overrides");
    for (const auto& [name, value] : t.items()) {
      const double tol = as_real(value, "tolerance_overrides." + name);
      if (!(tol >= 0.0)) throw ConfigError("tolerance_overrides." + name + " must be >= 0");
      cfg.tolerance_overrides[name] = tol;
    }
  }
  if (j.contains("mc")) {
    const json& m = j["mc"];
    require_object(m, "mc");
    allow_keys(m, "mc", {"burn_in", "samples", "thinning", "chains"});
    if (m.contains("burn_in")) cfg.mc.burn_in = as_int(m["burn_in"], "mc.burn_in", 0, 1 << 30);
    if (m.contains("samples")) cfg.mc.samples = as_int(m["samples"], "mc.samples", 0, 1 << 30);
    if (m.contains("thinning")) cfg.mc.thinning = as_int(m["thinning"], "mc.thinning", 1, 1 << 20);
    if (m.contains("chains")) cfg.mc.chains = as_int(m["chains"], "mc.chains", 0, 1024);
    cfg.mc.validate();
  }
  if (j.contains("commands")) {
    validate_command_params(j["commands"]);
    cfg.commands = j["commands"];
  }
  cfg.mc.seed = cfg.seed;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_run_config(j);
}

void apply_overrides(RunConfig& cfg, const FlagOverrides& flags) {
  if (flags.out) {
    if (flags.out->empty()) throw ConfigError("--out must be nonempty");
    cfg.output_dir = *flags.out;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.t_points) {
    if (*flags.t_points < 2) throw ConfigError("--t-points must be >= 2");
    cfg.t_points = *flags.t_points;
  }
  if (flags.c_variant) cfg.variant = parse_c_variant(*flags.c_variant);
  if (flags.budget) {
    if (*flags.budget == 0) throw ConfigError("--budget must be positive");
    cfg.budget = *flags.budget;
  }
  cfg.mc.seed = cfg.seed;
}

}  // namespace lclt
