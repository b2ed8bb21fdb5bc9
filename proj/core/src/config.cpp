#include "gridmdp/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridmdp/errors.hpp"

namespace gridmdp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& problem) {
  throw ConfigError(field + ": " + problem);
}

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json& expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) fail(join_path(path, item.key()), "unknown field");
  }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join_path(path, key), "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& path, const char* key,
                        std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(join_path(path, key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail(join_path(path, key), "expected an integer");
  }
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join_path(path, key), "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(join_path(path, key), "expected a boolean");
  return v.get<bool>();
}

PriceConfig parse_price(const json& obj) {
  const std::string path = "price";
  expect_object(obj, path);
  reject_unknown_keys(obj, path, {"levels", "p_up", "p_down"});
  PriceConfig price;
  if (obj.contains("levels")) {
    const json& levels = obj.at("levels");
    if (!levels.is_array() || levels.empty()) fail("price.levels", "expected a non-empty array");
    price.levels.clear();
    for (const json& v : levels) {
      if (!v.is_number()) fail("price.levels", "expected numeric entries");
      price.levels.push_back(v.get<double>());
    }
  }
  price.p_up = get_number(obj, path, "p_up", price.p_up);
  price.p_down = get_number(obj, path, "p_down", price.p_down);

  for (std::size_t i = 1; i < price.levels.size(); ++i) {
    if (!(price.levels[i] > price.levels[i - 1])) {
      fail("price.levels", "must be strictly increasing");
    }
  }
  if (!(price.p_up >= 0.0 && price.p_up <= 1.0)) fail("price.p_up", "must lie in [0, 1]");
  if (!(price.p_down >= 0.0 && price.p_down <= 1.0)) fail("price.p_down", "must lie in [0, 1]");
  if (price.p_up + price.p_down > 1.0) {
    fail("price.p_up", "p_up + p_down must not exceed 1");
  }
  return price;
}

DeviceSpec parse_device(const json& obj) {
  const std::string path = "device";
  expect_object(obj, path);
  const std::string kind = get_string(obj, path, "kind", "control");
  DeviceSpec spec;
  if (kind == "optional") {
    reject_unknown_keys(obj, path,
                        {"kind", "successor_price_rewards", "rho_on", "rho_off", "energy_full",
                         "energy_shed", "comfort_full", "comfort_shed"});
    OptionalLoadParams p;
    p.rho_on = get_number(obj, path, "rho_on", p.rho_on);
    p.rho_off = get_number(obj, path, "rho_off", p.rho_off);
    p.energy_full = get_number(obj, path, "energy_full", p.energy_full);
    p.energy_shed = get_number(obj, path, "energy_shed", p.energy_shed);
    p.comfort_full = get_number(obj, path, "comfort_full", p.comfort_full);
    p.comfort_shed = get_number(obj, path, "comfort_shed", p.comfort_shed);
    spec.params = p;
  } else if (kind == "deferrable") {
    reject_unknown_keys(obj, path,
                        {"kind", "successor_price_rewards", "rho_on", "energy_work",
                         "comfort_delay"});
    DeferrableLoadParams p;
    p.rho_on = get_number(obj, path, "rho_on", p.rho_on);
    p.energy_work = get_number(obj, path, "energy_work", p.energy_work);
    p.comfort_delay = get_number(obj, path, "comfort_delay", p.comfort_delay);
    spec.params = p;
  } else if (kind == "control") {
    reject_unknown_keys(obj, path,
                        {"kind", "successor_price_rewards", "num_temperature_levels",
                         "energy_cool", "energy_keep", "energy_heat"});
    ControlLoadParams p;
    p.num_temperature_levels =
        get_int(obj, path, "num_temperature_levels", p.num_temperature_levels);
    p.energy_cool = get_number(obj, path, "energy_cool", p.energy_cool);
    p.energy_keep = get_number(obj, path, "energy_keep", p.energy_keep);
    p.energy_heat = get_number(obj, path, "energy_heat", p.energy_heat);
    spec.params = p;
  } else if (kind == "storage") {
    reject_unknown_keys(obj, path,
                        {"kind", "successor_price_rewards", "rho_on", "rho_off",
                         "energy_keep_partial", "energy_keep_full", "energy_charge",
                         "energy_discharge", "comfort_unplug"});
    StorageLoadParams p;
    p.rho_on = get_number(obj, path, "rho_on", p.rho_on);
    p.rho_off = get_number(obj, path, "rho_off", p.rho_off);
    p.energy_keep_partial = get_number(obj, path, "energy_keep_partial", p.energy_keep_partial);
    p.energy_keep_full = get_number(obj, path, "energy_keep_full", p.energy_keep_full);
    p.energy_charge = get_number(obj, path, "energy_charge", p.energy_charge);
    p.energy_discharge = get_number(obj, path, "energy_discharge", p.energy_discharge);
    p.comfort_unplug = get_number(obj, path, "comfort_unplug", p.comfort_unplug);
    spec.params = p;
  } else {
    fail("device.kind", "must be one of optional, deferrable, control, storage");
  }
  spec.successor_price_rewards =
      get_bool(obj, path, "successor_price_rewards", spec.successor_price_rewards);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    fail("device", e.what());
  }
  return spec;
}

SolverConfig parse_solver(const json& obj) {
  const std::string path = "solver";
  expect_object(obj, path);
  reject_unknown_keys(obj, path, {"algorithm", "gamma", "tol", "max_iter"});
  SolverConfig solver;
  const std::string algorithm = get_string(obj, path, "algorithm", "value_iteration");
  if (algorithm == "value_iteration") {
    solver.algorithm = SolverAlgorithm::value_iteration;
  } else if (algorithm == "policy_iteration") {
    solver.algorithm = SolverAlgorithm::policy_iteration;
  } else {
    fail("solver.algorithm", "must be value_iteration or policy_iteration");
  }
  solver.gamma = get_number(obj, path, "gamma", solver.gamma);
  solver.tol = get_number(obj, path, "tol", solver.tol);
  solver.max_iter = static_cast<std::size_t>(get_count(obj, path, "max_iter", solver.max_iter));
  if (!(solver.gamma > 0.0 && solver.gamma < 1.0)) {
    fail("solver.gamma", "must lie strictly between 0 and 1");
  }
  if (!(solver.tol > 0.0)) fail("solver.tol", "must be positive");
  if (solver.max_iter == 0) fail("solver.max_iter", "must be at least 1");
  return solver;
}

AnalysisConfig parse_analysis(const json& obj, const DeviceSpec& device,
                              const PriceConfig& price) {
  const std::string path = "analysis";
  expect_object(obj, path);
  reject_unknown_keys(obj, path, {"initial", "monte_carlo"});
  AnalysisConfig analysis;
  if (obj.contains("initial")) {
    const json& initial = obj.at("initial");
    if (initial.is_string()) {
      if (initial.get<std::string>() != "uniform") {
        fail("analysis.initial", "string form must be \"uniform\"");
      }
    } else if (initial.is_object()) {
      reject_unknown_keys(initial, "analysis.initial", {"x", "c"});
      InitialDistributionConfig::Point point;
      point.x = get_int(initial, "analysis.initial", "x", 0);
      point.c = get_int(initial, "analysis.initial", "c", 0);
      if (point.x < 0 || point.x >= machine_state_count(device)) {
        fail("analysis.initial.x", "machine state out of range");
      }
      if (point.c < 0 || point.c >= static_cast<int>(price.levels.size())) {
        fail("analysis.initial.c", "price level out of range");
      }
      analysis.initial.point = point;
    } else {
      fail("analysis.initial", "expected \"uniform\" or an object {x, c}");
    }
  }
  if (obj.contains("monte_carlo")) {
    const json& mc = obj.at("monte_carlo");
    expect_object(mc, "analysis.monte_carlo");
    reject_unknown_keys(mc, "analysis.monte_carlo", {"steps", "seed"});
    MonteCarloConfig config;
    config.steps =
        static_cast<std::size_t>(get_count(mc, "analysis.monte_carlo", "steps", config.steps));
    config.seed = get_count(mc, "analysis.monte_carlo", "seed", config.seed);
    if (config.steps == 0) fail("analysis.monte_carlo.steps", "must be at least 1");
    analysis.monte_carlo = config;
  }
  return analysis;
}

OutputConfig parse_output(const json& obj) {
  const std::string path = "output";
  expect_object(obj, path);
  reject_unknown_keys(obj, path, {"directory", "tables"});
  OutputConfig output;
  output.directory = get_string(obj, path, "directory", output.directory);
  if (output.directory.empty()) fail("output.directory", "must not be empty");
  if (obj.contains("tables")) {
    const json& tables = obj.at("tables");
    if (!tables.is_array()) fail("output.tables", "expected an array of table names");
    if (tables.empty()) fail("output.tables", "must not be empty");
    output.tables.clear();
    const auto& known = known_table_names();
    for (const json& v : tables) {
      if (!v.is_string()) fail("output.tables", "expected string entries");
      const std::string name = v.get<std::string>();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail("output.tables", "unknown table \"" + name + "\"");
      }
      if (std::find(output.tables.begin(), output.tables.end(), name) != output.tables.end()) {
        fail("output.tables", "duplicate table \"" + name + "\"");
      }
      output.tables.push_back(name);
    }
  }
  return output;
}

json device_to_json(const DeviceSpec& spec) {
  json obj;
  switch (spec.kind()) {
    case DeviceKind::optional_load: {
      const auto& p = std::get<OptionalLoadParams>(spec.params);
      obj["kind"] = "optional";
      obj["rho_on"] = p.rho_on;
      obj["rho_off"] = p.rho_off;
      obj["energy_full"] = p.energy_full;
      obj["energy_shed"] = p.energy_shed;
      obj["comfort_full"] = p.comfort_full;
      obj["comfort_shed"] = p.comfort_shed;
      break;
    }
    case DeviceKind::deferrable_load: {
      const auto& p = std::get<DeferrableLoadParams>(spec.params);
      obj["kind"] = "deferrable";
      obj["rho_on"] = p.rho_on;
      obj["energy_work"] = p.energy_work;
      obj["comfort_delay"] = p.comfort_delay;
      break;
    }
    case DeviceKind::control_load: {
      const auto& p = std::get<ControlLoadParams>(spec.params);
      obj["kind"] = "control";
      obj["num_temperature_levels"] = p.num_temperature_levels;
      obj["energy_cool"] = p.energy_cool;
      obj["energy_keep"] = p.energy_keep;
      obj["energy_heat"] = p.energy_heat;
      break;
    }
    case DeviceKind::storage_load: {
      const auto& p = std::get<StorageLoadParams>(spec.params);
      obj["kind"] = "storage";
      obj["rho_on"] = p.rho_on;
      obj["rho_off"] = p.rho_off;
      obj["energy_keep_partial"] = p.energy_keep_partial;
      obj["energy_keep_full"] = p.energy_keep_full;
      obj["energy_charge"] = p.energy_charge;
      obj["energy_discharge"] = p.energy_discharge;
      obj["comfort_unplug"] = p.comfort_unplug;
      break;
    }
  }
  obj["successor_price_rewards"] = spec.successor_price_rewards;
  return obj;
}

}  // namespace

const std::vector<std::string>& known_table_names() {
  static const std::vector<std::string> names = {"policy",           "stationary",
                                                 "price_marginal",   "machine_marginal",
                                                 "demand_curve",     "summary"};
  return names;
}

ExperimentConfig parse_config(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_object(document, "config");
  reject_unknown_keys(document, "", {"price", "device", "solver", "analysis", "output"});

  ExperimentConfig config;
  if (document.contains("price")) config.price = parse_price(document.at("price"));
  if (document.contains("device")) config.device = parse_device(document.at("device"));
  if (document.contains("solver")) config.solver = parse_solver(document.at("solver"));
  if (document.contains("analysis")) {
    config.analysis = parse_analysis(document.at("analysis"), config.device, config.price);
  }
  if (document.contains("output")) config.output = parse_output(document.at("output"));
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  json document;
  document["price"]["levels"] = config.price.levels;
  document["price"]["p_up"] = config.price.p_up;
  document["price"]["p_down"] = config.price.p_down;
  document["device"] = device_to_json(config.device);
  document["solver"]["algorithm"] = config.solver.algorithm == SolverAlgorithm::value_iteration
                                        ? "value_iteration"
                                        : "policy_iteration";
  document["solver"]["gamma"] = config.solver.gamma;
  document["solver"]["tol"] = config.solver.tol;
  document["solver"]["max_iter"] = config.solver.max_iter;
  if (config.analysis.initial.point.has_value()) {
    document["analysis"]["initial"]["x"] = config.analysis.initial.point->x;
    document["analysis"]["initial"]["c"] = config.analysis.initial.point->c;
  } else {
    document["analysis"]["initial"] = "uniform";
  }
  if (config.analysis.monte_carlo.has_value()) {
    document["analysis"]["monte_carlo"]["steps"] = config.analysis.monte_carlo->steps;
    document["analysis"]["monte_carlo"]["seed"] = config.analysis.monte_carlo->seed;
  }
  document["output"]["directory"] = config.output.directory;
  document["output"]["tables"] = config.output.tables;
  return document.dump(2) + "\n";
}

}  // namespace gridmdp
