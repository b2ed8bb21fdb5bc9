#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "gridmdp/mdp.hpp"
#include "gridmdp/price_process.hpp"

namespace gridmdp {

enum class DeviceKind { optional_load, deferrable_load, control_load, storage_load };

/// Two-regime load (e.g. dimmable lighting): Idle or Active, and when active
/// it either runs at full capacity or sheds to a reduced level. Switch-on and
/// switch-off arrive exogenously with probabilities rho_on / rho_off.
struct OptionalLoadParams {
  double rho_on = 0.3;
  double rho_off = 0.2;
  double energy_full = 1.0;   ///< > energy_shed > 0
  double energy_shed = 0.3;
  double comfort_full = 1.0;  ///< > comfort_shed
  double comfort_shed = 0.5;

  bool operator==(const OptionalLoadParams&) const = default;
};

/// Postponable job (e.g. dishwasher): Idle until a job request arrives with
/// probability rho_on, then Waiting until the device either keeps waiting at
/// comfort cost comfort_delay or executes at the current price.
struct DeferrableLoadParams {
  double rho_on = 0.3;
  double energy_work = 1.0;    ///< > 0
  double comfort_delay = -0.1; ///< < 0

  bool operator==(const DeferrableLoadParams&) const = default;
};

/// Thermostat with a ladder of equally comfortable temperature levels and
/// deterministic dynamics: heat moves one level up, cool one level down,
/// keep stays. Heat is unavailable at the top level, cool at the bottom.
struct ControlLoadParams {
  int num_temperature_levels = 10;  ///< >= 2
  double energy_cool = 0.1;         ///< energy_heat > energy_keep > energy_cool >= 0
  double energy_keep = 1.0;
  double energy_heat = 2.1;

  bool operator==(const ControlLoadParams&) const = default;
};

/// Battery that may be Unplugged, Partially charged, or Full. Keep holds the
/// charge level at a state-dependent cost, charge fills the battery,
/// discharge generates energy (energy_discharge < 0). Unplugging happens
/// exogenously with probability rho_off and incurs comfort_unplug when it
/// interrupts a partially charged battery or a discharge.
struct StorageLoadParams {
  double rho_on = 0.3;
  double rho_off = 0.2;
  double energy_keep_partial = 0.05;  ///< 0 < energy_keep_partial < energy_keep_full
  double energy_keep_full = 0.1;
  double energy_charge = 1.0;         ///< > 0
  double energy_discharge = -0.9;     ///< < 0
  double comfort_unplug = -0.5;       ///< < 0

  bool operator==(const StorageLoadParams&) const = default;
};

/// Tagged device description; the alternative selects which builder accepts
/// it. `successor_price_rewards` switches the price entering each reward
/// from the departing interval's price to the arriving one (off by default).
struct DeviceSpec {
  std::variant<OptionalLoadParams, DeferrableLoadParams, ControlLoadParams, StorageLoadParams>
      params = ControlLoadParams{};
  bool successor_price_rewards = false;

  DeviceKind kind() const { return static_cast<DeviceKind>(params.index()); }

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  bool operator==(const DeviceSpec&) const = default;
};

/// Machine-side transition factors of a device, one matrix per action. Row x
/// of machine_part[a] is a probability distribution over successor machine
/// states when action a is available in x, and all zero otherwise.
struct FactoredKernel {
  std::vector<Eigen::MatrixXd> machine_part;
};

/// Kronecker composition with machine-major state order: the composed entry
/// ((x, c), (x', c')) equals machine(x, x') * price(c, c') and the flat index
/// is x * num_price_levels + c. Throws std::invalid_argument on non-square or
/// empty factors.
Eigen::MatrixXd compose_kernel(const Eigen::MatrixXd& machine, const Eigen::MatrixXd& price);

/// Composes every action's machine factor with the price transition matrix.
std::vector<Eigen::MatrixXd> compose(const FactoredKernel& factored, const PriceChain& chain);

/// The four device builders. Each validates its DeviceSpec, rejects one
/// holding the wrong alternative, and assembles the product MDP over machine
/// states and price levels with the composed kernels and per-transition
/// rewards.
MdpModel build_optional_load(const DeviceSpec& spec, const PriceChain& chain);
MdpModel build_deferrable_load(const DeviceSpec& spec, const PriceChain& chain);
MdpModel build_control_load(const DeviceSpec& spec, const PriceChain& chain);
MdpModel build_storage_load(const DeviceSpec& spec, const PriceChain& chain);

/// Dispatches to the builder matching spec.kind().
MdpModel build_device(const DeviceSpec& spec, const PriceChain& chain);

/// Number of machine states the described device will have (2, 2, N_T, or 3).
int machine_state_count(const DeviceSpec& spec);

}  // namespace gridmdp
