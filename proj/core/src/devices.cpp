#include "gridmdp/devices.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace gridmdp {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

struct ParamValidator {
  void operator()(const OptionalLoadParams& p) const {
    check_probability(p.rho_on, "rho_on");
    check_probability(p.rho_off, "rho_off");
    if (!(p.energy_full > p.energy_shed && p.energy_shed > 0.0)) {
      throw std::invalid_argument("optional load requires energy_full > energy_shed > 0");
    }
    if (!(p.comfort_full > p.comfort_shed)) {
      throw std::invalid_argument("optional load requires comfort_full > comfort_shed");
    }
  }
  void operator()(const DeferrableLoadParams& p) const {
    check_probability(p.rho_on, "rho_on");
    if (!(p.energy_work > 0.0)) {
      throw std::invalid_argument("deferrable load requires energy_work > 0");
    }
    if (!(p.comfort_delay < 0.0)) {
      throw std::invalid_argument("deferrable load requires comfort_delay < 0");
    }
  }
  void operator()(const ControlLoadParams& p) const {
    if (p.num_temperature_levels < 2) {
      throw std::invalid_argument("control load requires num_temperature_levels >= 2");
    }
    if (!(p.energy_heat > p.energy_keep && p.energy_keep > p.energy_cool &&
          p.energy_cool >= 0.0)) {
      throw std::invalid_argument("control load requires energy_heat > energy_keep > energy_cool >= 0");
    }
  }
  void operator()(const StorageLoadParams& p) const {
    check_probability(p.rho_on, "rho_on");
    check_probability(p.rho_off, "rho_off");
    if (!(p.energy_keep_full > p.energy_keep_partial && p.energy_keep_partial > 0.0)) {
      throw std::invalid_argument("storage load requires energy_keep_full > energy_keep_partial > 0");
    }
    if (!(p.energy_charge > 0.0)) {
      throw std::invalid_argument("storage load requires energy_charge > 0");
    }
    if (!(p.energy_discharge < 0.0)) {
      throw std::invalid_argument("storage load requires energy_discharge < 0");
    }
    if (!(p.comfort_unplug < 0.0)) {
      throw std::invalid_argument("storage load requires comfort_unplug < 0");
    }
  }
};

const char* kind_name(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::optional_load: return "optional";
    case DeviceKind::deferrable_load: return "deferrable";
    case DeviceKind::control_load: return "control";
    case DeviceKind::storage_load: return "storage";
  }
  return "unknown";
}

template <typename Params>
const Params& params_of(const DeviceSpec& spec, DeviceKind expected) {
  spec.validate();
  if (spec.kind() != expected) {
    throw std::invalid_argument(std::string("spec describes a ") + kind_name(spec.kind()) +
                                " load, not a " + kind_name(expected) + " load");
  }
  return std::get<Params>(spec.params);
}

/// Shared assembly: composes the machine factors with the price chain, fills
/// labels, and expands per-(x, x', c or c') reward entries across price
/// successors. reward_fn(a, x, xp, price) gives the reward of the machine
/// transition x -> xp under action a at the given price; `price` is the
/// departing level, or the arriving one when successor_price_rewards is set.
template <typename RewardFn>
MdpModel assemble(const FactoredKernel& factored, const PriceChain& chain,
                  std::vector<std::vector<int>> machine_available, const Eigen::MatrixXd& machine_energy,
                  std::vector<std::string> action_names, bool successor_price_rewards,
                  RewardFn reward_fn) {
  const int num_machine = static_cast<int>(factored.machine_part.front().rows());
  const int num_price = static_cast<int>(chain.num_levels());
  const int num_states = num_machine * num_price;
  const int num_actions = static_cast<int>(factored.machine_part.size());

  MdpComponents parts;
  parts.kernel = compose(factored, chain);
  parts.num_machine_states = num_machine;
  parts.num_price_levels = num_price;
  parts.action_names = std::move(action_names);

  parts.available.resize(static_cast<std::size_t>(num_states));
  parts.state_labels.resize(static_cast<std::size_t>(num_states));
  parts.energy = Eigen::MatrixXd::Zero(num_states, num_actions);
  for (int x = 0; x < num_machine; ++x) {
    for (int c = 0; c < num_price; ++c) {
      const int s = x * num_price + c;
      parts.available[static_cast<std::size_t>(s)] =
          machine_available[static_cast<std::size_t>(x)];
      parts.state_labels[static_cast<std::size_t>(s)] = StateLabel{x, c};
      parts.energy.row(s) = machine_energy.row(x);
    }
  }

  parts.reward.resize(static_cast<std::size_t>(num_actions));
  for (int a = 0; a < num_actions; ++a) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(num_states, num_states);
    for (int x = 0; x < num_machine; ++x) {
      for (int c = 0; c < num_price; ++c) {
        for (int xp = 0; xp < num_machine; ++xp) {
          for (int cp = 0; cp < num_price; ++cp) {
            const double price = chain.levels()[static_cast<std::size_t>(
                successor_price_rewards ? cp : c)];
            r(x * num_price + c, xp * num_price + cp) = reward_fn(a, x, xp, price);
          }
        }
      }
    }
    parts.reward[static_cast<std::size_t>(a)] = std::move(r);
  }

  return MdpModel(std::move(parts));
}

}  // namespace

void DeviceSpec::validate() const { std::visit(ParamValidator{}, params); }

Eigen::MatrixXd compose_kernel(const Eigen::MatrixXd& machine, const Eigen::MatrixXd& price) {
  if (machine.rows() == 0 || machine.rows() != machine.cols()) {
    throw std::invalid_argument("machine factor must be square and non-empty");
  }
  if (price.rows() == 0 || price.rows() != price.cols()) {
    throw std::invalid_argument("price factor must be square and non-empty");
  }
  const Eigen::Index nm = machine.rows();
  const Eigen::Index np = price.rows();
  Eigen::MatrixXd out(nm * np, nm * np);
  for (Eigen::Index x = 0; x < nm; ++x) {
    for (Eigen::Index xp = 0; xp < nm; ++xp) {
      out.block(x * np, xp * np, np, np) = machine(x, xp) * price;
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> compose(const FactoredKernel& factored, const PriceChain& chain) {
  if (factored.machine_part.empty()) {
    throw std::invalid_argument("factored kernel has no actions");
  }
  std::vector<Eigen::MatrixXd> out;
  out.reserve(factored.machine_part.size());
  for (const auto& machine : factored.machine_part) {
    out.push_back(compose_kernel(machine, chain.transition()));
  }
  return out;
}

MdpModel build_optional_load(const DeviceSpec& spec, const PriceChain& chain) {
  const auto& p = params_of<OptionalLoadParams>(spec, DeviceKind::optional_load);

  FactoredKernel factored;
  factored.machine_part.assign(3, Eigen::MatrixXd::Zero(2, 2));
  factored.machine_part[0].row(0) << 1.0 - p.rho_on, p.rho_on;           // pass
  factored.machine_part[1].row(1) << p.rho_off, 1.0 - p.rho_off;        // full
  factored.machine_part[2].row(1) << p.rho_off, 1.0 - p.rho_off;        // shed

  Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(2, 3);
  energy(1, 1) = p.energy_full;
  energy(1, 2) = p.energy_shed;

  return assemble(factored, chain, {{0}, {1, 2}}, energy, {"pass", "full", "shed"},
                  spec.successor_price_rewards, [&p](int a, int, int, double price) {
                    if (a == 1) return p.comfort_full - p.energy_full * price;
                    if (a == 2) return p.comfort_shed - p.energy_shed * price;
                    return 0.0;
                  });
}

MdpModel build_deferrable_load(const DeviceSpec& spec, const PriceChain& chain) {
  const auto& p = params_of<DeferrableLoadParams>(spec, DeviceKind::deferrable_load);

  FactoredKernel factored;
  factored.machine_part.assign(3, Eigen::MatrixXd::Zero(2, 2));
  factored.machine_part[0].row(0) << 1.0 - p.rho_on, p.rho_on;  // pass
  factored.machine_part[1].row(1) << 0.0, 1.0;                  // wait
  factored.machine_part[2].row(1) << 1.0, 0.0;                  // work

  Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(2, 3);
  energy(1, 2) = p.energy_work;

  return assemble(factored, chain, {{0}, {1, 2}}, energy, {"pass", "wait", "work"},
                  spec.successor_price_rewards, [&p](int a, int, int, double price) {
                    if (a == 1) return p.comfort_delay;
                    if (a == 2) return -p.energy_work * price;
                    return 0.0;
                  });
}

MdpModel build_control_load(const DeviceSpec& spec, const PriceChain& chain) {
  const auto& p = params_of<ControlLoadParams>(spec, DeviceKind::control_load);
  const int nt = p.num_temperature_levels;

  FactoredKernel factored;
  factored.machine_part.assign(3, Eigen::MatrixXd::Zero(nt, nt));
  std::vector<std::vector<int>> available(static_cast<std::size_t>(nt));
  Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(nt, 3);
  for (int x = 0; x < nt; ++x) {
    auto& actions = available[static_cast<std::size_t>(x)];
    if (x > 0) {
      factored.machine_part[0](x, x - 1) = 1.0;  // cool
      actions.push_back(0);
      energy(x, 0) = p.energy_cool;
    }
    factored.machine_part[1](x, x) = 1.0;  // keep
    actions.push_back(1);
    energy(x, 1) = p.energy_keep;
    if (x + 1 < nt) {
      factored.machine_part[2](x, x + 1) = 1.0;  // heat
      actions.push_back(2);
      energy(x, 2) = p.energy_heat;
    }
  }

  const double action_energy[3] = {p.energy_cool, p.energy_keep, p.energy_heat};
  return assemble(factored, chain, std::move(available), energy, {"cool", "keep", "heat"},
                  spec.successor_price_rewards, [&action_energy](int a, int, int, double price) {
                    return -price * action_energy[a];
                  });
}

MdpModel build_storage_load(const DeviceSpec& spec, const PriceChain& chain) {
  const auto& p = params_of<StorageLoadParams>(spec, DeviceKind::storage_load);

  FactoredKernel factored;
  factored.machine_part.assign(4, Eigen::MatrixXd::Zero(3, 3));
  factored.machine_part[0].row(0) << 1.0 - p.rho_on, p.rho_on, 0.0;      // pass
  factored.machine_part[1].row(1) << p.rho_off, 1.0 - p.rho_off, 0.0;    // keep
  factored.machine_part[1].row(2) << p.rho_off, 0.0, 1.0 - p.rho_off;
  factored.machine_part[2].row(1) << p.rho_off, 0.0, 1.0 - p.rho_off;    // charge
  factored.machine_part[3].row(2) << p.rho_off, 1.0 - p.rho_off, 0.0;    // discharge

  Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(3, 4);
  energy(1, 1) = p.energy_keep_partial;
  energy(2, 1) = p.energy_keep_full;
  energy(1, 2) = p.energy_charge;
  energy(2, 3) = p.energy_discharge;

  return assemble(factored, chain, {{0}, {1, 2}, {1, 3}}, energy,
                  {"pass", "keep", "charge", "discharge"}, spec.successor_price_rewards,
                  [&p](int a, int x, int xp, double price) {
                    switch (a) {
                      case 1: {
                        const double keep_energy = x == 2 ? p.energy_keep_full
                                                          : (x == 1 ? p.energy_keep_partial : 0.0);
                        const double unplug = (xp == 0 && x == 1) ? p.comfort_unplug : 0.0;
                        return unplug - price * keep_energy;
                      }
                      case 2:
                        return -price * p.energy_charge;
                      case 3:
                        return (xp == 0 ? p.comfort_unplug : 0.0) - price * p.energy_discharge;
                      default:
                        return 0.0;
                    }
                  });
}

MdpModel build_device(const DeviceSpec& spec, const PriceChain& chain) {
  switch (spec.kind()) {
    case DeviceKind::optional_load: return build_optional_load(spec, chain);
    case DeviceKind::deferrable_load: return build_deferrable_load(spec, chain);
    case DeviceKind::control_load: return build_control_load(spec, chain);
    case DeviceKind::storage_load: return build_storage_load(spec, chain);
  }
  throw std::invalid_argument("unknown device kind");
}

int machine_state_count(const DeviceSpec& spec) {
  switch (spec.kind()) {
    case DeviceKind::optional_load:
    case DeviceKind::deferrable_load:
      return 2;
    case DeviceKind::control_load:
      return std::get<ControlLoadParams>(spec.params).num_temperature_levels;
    case DeviceKind::storage_load:
      return 3;
  }
  throw std::invalid_argument("unknown device kind");
}

}  // namespace gridmdp
