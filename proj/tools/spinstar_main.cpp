// spinstar: exact simulation and verification of 1 -> M universal cloning
// on spin-star networks.
//
// Subcommands:
//   fidelity-sweep  single-copy fidelity vs rescaled time, CSV output
//   verify          closure / symmetry / endpoint checks, JSON report
//   ground-state    machine-state preparation check, JSON report
//   spectrum        analytic spectrum of the preparation Hamiltonian, CSV
//
// A JSON config file (--config) may supply any flag of the chosen
// subcommand; command-line values take precedence. A run manifest written
// by an earlier invocation is also accepted (its "parameters" object is
// used), which is how a run is reproduced exactly.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "spinstar/cli.hpp"
#include "spinstar/version.hpp"

namespace {

using nlohmann::json;

// Late-bound setters keyed by flag name, applied before CLI11 parses so
// command-line flags override config values.
class ConfigBinder {
 public:
  template <typename T>
  void bind(const std::string& key, T& ref) {
    setters_[key] = [&ref](const json& v) { ref = v.get<T>(); };
  }

  // Returns an error message, or empty on success.
  std::string apply(const json& cfg) const {
    if (!cfg.is_object()) return "config: top-level JSON object expected";
    for (const auto& [key, value] : cfg.items()) {
      auto it = setters_.find(key);
      if (it == setters_.end()) return "config: unknown key '" + key + "'";
      try {
        it->second(value);
      } catch (const json::exception&) {
        return "config: bad value for key '" + key + "'";
      }
    }
    return {};
  }

 private:
  std::map<std::string, std::function<void(const json&)>> setters_;
};

int load_config(const std::string& path, const ConfigBinder& binder) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "config: cannot read " << path << '\n';
    return 2;
  }
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    std::cerr << "config: parse error in " << path << ": " << e.what() << '\n';
    return 1;
  }
  if (cfg.is_object() && cfg.contains("parameters")) cfg = cfg["parameters"];
  if (cfg.is_object() && cfg.contains("config")) cfg.erase("config");
  const std::string err = binder.apply(cfg);
  if (!err.empty()) {
    std::cerr << err << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1 -> M universal quantum cloning on spin-star networks"};
  app.set_version_flag("--version", std::string(spinstar::kVersion));
  app.require_subcommand(1);

  std::string config_path;

  spinstar::cli::SweepParams sweep;
  ConfigBinder sweep_binder;
  CLI::App* sweep_cmd = app.add_subcommand(
      "fidelity-sweep", "Single-copy fidelity vs rescaled time phi, CSV output");
  sweep_cmd->add_option("-M,--M", sweep.copies, "number of copies (M >= 2)");
  sweep_cmd->add_option("--phi-min", sweep.phi_min, "first grid point");
  sweep_cmd->add_option("--phi-max", sweep.phi_max, "last grid point");
  sweep_cmd->add_option("--steps", sweep.steps, "grid points (>= 2)");
  sweep_cmd->add_option("--inputs", sweep.inputs, "number of Haar-random input states");
  sweep_cmd->add_option("--seed", sweep.seed, "random seed");
  sweep_cmd->add_option("-o,--out", sweep.out, "output CSV path")->required(false);
  sweep_cmd->add_option("--config", config_path, "JSON config or manifest file");
  sweep_binder.bind("M", sweep.copies);
  sweep_binder.bind("phi-min", sweep.phi_min);
  sweep_binder.bind("phi-max", sweep.phi_max);
  sweep_binder.bind("steps", sweep.steps);
  sweep_binder.bind("inputs", sweep.inputs);
  sweep_binder.bind("seed", sweep.seed);
  sweep_binder.bind("out", sweep.out);

  spinstar::cli::VerifyParams verify;
  ConfigBinder verify_binder;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Closure, spin-flip symmetry and endpoint checks, JSON report");
  verify_cmd->add_option("-M,--M", verify.copies, "number of copies (M >= 2)");
  verify_cmd->add_option("--j1", verify.j1, "input-target coupling");
  verify_cmd->add_option("--j2", verify.j2, "input-ancilla coupling");
  verify_cmd->add_option("--lambda1", verify.lambda1, "input-target anisotropy");
  verify_cmd->add_option("--lambda2", verify.lambda2, "input-ancilla anisotropy");
  verify_cmd->add_option("-o,--out", verify.out, "optional JSON report path");
  verify_cmd->add_option("--config", config_path, "JSON config or manifest file");
  verify_binder.bind("M", verify.copies);
  verify_binder.bind("j1", verify.j1);
  verify_binder.bind("j2", verify.j2);
  verify_binder.bind("lambda1", verify.lambda1);
  verify_binder.bind("lambda2", verify.lambda2);
  verify_binder.bind("out", verify.out);

  spinstar::cli::GroundParams ground;
  ConfigBinder ground_binder;
  CLI::App* ground_cmd = app.add_subcommand(
      "ground-state", "Preparation Hamiltonian ground-state check, JSON report");
  ground_cmd->add_option("-M,--M", ground.copies, "number of copies (M >= 3)");
  ground_cmd->add_option("--jprime", ground.jprime, "XXZ coupling J' (< 0 for the claim)");
  ground_cmd->add_option("--delta", ground.delta, "Ising coupling Delta (> 0 for the claim)");
  ground_cmd->add_option("-o,--out", ground.out, "JSON report path");
  ground_cmd->add_option("--state-out", ground.state_out, "amplitude dump path (JSON)");
  ground_cmd->add_option("--config", config_path, "JSON config or manifest file");
  ground_binder.bind("M", ground.copies);
  ground_binder.bind("jprime", ground.jprime);
  ground_binder.bind("delta", ground.delta);
  ground_binder.bind("out", ground.out);
  ground_binder.bind("state-out", ground.state_out);

  spinstar::cli::SpectrumParams spectrum;
  ConfigBinder spectrum_binder;
  CLI::App* spectrum_cmd = app.add_subcommand(
      "spectrum", "Analytic spectrum of the preparation Hamiltonian, CSV output");
  spectrum_cmd->add_option("-M,--M", spectrum.copies, "number of copies (M >= 3)");
  spectrum_cmd->add_option("--jprime", spectrum.jprime, "XXZ coupling J'");
  spectrum_cmd->add_option("--delta", spectrum.delta, "Ising coupling Delta");
  spectrum_cmd->add_option("-o,--out", spectrum.out, "output CSV path");
  spectrum_cmd->add_option("--config", config_path, "JSON config or manifest file");
  spectrum_binder.bind("M", spectrum.copies);
  spectrum_binder.bind("jprime", spectrum.jprime);
  spectrum_binder.bind("delta", spectrum.delta);
  spectrum_binder.bind("out", spectrum.out);

  // Config values must be in place before parsing, so scan for --config and
  // the subcommand name up front.
  std::string pre_config;
  std::string pre_sub;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      pre_config = argv[i + 1];
      ++i;
    } else if (pre_sub.empty() && !arg.empty() && arg[0] != '-') {
      pre_sub = arg;
    }
  }
  if (!pre_config.empty()) {
    const ConfigBinder* binder = nullptr;
    if (pre_sub == "fidelity-sweep") binder = &sweep_binder;
    else if (pre_sub == "verify") binder = &verify_binder;
    else if (pre_sub == "ground-state") binder = &ground_binder;
    else if (pre_sub == "spectrum") binder = &spectrum_binder;
    if (binder == nullptr) {
      std::cerr << "config: --config requires a subcommand\n";
      return 1;
    }
    if (int rc = load_config(pre_config, *binder); rc != 0) return rc;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*sweep_cmd) {
    if (sweep.out.empty()) {
      std::cerr << "fidelity-sweep: --out is required\n";
      return 1;
    }
    return spinstar::cli::run_fidelity_sweep(sweep);
  }
  if (*verify_cmd) return spinstar::cli::run_verify(verify);
  if (*ground_cmd) return spinstar::cli::run_ground_state(ground);
  if (*spectrum_cmd) return spinstar::cli::run_spectrum(spectrum);
  return 1;
}
