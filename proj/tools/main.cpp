#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "abfdns/config.hpp"
#include "abfdns/params.hpp"
#include "abfdns/run.hpp"

namespace {

abfdns::RunConfig load_run_config(const std::string& config_path, const std::string& output,
                                  const std::optional<long long>& seed) {
  abfdns::KeyValueConfig kv = abfdns::KeyValueConfig::parse_file(config_path);
  if (!output.empty()) kv.set("output.dir", output);
  if (seed.has_value()) {
    kv.set("ic.seed", std::to_string(*seed));
    kv.set("verify.seed", std::to_string(*seed));
  }
  return abfdns::RunConfig::from_config(kv);
}

void print_checks(const std::vector<abfdns::CheckResult>& checks) {
  for (const auto& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  value=" << c.value
              << " threshold=" << c.threshold;
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abfdns: pseudo-spectral solver for the anisotropic damped "
               "Navier-Stokes system, with a verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::optional<long long> seed;
  std::string suite = "all";
  std::string snapshot_path;
  std::optional<std::string> continue_csv;

  CLI::App* run_cmd = app.add_subcommand("run", "integrate a configured case");
  run_cmd->add_option("--config", config_path, "configuration file")->required();
  run_cmd->add_option("--output", output, "output directory (overrides output.dir)");
  run_cmd->add_option("--seed", seed, "override ic.seed");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--config", config_path, "configuration file")->required();
  verify_cmd->add_option("--output", output, "output directory (overrides output.dir)");
  verify_cmd->add_option("--seed", seed, "override ensemble seed");
  verify_cmd->add_option("--suite", suite, "inequalities | budgets | stability | all")
      ->check(CLI::IsMember({"inequalities", "budgets", "stability", "all"}));

  CLI::App* resume_cmd = app.add_subcommand("resume", "continue a run from a snapshot");
  resume_cmd->add_option("snapshot", snapshot_path, "snapshot file")->required();
  resume_cmd->add_option("--config", config_path, "configuration file")->required();
  resume_cmd->add_option("--output", output, "output directory (overrides output.dir)");
  resume_cmd->add_option("--seed", seed, "override ic.seed");
  std::string continue_csv_raw;
  resume_cmd->add_option("--continue-csv", continue_csv_raw,
                         "diagnostics.csv of the interrupted run (restores the "
                         "budget accumulators bit-exactly)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const abfdns::RunConfig rc = load_run_config(config_path, output, seed);
      const abfdns::RunOutput out = abfdns::run_simulation(rc, &std::cerr);
      if (out.exit_code == abfdns::exit_ok) {
        std::cout << "run complete: " << out.diagnostics_csv << "\n";
      }
      return out.exit_code;
    }

    if (resume_cmd->parsed()) {
      const abfdns::RunConfig rc = load_run_config(config_path, output, seed);
      if (!continue_csv_raw.empty()) continue_csv = continue_csv_raw;
      const abfdns::RunOutput out =
          abfdns::resume_simulation(rc, snapshot_path, continue_csv, &std::cerr);
      if (out.exit_code == abfdns::exit_ok) {
        std::cout << "resume complete: " << out.diagnostics_csv << "\n";
      }
      return out.exit_code;
    }

    // verify
    const abfdns::KeyValueConfig kv = abfdns::KeyValueConfig::parse_file(config_path);
    abfdns::KeyValueConfig kv2 = kv;
    if (!output.empty()) kv2.set("output.dir", output);
    if (seed.has_value()) kv2.set("verify.seed", std::to_string(*seed));
    const abfdns::RunConfig rc = abfdns::RunConfig::from_config(kv2);
    const abfdns::VerifyOptions vo = abfdns::VerifyOptions::from_config(kv2);

    std::vector<abfdns::CheckResult> checks;
    auto append = [&checks](std::vector<abfdns::CheckResult> more) {
      checks.insert(checks.end(), more.begin(), more.end());
    };
    if (suite == "inequalities" || suite == "all") append(abfdns::verify_inequalities(rc, vo));
    if (suite == "budgets" || suite == "all") append(abfdns::verify_budgets(rc));
    if (suite == "stability" || suite == "all") append(abfdns::verify_stability(rc, vo));
    print_checks(checks);
    return abfdns::all_passed(checks) ? abfdns::exit_ok : abfdns::exit_invariant_violation;
  } catch (const abfdns::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return abfdns::exit_config_error;
  } catch (const abfdns::blowup_error& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return abfdns::exit_blowup;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return abfdns::exit_config_error;
  }
}
