#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "abfdns/config.hpp"
#include "abfdns/diagnostics.hpp"
#include "abfdns/params.hpp"

namespace abfdns {

// CLI exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_invariant_violation = 3;
inline constexpr int exit_blowup = 4;

enum class IcKind { taylor_green, random, vertical_shear, uniform, file };

struct InitialCondition {
  IcKind kind = IcKind::taylor_green;
  double slope = -2.0;                     // random
  std::uint64_t seed = 1;                  // random
  std::array<double, 3> vec{1.0, 0.0, 0.0};  // uniform
  std::string path;                        // file
};

struct RunConfig {
  int n_h = 0;
  int n_v = 0;
  std::array<double, 3> box_lengths{};
  PhysicsParams physics{0.05, 1.0, 1.5};
  StepperConfig stepper;
  InitialCondition ic;
  double t_end = 0.0;
  long long diag_every = 1;
  long long snapshot_every = 1000000;
  std::string output_dir = "out";
  std::uint64_t config_hash = 0;

  /// Build from parsed key-value text. grid.n_h, grid.n_v, grid.lengths and
  /// run.t_end are required; every other key has a default. Throws
  /// config_error naming the offending key.
  static RunConfig from_config(const KeyValueConfig& kv);
};

struct RunOutput {
  int exit_code = exit_ok;
  std::vector<DiagnosticsRecord> records;
  std::string diagnostics_csv;       // path written
  std::string final_snapshot;        // path of last snapshot written
};

/// Execute a run: write <output_dir>/diagnostics.csv (columns t,energy,
/// grad_h,damping_lp,dz_energy,grad_h_dz,weighted_dz,div_residual,
/// budget_residual behind a '#' metadata line) and snapshots at the
/// configured cadence. Returns exit_blowup with a final flushed record if a
/// step produces non-finite values.
RunOutput run_simulation(const RunConfig& cfg, std::ostream* log = nullptr);

/// Continue a run from a snapshot. The grid must match the config. When
/// continue_csv points at the diagnostics written up to the snapshot, the
/// budget accumulators are replayed from it so later rows are bit-identical
/// to an uninterrupted run; otherwise the budget baseline restarts at the
/// snapshot (flagged in the metadata line).
RunOutput resume_simulation(const RunConfig& cfg, const std::string& snapshot_path,
                            const std::optional<std::string>& continue_csv,
                            std::ostream* log = nullptr);

/// One line of a verification suite.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  int samples_per_resolution = 256;
  std::vector<int> resolutions{16, 32};
  std::uint64_t pairs = 1000000;
  int seeds = 10;
  std::uint64_t seed = 1234;
  double spectrum_slope = -2.0;
  double twin_t_end = 1.0;
  static VerifyOptions from_config(const KeyValueConfig& kv);
};

/// Inequality suite: every hard and soft check plus the gamma calibration;
/// writes <output_dir>/inequalities.csv.
std::vector<CheckResult> verify_inequalities(const RunConfig& rc, const VerifyOptions& vo);

/// Budget suite: runs the configured case, checks the closed energy budget
/// and the vertical budget; writes diagnostics.csv and budgets.csv.
std::vector<CheckResult> verify_budgets(const RunConfig& rc);

/// Stability suite: twin runs (identical, delta sweep, seed ensemble,
/// damping sweep); writes stability_records.csv and gronwall.csv.
std::vector<CheckResult> verify_stability(const RunConfig& rc, const VerifyOptions& vo);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace abfdns
