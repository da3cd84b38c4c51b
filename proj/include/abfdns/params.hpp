#pragma once

#include <stdexcept>
#include <string>

namespace abfdns {

/// Physical coefficients of the damped anisotropic system:
/// du/dt - nu*Lap_h u + (u.grad)u + a|u|^{2 alpha} u = -grad p.
/// a = 0 recovers the undamped anisotropic equations; nu = 0 is permitted
/// for conservation experiments.
struct PhysicsParams {
  double nu;
  double a;
  double alpha;

  PhysicsParams(double nu_, double a_, double alpha_) : nu(nu_), a(a_), alpha(alpha_) {
    if (!(nu >= 0.0)) throw std::invalid_argument("PhysicsParams: nu must be >= 0");
    if (!(a >= 0.0)) throw std::invalid_argument("PhysicsParams: a must be >= 0");
    if (!(alpha >= 1.0)) throw std::invalid_argument("PhysicsParams: alpha must be >= 1");
  }
};

enum class TimeScheme { imex_rk2, imex_rk3 };

enum class DampingMode {
  explicit_term,  // damping evaluated inside the explicit RK stages
  exact_split     // Strang split around the exact pointwise damping solve
};

struct StepperConfig {
  double dt = 1e-3;
  TimeScheme scheme = TimeScheme::imex_rk3;
  DampingMode damping_mode = DampingMode::exact_split;
  double cfl_safety = 0.9;
  double dt_max = 0.1;
  // Test hook: flips the sign of the damping force so verification suites
  // can prove they catch a wrong-sign implementation.
  bool flip_damping_sign = false;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be > 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
      throw std::invalid_argument("StepperConfig: cfl_safety must be in (0,1]");
    }
    if (!(dt_max > 0.0)) throw std::invalid_argument("StepperConfig: dt_max must be > 0");
  }
};

/// Thrown when a step produces non-finite values. A blow-up aborts the run
/// and is reported with its own exit code.
class blowup_error : public std::runtime_error {
 public:
  explicit blowup_error(const std::string& what) : std::runtime_error(what) {}
};

/// Order of accuracy the configuration is entitled to: the Strang damping
/// split caps the pair at two when damping is active.
inline int nominal_order(const StepperConfig& cfg, const PhysicsParams& p) {
  const int scheme_order = (cfg.scheme == TimeScheme::imex_rk2) ? 2 : 3;
  if (p.a > 0.0 && cfg.damping_mode == DampingMode::exact_split) {
    return scheme_order < 2 ? scheme_order : 2;
  }
  return scheme_order;
}

}  // namespace abfdns
