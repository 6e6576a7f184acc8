#pragma once

// Scenario configuration: line-based `key = value` text with `#` comments.
//
//   grid.half_width   real > 0          default 6
//   grid.n            integer >= 2      default 16
//   angular.n_mu      integer >= 2      default 8
//   angular.n_az      integer >= 4      default 16
//   kernel.c_phi      real > 0          default 1
//   kernel.c_ang      real > 0          default 1
//   init.kind         juttner | two_bump | box   default juttner
//   init.beta         real > 0          default 1
//   init.shift        3 reals           default 1.5 0 0
//   init.box_half_width real > 0        default 1.5
//   time.t_end        real >= 0         default 1
//   time.safety       real in (0, 1]    default 0.5
//   time.dt_max       real > 0          default 0.1
//   solver.scheme     projection | interpolate   default projection
//   output.path       string            default "-" (standard output)
//   norms             p k pairs separated by commas, p >= 1
//                                       default 1.5 0, 2 0, 3 0
//   carleman.n_r      integer >= 1      default 32
//   carleman.n_psi    integer >= 1      default 16

#include <string>
#include <vector>

#include "relcoll/carleman.hpp"
#include "relcoll/collision_operator.hpp"
#include "relcoll/cross_section.hpp"
#include "relcoll/density_field.hpp"
#include "relcoll/diagnostics.hpp"
#include "relcoll/solver.hpp"

namespace relcoll {

enum class InitKind { juttner, two_bump, box };

struct ScenarioConfig {
  double half_width = 6.0;
  int n = 16;
  AngularGrid angular{8, 16};
  ScatteringKernel kernel{};
  InitKind init_kind = InitKind::juttner;
  double beta = 1.0;
  Vec3 shift{1.5, 0.0, 0.0};
  double box_half_width = 1.5;
  double t_end = 1.0;
  double safety = 0.5;
  double dt_max = 0.1;
  GainScheme scheme = GainScheme::projection;
  std::string output_path = "-";
  std::vector<NormSpec> norms{{1.5, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  int carleman_n_r = 32;
  int carleman_n_psi = 16;

  RunOptions run_options() const;
  WeakFormGrid weak_form_grid() const;
};

/// Parses and validates. Throws ConfigError carrying the offending key and
/// line (line 0 for a default that fails validation).
ScenarioConfig parse_config(const std::string& text);

/// Reads `path` and parses it. Throws ConfigError when the file is unreadable.
ScenarioConfig load_config(const std::string& path);

/// Initial datum on the configured grid:
///   juttner   exp(-beta v^0)
///   two_bump  exp(-beta (v - shift)^0) + exp(-beta (v + shift)^0)
///   box       1 where max_i |v_i| <= box_half_width, else 0
DensityField build_initial(const ScenarioConfig& cfg);

std::string to_string(InitKind kind);

}  // namespace relcoll
