#pragma once

// Named, ready-to-run configurations. The files under configs/ mirror this
// registry verbatim; a unit test keeps the two in sync.

#include "ucplab/config.hpp"

#include <map>
#include <string>
#include <vector>

namespace ucplab {

inline const std::map<std::string, std::string>& preset_registry() {
  static const std::map<std::string, std::string> reg = {
      // Robin problem with a closed-form solution: u = exp(y) cos(x) is
      // harmonic and satisfies (grad u).n = -u on y = 0.
      {"robin_manufactured", R"([domain]
kind = half_disk
radius = 2

[mesh]
h = 0.1

[coefficients]
eta = -1

[boundary]
arc_dirichlet = exp(y)*cos(x)
use_eta = true
)"},

      // Pure Neumann problem, fixed by the mean-zero constraint. The arc
      // data is the conormal trace of x^2 - y^2, which already has zero
      // mean over the half disk.
      {"mean_zero_neumann", R"([domain]
kind = half_disk
radius = 1

[mesh]
h = 0.1

[boundary]
arc_neumann = 2*x^2-2*y^2
)"},

      {"iterative_demo", R"([domain]
kind = half_disk
radius = 1

[mesh]
h = 0.05

[boundary]
arc_neumann = 2*x^2-2*y^2

[analysis]
solver = iterative
)"},

      // Unbounded eta with |eta|^3 still integrable on the flat boundary.
      {"singular_eta", R"([domain]
kind = half_disk
radius = 2

[mesh]
h = 0.05
grading = 2

[coefficients]
eta = -abs(x)^(-0.3)
s = 3

[boundary]
arc_dirichlet = 1+x^2/8
use_eta = true
)"},

      // Curved boundary y = 0.1 x^2 with a Robin weight; exercises the
      // gauge + flatten + analysis chain end to end.
      {"graph_flatten", R"([domain]
kind = graph
phi = 0.1*x^2
extent = 1

[mesh]
h = 0.05

[coefficients]
eta = -1

[boundary]
arc_dirichlet = exp(y)*cos(x)
use_eta = true

[analysis]
gauge_split = 0.5
r_max = 0.4
)"},

      // Dirichlet data = trace of a degree-m mode; the solve reproduces the
      // mode and the profile should report vanishing order m.
      {"vanish_m1", R"([domain]
kind = half_disk
radius = 1

[mesh]
h = 0.02
grading = 2

[boundary]
arc_dirichlet = x

[analysis]
r_min = 0.02
r_max = 0.48
r_count = 32
)"},

      {"vanish_m2", R"([domain]
kind = half_disk
radius = 1

[mesh]
h = 0.02
grading = 2

[boundary]
arc_dirichlet = x^2-y^2

[analysis]
r_min = 0.02
r_max = 0.48
r_count = 32
)"},

      {"vanish_m3", R"([domain]
kind = half_disk
radius = 1

[mesh]
h = 0.02
grading = 2

[boundary]
arc_dirichlet = x^3-3*x*y^2

[analysis]
r_min = 0.02
r_max = 0.48
r_count = 32
)"},

      // Analytic pure modes; the profile is rigid (F = 2m, N = 4^m).
      {"harmonic_m0", R"([field]
mode = analytic
expr = 1
)"},

      {"harmonic_m1", R"([field]
mode = analytic
expr = x
)"},

      {"harmonic_m2", R"([field]
mode = analytic
expr = x^2-y^2
)"},

      {"harmonic_m3", R"([field]
mode = analytic
expr = x^3-3*x*y^2
)"},

      {"harmonic_m4", R"([field]
mode = analytic
expr = x^4-6*x^2*y^2+y^4
)"},

      // Degree-2 mode plus a higher-order correction; blowups converge to
      // the normalized degree-2 part.
      {"blowup_two_mode", R"([field]
mode = analytic
expr = x^2-y^2+r^3*cos(3*theta)

[analysis]
lambdas = 0.4, 0.2, 0.1
fit_degree = 2
)"},

      // Vanishes faster than any polynomial at the origin.
      {"flat_vanish", R"([field]
mode = analytic
expr = exp(-1/r)

[analysis]
r_min = 0.02
r_max = 0.45
)"},

      // 3-d boundary traces with known zero-set dimensions 1, 1, 0. The
      // exponents move with the dimension: p > 3, s > 2.
      {"nodal_line", R"([coefficients]
p = 4
s = 3

[field]
mode = analytic
expr = x
dim = 3
)"},

      {"nodal_cross", R"([coefficients]
p = 4
s = 3

[field]
mode = analytic
expr = x*y
dim = 3
)"},

      {"nodal_point", R"([coefficients]
p = 4
s = 3

[field]
mode = analytic
expr = x^2+y^2-2*z^2
dim = 3
)"},
  };
  return reg;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : preset_registry()) names.push_back(k);
  return names;
}

inline RunConfig preset_config(const std::string& name) {
  auto it = preset_registry().find(name);
  if (it == preset_registry().end()) throw Error("unknown preset '" + name + "'");
  return RunConfig::load_string(it->second);
}

}  // namespace ucplab
