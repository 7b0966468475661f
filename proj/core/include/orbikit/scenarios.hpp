#pragma once

#include <string>
#include <vector>

#include "orbikit/report.hpp"

namespace orbikit {

std::vector<std::string> scenario_names();

/// Default degree cutoff (half-units) per scenario.
int scenario_default_cutoff_hu(const std::string& name);

/// Runs one of: z2_untwisted, z2_twisted, d4_galois, d4_appear_v, not0_check.
/// cutoff_hu < 0 selects the scenario default.
Report run_scenario(const std::string& name, int cutoff_hu, std::uint64_t seed);

/// Mode-calculus battery: bracket law on all valid mode pairs, automorphism
/// conjugation, invariant quadratic, and the weak-associativity collapse
/// samples, in both sectors.
Report run_mode_calculus_checks(int cutoff_hu, std::uint64_t seed);

}  // namespace orbikit
