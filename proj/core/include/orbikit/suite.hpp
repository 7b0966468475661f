#pragma once

#include "orbikit/report.hpp"

namespace orbikit {

/// The full verification battery behind `suite all`: one check record per
/// criterion, deterministic for a fixed seed.
Report run_suite(std::uint64_t seed);

}  // namespace orbikit
