#pragma once

#include "steklov/harness/run_spec.hpp"

#include <vector>

namespace steklov {

/// The convergence benchmark: both algorithms on quad (dims 2, 5, 10),
/// abs1d, l1 (dims 2, 5), maxlin and linf (dim 2), each with its tuned
/// starting configuration. No output paths are set.
std::vector<RunSpec> convergence_benchmark();

}  // namespace steklov
