#pragma once

#include <cstddef>

namespace islm {

// Worker cap for grid loops and sweeps. Reads ISLM_THREADS once; defaults to
// the machine parallelism, never less than 1.
std::size_t worker_count();

} // namespace islm
