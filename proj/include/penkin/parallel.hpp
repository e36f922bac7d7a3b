#pragma once

#include <cstddef>

namespace penkin {

// Worker count used by every parallel loop in the library. Loops only ever
// split independent outputs between workers, so results do not depend on it.
void set_threads(int n);
int threads();

// Resolves the worker count from an explicit request, falling back to the
// PENROSE_KINETIC_THREADS environment variable and then to all cores.
int resolve_threads(int requested);

}  // namespace penkin
