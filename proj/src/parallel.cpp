#include "penkin/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace penkin {

void set_threads(int n) { omp_set_num_threads(n > 0 ? n : 1); }

int threads() { return omp_get_max_threads(); }

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PENROSE_KINETIC_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return omp_get_num_procs();
}

}  // namespace penkin
