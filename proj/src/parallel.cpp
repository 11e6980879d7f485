#include "modp/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>

namespace modp {

int thread_budget() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("MODP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

}  // namespace modp
