#pragma once

namespace modp {

// Thread budget: omp_get_max_threads(), capped by MODP_THREADS when set.
int thread_budget();

}  // namespace modp
