#include "aslam/parallel.hpp"

#include <omp.h>

namespace aslam {

namespace {
int default_workers = -1;
}

void set_worker_count(int workers) {
  if (default_workers < 0) {
    default_workers = omp_get_max_threads();
  }
  omp_set_num_threads(workers > 0 ? workers : default_workers);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace aslam
