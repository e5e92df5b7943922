#ifndef ASLAM_PARALLEL_HPP
#define ASLAM_PARALLEL_HPP

#include <cstddef>

namespace aslam {

/// Execution path for the data-parallel kernels.
///
/// `serial` is the reference implementation kept for testing; `parallel`
/// distributes independent rows over OpenMP workers. Both produce
/// bit-identical output.
enum class Exec { serial, parallel };

/// Caps the number of OpenMP workers. `0` restores the runtime default.
void set_worker_count(int workers);

/// Number of workers a parallel region would currently use.
int worker_count();

}  // namespace aslam

#endif
