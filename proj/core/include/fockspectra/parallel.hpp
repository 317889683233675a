#pragma once

#include <cstddef>
#include <functional>

namespace fockspectra {

/// Number of worker threads used by parallel sweeps. Honors the
/// FOCK_SPECTRA_THREADS environment variable, otherwise the hardware
/// concurrency.
int max_threads();

/// Runs body(i) for i in [0, n). Work items write to disjoint slots; any
/// reduction over the results must happen after the call, in index order,
/// so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fockspectra
