#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace postcon {

// Runs f(i) for i in [0, n). Tasks must be independent; results must be
// written to pre-allocated per-index slots so the outcome does not depend on
// scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f,
                         unsigned max_threads = 0) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned nthreads = max_threads == 0 ? hw : std::min(hw, max_threads);
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, n));
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) {
        workers.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += nthreads) f(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace postcon
