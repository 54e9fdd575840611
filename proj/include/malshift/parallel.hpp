#ifndef MALSHIFT_PARALLEL_HPP
#define MALSHIFT_PARALLEL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace malshift::par {

enum class Mode { serial, openmp };

// Process-wide default used by the high-level kernels; the CLI and the
// benchmark flip it explicitly.
inline Mode& default_mode() {
    static Mode m = Mode::openmp;
    return m;
}

// Evaluates fn(i) for i in [0, count) and returns the results in index order.
// Each slot is computed independently, so the OpenMP path is bitwise identical
// to the serial reference; reductions over the returned vector stay serial.
template <class T, class Fn>
std::vector<T> map_indexed(std::size_t count, Fn&& fn, Mode mode = default_mode()) {
    std::vector<T> out(count);
    if (mode == Mode::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        return out;
#endif
    }
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

// argmax over fn(i) with deterministic ties: the smallest index wins.
template <class Score, class Fn>
std::pair<Score, std::size_t> argmax_indexed(std::size_t count, Fn&& fn,
                                             Mode mode = default_mode()) {
    std::vector<Score> scores = map_indexed<Score>(count, std::forward<Fn>(fn), mode);
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (scores[i] > scores[best]) best = i;
    return {scores[best], best};
}

inline int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace malshift::par

#endif
