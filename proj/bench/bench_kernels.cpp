// Compares the serial reference kernels against the dispatching entry points
// (OpenMP when enabled). Usage: csaug_bench [reps]

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "csaug/kernels.hpp"
#include "csaug/rng.hpp"
#include "csaug/volume.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace csaug;

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

std::vector<Level> random_levels(std::size_t n, std::uint32_t levels, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<Level> data(n);
    for (auto& v : data) {
        v = static_cast<Level>(rng.next_below(levels));
    }
    return data;
}

void report(const std::string& name, std::size_t n, double serial_ms, double dispatch_ms) {
    std::printf("%-18s n=%-9zu serial %8.3f ms   dispatch %8.3f ms   speedup %5.2fx\n",
                name.c_str(), n, serial_ms, dispatch_ms, serial_ms / dispatch_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    std::printf("openmp=%s", kernels::openmp_enabled() ? "on" : "off");
#ifdef _OPENMP
    std::printf(" threads=%d", omp_get_max_threads());
#endif
    std::printf(" reps=%d\n", reps);

    const std::uint32_t levels = 256;
    for (const std::size_t n : {std::size_t{1} << 16, std::size_t{1} << 20, std::size_t{1} << 23}) {
        const auto src = random_levels(n, levels, 1);
        const auto lut = random_levels(levels, levels, 2);
        std::vector<Level> dst(n);

        report("apply_lut", n,
               time_ms([&] { kernels::serial::apply_lut(src, lut, dst); }, reps),
               time_ms([&] { kernels::apply_lut(src, lut, dst); }, reps));

        std::vector<std::uint64_t> counts(levels);
        report("histogram", n,
               time_ms([&] {
                   std::fill(counts.begin(), counts.end(), 0);
                   kernels::serial::accumulate_histogram(src, counts);
               }, reps),
               time_ms([&] {
                   std::fill(counts.begin(), counts.end(), 0);
                   kernels::accumulate_histogram(src, counts);
               }, reps));

        const auto src2 = random_levels(n, levels, 3);
        const auto src3 = random_levels(n, levels, 4);
        const auto src4 = random_levels(n, levels, 5);
        const std::vector<const Level*> sources{src.data(), src2.data(), src3.data(), src4.data()};
        report("average x4", n,
               time_ms([&] { kernels::serial::average_rounded(sources, dst); }, reps),
               time_ms([&] { kernels::average_rounded(sources, dst); }, reps));

        // Square-ish 2D shape; flip along the non-contiguous dimension.
        std::size_t rows = 1;
        while (rows * rows < n) {
            rows <<= 1;
        }
        const Shape shape{rows, n / rows};
        report("flip dim0", n,
               time_ms([&] { kernels::serial::flip(shape, src, 0, dst); }, reps),
               time_ms([&] { kernels::flip(shape, src, 0, dst); }, reps));

        const auto pred = random_levels(n, 4, 6);
        const auto truth = random_levels(n, 4, 7);
        report("label_overlap", n,
               time_ms([&] { (void)kernels::serial::label_overlap(pred, truth, 1); }, reps),
               time_ms([&] { (void)kernels::label_overlap(pred, truth, 1); }, reps));
        std::printf("\n");
    }
    return 0;
}
