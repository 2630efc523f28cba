// Timing comparison: serial vs OpenMP table assembly, plus a small k-sweep.
#include <chrono>
#include <cstdio>
#include <sstream>

#include "wavecascade/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace wavecascade;
using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled\n");
#endif
    const SolveConfig cfg = paper_example_config();
    const Materialized m = materialize(cfg);
    const double k = 15.0;

    for (const std::size_t N : {10ul, 25ul}) {
        auto t0 = Clock::now();
        TableOptions serial;
        serial.parallel = false;
        const CoefficientTable ts = build_table_serial(m.blocks[0], k, N, serial);
        const double t_serial = seconds_since(t0);

        t0 = Clock::now();
        const CoefficientTable tp = build_table(m.blocks[0], k, N);
        const double t_parallel = seconds_since(t0);

        double dev = 0.0;
        for (std::size_t i = 0; i < ts.u_grid.size(); ++i) {
            CMatrix d = ts.B2_tab[i];
            d -= tp.B2_tab[i];
            dev = std::max(dev, d.max_abs());
        }
        std::printf("build_table N=%-3zu  serial %.3fs  parallel %.3fs  speedup %.2fx"
                    "  max|diff| %.2e\n",
                    N, t_serial, t_parallel, t_serial / t_parallel, dev);
    }

    {
        std::vector<double> ks;
        for (double k2 = 2.0; k2 <= 12.0; k2 += 1.0) ks.push_back(k2);
        SolveConfig sweep = cfg;
        sweep.k_values = ks;
        auto t0 = Clock::now();
        std::ostringstream sink_err;
        std::ostringstream sink_csv;
        cmd_solve(sweep, sink_csv, sink_err);
        std::printf("sweep of %zu wavenumbers: %.3fs\n", ks.size(),
                    seconds_since(t0));
    }
    return 0;
}
