// Benchmark comparing the OpenMP kernels against their serial references:
// FFT vs naive DFT, autocorrelation-based spectrum vs midpoint double sum,
// circulant embedding vs dense Cholesky, and the Monte Carlo replicate loop
// at 1 thread vs the default team.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "ofbm/asymvar.hpp"
#include "ofbm/fft.hpp"
#include "ofbm/montecarlo.hpp"
#include "ofbm/reference.hpp"
#include "ofbm/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ofbm;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

OfbmParams bench_params() {
    Mat p(2, 2, {0.98, 0.57, 0.20, 0.82});
    auto hs = HurstSpec::make(p, {0.25, 0.85});
    return OfbmParams::make(hs, sigma_for_amplitude(hs, Mat(2, 2, {1.0, 0.5, 0.5, 1.0})));
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP off)\n");
#endif

    // FFT vs naive DFT
    {
        const size_t len = 1 << 12;
        std::vector<std::complex<double>> a(len);
        for (size_t i = 0; i < len; ++i)
            a[i] = {std::sin(0.1 * i) + 0.3 * std::cos(0.77 * i), std::cos(0.01 * i)};
        auto t0 = clock_type::now();
        const auto slow = ref::naive_dft(a, false);
        const double t_slow = seconds_since(t0);
        auto fast = a;
        t0 = clock_type::now();
        fft(fast, false);
        const double t_fast = seconds_since(t0);
        double err = 0.0;
        for (size_t i = 0; i < len; ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
        std::printf("fft %zu: %.4f s vs naive %.4f s, max err %.3e\n", len, t_fast, t_slow, err);
    }

    const auto params = bench_params();
    const auto psi = cascade_psi(daubechies_filters(2, FilterVariant::least_asymmetric), 10);

    // spectrum: exact autocorrelation route vs midpoint double sum
    {
        auto t0 = clock_type::now();
        const Mat fast = base_spectrum_raw(params, psi);
        const double t_fast = seconds_since(t0);
        t0 = clock_type::now();
        const Mat slow = ref::midpoint_base_spectrum(params, psi);
        const double t_slow = seconds_since(t0);
        std::printf("spectrum: %.4f s vs midpoint %.4f s, rel err %.3e\n", t_fast, t_slow,
                    frob_norm(fast - slow) / frob_norm(fast));
    }

    // synthesis: circulant embedding vs dense Cholesky (timing only; equality
    // is in law, checked statistically in the test suite)
    {
        const std::int64_t len = 512;
        auto t0 = clock_type::now();
        const auto fast = synth_ofgn(params, len, 7);
        const double t_fast = seconds_since(t0);
        t0 = clock_type::now();
        const auto slow = ref::dense_ofgn(params, len, 7);
        const double t_slow = seconds_since(t0);
        std::printf("synth N=%lld: embedding %.4f s vs dense %.4f s\n",
                    static_cast<long long>(len), t_fast, t_slow);
        (void)fast;
        (void)slow;
    }

    // Monte Carlo loop: serial vs parallel must agree bit for bit.
    {
        auto cfg = preset_config("fig2");
        cfg.len = 1 << 12;
        cfg.replicates = 24;
        cfg.j_max = 8;

#ifdef _OPENMP
        omp_set_num_threads(1);
#endif
        auto t0 = clock_type::now();
        const auto serial = run_montecarlo(cfg);
        const double t_serial = seconds_since(t0);
#ifdef _OPENMP
        omp_set_num_threads(omp_get_num_procs());
#endif
        t0 = clock_type::now();
        const auto parallel = run_montecarlo(cfg);
        const double t_parallel = seconds_since(t0);

        double err = 0.0;
        for (size_t i = 0; i < serial.aggregates.size(); ++i)
            for (size_t p = 0; p < serial.aggregates[i].mean_h.size(); ++p)
                err = std::max(err, std::fabs(serial.aggregates[i].mean_h[p] -
                                              parallel.aggregates[i].mean_h[p]));
        std::printf("montecarlo 24x4096: serial %.3f s vs parallel %.3f s, max dev %.3e\n",
                    t_serial, t_parallel, err);
        if (err != 0.0) {
            std::printf("FAIL: parallel schedule changed the report\n");
            return 1;
        }
    }
    std::printf("ok\n");
    return 0;
}
