#include "fisherlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace fisherlab::fft {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution on distinct
// plans is. Plans are made with FFTW_ESTIMATE on fftw_malloc-aligned scratch,
// so the chosen algorithm (and therefore the output bits) depends only on n.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
    const int n = static_cast<int>(in.size());
    fftw_complex* buf_in = fftw_alloc_complex(n);
    fftw_complex* buf_out = fftw_alloc_complex(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, buf_in, buf_out, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    std::memcpy(buf_in, in.data(), sizeof(fftw_complex) * n);
    fftw_execute(plan);
    std::memcpy(out.data(), buf_out, sizeof(fftw_complex) * n);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf_in);
    fftw_free(buf_out);
}

}  // namespace fisherlab::fft
