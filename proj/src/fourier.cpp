#include "wgt/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wgt {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

int next_fast(int n) {
    // powers of two are plenty here
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

}  // namespace

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(a.data()),
                                inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
}

double frac_sobolev_norm(const Image2D& g, double s) {
    const int n0 = g.n0(), n1 = g.n1();
    // support bounding box
    int i0 = n0, i1 = -1, j0 = n1, j1 = -1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (g.data(i, j) != 0.0) {
                i0 = std::min(i0, i);
                i1 = std::max(i1, i);
                j0 = std::min(j0, j);
                j1 = std::max(j1, j);
            }
    if (i1 < 0) return 0.0;  // identically zero
    if (i0 == 0 || j0 == 0 || i1 == n0 - 1 || j1 == n1 - 1)
        throw std::invalid_argument("frac_sobolev_norm: support touches the grid edge; pad the input");

    const int wi = i1 - i0 + 1, wj = j1 - j0 + 1;
    const int N = next_fast(2 * std::max(wi, wj));
    std::vector<double> in(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) in[(i - i0) * static_cast<std::size_t>(N) + (j - j0)] = g.data(i, j);

    std::vector<std::complex<double>> out(static_cast<std::size_t>(N) * (N / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_r2c_2d(N, N, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }

    const double h = g.h;
    const double dxi = 2.0 * std::numbers::pi / (N * h);
    // norm^2 = (h^2/N^2) * sum (1+|xi|^2)^s |DFT|^2   (Plancherel at s=0)
    double acc = 0;
    for (int i = 0; i < N; ++i) {
        const int ki = i <= N / 2 ? i : i - N;
        const double xi_i = ki * dxi;
        for (int j = 0; j <= N / 2; ++j) {
            const double xi_j = j * dxi;
            const double w = std::pow(1.0 + xi_i * xi_i + xi_j * xi_j, s);
            const double m2 = std::norm(out[i * static_cast<std::size_t>(N / 2 + 1) + j]);
            // r2c stores half the spectrum; duplicate interior columns
            const double mult = (j == 0 || j == N / 2) ? 1.0 : 2.0;
            acc += mult * w * m2;
        }
    }
    return std::sqrt(acc * h * h / (static_cast<double>(N) * N));
}

namespace {

double frac_1d_impl(const std::vector<double>& re, const std::vector<double>& im, double h,
                    double s, bool periodic) {
    const int n = static_cast<int>(re.size());
    if (n < 2) throw std::invalid_argument("frac_sobolev_norm_1d: need at least 2 samples");
    const bool has_im = !im.empty();
    if (has_im && im.size() != re.size())
        throw std::invalid_argument("frac_sobolev_norm_1d: re/im size mismatch");

    const int N = periodic ? n : next_fast(2 * n);
    std::vector<std::complex<double>> a(N, 0.0);
    for (int i = 0; i < n; ++i) a[i] = {re[i], has_im ? im[i] : 0.0};
    fft(a, false);

    const double dxi = 2.0 * std::numbers::pi / (N * h);
    double acc = 0;
    for (int k = 0; k < N; ++k) {
        const int ks = k <= N / 2 ? k : k - N;
        const double xi = ks * dxi;
        acc += std::pow(1.0 + xi * xi, s) * std::norm(a[k]);
    }
    // norm^2 = (h/N) * sum (1+xi^2)^s |DFT|^2
    return std::sqrt(acc * h / N);
}

}  // namespace

double frac_sobolev_norm_1d(const std::vector<double>& re, const std::vector<double>& im, double h,
                            double s) {
    return frac_1d_impl(re, im, h, s, false);
}

double frac_sobolev_norm_1d_periodic(const std::vector<double>& re, const std::vector<double>& im,
                                     double h, double s) {
    return frac_1d_impl(re, im, h, s, true);
}

}  // namespace wgt
