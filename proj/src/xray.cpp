#include "wgt/xray.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "wgt/fourier.hpp"

namespace wgt {

namespace {

double image_reach(const Image2D& img) {
    const Vec2 c0 = img.point(0, 0);
    const Vec2 c1 = img.point(img.n0() - 1, img.n1() - 1);
    return std::max(c0.norm(), c1.norm()) + img.h;
}

}  // namespace

SliceSinogram xray_forward(const Image2D& img, const std::vector<double>& angles,
                           const std::vector<double>& offsets) {
    SliceSinogram sg;
    sg.angles = angles;
    sg.offsets = offsets;
    sg.data = Array2D<double>(angles.size(), offsets.size(), 0.0);
    const double step = 0.5 * img.h;
    const double reach = image_reach(img);
    const int nsteps = static_cast<int>(std::ceil(2 * reach / step));
    for (std::size_t ai = 0; ai < angles.size(); ++ai) {
        const Vec2 theta{std::cos(angles[ai]), std::sin(angles[ai])};
        const Vec2 perp = theta.perp();
        for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
            const Vec2 foot = offsets[oi] * perp;
            double acc = 0;
            for (int i = 0; i <= nsteps; ++i) {
                const double t = -reach + i * step;
                const double w = (i == 0 || i == nsteps) ? 0.5 : 1.0;
                acc += w * img.sample(foot + t * theta);
            }
            sg.data(ai, oi) = acc * step;
        }
    }
    return sg;
}

Image2D fbp_invert(const SliceSinogram& sino, const Image2D& grid2d, const FBPOptions& opt) {
    const int n_ang = static_cast<int>(sino.angles.size());
    const int n_off = static_cast<int>(sino.offsets.size());
    if (n_ang < 2) throw std::invalid_argument("fbp_invert: need at least 2 angles");
    if (n_off < 2) throw std::invalid_argument("fbp_invert: need at least 2 offsets");
    const double ds = sino.offsets[1] - sino.offsets[0];
    for (int j = 1; j < n_off; ++j)
        if (std::abs(sino.offsets[j] - sino.offsets[j - 1] - ds) > 1e-9 * std::abs(ds))
            throw std::invalid_argument("fbp_invert: offsets must be uniform");

    int N = 1;
    while (N < 2 * n_off) N *= 2;
    const double dxi = 2.0 * std::numbers::pi / (N * ds);
    const double xi_max = std::numbers::pi / ds;

    // ramp-filtered profiles, one per angle
    Array2D<double> filtered(n_ang, n_off);
    std::vector<std::complex<double>> buf(N);
    for (int ai = 0; ai < n_ang; ++ai) {
        std::fill(buf.begin(), buf.end(), std::complex<double>(0, 0));
        for (int j = 0; j < n_off; ++j) buf[j] = sino.data(ai, j);
        fft(buf, false);
        for (int k = 0; k < N; ++k) {
            const int ks = k <= N / 2 ? k : k - N;
            const double xi = std::abs(ks * dxi);
            double w = xi;
            if (opt.apodize) w *= 0.5 * (1.0 + std::cos(std::numbers::pi * xi / xi_max));
            buf[k] *= w;
        }
        fft(buf, true);
        const double scale = 1.0 / (2.0 * std::numbers::pi * N);
        for (int j = 0; j < n_off; ++j) filtered(ai, j) = buf[j].real() * scale;
    }

    Image2D out = grid2d;
    const double dth = std::numbers::pi / n_ang;
    const double s0 = sino.offsets.front();
    for (int i = 0; i < out.n0(); ++i)
        for (int j = 0; j < out.n1(); ++j) {
            const Vec2 p = out.point(i, j);
            if (opt.mask_support && p.norm() > opt.support_radius) {
                out.data(i, j) = 0;
                continue;
            }
            double acc = 0;
            for (int ai = 0; ai < n_ang; ++ai) {
                const double a = sino.angles[ai];
                const double s = -std::sin(a) * p.x + std::cos(a) * p.y;  // <p, theta_perp>
                const double fs = (s - s0) / ds;
                const int j0 = static_cast<int>(std::floor(fs));
                if (j0 < 0 || j0 + 1 >= n_off) continue;
                const double fr = fs - j0;
                acc += (1 - fr) * filtered(ai, j0) + fr * filtered(ai, j0 + 1);
            }
            out.data(i, j) = acc * dth;
        }
    return out;
}

TomoCheck tomo_stability_check(const Image2D& img, int n_angles, int n_offsets) {
    TomoCheck c;
    c.lhs = frac_sobolev_norm(img, -0.5);
    const double reach = image_reach(img);
    std::vector<double> angles(n_angles), offsets(n_offsets);
    for (int k = 0; k < n_angles; ++k) angles[k] = std::numbers::pi * k / n_angles;
    const double ds = 2 * reach / n_offsets;
    for (int j = 0; j < n_offsets; ++j) offsets[j] = -reach + (j + 0.5) * ds;
    const SliceSinogram sg = xray_forward(img, angles, offsets);
    double acc = 0;
    for (int a = 0; a < n_angles; ++a)
        for (int j = 0; j < n_offsets; ++j) acc += sg.data(a, j) * sg.data(a, j);
    // integral over the full circle of directions = twice the half circle
    c.rhs = std::sqrt(2.0 * acc * ds * (std::numbers::pi / n_angles));
    return c;
}

}  // namespace wgt
