#include "wgt/phantoms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wgt/bumps.hpp"

namespace wgt {

PotentialField make_phantom(const WaveguideGrid& grid, const PhantomSpec& spec) {
    const auto& bp = standard_bumps();
    const double A = spec.amplitude;
    const Vec2 c = spec.center;
    const double cz = spec.center_z, w = spec.width, wz = spec.width_z;
    const double r = spec.r_support;
    std::function<double(Vec2, double)> f;

    if (spec.family == "zero") {
        f = [](Vec2, double) { return 0.0; };
    } else if (spec.family == "bump") {
        if (std::abs(cz) + wz > r)
            throw std::invalid_argument("phantom: bump axial support exceeds r_support");
        const double p0 = bp.phi({0, 0}), h0 = bp.h(0);
        f = [=, &bp](Vec2 xy, double z) {
            const double rr = (xy - c).norm() / w;
            const double zz = (z - cz) / wz;
            if (rr >= 1 || std::abs(zz) >= 1) return 0.0;
            return A * (bp.phi({rr, 0}) / p0) * (bp.h(zz) / h0);
        };
    } else if (spec.family == "ag") {
        // g: centered triangle, even and decreasing away from 0;
        // v: 2r-periodic axial modulation times a smooth section profile
        const double circ = grid.section.circumradius();
        f = [=](Vec2 xy, double z) {
            const double g = std::max(0.0, 1.0 - std::abs(z) / r);
            const double v = (1.0 + 0.5 * std::cos(std::numbers::pi * z / r)) *
                             (1.0 - 0.4 * xy.dot(xy) / (circ * circ));
            return A * g * v;
        };
    } else if (spec.family == "holder_bump") {
        if (std::abs(cz) + wz > r)
            throw std::invalid_argument("phantom: bump axial support exceeds r_support");
        const double h0 = bp.h(0);
        const double al = spec.alpha;
        f = [=, &bp](Vec2 xy, double z) {
            const double zz = (z - cz) / wz;
            if (std::abs(zz) >= 1) return 0.0;
            const double prof = 1.0 - std::pow((xy - c).norm() / w, al);
            if (prof <= 0) return 0.0;
            return A * prof * (bp.h(zz) / h0);
        };
    } else {
        throw std::invalid_argument("phantom: unknown family '" + spec.family + "'");
    }

    PotentialField q = sample_potential(grid, f, spec.alpha, spec.M, spec.r_support);
    q.family = spec.family;
    return q;
}

PotentialField perturb_potential(const WaveguideGrid& grid, const PotentialField& q1,
                                 const PotentialField& p, double s) {
    PotentialField out;
    out.alpha = q1.alpha;
    out.M = q1.M + std::abs(s) * p.M;
    out.r_support = std::max(q1.r_support, p.r_support);
    out.family = q1.family + "+scaled";
    if (q1.analytic && p.analytic) {
        auto f1 = q1.analytic, fp = p.analytic;
        out.analytic = [f1, fp, s](Vec2 xy, double z) { return f1(xy, z) + s * fp(xy, z); };
    }
    out.values = Array3D<double>(grid.nx, grid.ny, grid.nz);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values.data()[i] = q1.values.data()[i] + s * p.values.data()[i];
    return out;
}

}  // namespace wgt
