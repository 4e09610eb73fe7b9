#pragma once

#include <vector>

#include "wgt/image.hpp"

namespace wgt {

// Parallel-beam data for one axial slice: data(angle, offset) with the line
// {s * theta_perp + t * theta}, theta = (cos a, sin a), theta_perp = (-sin a, cos a).
struct SliceSinogram {
    double y3 = 0;
    std::vector<double> angles;   // in [0, pi)
    std::vector<double> offsets;  // uniform, symmetric
    Array2D<double> data;

    double& at(int ai, int oi) { return data(ai, oi); }
    double at(int ai, int oi) const { return data(ai, oi); }
};

// Line integrals by bilinear interpolation with step h/2 along each line.
SliceSinogram xray_forward(const Image2D& img, const std::vector<double>& angles,
                           const std::vector<double>& offsets);

struct FBPOptions {
    bool apodize = false;        // raised-cosine window on the ramp
    bool mask_support = false;   // zero outside the given support radius
    double support_radius = 0;   // about the origin; used when mask_support
};

// Standard ramp-filtered backprojection onto the given grid. Requires at
// least 2 angles, uniform in [0, pi), and uniform offsets covering the support.
Image2D fbp_invert(const SliceSinogram& sino, const Image2D& grid2d, const FBPOptions& opt = {});

// (lhs, rhs) of the tomographic stability inequality: H^{-1/2} norm of the
// image against the L2(T S^1) norm of its X-ray data over a dense set.
struct TomoCheck {
    double lhs = 0;
    double rhs = 0;
};
TomoCheck tomo_stability_check(const Image2D& img, int n_angles = 128, int n_offsets = 256);

}  // namespace wgt
