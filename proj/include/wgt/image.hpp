#pragma once

#include "wgt/array.hpp"

namespace wgt {

// Uniform 2D field: value(i,j) lives at origin + (i*h, j*h).
struct Image2D {
    Array2D<double> data;
    double h = 1.0;
    Vec2 origin{0, 0};

    Image2D() = default;
    Image2D(int n0, int n1, double h_, Vec2 o) : data(n0, n1), h(h_), origin(o) {}

    static Image2D centered_square(int n, double half_extent) {
        const double h = 2.0 * half_extent / (n - 1);
        return Image2D(n, n, h, {-half_extent, -half_extent});
    }

    int n0() const { return static_cast<int>(data.rows()); }
    int n1() const { return static_cast<int>(data.cols()); }
    Vec2 point(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }

    // Bilinear interpolation, zero outside the grid.
    double sample(Vec2 p) const {
        const double fx = (p.x - origin.x) / h;
        const double fy = (p.y - origin.y) / h;
        const int i = static_cast<int>(std::floor(fx));
        const int j = static_cast<int>(std::floor(fy));
        if (i < 0 || j < 0 || i + 1 >= n0() || j + 1 >= n1()) return 0.0;
        const double ax = fx - i, ay = fy - j;
        return (1 - ax) * (1 - ay) * data(i, j) + ax * (1 - ay) * data(i + 1, j) +
               (1 - ax) * ay * data(i, j + 1) + ax * ay * data(i + 1, j + 1);
    }

    double l2_norm() const {
        double s = 0;
        for (const double v : data.storage()) s += v * v;
        return std::sqrt(s * h * h);
    }

    double linf_norm() const {
        double m = 0;
        for (const double v : data.storage()) m = std::max(m, std::abs(v));
        return m;
    }
};

}  // namespace wgt
