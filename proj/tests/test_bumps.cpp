#include "doctest.h"
#include "wgt/array.hpp"
#include "wgt/bumps.hpp"

#include <cmath>

using namespace wgt;

namespace {

// central finite difference oracle for the analytic derivatives
template <typename F>
double fd1(F f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("bump normalizations") {
    const auto& bp = standard_bumps();
    // re-integrate on an unrelated grid
    const int n = 3000;
    double ih = 0;
    for (int i = 0; i <= n; ++i) {
        const double u = -1 + 2.0 * i / n;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        ih += w * bp.h(u) * bp.h(u);
    }
    ih *= 2.0 / n;
    CHECK(ih == doctest::Approx(1.0).epsilon(1e-8));

    double ip = 0;
    const int m = 700;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            const double x = -1 + 2.0 * i / m, y = -1 + 2.0 * j / m;
            const double w = ((i == 0 || i == m) ? 0.5 : 1.0) * ((j == 0 || j == m) ? 0.5 : 1.0);
            ip += w * bp.phi({x, y}) * bp.phi({x, y});
        }
    ip *= (2.0 / m) * (2.0 / m);
    CHECK(ip == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("scaled bumps stay L2-normalized") {
    const auto& bp = standard_bumps();
    for (const double delta : {0.05, 0.13, 0.5}) {
        const int n = 4000;
        double s = 0;
        for (int i = 0; i <= n; ++i) {
            const double x = -delta + 2 * delta * i / n;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            const double v = bp.h_scaled(x, 0.0, delta);
            s += w * v * v;
        }
        s *= 2 * delta / n;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("analytic derivatives match finite differences") {
    const auto& bp = standard_bumps();
    for (const double u : {0.0, 0.25, -0.45, 0.7, 0.85}) {
        CHECK(bp.h_d1(u) == doctest::Approx(fd1([&](double x) { return bp.h(x); }, u)).epsilon(1e-5));
        CHECK(bp.h_d2(u) ==
              doctest::Approx(fd1([&](double x) { return bp.h_d1(x); }, u)).epsilon(1e-5));
    }
    for (const Vec2 u : {Vec2{0.1, 0.2}, Vec2{-0.4, 0.3}, Vec2{0.5, -0.5}, Vec2{0.0, 0.0}}) {
        const auto g = bp.phi_grad(u);
        CHECK(g.x ==
              doctest::Approx(fd1([&](double x) { return bp.phi({x, u.y}); }, u.x)).epsilon(1e-5));
        CHECK(g.y ==
              doctest::Approx(fd1([&](double y) { return bp.phi({u.x, y}); }, u.y)).epsilon(1e-5));
        const auto H = bp.phi_hess(u);
        CHECK(H[0] ==
              doctest::Approx(fd1([&](double x) { return bp.phi_grad({x, u.y}).x; }, u.x))
                  .epsilon(1e-5));
        CHECK(H[1] ==
              doctest::Approx(fd1([&](double y) { return bp.phi_grad({u.x, y}).x; }, u.y))
                  .epsilon(1e-5));
        CHECK(H[2] ==
              doctest::Approx(fd1([&](double y) { return bp.phi_grad({u.x, y}).y; }, u.y))
                  .epsilon(1e-5));
        const auto d3 = bp.phi_third(u);
        CHECK(d3[0] ==
              doctest::Approx(fd1([&](double x) { return bp.phi_hess({x, u.y})[0]; }, u.x))
                  .epsilon(2e-4));
        CHECK(d3[1] ==
              doctest::Approx(fd1([&](double y) { return bp.phi_hess({u.x, y})[0]; }, u.y))
                  .epsilon(2e-4));
        CHECK(d3[3] ==
              doctest::Approx(fd1([&](double y) { return bp.phi_hess({u.x, y})[2]; }, u.y))
                  .epsilon(2e-4));
    }
}

TEST_CASE("Sobolev growth of the scaled bumps") {
    const auto& bp = standard_bumps();
    const double dstar = 0.125;
    std::vector<double> deltas{dstar / 2, dstar / 4, dstar / 8};
    std::vector<double> h2(3), p3(3);
    for (int i = 0; i < 3; ++i) {
        h2[i] = std::pow(bp.h_H2_scaled(deltas[i]), 2);
        p3[i] = std::pow(bp.phi_H3_scaled(deltas[i]), 2);
    }
    // fitted exponents of the squared norms: -4 and -6
    CHECK(loglog_slope(deltas, h2) == doctest::Approx(-4.0).epsilon(0.025));
    CHECK(loglog_slope(deltas, p3) == doctest::Approx(-6.0).epsilon(0.017));
}
