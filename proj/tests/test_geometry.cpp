#include "doctest.h"
#include "wgt/geometry.hpp"

#include <cmath>

using namespace wgt;

TEST_CASE("diameters are exact") {
    CHECK(CrossSection::make_rectangle(1, 1).diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(CrossSection::make_rectangle(0.3, 0.4).diameter() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(CrossSection::make_disk(0.5).diameter() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("epsilon rule on the unit rectangle at T=2") {
    const auto cs = CrossSection::make_rectangle(1, 1);
    const double eps = admissible_epsilon(cs, 2.0);
    // 0.5*min(1, (2-sqrt(2))/3), checked by hand
    CHECK(eps == doctest::Approx(0.09763107293781749).epsilon(1e-12));
}

TEST_CASE("disk at T=2 is accepted") {
    const auto cs = CrossSection::make_disk(0.5);
    CHECK(cs.diameter() == doctest::Approx(1.0));
    CHECK_NOTHROW(admissible_epsilon(cs, 2.0));
}

TEST_CASE("T at or below the diameter is rejected") {
    const auto cs = CrossSection::make_rectangle(1, 1);
    CHECK_THROWS_AS(build_grid(cs, 12, 12, 16, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(cs, 12, 12, 16, std::sqrt(2.0), 0.5), std::invalid_argument);
}

TEST_CASE("grid invariants: CFL, caps, normals") {
    const auto cs = CrossSection::make_rectangle(1, 1);
    const auto g = build_grid(cs, 16, 16, 32, 2.0, 0.5);
    CHECK(g.cfl_number() <= 1.0);
    CHECK(g.dt <= 0.9 * g.h_min() / std::sqrt(3.0) + 1e-15);
    CHECK(g.X_cap == doctest::Approx(0.5 + 2.0 + 2.0));
    CHECK(g.t_of(g.nt - 1) == doctest::Approx(g.T).epsilon(1e-14));
    // every boundary normal has unit length and zero axial component by type
    for (const auto& b : g.boundary) CHECK(b.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    // perimeter quadrature mass
    double per = 0;
    for (const auto& b : g.boundary) per += b.arc_weight;
    CHECK(per == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("boundary list is in perimeter order") {
    const auto g = build_grid(CrossSection::make_rectangle(1, 1), 8, 8, 16, 2.0, 0.5);
    const int nb = static_cast<int>(g.n_boundary());
    CHECK(nb == 2 * (8 + 8) - 4);
    for (int b = 0; b < nb; ++b) {
        const auto& a = g.boundary[b];
        const auto& c = g.boundary[(b + 1) % nb];
        const int step = std::abs(a.ix - c.ix) + std::abs(a.iy - c.iy);
        CHECK(step == 1);
    }
}

TEST_CASE("multiplier: disk field is radial with divergence 2/a") {
    const auto cs = CrossSection::make_disk(0.4);
    MultiplierField m;
    m.section = cs;
    const Vec2 p{0.2, -0.1};
    const Vec2 gmm = m.gamma_at(p);
    CHECK(gmm.x == doctest::Approx(p.x / 0.4).epsilon(1e-15));
    CHECK(gmm.y == doctest::Approx(p.y / 0.4).epsilon(1e-15));
}

TEST_CASE("multiplier on the rectangle") {
    const auto cs = CrossSection::make_rectangle(1, 1);
    const auto g = build_grid(cs, 17, 17, 16, 2.0, 0.5);
    const auto m = build_multiplier(cs, g);

    SUBCASE("face centers carry the exact face normal") {
        // x+ face center: node (nx-1, ny/2) at (0.5, 0)
        const int cx = g.nx - 1, cy = (g.ny - 1) / 2;
        CHECK(m.gx(cx, cy) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.gy(cx, cy) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("<gamma, nu> = 1 at every non-corner boundary node") {
        for (const auto& b : g.boundary) {
            if (b.kind == NodeKind::corner) continue;
            const double dot = m.gx(b.ix, b.iy) * b.normal.x + m.gy(b.ix, b.iy) * b.normal.y;
            CHECK(dot == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    SUBCASE("Jacobian and divergence from centered differences match the linear field") {
        for (int ix = 2; ix < g.nx - 2; ++ix)
            for (int iy = 2; iy < g.ny - 2; ++iy) {
                CHECK(m.hxx(ix, iy) == doctest::Approx(2.0).epsilon(1e-12));
                CHECK(m.hyy(ix, iy) == doctest::Approx(2.0).epsilon(1e-12));
                CHECK(m.hxy(ix, iy) == doctest::Approx(0.0).epsilon(1e-12));
                CHECK(m.div_gamma(ix, iy) == doctest::Approx(4.0).epsilon(1e-12));
            }
    }
}
