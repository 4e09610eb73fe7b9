#include "wgt/bumps.hpp"

#include <cmath>

namespace wgt {

namespace {

// Below this w = 1 - |u|^2 the bump value is under 1e-300; returning 0 avoids
// overflow in the rational prefactors.
constexpr double kEdge = 1e-3;

double base(double w) { return w <= kEdge ? 0.0 : std::exp(-1.0 / w); }

// Simpson-free trapezoid: the integrands are smooth with all derivatives
// vanishing at the support edge, so the trapezoid rule converges beyond any
// algebraic order.
template <typename F>
double integrate_1d(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

template <typename F>
double integrate_2d(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
        double row = 0;
        for (int j = 0; j <= n; ++j) {
            const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
            row += wj * f(a + i * h, a + j * h);
        }
        s += wi * row;
    }
    return s * h * h;
}

}  // namespace

BumpPair::BumpPair() {
    const int n1 = 4000, n2 = 800;
    const double i_h2 = integrate_1d([](double u) {
        const double w = 1 - u * u;
        const double f = base(w);
        return f * f;
    }, -1.0, 1.0, n1);
    ch_ = 1.0 / std::sqrt(i_h2);

    const double i_phi2 = integrate_2d([](double x, double y) {
        const double w = 1 - x * x - y * y;
        const double f = base(w);
        return f * f;
    }, -1.0, 1.0, n2);
    cphi_ = 1.0 / std::sqrt(i_phi2);

    sh_[0] = 1.0;
    sh_[1] = integrate_1d([this](double u) { const double d = h_d1(u); return d * d; }, -1, 1, n1);
    sh_[2] = integrate_1d([this](double u) { const double d = h_d2(u); return d * d; }, -1, 1, n1);

    sphi_[0] = 1.0;
    sphi_[1] = integrate_2d([this](double x, double y) {
        const Vec2 g = phi_grad({x, y});
        return g.x * g.x + g.y * g.y;
    }, -1, 1, n2);
    sphi_[2] = integrate_2d([this](double x, double y) {
        const auto H = phi_hess({x, y});
        return H[0] * H[0] + 2 * H[1] * H[1] + H[2] * H[2];
    }, -1, 1, n2);
    sphi_[3] = integrate_2d([this](double x, double y) {
        const auto d3 = phi_third({x, y});
        return d3[0] * d3[0] + 3 * d3[1] * d3[1] + 3 * d3[2] * d3[2] + d3[3] * d3[3];
    }, -1, 1, n2);
}

double BumpPair::h(double u) const { return ch_ * base(1 - u * u); }

double BumpPair::h_d1(double u) const {
    const double w = 1 - u * u;
    if (w <= kEdge) return 0;
    const double g1 = -2 * u / (w * w);
    return ch_ * base(w) * g1;
}

double BumpPair::h_d2(double u) const {
    const double w = 1 - u * u;
    if (w <= kEdge) return 0;
    const double g1 = -2 * u / (w * w);
    const double g2 = -2 / (w * w) - 8 * u * u / (w * w * w);
    return ch_ * base(w) * (g1 * g1 + g2);
}

double BumpPair::phi(Vec2 u) const { return cphi_ * base(1 - u.dot(u)); }

Vec2 BumpPair::phi_grad(Vec2 u) const {
    const double w = 1 - u.dot(u);
    if (w <= kEdge) return {0, 0};
    const double f = cphi_ * base(w);
    const double c = -2 / (w * w);
    return {f * c * u.x, f * c * u.y};
}

std::array<double, 3> BumpPair::phi_hess(Vec2 u) const {
    const double w = 1 - u.dot(u);
    if (w <= kEdge) return {0, 0, 0};
    const double f = cphi_ * base(w);
    const double w2 = w * w, w3 = w2 * w;
    const double gx = -2 * u.x / w2, gy = -2 * u.y / w2;
    const double gxx = -2 / w2 - 8 * u.x * u.x / w3;
    const double gyy = -2 / w2 - 8 * u.y * u.y / w3;
    const double gxy = -8 * u.x * u.y / w3;
    return {f * (gx * gx + gxx), f * (gx * gy + gxy), f * (gy * gy + gyy)};
}

std::array<double, 4> BumpPair::phi_third(Vec2 u) const {
    const double w = 1 - u.dot(u);
    if (w <= kEdge) return {0, 0, 0, 0};
    const double f = cphi_ * base(w);
    const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;
    const double x = u.x, y = u.y;
    const double gx = -2 * x / w2, gy = -2 * y / w2;
    const double gxx = -2 / w2 - 8 * x * x / w3;
    const double gyy = -2 / w2 - 8 * y * y / w3;
    const double gxy = -8 * x * y / w3;
    // d_ijk g = -8 d_ij u_k / w^3 - 8(d_ik u_j + d_jk u_i)/w^3 - 48 u_i u_j u_k / w^4
    const double gxxx = -24 * x / w3 - 48 * x * x * x / w4;
    const double gxxy = -8 * y / w3 - 48 * x * x * y / w4;
    const double gxyy = -8 * x / w3 - 48 * x * y * y / w4;
    const double gyyy = -24 * y / w3 - 48 * y * y * y / w4;
    const double dxxx = f * (gx * gx * gx + 3 * gxx * gx + gxxx);
    const double dxxy = f * (gx * gx * gy + gxx * gy + 2 * gxy * gx + gxxy);
    const double dxyy = f * (gx * gy * gy + gyy * gx + 2 * gxy * gy + gxyy);
    const double dyyy = f * (gy * gy * gy + 3 * gyy * gy + gyyy);
    return {dxxx, dxxy, dxyy, dyyy};
}

double BumpPair::phi_dir2(Vec2 u, Vec2 d) const {
    const auto H = phi_hess(u);
    return H[0] * d.x * d.x + 2 * H[1] * d.x * d.y + H[2] * d.y * d.y;
}

double BumpPair::h_H2_scaled(double delta) const {
    const double d2 = delta * delta;
    return std::sqrt(sh_[0] + sh_[1] / d2 + sh_[2] / (d2 * d2));
}

double BumpPair::phi_H3_scaled(double delta) const {
    const double d2 = delta * delta;
    return std::sqrt(sphi_[0] + sphi_[1] / d2 + sphi_[2] / (d2 * d2) + sphi_[3] / (d2 * d2 * d2));
}

const BumpPair& standard_bumps() {
    static const BumpPair bp;
    return bp;
}

}  // namespace wgt
