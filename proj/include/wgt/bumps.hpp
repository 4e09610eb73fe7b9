#pragma once

#include <array>
#include <cmath>

#include "wgt/array.hpp"

namespace wgt {

// The standard smooth bumps c*exp(-1/(1-|u|^2)), L^2-normalized, with all
// derivatives available in closed form. phi lives on the unit disk of R^2,
// h on [-1,1]. Scaled copies follow
//   Phi_delta(x', y') = delta^-1   * phi((x'-y')/delta)
//   h_delta(x3, y3)   = delta^-1/2 * h((x3-y3)/delta)
// so that the L^2 norms stay 1 for every delta.
class BumpPair {
  public:
    BumpPair();

    // 1D bump and derivatives up to order 2 (order 3 used by tests).
    double h(double u) const;
    double h_d1(double u) const;
    double h_d2(double u) const;

    // 2D bump, gradient, Hessian, selected third derivatives.
    double phi(Vec2 u) const;
    Vec2 phi_grad(Vec2 u) const;
    std::array<double, 3> phi_hess(Vec2 u) const;   // {dxx, dxy, dyy}
    std::array<double, 4> phi_third(Vec2 u) const;  // {dxxx, dxxy, dxyy, dyyy}
    // Second derivative along the unit direction d: d^T Hess(phi) d.
    double phi_dir2(Vec2 u, Vec2 d) const;

    // Scaled evaluations.
    double h_scaled(double x3, double y3, double delta) const {
        return h((x3 - y3) / delta) / std::sqrt(delta);
    }
    double h_scaled_d2(double x3, double y3, double delta) const {
        return h_d2((x3 - y3) / delta) / (delta * delta * std::sqrt(delta));
    }
    double phi_scaled(Vec2 x, Vec2 y, double delta) const {
        return phi({(x.x - y.x) / delta, (x.y - y.y) / delta}) / delta;
    }
    double phi_scaled_dir2(Vec2 x, Vec2 y, double delta, Vec2 d) const {
        return phi_dir2({(x.x - y.x) / delta, (x.y - y.y) / delta}, d) / (delta * delta * delta);
    }

    // Squared Sobolev seminorms of the unscaled bumps: S_h[k] = ||h^(k)||^2,
    // S_phi[k] = sum_{|a|=k} binom(k,a) ||d^a phi||^2 (integer-order Sobolev sums).
    // Under scaling, ||d^k h_delta||^2 = delta^-2k S_h[k] and
    // ||phi_delta||^2_{k-seminorm} = delta^-2k S_phi[k].
    double h_seminorm2(int k) const { return sh_[k]; }
    double phi_seminorm2(int k) const { return sphi_[k]; }

    double h_H2_scaled(double delta) const;   // ||h_delta||_{H^2(R)}
    double phi_H3_scaled(double delta) const; // ||Phi_delta||_{H^3(R^2)}

    double normalization_h() const { return ch_; }
    double normalization_phi() const { return cphi_; }

  private:
    double ch_ = 0, cphi_ = 0;
    std::array<double, 3> sh_{};    // orders 0..2
    std::array<double, 4> sphi_{};  // orders 0..3
};

const BumpPair& standard_bumps();

}  // namespace wgt
