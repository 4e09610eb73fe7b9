#pragma once

#include <complex>
#include <vector>

#include "wgt/image.hpp"

namespace wgt {

// Fractional Sobolev norm (sum_xi (1+|xi|^2)^s |g_hat|^2)^(1/2) of a compactly
// supported field, via the zero-padded DFT with physical frequency scaling.
// Rejects inputs whose support touches the grid edge (the caller must pad).
double frac_sobolev_norm(const Image2D& g, double s);

// 1D analogue on a uniform grid of spacing h. Values are zero-extended to at
// least twice the input length before the transform.
double frac_sobolev_norm_1d(const std::vector<double>& re, const std::vector<double>& im,
                            double h, double s);

// Periodic variant (used along the closed boundary curve): no padding,
// frequencies 2*pi*k/(n*h).
double frac_sobolev_norm_1d_periodic(const std::vector<double>& re, const std::vector<double>& im,
                                     double h, double s);

// Unnormalized in-place complex FFT helpers (size need not be a power of two).
void fft(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace wgt
