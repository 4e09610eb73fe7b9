#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wgt {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Row-major 2D array, index (i,j) with j fastest.
template <typename T>
class Array2D {
  public:
    Array2D() = default;
    Array2D(std::size_t n0, std::size_t n1, T fill = T{}) : n0_(n0), n1_(n1), data_(n0 * n1, fill) {}

    T& operator()(std::size_t i, std::size_t j) { return data_[i * n1_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n1_ + j]; }

    std::size_t rows() const { return n0_; }
    std::size_t cols() const { return n1_; }
    std::size_t size() const { return data_.size(); }
    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& storage() { return data_; }
    const std::vector<T>& storage() const { return data_; }

  private:
    std::size_t n0_ = 0, n1_ = 0;
    std::vector<T> data_;
};

// 3D array with x fastest: index(ix,iy,iz) = (iz*ny + iy)*nx + ix.
template <typename T>
class Array3D {
  public:
    Array3D() = default;
    Array3D(std::size_t nx, std::size_t ny, std::size_t nz, T fill = T{})
        : nx_(nx), ny_(ny), nz_(nz), data_(nx * ny * nz, fill) {}

    T& operator()(std::size_t ix, std::size_t iy, std::size_t iz) {
        return data_[(iz * ny_ + iy) * nx_ + ix];
    }
    const T& operator()(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return data_[(iz * ny_ + iy) * nx_ + ix];
    }

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t nz() const { return nz_; }
    std::size_t size() const { return data_.size(); }
    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

  private:
    std::size_t nx_ = 0, ny_ = 0, nz_ = 0;
    std::vector<T> data_;
};

inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = 0.5 * (a + b);
        return v;
    }
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = a + i * h;
    return v;
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >=2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return fit_slope(lx, ly);
}

}  // namespace wgt
