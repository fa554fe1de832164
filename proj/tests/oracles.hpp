// Independent reference implementations used only by tests. Everything here
// is written from the definitions, deliberately not sharing code with the
// library paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// k-th smallest distance from z to refs, optionally skipping one index.
inline double kth_radius(const Point& z, const std::vector<Point>& refs, std::size_t k,
                         std::ptrdiff_t exclude_index = -1) {
    std::vector<double> d;
    for (std::size_t i = 0; i < refs.size(); ++i)
        if (static_cast<std::ptrdiff_t>(i) != exclude_index) d.push_back(distance(z, refs[i]));
    std::sort(d.begin(), d.end());
    return d.at(k - 1);
}

struct Counts {
    std::size_t cx = 0, cy = 0;
};

/// Joint kNN ball membership counts (closed ball, self included in counts).
inline Counts ball_counts(const Point& z, const std::vector<Point>& xs, const std::vector<Point>& ys,
                          std::size_t k, std::ptrdiff_t self_x = -1, std::ptrdiff_t self_y = -1) {
    std::vector<double> all;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (static_cast<std::ptrdiff_t>(i) != self_x) all.push_back(distance(z, xs[i]));
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (static_cast<std::ptrdiff_t>(i) != self_y) all.push_back(distance(z, ys[i]));
    std::sort(all.begin(), all.end());
    const double radius = all.at(k - 1);
    Counts c;
    for (const auto& x : xs) c.cx += distance(z, x) <= radius;
    for (const auto& y : ys) c.cy += distance(z, y) <= radius;
    return c;
}

/// Standard normal CDF.
inline double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// alpha_lambda between two 1-D unit Gaussians N(0,1), N(mu,1) by quadrature
/// of min(lambda p, q) on a fine grid (trapezoid).
inline double shifted_gaussian_alpha_quadrature(double mu, double lambda, std::size_t cells = 400000) {
    if (lambda == 0.0) return 0.0;
    const double lo = -12.0, hi = 12.0 + mu;
    const double h = (hi - lo) / static_cast<double>(cells);
    auto p = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846); };
    auto integrand = [&](double z) { return std::min(lambda * p(z), p(z - mu)); };
    double area = 0.5 * (integrand(lo) + integrand(hi));
    for (std::size_t i = 1; i < cells; ++i) area += integrand(lo + h * static_cast<double>(i));
    return area * h;
}

/// Same value through the total-variation identity (lambda+1)/2 - TV(lambda P - Q).
inline double shifted_gaussian_alpha_tv_route(double mu, double lambda, std::size_t cells = 400000) {
    const double lo = -12.0, hi = 12.0 + mu;
    const double h = (hi - lo) / static_cast<double>(cells);
    auto p = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846); };
    auto integrand = [&](double z) { return std::abs(lambda * p(z) - p(z - mu)); };
    double l1 = 0.5 * (integrand(lo) + integrand(hi));
    for (std::size_t i = 1; i < cells; ++i) l1 += integrand(lo + h * static_cast<double>(i));
    l1 *= h;
    // tail mass of |lambda p - q| outside the window: both tails are pure
    // lambda*p or q mass beyond 12 sigma, negligible at double precision
    return 0.5 * (lambda + 1.0) - 0.5 * l1;
}

/// Closed form for the same quantity, a second cross-check.
inline double shifted_gaussian_alpha_closed_form(double mu, double lambda) {
    if (mu == 0.0) return std::min(lambda, 1.0);
    if (lambda == 0.0) return 0.0;
    const double zstar = std::log(lambda) / mu + 0.5 * mu;
    return lambda * (1.0 - phi(zstar)) + phi(zstar - mu);
}

/// Area of a down-closed region below a ray alpha = lambda*beta, by raster
/// integration of the envelope function on a dense beta grid.
inline double raster_area_below_ray(const std::function<double(double)>& env, double beta_max,
                                    double lambda, std::size_t cells = 1000000) {
    double area = 0.0;
    const double h = beta_max / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double b = (static_cast<double>(i) + 0.5) * h;
        area += std::min(env(b), lambda * b) * h;
    }
    return area;
}

inline double raster_area(const std::function<double(double)>& env, double beta_max,
                          std::size_t cells = 1000000) {
    double area = 0.0;
    const double h = beta_max / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i)
        area += env((static_cast<double>(i) + 0.5) * h) * h;
    return area;
}

}  // namespace oracle
