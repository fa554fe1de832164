#pragma once

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "prdkit/pr_curve.hpp"
#include "prdkit/pr_estimator.hpp"

namespace prdkit {

/// Down-closed frontier region under a curve's polyline, traversed in
/// trade-off order. Breakpoints are non-decreasing in beta; consecutive
/// entries sharing a beta encode an explicit vertical edge (zero width, no
/// area), so degenerate curves that collapse to the axes keep zero area
/// instead of being bridged. Evaluation is 0 beyond the beta extent.
struct Envelope {
    std::vector<double> beta;   // non-decreasing, beta.front() == 0
    std::vector<double> alpha;

    double beta_max() const { return beta.back(); }
    double alpha_max() const { return alpha.front(); }

    double operator()(double b) const {
        if (b <= beta.front()) return alpha.front();
        if (b > beta.back()) return 0.0;
        const auto it = std::lower_bound(beta.begin(), beta.end(), b);
        const std::size_t idx = static_cast<std::size_t>(it - beta.begin());
        if (beta[idx] == b) return alpha[idx];  // runs store the upper flank first
        const std::size_t prev = idx - 1;
        const double t = (b - beta[prev]) / (beta[idx] - beta[prev]);
        return alpha[prev] + t * (alpha[idx] - alpha[prev]);
    }
};

namespace detail {

/// Builds the envelope from a chain of (beta, alpha) pairs expected in
/// non-decreasing beta order (a monotone curve walked from lambda = inf down
/// to 0). Inputs violating monotonicity are sorted first. Equal-beta runs
/// keep their extreme alphas as a vertical edge.
inline Envelope envelope_from_chain(std::vector<std::pair<double, double>> pts) {
    if (pts.empty()) throw std::invalid_argument("build_envelope: empty curve");
    bool monotone = true;
    for (std::size_t i = 1; i < pts.size() && monotone; ++i)
        monotone = pts[i].first >= pts[i - 1].first;
    if (!monotone)
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first < b.first : a.second > b.second;
        });
    Envelope env;
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        double lo = pts[i].second, hi = pts[i].second;
        while (j + 1 < pts.size() && pts[j + 1].first == pts[i].first) {
            ++j;
            lo = std::min(lo, pts[j].second);
            hi = std::max(hi, pts[j].second);
        }
        env.beta.push_back(pts[i].first);
        env.alpha.push_back(hi);
        if (j > i) {
            env.beta.push_back(pts[i].first);
            env.alpha.push_back(lo);
        }
        i = j + 1;
    }
    if (env.beta.front() > 0.0) {
        env.beta.insert(env.beta.begin(), 0.0);
        env.alpha.insert(env.alpha.begin(), env.alpha.front());
    }
    return env;
}

}  // namespace detail

/// Envelope of a curve: the polyline through its points in decreasing-lambda
/// order, closed to the axes by a horizontal extension at alpha_max and the
/// final vertical drop. Dominated points on a monotone curve never rise above
/// this polyline, so cleaning beforehand changes nothing on normal curves.
inline Envelope build_envelope(const PRCurve& curve) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curve.points.size());
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it)
        pts.emplace_back(it->beta, it->alpha);
    return detail::envelope_from_chain(std::move(pts));
}

/// Exact trapezoid area of the down-closed region.
inline double auc(const Envelope& env) {
    double area = 0.0;
    for (std::size_t i = 1; i < env.beta.size(); ++i)
        area += (env.beta[i] - env.beta[i - 1]) * (env.alpha[i] + env.alpha[i - 1]) * 0.5;
    return area;
}

/// F_b = max over curve points of (b^2+1) / (b^2/alpha + 1/beta); points with
/// a zero coordinate contribute 0.
inline double f_score(const PRCurve& curve, double b) {
    if (!(b > 0.0)) throw std::invalid_argument("f_score: b must be > 0");
    double best = 0.0;
    const double b2 = b * b;
    for (const auto& p : curve.points) {
        if (p.alpha <= 0.0 || p.beta <= 0.0) continue;
        best = std::max(best, (b2 + 1.0) / (b2 / p.alpha + 1.0 / p.beta));
    }
    return best;
}

struct MedianPoint {
    double lambda = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
};

namespace detail {

/// Area of the region part lying below the ray alpha = lambda * beta,
/// integrated segment-exactly.
inline double area_below_ray(const Envelope& env, double lambda) {
    double area = 0.0;
    for (std::size_t i = 1; i < env.beta.size(); ++i) {
        const double b0 = env.beta[i - 1], b1 = env.beta[i];
        if (b1 == b0) continue;
        const double a0 = env.alpha[i - 1], a1 = env.alpha[i];
        const double g0 = a0 - lambda * b0, g1 = a1 - lambda * b1;
        auto ray_part = [lambda](double lo, double hi) {
            return 0.5 * lambda * (hi * hi - lo * lo);
        };
        auto env_part = [](double lo, double hi, double alo, double ahi) {
            return 0.5 * (hi - lo) * (alo + ahi);
        };
        if (g0 >= 0.0 && g1 >= 0.0) {
            area += ray_part(b0, b1);
        } else if (g0 <= 0.0 && g1 <= 0.0) {
            area += env_part(b0, b1, a0, a1);
        } else {
            const double t = g0 / (g0 - g1);  // crossing parameter in (0,1)
            const double bc = b0 + t * (b1 - b0);
            const double ac = a0 + t * (a1 - a0);
            if (g0 > 0.0) {
                area += ray_part(b0, bc) + env_part(bc, b1, ac, a1);
            } else {
                area += env_part(b0, bc, a0, ac) + ray_part(bc, b1);
            }
        }
    }
    return area;
}

}  // namespace detail

/// Equal-area ray point: lambda_bar such that the region below the line
/// alpha = lambda_bar * beta holds half the area, located by bisection on the
/// ray angle to 1e-6 area tolerance; returns the frontier point on the ray.
inline MedianPoint pr_median(const Envelope& env) {
    const double total = auc(env);
    if (!(total > 0.0)) throw UndefinedMedianError("pr_median: region has zero area");
    constexpr double pi = 3.14159265358979323846;
    double lo = 1e-12, hi = pi / 2.0 - 1e-12;
    double lambda = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double theta = 0.5 * (lo + hi);
        lambda = std::tan(theta);
        const double below = detail::area_below_ray(env, lambda);
        if (std::abs(below - 0.5 * total) <= 1e-6) break;
        if (below < 0.5 * total)
            lo = theta;
        else
            hi = theta;
    }
    MedianPoint m;
    m.lambda = lambda;
    // frontier point on the ray: walk the polyline, verticals included
    for (std::size_t i = 1; i < env.beta.size(); ++i) {
        const double g0 = env.alpha[i - 1] - lambda * env.beta[i - 1];
        const double g1 = env.alpha[i] - lambda * env.beta[i];
        if (g0 >= 0.0 && g1 <= 0.0) {
            const double t = (g0 - g1) > 0.0 ? g0 / (g0 - g1) : 0.0;
            m.beta = env.beta[i - 1] + t * (env.beta[i] - env.beta[i - 1]);
            m.alpha = env.alpha[i - 1] + t * (env.alpha[i] - env.alpha[i - 1]);
            return m;
        }
    }
    m.beta = env.beta_max();
    m.alpha = lambda * m.beta;
    return m;
}

/// Envelope height at fixed recall.
inline double pr_at_eps(const Envelope& env, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("pr_at_eps: eps must lie in (0,1)");
    return env(eps);
}

/// Intersection over union of two down-closed regions via pointwise min/max
/// of the envelope functions on the merged breakpoint grid refined to 1e-4
/// beta spacing.
inline double iou(const Envelope& a, const Envelope& b) {
    const double span = std::max(a.beta_max(), b.beta_max());
    std::vector<double> grid;
    grid.insert(grid.end(), a.beta.begin(), a.beta.end());
    grid.insert(grid.end(), b.beta.begin(), b.beta.end());
    const std::size_t steps = 10000;
    for (std::size_t i = 0; i <= steps; ++i)
        grid.push_back(span * static_cast<double>(i) / static_cast<double>(steps));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double inter = 0.0, uni = 0.0;
    double prev_b = grid.front();
    double prev_min = std::min(a(prev_b), b(prev_b));
    double prev_max = std::max(a(prev_b), b(prev_b));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double bb = grid[i];
        const double cur_min = std::min(a(bb), b(bb));
        const double cur_max = std::max(a(bb), b(bb));
        inter += 0.5 * (bb - prev_b) * (prev_min + cur_min);
        uni += 0.5 * (bb - prev_b) * (prev_max + cur_max);
        prev_b = bb;
        prev_min = cur_min;
        prev_max = cur_max;
    }
    if (!(uni > 0.0)) throw UndefinedIouError("iou: both regions have zero area");
    return inter / uni;
}

struct SummaryReport {
    double auc = 0.0;
    double f8 = 0.0;
    double f1_8 = 0.0;
    MedianPoint median;
    double alpha_at_eps = 0.0;
    double beta_at_eps = 0.0;
    double alpha_inf = 0.0;
    double beta_0 = 0.0;
};

/// Scalar digests of one curve; eps and b follow the library defaults 0.05
/// and 8. The median of a zero-area region is reported as the origin ray
/// point (lambda=1, 0, 0).
inline SummaryReport summarize(const PRCurve& curve, double eps = 0.05, double b = 8.0) {
    if (curve.points.empty()) throw std::invalid_argument("summarize: empty curve");
    const Envelope env = build_envelope(curve);
    SummaryReport r;
    r.auc = auc(env);
    r.f8 = f_score(curve, b);
    r.f1_8 = f_score(curve, 1.0 / b);
    if (r.auc > 0.0) r.median = pr_median(env);
    r.alpha_at_eps = pr_at_eps(env, eps);
    std::vector<std::pair<double, double>> swapped;
    for (const auto& p : curve.points) swapped.emplace_back(p.alpha, p.beta);
    r.beta_at_eps = pr_at_eps(detail::envelope_from_chain(std::move(swapped)), eps);
    r.alpha_inf = curve.points.back().alpha;
    r.beta_0 = curve.points.front().beta;
    return r;
}

inline nlohmann::json summary_to_json(const SummaryReport& r) {
    nlohmann::json j;
    j["auc"] = r.auc;
    j["f8"] = r.f8;
    j["f1_8"] = r.f1_8;
    j["pr_median"] = {{"lambda", r.median.lambda}, {"alpha", r.median.alpha}, {"beta", r.median.beta}};
    j["alpha_at_eps"] = r.alpha_at_eps;
    j["beta_at_eps"] = r.beta_at_eps;
    j["alpha_inf"] = r.alpha_inf;
    j["beta_0"] = r.beta_0;
    return j;
}

}  // namespace prdkit
