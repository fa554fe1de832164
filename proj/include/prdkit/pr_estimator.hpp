#pragma once

#include <algorithm>
#include <cmath>

#include "prdkit/classifier_scores.hpp"
#include "prdkit/pr_curve.hpp"

namespace prdkit {

/// Sorted distinct score values with cumulative test counts at score <= t
/// (loose) and score < t (strict), per origin class.
struct SweepTable {
    std::vector<double> values;
    std::vector<std::size_t> x_le, x_lt, y_le, y_lt;
    std::vector<double> sorted_x, sorted_y;
    std::size_t n_x = 0, n_y = 0;
};

inline SweepTable build_sweep_table(const ScoredTestSet& scores) {
    SweepTable t;
    t.sorted_x = scores.x_scores;
    t.sorted_y = scores.y_scores;
    std::sort(t.sorted_x.begin(), t.sorted_x.end());
    std::sort(t.sorted_y.begin(), t.sorted_y.end());
    t.n_x = t.sorted_x.size();
    t.n_y = t.sorted_y.size();
    t.values.reserve(t.n_x + t.n_y);
    std::merge(t.sorted_x.begin(), t.sorted_x.end(), t.sorted_y.begin(), t.sorted_y.end(),
               std::back_inserter(t.values));
    t.values.erase(std::unique(t.values.begin(), t.values.end()), t.values.end());
    t.x_le.reserve(t.values.size());
    for (double v : t.values) {
        t.x_le.push_back(static_cast<std::size_t>(
            std::upper_bound(t.sorted_x.begin(), t.sorted_x.end(), v) - t.sorted_x.begin()));
        t.x_lt.push_back(static_cast<std::size_t>(
            std::lower_bound(t.sorted_x.begin(), t.sorted_x.end(), v) - t.sorted_x.begin()));
        t.y_le.push_back(static_cast<std::size_t>(
            std::upper_bound(t.sorted_y.begin(), t.sorted_y.end(), v) - t.sorted_y.begin()));
        t.y_lt.push_back(static_cast<std::size_t>(
            std::lower_bound(t.sorted_y.begin(), t.sorted_y.end(), v) - t.sorted_y.begin()));
    }
    return t;
}

/// Empirical-risk-minimization sweep over the threshold family. For each
/// finite lambda the risk lambda*fpr + fnr is minimized over loose and strict
/// thresholds at every distinct score value; the trivial classifiers f=0 and
/// f=1 are always candidates, so alpha <= min(1, lambda) by construction.
/// The sentinels evaluate the family's endpoint classifiers directly:
/// lambda=+inf reports fnr of 1{s < inf} (the gamma=inf member, whose errors
/// reproduce the published extreme metrics) and lambda=0 reports the
/// mirrored fpr of 1{s = 0}.
inline PRCurve estimate_curve(const ScoredTestSet& scores, const LambdaGrid& grid) {
    if (scores.x_scores.empty() || scores.y_scores.empty())
        throw std::invalid_argument("estimate_curve: both test origins must be non-empty");
    validate(grid);
    const SweepTable table = build_sweep_table(scores);
    const double nx = static_cast<double>(table.n_x);
    const double ny = static_cast<double>(table.n_y);
    const double inf = std::numeric_limits<double>::infinity();

    PRCurve curve;
    curve.points.reserve(grid.size());
    for (double lambda : grid.values) {
        PRPoint p;
        p.lambda = lambda;
        if (lambda == 0.0) {
            const std::size_t x_at_zero = static_cast<std::size_t>(
                std::upper_bound(table.sorted_x.begin(), table.sorted_x.end(), 0.0) -
                table.sorted_x.begin());
            p.alpha = 0.0;
            p.beta = static_cast<double>(table.n_x - x_at_zero) / nx;
        } else if (std::isinf(lambda)) {
            const std::size_t y_finite = static_cast<std::size_t>(
                std::lower_bound(table.sorted_y.begin(), table.sorted_y.end(), inf) -
                table.sorted_y.begin());
            p.alpha = static_cast<double>(y_finite) / ny;
            p.beta = 0.0;
        } else {
            double best = std::min(lambda, 1.0);  // trivial classifiers f=0, f=1
            for (std::size_t i = 0; i < table.values.size(); ++i) {
                const double loose =
                    lambda * static_cast<double>(table.n_x - table.x_le[i]) / nx +
                    static_cast<double>(table.y_le[i]) / ny;
                const double strict =
                    lambda * static_cast<double>(table.n_x - table.x_lt[i]) / nx +
                    static_cast<double>(table.y_lt[i]) / ny;
                best = std::min(best, std::min(loose, strict));
            }
            p.alpha = std::clamp(best, 0.0, 1.0);
            p.beta = p.alpha / lambda;
        }
        curve.points.push_back(p);
    }
    return curve;
}

/// Risk of the trade-off-matched threshold gamma = lambda (loose), used by
/// consistency spot checks.
inline double risk_at_gamma(const ScoredTestSet& scores, double lambda, double gamma) {
    const SweepTable table = build_sweep_table(scores);
    const std::size_t x_le = static_cast<std::size_t>(
        std::upper_bound(table.sorted_x.begin(), table.sorted_x.end(), gamma) - table.sorted_x.begin());
    const std::size_t y_le = static_cast<std::size_t>(
        std::upper_bound(table.sorted_y.begin(), table.sorted_y.end(), gamma) - table.sorted_y.begin());
    return lambda * static_cast<double>(table.n_x - x_le) / static_cast<double>(table.n_x) +
           static_cast<double>(y_le) / static_cast<double>(table.n_y);
}

/// Removes points dominated in (beta, alpha); lambda labels survive.
inline PRCurve pareto_clean(const PRCurve& curve) {
    PRCurve out;
    out.meta = curve.meta;
    const auto& pts = curve.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
            if (j == i) continue;
            const bool ge = pts[j].beta >= pts[i].beta && pts[j].alpha >= pts[i].alpha;
            const bool gt = pts[j].beta > pts[i].beta || pts[j].alpha > pts[i].alpha;
            dominated = ge && gt;
        }
        if (!dominated) out.points.push_back(pts[i]);
    }
    return out;
}

struct CurveEnsemble {
    std::vector<PRCurve> repetitions;
};

struct AggregateCurves {
    PRCurve mean, plus_sigma, minus_sigma;
    std::vector<double> sigma_alpha, sigma_beta;  // unclipped per-lambda deviations
};

/// Per-lambda arithmetic mean and population (1/R) standard deviation; the
/// +/- sigma bands are clipped to [0,1].
inline AggregateCurves aggregate(const CurveEnsemble& ensemble) {
    if (ensemble.repetitions.empty()) throw std::invalid_argument("aggregate: empty ensemble");
    const std::size_t reps = ensemble.repetitions.size();
    const std::size_t n = ensemble.repetitions.front().points.size();
    for (const auto& c : ensemble.repetitions) {
        if (c.points.size() != n) throw std::invalid_argument("aggregate: curves on different grids");
        for (std::size_t i = 0; i < n; ++i) {
            const double a = c.points[i].lambda, b = ensemble.repetitions.front().points[i].lambda;
            if (a != b && !(std::isinf(a) && std::isinf(b)))
                throw std::invalid_argument("aggregate: curves on different grids");
        }
    }
    AggregateCurves out;
    out.mean.meta = out.plus_sigma.meta = out.minus_sigma.meta = ensemble.repetitions.front().meta;
    const double r = static_cast<double>(reps);
    for (std::size_t i = 0; i < n; ++i) {
        double ma = 0.0, mb = 0.0;
        for (const auto& c : ensemble.repetitions) {
            ma += c.points[i].alpha;
            mb += c.points[i].beta;
        }
        ma /= r;
        mb /= r;
        double va = 0.0, vb = 0.0;
        for (const auto& c : ensemble.repetitions) {
            va += (c.points[i].alpha - ma) * (c.points[i].alpha - ma);
            vb += (c.points[i].beta - mb) * (c.points[i].beta - mb);
        }
        const double sa = std::sqrt(va / r), sb = std::sqrt(vb / r);
        out.sigma_alpha.push_back(sa);
        out.sigma_beta.push_back(sb);
        const double lambda = ensemble.repetitions.front().points[i].lambda;
        out.mean.points.push_back({lambda, ma, mb});
        out.plus_sigma.points.push_back(
            {lambda, std::clamp(ma + sa, 0.0, 1.0), std::clamp(mb + sb, 0.0, 1.0)});
        out.minus_sigma.points.push_back(
            {lambda, std::clamp(ma - sa, 0.0, 1.0), std::clamp(mb - sb, 0.0, 1.0)});
    }
    return out;
}

}  // namespace prdkit
