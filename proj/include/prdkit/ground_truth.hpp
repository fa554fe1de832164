#pragma once

#include <algorithm>
#include <cmath>

#include "prdkit/density_model.hpp"
#include "prdkit/lambda_grid.hpp"
#include "prdkit/pr_curve.hpp"

namespace prdkit {

struct GtConfig {
    std::size_t n_gt = 100000;
    LambdaGrid grid = make_lambda_grid(101);
    std::uint64_t seed = 0;
};

/// Monte-Carlo Bayes ground truth: draws n_gt samples per side, evaluates the
/// likelihood-ratio classifier 1{log q - log p <= ln lambda} on them (ties go
/// to P), and reports alpha = lambda * fpr + fnr clipped to [0,1].
inline PRCurve gt_curve(const DensityModel& p, const DensityModel& q, const GtConfig& cfg) {
    if (p.dim() != q.dim()) throw std::invalid_argument("gt_curve: model dimensions differ");
    if (cfg.n_gt < 2) throw std::invalid_argument("gt_curve: n_gt must be >= 2");
    validate(cfg.grid);

    RngStream rng_p(cfg.seed, 0), rng_q(cfg.seed, 1);
    const SampleSet xs = sample(p, cfg.n_gt, rng_p, "gt/p");
    const SampleSet ys = sample(q, cfg.n_gt, rng_q, "gt/q");

    std::vector<double> llr_p(cfg.n_gt), llr_q(cfg.n_gt);
    parallel_for(cfg.n_gt, [&](std::size_t i) {
        llr_p[i] = log_pdf(q, xs.row(i)) - log_pdf(p, xs.row(i));
        llr_q[i] = log_pdf(q, ys.row(i)) - log_pdf(p, ys.row(i));
    });
    std::sort(llr_p.begin(), llr_p.end());
    std::sort(llr_q.begin(), llr_q.end());
    const double n = static_cast<double>(cfg.n_gt);

    // fraction of entries <= t (ties included)
    auto frac_le = [n](const std::vector<double>& sorted, double t) {
        return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) / n;
    };

    PRCurve curve;
    curve.meta.method = "gt";
    curve.meta.seed = cfg.seed;
    curve.meta.lambdas = cfg.grid.size() >= 2 ? cfg.grid.size() - 2 : 0;
    curve.meta.split.enabled = false;
    curve.points.reserve(cfg.grid.size());
    const double inf = std::numeric_limits<double>::infinity();
    for (double lambda : cfg.grid.values) {
        PRPoint pt;
        pt.lambda = lambda;
        if (lambda == 0.0) {
            // alpha_0 = Q-fraction with llr = -inf; beta_0 = P-fraction on the co-support
            pt.alpha = frac_le(llr_q, -inf);
            pt.beta = 1.0 - frac_le(llr_p, -inf);
        } else if (std::isinf(lambda)) {
            // fpr = 0 branch: alpha_inf = Q-fraction with llr < +inf
            const double finite_q = static_cast<double>(
                std::lower_bound(llr_q.begin(), llr_q.end(), inf) - llr_q.begin());
            pt.alpha = finite_q / n;
            pt.beta = 0.0;
        } else {
            const double log_lambda = std::log(lambda);
            const double fpr = 1.0 - frac_le(llr_p, log_lambda);
            const double fnr = frac_le(llr_q, log_lambda);
            pt.alpha = std::clamp(lambda * fpr + fnr, 0.0, 1.0);
            pt.beta = pt.alpha / lambda;
        }
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace prdkit
