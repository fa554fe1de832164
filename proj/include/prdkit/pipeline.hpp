#pragma once

#include "prdkit/classifier_scores.hpp"
#include "prdkit/pr_estimator.hpp"

namespace prdkit {

/// One-call composition: split, score under the chosen family, sweep the
/// trade-off grid. Metadata records the resolved hyper-parameters.
struct PipelineConfig {
    FamilyConfig family;
    SplitSpec split;
    LambdaGrid grid = make_lambda_grid(101);
};

inline PRCurve estimate_pr_curve(const SampleSet& x, const SampleSet& y, const PipelineConfig& cfg) {
    const SplitData data = split_samples(x, y, cfg.split);
    ResolvedFamily resolved;
    const ScoredTestSet scores = score_family(data, cfg.family, &resolved);
    PRCurve curve = estimate_curve(scores, cfg.grid);
    curve.meta.method = method_name(cfg.family.method);
    if (cfg.family.method == Method::kde)
        curve.meta.sigma = resolved.sigma;
    else
        curve.meta.k = static_cast<int>(resolved.k);
    curve.meta.split = cfg.split;
    curve.meta.seed = cfg.split.seed;
    curve.meta.lambdas = cfg.grid.size() >= 2 ? cfg.grid.size() - 2 : 0;
    return curve;
}

}  // namespace prdkit
