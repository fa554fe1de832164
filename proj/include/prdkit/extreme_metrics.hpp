#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include <json.hpp>

#include "prdkit/neighbors.hpp"
#include "prdkit/split.hpp"

namespace prdkit {

/// Scalar extreme-value report; beta_0 is the role-swapped alpha_inf.
struct ExtremeReport {
    std::string method;
    double alpha_inf = 0.0;
    double beta_0 = 0.0;
    nlohmann::json params;
};

enum class ExtremeMethod { ipr, cov, eas, prc, ppr };

inline std::string extreme_method_name(ExtremeMethod m) {
    switch (m) {
        case ExtremeMethod::ipr: return "ipr";
        case ExtremeMethod::cov: return "cov";
        case ExtremeMethod::eas: return "eas";
        case ExtremeMethod::prc: return "prc";
        case ExtremeMethod::ppr: return "ppr";
    }
    return "?";
}

inline ExtremeMethod extreme_method_from_name(const std::string& name) {
    if (name == "ipr") return ExtremeMethod::ipr;
    if (name == "cov") return ExtremeMethod::cov;
    if (name == "eas") return ExtremeMethod::eas;
    if (name == "prc") return ExtremeMethod::prc;
    if (name == "ppr") return ExtremeMethod::ppr;
    throw std::invalid_argument("unknown extreme method '" + name + "' (expected ipr|cov|eas|prc|ppr)");
}

namespace detail {

inline std::vector<double> class_radii(const SampleSet& s, std::size_t k) {
    std::vector<double> radii(s.size());
    parallel_for(s.size(), [&](std::size_t i) { radii[i] = kth_radius_in_set(s, i, k); });
    return radii;
}

}  // namespace detail

/// Fraction of y-points falling inside some kNN ball centered at an x-point
/// (ball radii computed within x, self excluded).
inline double ipr_extreme(const SampleSet& x, const SampleSet& y, std::size_t k) {
    if (x.dim() != y.dim()) throw std::invalid_argument("ipr_extreme: dimension mismatch");
    if (k == 0 || k > x.size() - 1)
        throw std::invalid_argument("ipr_extreme: k=" + std::to_string(k) + " invalid for |x|=" +
                                    std::to_string(x.size()));
    const std::vector<double> radii = detail::class_radii(x, k);
    std::vector<unsigned char> hit(y.size(), 0);
    parallel_for(y.size(), [&](std::size_t j) {
        const auto z = y.row(j);
        for (std::size_t m = 0; m < x.size(); ++m) {
            if (euclidean(z, x.row(m)) <= radii[m]) {
                hit[j] = 1;
                return;
            }
        }
    });
    std::size_t count = 0;
    for (auto h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(y.size());
}

/// Fraction of y-points whose own kNN ball (radius within y, self excluded)
/// contains at least one x-point.
inline double coverage_extreme(const SampleSet& x, const SampleSet& y, std::size_t k) {
    if (x.dim() != y.dim()) throw std::invalid_argument("coverage_extreme: dimension mismatch");
    if (k == 0 || k > y.size() - 1)
        throw std::invalid_argument("coverage_extreme: k=" + std::to_string(k) + " invalid for |y|=" +
                                    std::to_string(y.size()));
    const std::vector<double> radii = detail::class_radii(y, k);
    std::vector<unsigned char> hit(y.size(), 0);
    parallel_for(y.size(), [&](std::size_t j) {
        const auto z = y.row(j);
        for (std::size_t m = 0; m < x.size(); ++m) {
            if (euclidean(z, x.row(m)) <= radii[j]) {
                hit[j] = 1;
                return;
            }
        }
    });
    std::size_t count = 0;
    for (auto h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(y.size());
}

inline double eas_extreme(const SampleSet& x, const SampleSet& y, std::size_t k) {
    return std::min(ipr_extreme(x, y, k), coverage_extreme(x, y, k));
}

/// Coverage extension: a y-point counts only when its ball holds at least
/// kprime x-points. kprime = 1 recovers coverage exactly.
inline double prc_extreme(const SampleSet& x, const SampleSet& y, std::size_t k, std::size_t kprime) {
    if (kprime == 0) throw std::invalid_argument("prc_extreme: kprime must be >= 1");
    if (x.dim() != y.dim()) throw std::invalid_argument("prc_extreme: dimension mismatch");
    if (k == 0 || k > y.size() - 1)
        throw std::invalid_argument("prc_extreme: k=" + std::to_string(k) + " invalid for |y|=" +
                                    std::to_string(y.size()));
    const std::vector<double> radii = detail::class_radii(y, k);
    std::vector<unsigned char> hit(y.size(), 0);
    parallel_for(y.size(), [&](std::size_t j) {
        const auto z = y.row(j);
        std::size_t inside = 0;
        for (std::size_t m = 0; m < x.size(); ++m) {
            if (euclidean(z, x.row(m)) <= radii[j] && ++inside >= kprime) {
                hit[j] = 1;
                return;
            }
        }
    });
    std::size_t count = 0;
    for (auto h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(y.size());
}

/// Probabilistic variant with a fixed-bandwidth tent kernel
/// tau(d) = max(0, 1 - d/R).
inline double ppr_extreme(const SampleSet& x, const SampleSet& y, double kernel_radius) {
    if (!(kernel_radius > 0.0)) throw std::invalid_argument("ppr_extreme: R must be > 0");
    if (x.dim() != y.dim()) throw std::invalid_argument("ppr_extreme: dimension mismatch");
    std::vector<double> contribution(y.size());
    parallel_for(y.size(), [&](std::size_t j) {
        const auto z = y.row(j);
        double survive = 1.0;
        for (std::size_t m = 0; m < x.size(); ++m) {
            const double tau = std::max(0.0, 1.0 - euclidean(z, x.row(m)) / kernel_radius);
            survive *= 1.0 - tau;
            if (survive == 0.0) break;
        }
        contribution[j] = 1.0 - survive;
    });
    double total = 0.0;
    for (double c : contribution) total += c;
    return total / static_cast<double>(y.size());
}

/// Default tent-kernel radius: mean distance to the 4th nearest neighbor
/// within x.
inline double default_ppr_radius(const SampleSet& x) {
    const std::size_t k = std::min<std::size_t>(4, x.size() - 1);
    if (k == 0) throw std::invalid_argument("default_ppr_radius: needs at least 2 points");
    const std::vector<double> radii = detail::class_radii(x, k);
    double mean = 0.0;
    for (double r : radii) mean += r;
    return mean / static_cast<double>(radii.size());
}

struct ExtremeParams {
    std::size_t k = 0;       // 0 -> ceil(sqrt(N)) on the training size
    std::size_t kprime = 3;  // prc only
    double radius = 0.0;     // ppr only; 0 -> default_ppr_radius
};

namespace detail {

/// Split-mode evaluation: classifier structures come from the training
/// halves, the error rate from the test half. With aliased (no-split) data
/// this reproduces the direct formulas.
inline double extreme_on_split(ExtremeMethod method, const SampleSet& train_x,
                               const SampleSet& train_y, const SampleSet& test_y, bool aliased_y,
                               const ExtremeParams& params) {
    const std::size_t n = test_y.size();
    std::vector<unsigned char> hit(n, 0);
    switch (method) {
        case ExtremeMethod::ipr: {
            const auto radii = class_radii(train_x, params.k);
            parallel_for(n, [&](std::size_t j) {
                const auto z = test_y.row(j);
                for (std::size_t m = 0; m < train_x.size(); ++m)
                    if (euclidean(z, train_x.row(m)) <= radii[m]) {
                        hit[j] = 1;
                        return;
                    }
            });
            break;
        }
        case ExtremeMethod::cov:
        case ExtremeMethod::prc: {
            const std::size_t need = method == ExtremeMethod::cov ? 1 : params.kprime;
            parallel_for(n, [&](std::size_t j) {
                const auto z = test_y.row(j);
                const double radius = aliased_y ? kth_radius_in_set(train_y, j, params.k)
                                                : kth_radius(z, train_y, params.k);
                std::size_t inside = 0;
                for (std::size_t m = 0; m < train_x.size(); ++m)
                    if (euclidean(z, train_x.row(m)) <= radius && ++inside >= need) {
                        hit[j] = 1;
                        return;
                    }
            });
            break;
        }
        case ExtremeMethod::ppr: {
            std::vector<double> contribution(n);
            parallel_for(n, [&](std::size_t j) {
                const auto z = test_y.row(j);
                double survive = 1.0;
                for (std::size_t m = 0; m < train_x.size(); ++m) {
                    const double tau =
                        std::max(0.0, 1.0 - euclidean(z, train_x.row(m)) / params.radius);
                    survive *= 1.0 - tau;
                    if (survive == 0.0) break;
                }
                contribution[j] = 1.0 - survive;
            });
            double total = 0.0;
            for (double c : contribution) total += c;
            return total / static_cast<double>(n);
        }
        case ExtremeMethod::eas:
            return std::min(
                extreme_on_split(ExtremeMethod::ipr, train_x, train_y, test_y, aliased_y, params),
                extreme_on_split(ExtremeMethod::cov, train_x, train_y, test_y, aliased_y, params));
    }
    std::size_t count = 0;
    for (auto h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace detail

/// Computes alpha_inf and the role-swapped beta_0 for one published metric.
/// Without split (the literature convention) the direct formulas run on the
/// full sets; with split the classifier halves come from the training split.
inline ExtremeReport compute_extremes(const SampleSet& x, const SampleSet& y, ExtremeMethod method,
                                      ExtremeParams params,
                                      const std::optional<SplitSpec>& split = std::nullopt) {
    validate(x);
    validate(y);
    ExtremeReport report;
    report.method = extreme_method_name(method);
    SplitData data;
    if (split && split->enabled) {
        data = split_samples(x, y, *split);
    } else {
        SplitSpec off;
        off.enabled = false;
        data = split_samples(x, y, off);
    }
    if (params.k == 0)
        params.k = static_cast<std::size_t>(std::ceil(
            std::sqrt(static_cast<double>(std::min(data.train_x.size(), data.train_y.size())))));
    ExtremeParams alpha_params = params;
    ExtremeParams beta_params = params;
    if (method == ExtremeMethod::ppr && params.radius <= 0.0) {
        alpha_params.radius = default_ppr_radius(data.train_x);
        beta_params.radius = default_ppr_radius(data.train_y);
    }

    report.alpha_inf = detail::extreme_on_split(method, data.train_x, data.train_y, data.test_y,
                                                data.aliased, alpha_params);
    report.beta_0 = detail::extreme_on_split(method, data.train_y, data.train_x, data.test_x,
                                             data.aliased, beta_params);

    report.params["k"] = params.k;
    if (method == ExtremeMethod::prc) report.params["kprime"] = params.kprime;
    if (method == ExtremeMethod::ppr) {
        report.params["radius"] = alpha_params.radius;
        if (beta_params.radius != alpha_params.radius)
            report.params["radius_swapped"] = beta_params.radius;
    }
    report.params["split"] = split && split->enabled;
    return report;
}

}  // namespace prdkit
