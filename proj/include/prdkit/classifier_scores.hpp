#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prdkit/common.hpp"
#include "prdkit/neighbors.hpp"
#include "prdkit/split.hpp"

namespace prdkit {

enum class Method { knn, kde, ipr, cov };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::knn: return "knn";
        case Method::kde: return "kde";
        case Method::ipr: return "ipr";
        case Method::cov: return "cov";
    }
    return "?";
}

inline Method method_from_name(const std::string& name) {
    if (name == "knn") return Method::knn;
    if (name == "kde") return Method::kde;
    if (name == "ipr") return Method::ipr;
    if (name == "cov") return Method::cov;
    throw std::invalid_argument("unknown method '" + name + "' (expected knn|kde|ipr|cov)");
}

/// Per-test-point scores with the thresholding semantics
/// f_gamma(z) = 1 iff gamma >= s(z) (loose for gamma >= 1, strict below).
/// Scores are nonnegative extended reals; 0/0 count ratios map to score 0,
/// i.e. zero evidence classifies to P.
struct ScoredTestSet {
    std::vector<double> x_scores;  // test points drawn from P
    std::vector<double> y_scores;  // test points drawn from Q
};

/// k selection rule: ceil(sqrt(N)) with N the per-class training size.
inline std::size_t sqrt_k_rule(std::size_t per_class_train_size) {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(per_class_train_size))));
}

struct FamilyConfig {
    Method method = Method::knn;
    std::size_t k = 0;   // 0 -> sqrt rule
    double sigma = 0.0;  // 0 -> auto bandwidth
};

namespace detail {

inline double ratio_score(std::size_t count_x, std::size_t count_y) {
    if (count_y == 0) return 0.0;  // includes the 0/0 tie, resolved toward P
    if (count_x == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(count_y) / static_cast<double>(count_x);
}

inline void fill_row_distances(std::span<const double> z, const SampleSet& refs,
                               std::vector<double>& out) {
    out.resize(refs.size());
    const std::size_t d = refs.dim();
    const double* base = refs.points.data.data();
    for (std::size_t r = 0; r < refs.size(); ++r) {
        const double* row = base + r * d;
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = z[c] - row[c];
            s += diff * diff;
        }
        out[r] = std::sqrt(s);
    }
}

/// Runs fn(test_index, z, self) over X' then Y' test points, in parallel.
/// self identifies the aliased training row in no-split mode.
template <typename Fn>
void for_each_test_point(const SplitData& data, ScoredTestSet& out, Fn&& fn) {
    out.x_scores.resize(data.test_x.size());
    out.y_scores.resize(data.test_y.size());
    const std::size_t nx = data.test_x.size();
    parallel_for(nx + data.test_y.size(), [&](std::size_t t) {
        if (t < nx) {
            const MemberRef self = data.aliased ? MemberRef::in_x(t) : MemberRef::none();
            out.x_scores[t] = fn(data.test_x.row(t), self);
        } else {
            const std::size_t j = t - nx;
            const MemberRef self = data.aliased ? MemberRef::in_y(j) : MemberRef::none();
            out.y_scores[j] = fn(data.test_y.row(j), self);
        }
    });
}

}  // namespace detail

/// Majority-vote family: s(z) = count_y / count_x inside the kNN ball of z
/// within the joint training set.
inline ScoredTestSet score_knn(const SplitData& data, std::size_t k) {
    const std::size_t total = data.train_x.size() + data.train_y.size();
    const std::size_t available = total - (data.aliased ? 1 : 0);
    if (k == 0 || k > available)
        throw std::invalid_argument("score_knn: k=" + std::to_string(k) + " invalid for " +
                                    std::to_string(available) + " usable training points");
    ScoredTestSet out;
    detail::for_each_test_point(data, out, [&](std::span<const double> z, MemberRef self) {
        thread_local std::vector<double> dx, dy, scratch;
        detail::fill_row_distances(z, data.train_x, dx);
        detail::fill_row_distances(z, data.train_y, dy);
        scratch.clear();
        scratch.reserve(dx.size() + dy.size());
        for (std::size_t i = 0; i < dx.size(); ++i)
            if (!(self.set == MemberRef::Set::in_x && self.index == i)) scratch.push_back(dx[i]);
        for (std::size_t i = 0; i < dy.size(); ++i)
            if (!(self.set == MemberRef::Set::in_y && self.index == i)) scratch.push_back(dy[i]);
        const double radius = detail::kth_smallest(scratch, k);
        std::size_t cx = 0, cy = 0;
        for (double d : dx) cx += d <= radius;
        for (double d : dy) cy += d <= radius;
        return detail::ratio_score(cx, cy);
    });
    return out;
}

/// Fixed-bandwidth uniform-kernel family: s(z) = #{y within sigma} / #{x
/// within sigma}.
inline ScoredTestSet score_kde(const SplitData& data, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("score_kde: sigma must be > 0");
    ScoredTestSet out;
    detail::for_each_test_point(data, out, [&](std::span<const double> z, MemberRef) {
        thread_local std::vector<double> dx, dy;
        detail::fill_row_distances(z, data.train_x, dx);
        detail::fill_row_distances(z, data.train_y, dy);
        std::size_t cx = 0, cy = 0;
        for (double d : dx) cx += d <= sigma;
        for (double d : dy) cy += d <= sigma;
        return detail::ratio_score(cx, cy);
    });
    return out;
}

/// Adaptive-bandwidth family behind the improved precision/recall metric:
/// s(z) = #{y : z in B_kNN^Y(y)} / #{x : z in B_kNN^X(x)}, ball radii
/// computed within each training class with self excluded.
inline ScoredTestSet score_ipr(const SplitData& data, std::size_t k) {
    if (k == 0 || k > data.train_x.size() - 1 || k > data.train_y.size() - 1)
        throw std::invalid_argument("score_ipr: k=" + std::to_string(k) +
                                    " too large for per-class training sizes " +
                                    std::to_string(data.train_x.size()) + "/" +
                                    std::to_string(data.train_y.size()));
    std::vector<double> radii_x(data.train_x.size()), radii_y(data.train_y.size());
    parallel_for(data.train_x.size(), [&](std::size_t i) {
        radii_x[i] = kth_radius_in_set(data.train_x, i, k);
    });
    parallel_for(data.train_y.size(), [&](std::size_t i) {
        radii_y[i] = kth_radius_in_set(data.train_y, i, k);
    });
    ScoredTestSet out;
    detail::for_each_test_point(data, out, [&](std::span<const double> z, MemberRef) {
        thread_local std::vector<double> dx, dy;
        detail::fill_row_distances(z, data.train_x, dx);
        detail::fill_row_distances(z, data.train_y, dy);
        std::size_t cx = 0, cy = 0;
        for (std::size_t i = 0; i < dx.size(); ++i) cx += dx[i] <= radii_x[i];
        for (std::size_t i = 0; i < dy.size(); ++i) cy += dy[i] <= radii_y[i];
        return detail::ratio_score(cx, cy);
    });
    return out;
}

/// Per-class-structure kNN family behind Coverage:
/// s(z) = #{y in B_kNN^X(z)} / #{x in B_kNN^Y(z)}.
inline ScoredTestSet score_cov(const SplitData& data, std::size_t k) {
    auto check = [&](const SampleSet& cls, bool may_alias, const char* which) {
        const std::size_t avail = cls.size() - (data.aliased && may_alias ? 1 : 0);
        if (k == 0 || k > avail)
            throw std::invalid_argument(std::string("score_cov: k=") + std::to_string(k) +
                                        " invalid for class " + which + " with " +
                                        std::to_string(avail) + " usable points");
    };
    check(data.train_x, true, "x");
    check(data.train_y, true, "y");
    ScoredTestSet out;
    detail::for_each_test_point(data, out, [&](std::span<const double> z, MemberRef self) {
        thread_local std::vector<double> dx, dy, scratch;
        detail::fill_row_distances(z, data.train_x, dx);
        detail::fill_row_distances(z, data.train_y, dy);
        auto radius_within = [&](const std::vector<double>& d, bool self_here) {
            scratch.clear();
            scratch.reserve(d.size());
            for (std::size_t i = 0; i < d.size(); ++i)
                if (!(self_here && self.index == i)) scratch.push_back(d[i]);
            return detail::kth_smallest(scratch, k);
        };
        const double radius_x = radius_within(dx, self.set == MemberRef::Set::in_x);
        const double radius_y = radius_within(dy, self.set == MemberRef::Set::in_y);
        std::size_t cx = 0, cy = 0;
        for (double d : dx) cx += d <= radius_y;  // X-points inside z's ball built in Y
        for (double d : dy) cy += d <= radius_x;  // Y-points inside z's ball built in X
        return detail::ratio_score(cx, cy);
    });
    return out;
}

/// Scale-adaptive default bandwidth: mean over all training points of the
/// k-th nearest-neighbor distance within the point's own class, with k from
/// the sqrt rule. Classes too small for k neighbors fall back to the union.
inline double auto_sigma(const SampleSet& train_x, const SampleSet& train_y, std::size_t k) {
    const std::size_t nx = train_x.size(), ny = train_y.size();
    std::vector<double> nn(nx + ny);
    parallel_for(nx + ny, [&](std::size_t t) {
        thread_local std::vector<double> d, scratch;
        const bool from_x = t < nx;
        const SampleSet& own = from_x ? train_x : train_y;
        const std::size_t self = from_x ? t : t - nx;
        const auto z = own.row(self);
        scratch.clear();
        if (own.size() >= 2 && k <= own.size() - 1) {
            detail::fill_row_distances(z, own, d);
            for (std::size_t i = 0; i < own.size(); ++i)
                if (i != self) scratch.push_back(d[i]);
            nn[t] = detail::kth_smallest(scratch, std::min(k, own.size() - 1));
            return;
        }
        // degenerate class: use the union instead
        detail::fill_row_distances(z, train_x, d);
        for (std::size_t i = 0; i < nx; ++i)
            if (!(from_x && i == self)) scratch.push_back(d[i]);
        detail::fill_row_distances(z, train_y, d);
        for (std::size_t i = 0; i < ny; ++i)
            if (!(!from_x && i == self)) scratch.push_back(d[i]);
        nn[t] = detail::kth_smallest(scratch, std::min(k, scratch.size()));
    });
    double mean = 0.0;
    for (double v : nn) mean += v;
    return mean / static_cast<double>(nn.size());
}

struct ResolvedFamily {
    Method method;
    std::size_t k = 0;
    double sigma = 0.0;
};

/// Resolves the sqrt-k rule / auto bandwidth against the pre-split sample
/// count and dispatches to the family's scorer. The rule operates on the
/// original per-distribution size n (training plus held-out rows), so
/// splitting does not change the resolved k.
inline ScoredTestSet score_family(const SplitData& data, const FamilyConfig& cfg,
                                  ResolvedFamily* resolved = nullptr) {
    const std::size_t n_x = data.train_x.size() + (data.aliased ? 0 : data.test_x.size());
    const std::size_t n_y = data.train_y.size() + (data.aliased ? 0 : data.test_y.size());
    const std::size_t sqrt_k = sqrt_k_rule(std::min(n_x, n_y));
    ResolvedFamily r;
    r.method = cfg.method;
    if (cfg.method == Method::kde) {
        r.sigma = cfg.sigma > 0.0 ? cfg.sigma : auto_sigma(data.train_x, data.train_y, sqrt_k);
    } else {
        r.k = cfg.k > 0 ? cfg.k : sqrt_k;
    }
    if (resolved) *resolved = r;
    switch (cfg.method) {
        case Method::knn: return score_knn(data, r.k);
        case Method::kde: return score_kde(data, r.sigma);
        case Method::ipr: return score_ipr(data, r.k);
        case Method::cov: return score_cov(data, r.k);
    }
    throw std::invalid_argument("score_family: bad method");
}

}  // namespace prdkit
