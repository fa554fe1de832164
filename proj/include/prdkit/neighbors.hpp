#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "prdkit/common.hpp"
#include "prdkit/sample_set.hpp"

namespace prdkit {

struct DistanceTable {
    std::size_t query_count = 0;
    std::size_t ref_count = 0;
    std::vector<double> distances;  // row-major, query index major

    double at(std::size_t q, std::size_t r) const { return distances[q * ref_count + r]; }
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

/// Brute-force Q x R Euclidean distances, parallel over query rows.
inline DistanceTable pairwise_distances(const SampleSet& queries, const SampleSet& refs) {
    if (queries.dim() != refs.dim())
        throw std::invalid_argument("pairwise_distances: dimension mismatch (" +
                                    std::to_string(queries.dim()) + " vs " +
                                    std::to_string(refs.dim()) + ")");
    DistanceTable table;
    table.query_count = queries.size();
    table.ref_count = refs.size();
    table.distances.resize(table.query_count * table.ref_count);
    parallel_for(table.query_count, [&](std::size_t q) {
        const auto zq = queries.row(q);
        double* out = table.distances.data() + q * table.ref_count;
        for (std::size_t r = 0; r < table.ref_count; ++r)
            out[r] = euclidean(zq, refs.row(r));
    });
    return table;
}

namespace detail {

/// k-th smallest entry of a scratch vector (1-based k).
inline double kth_smallest(std::vector<double>& scratch, std::size_t k) {
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1), scratch.end());
    return scratch[k - 1];
}

inline void fill_distances(std::span<const double> z, const SampleSet& refs, std::vector<double>& out) {
    out.resize(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
        out[i] = euclidean(z, refs.row(i));
}

}  // namespace detail

/// Distance from z (not a member of refs) to its k-th nearest reference.
inline double kth_radius(std::span<const double> z, const SampleSet& refs, std::size_t k) {
    if (z.size() != refs.dim()) throw std::invalid_argument("kth_radius: dimension mismatch");
    if (k == 0 || k > refs.size())
        throw std::invalid_argument("kth_radius: k=" + std::to_string(k) + " invalid for " +
                                    std::to_string(refs.size()) + " references");
    std::vector<double> d;
    detail::fill_distances(z, refs, d);
    return detail::kth_smallest(d, k);
}

/// Same, for a member of the reference set; the zero self-distance is
/// excluded from the order statistics.
inline double kth_radius_in_set(const SampleSet& refs, std::size_t self_index, std::size_t k) {
    if (self_index >= refs.size()) throw std::invalid_argument("kth_radius_in_set: bad self index");
    if (k == 0 || k > refs.size() - 1)
        throw std::invalid_argument("kth_radius_in_set: k=" + std::to_string(k) + " invalid for " +
                                    std::to_string(refs.size()) + " references with self excluded");
    const auto z = refs.row(self_index);
    std::vector<double> d;
    d.reserve(refs.size() - 1);
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (i == self_index) continue;
        d.push_back(euclidean(z, refs.row(i)));
    }
    return detail::kth_smallest(d, k);
}

/// Identifies a test point with a training row, for no-split self exclusion.
struct MemberRef {
    enum class Set { none, in_x, in_y };
    Set set = Set::none;
    std::size_t index = 0;

    static MemberRef none() { return {}; }
    static MemberRef in_x(std::size_t i) { return {Set::in_x, i}; }
    static MemberRef in_y(std::size_t i) { return {Set::in_y, i}; }
};

struct BallCounts {
    std::size_t count_x = 0;
    std::size_t count_y = 0;
    double radius = 0.0;
};

/// Joint-set kNN ball of z within X u Y: the radius is the k-th nearest
/// neighbor distance (self excluded when z is a member); the counts include
/// every point of each class at distance <= radius, ties and self included.
inline BallCounts ball_counts(std::span<const double> z, const SampleSet& train_x,
                              const SampleSet& train_y, std::size_t k,
                              MemberRef self = MemberRef::none()) {
    if (z.size() != train_x.dim() || z.size() != train_y.dim())
        throw std::invalid_argument("ball_counts: dimension mismatch");
    const std::size_t total = train_x.size() + train_y.size();
    const std::size_t available = total - (self.set == MemberRef::Set::none ? 0 : 1);
    if (k == 0 || k > available)
        throw std::invalid_argument("ball_counts: k=" + std::to_string(k) + " invalid for " +
                                    std::to_string(available) + " usable training points");
    std::vector<double> dx, dy;
    detail::fill_distances(z, train_x, dx);
    detail::fill_distances(z, train_y, dy);

    std::vector<double> scratch;
    scratch.reserve(available);
    for (std::size_t i = 0; i < dx.size(); ++i)
        if (!(self.set == MemberRef::Set::in_x && self.index == i)) scratch.push_back(dx[i]);
    for (std::size_t i = 0; i < dy.size(); ++i)
        if (!(self.set == MemberRef::Set::in_y && self.index == i)) scratch.push_back(dy[i]);
    const double radius = detail::kth_smallest(scratch, k);

    BallCounts out;
    out.radius = radius;
    for (double d : dx) out.count_x += d <= radius;
    for (double d : dy) out.count_y += d <= radius;
    return out;
}

}  // namespace prdkit
