#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "prdkit/common.hpp"
#include "prdkit/rng.hpp"
#include "prdkit/sample_set.hpp"

namespace prdkit {

/// Train/test split configuration. When disabled, training and test sets
/// alias the full input.
struct SplitSpec {
    double fraction = 0.5;
    bool enabled = true;
    std::uint64_t seed = 0;
};

inline void validate(const SplitSpec& spec) {
    if (spec.enabled && !(spec.fraction > 0.0 && spec.fraction < 1.0))
        throw InvalidSplitError("split fraction must lie strictly in (0,1), got " +
                                std::to_string(spec.fraction));
}

/// Result of split_samples. `aliased` means test rows are the train rows in
/// identical order (no-split mode); scoring then excludes each test point
/// from its own neighbor searches.
struct SplitData {
    SampleSet train_x, train_y, test_x, test_y;
    bool aliased = false;
};

namespace detail {

inline SampleSet take_rows(const SampleSet& s, const std::vector<std::size_t>& idx,
                           const std::string& suffix) {
    SampleSet out;
    out.label = s.label + suffix;
    out.points.rows = idx.size();
    out.points.cols = s.dim();
    out.points.data.reserve(idx.size() * s.dim());
    for (std::size_t i : idx) {
        auto r = s.row(i);
        out.points.data.insert(out.points.data.end(), r.begin(), r.end());
    }
    return out;
}

inline void split_one(const SampleSet& s, double fraction, RngStream rng, SampleSet& train,
                      SampleSet& test) {
    const std::size_t n = s.size();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        throw InvalidSplitError("split of '" + s.label + "' (N=" + std::to_string(n) +
                                ", fraction=" + std::to_string(fraction) +
                                ") would leave an empty half");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), static_cast<std::size_t>(0));
    // Fisher-Yates, then sort each half so the output order is canonical.
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(idx[i], idx[rng.uniform_below(i + 1)]);
    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    train = take_rows(s, train_idx, "/train");
    test = take_rows(s, test_idx, "/test");
}

}  // namespace detail

/// Disjoint uniform-random partition of each set (floor(fraction*N) training
/// rows). With spec.enabled == false, train == test == input.
inline SplitData split_samples(const SampleSet& x, const SampleSet& y, const SplitSpec& spec) {
    validate(x);
    validate(y);
    validate(spec);
    SplitData out;
    if (!spec.enabled) {
        out.train_x = x;
        out.train_y = y;
        out.test_x = x;
        out.test_y = y;
        out.aliased = true;
        return out;
    }
    detail::split_one(x, spec.fraction, RngStream(spec.seed, 0), out.train_x, out.test_x);
    detail::split_one(y, spec.fraction, RngStream(spec.seed, 1), out.train_y, out.test_y);
    out.aliased = false;
    return out;
}

}  // namespace prdkit
