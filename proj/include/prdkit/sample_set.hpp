#pragma once

#include <cmath>
#include <initializer_list>
#include <string>

#include "prdkit/matrix.hpp"

namespace prdkit {

/// N x d matrix of feature vectors with a dataset label. The atomic input of
/// every estimator.
struct SampleSet {
    Matrix points;
    std::string label;

    std::size_t size() const { return points.rows; }
    std::size_t dim() const { return points.cols; }
    std::span<const double> row(std::size_t i) const { return points.row(i); }
};

/// Checks N >= 1, d >= 1 and that every entry is finite.
inline void validate(const SampleSet& s) {
    if (s.points.rows == 0)
        throw std::invalid_argument("sample set '" + s.label + "': empty (N >= 1 required)");
    if (s.points.cols == 0)
        throw std::invalid_argument("sample set '" + s.label + "': zero dimension (d >= 1 required)");
    for (std::size_t i = 0; i < s.points.rows; ++i)
        for (std::size_t j = 0; j < s.points.cols; ++j)
            if (!std::isfinite(s.points.at(i, j)))
                throw std::invalid_argument("sample set '" + s.label + "': non-finite value at row " +
                                            std::to_string(i) + ", column " + std::to_string(j));
}

/// Convenience constructor for tests and small literals.
inline SampleSet make_sample_set(std::initializer_list<std::initializer_list<double>> rows,
                                 std::string label = "set") {
    SampleSet s;
    s.label = std::move(label);
    s.points.rows = rows.size();
    s.points.cols = rows.size() ? rows.begin()->size() : 0;
    s.points.data.reserve(s.points.rows * s.points.cols);
    for (const auto& r : rows) {
        if (r.size() != s.points.cols)
            throw std::invalid_argument("sample set '" + s.label + "': ragged rows");
        for (double v : r) s.points.data.push_back(v);
    }
    return s;
}

/// 1-D helper: one coordinate per point.
inline SampleSet make_sample_set_1d(std::initializer_list<double> values, std::string label = "set") {
    SampleSet s;
    s.label = std::move(label);
    s.points.rows = values.size();
    s.points.cols = 1;
    s.points.data.assign(values.begin(), values.end());
    return s;
}

}  // namespace prdkit
