#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace prdkit {

/// Ordered trade-off grid over [0, +inf]: strictly increasing, sentinel 0
/// first and +inf last.
struct LambdaGrid {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Angular grid: {0} + {tan(i*pi/(2(m+1))) : i=1..m} + {+inf}. The upper half
/// is stored as exact reciprocals of the lower half, so the grid is exactly
/// symmetric under lambda <-> 1/lambda; odd m puts lambda = 1 at the center.
inline LambdaGrid make_lambda_grid(std::size_t m) {
    if (m == 0) throw std::invalid_argument("lambda grid needs at least one interior value");
    constexpr double pi = 3.14159265358979323846;
    LambdaGrid grid;
    grid.values.reserve(m + 2);
    grid.values.push_back(0.0);
    const std::size_t half = m / 2;
    std::vector<double> lower(half);
    for (std::size_t i = 1; i <= half; ++i)
        lower[i - 1] = std::tan(static_cast<double>(i) * pi / (2.0 * static_cast<double>(m + 1)));
    for (double v : lower) grid.values.push_back(v);
    if (m % 2 == 1) grid.values.push_back(1.0);
    for (std::size_t i = half; i >= 1; --i) grid.values.push_back(1.0 / lower[i - 1]);
    grid.values.push_back(std::numeric_limits<double>::infinity());
    return grid;
}

inline void validate(const LambdaGrid& grid) {
    if (grid.values.size() < 2 || grid.values.front() != 0.0 ||
        !std::isinf(grid.values.back()))
        throw std::invalid_argument("lambda grid must start at 0 and end at +inf");
    for (std::size_t i = 1; i < grid.values.size(); ++i)
        if (!(grid.values[i] > grid.values[i - 1]))
            throw std::invalid_argument("lambda grid must be strictly increasing");
}

}  // namespace prdkit
