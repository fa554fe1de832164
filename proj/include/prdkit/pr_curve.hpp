#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prdkit/common.hpp"
#include "prdkit/lambda_grid.hpp"
#include "prdkit/split.hpp"

namespace prdkit {

/// One point of a precision-recall curve at trade-off lambda.
struct PRPoint {
    double lambda = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Checks the defining relations: beta = alpha/lambda for finite lambda > 0,
/// alpha = 0 at lambda = 0, beta = 0 at lambda = +inf, values in [0,1].
inline void validate(const PRPoint& p) {
    if (!(p.lambda >= 0.0)) throw std::invalid_argument("PR point: lambda must be >= 0");
    if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw std::invalid_argument("PR point: alpha outside [0,1]");
    if (!(p.beta >= 0.0 && p.beta <= 1.0)) throw std::invalid_argument("PR point: beta outside [0,1]");
    if (p.lambda == 0.0) {
        if (p.alpha != 0.0) throw std::invalid_argument("PR point: alpha must be 0 at lambda=0");
    } else if (std::isinf(p.lambda)) {
        if (p.beta != 0.0) throw std::invalid_argument("PR point: beta must be 0 at lambda=+inf");
    } else {
        const double expected = p.alpha / p.lambda;
        if (std::abs(p.beta - expected) > 1e-12 * std::max(1.0, expected))
            throw std::invalid_argument("PR point: beta != alpha/lambda beyond tolerance");
    }
}

struct CurveMeta {
    std::string method;
    std::optional<int> k;
    std::optional<double> sigma;
    SplitSpec split;
    std::uint64_t seed = 0;
    std::size_t lambdas = 0;
};

struct PRCurve {
    std::vector<PRPoint> points;
    CurveMeta meta;
};

inline void validate_curve(const PRCurve& c) {
    for (const auto& p : c.points) validate(p);
    for (std::size_t i = 1; i < c.points.size(); ++i)
        if (!(c.points[i].lambda > c.points[i - 1].lambda))
            throw std::invalid_argument("PR curve: lambda values must be strictly increasing");
}

namespace detail {

inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& token, const std::string& file, std::size_t line) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(file + ": line " + std::to_string(line) + ": cannot parse '" + token + "'");
    }
}

}  // namespace detail

/// CSV with header `lambda,alpha,beta`; lambda = +inf is written as the
/// literal token `inf`, lambda = 0 as `0`.
inline void write_curve_csv(const PRCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "lambda,alpha,beta\n";
    for (const auto& p : curve.points)
        out << detail::format_double(p.lambda) << ',' << detail::format_double(p.alpha) << ','
            << detail::format_double(p.beta) << '\n';
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// Reads a curve CSV. Validates ordering and ranges but not the beta ratio,
/// so deviation bands (clipped +/- sigma curves) stay readable.
inline PRCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curve file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    if (line != "lambda,alpha,beta")
        throw ParseError(path + ": expected header 'lambda,alpha,beta', got '" + line + "'");
    PRCurve curve;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw ParseError(path + ": line " + std::to_string(lineno) + ": expected 3 columns");
        PRPoint p;
        p.lambda = detail::parse_double(a, path, lineno);
        p.alpha = detail::parse_double(b, path, lineno);
        p.beta = detail::parse_double(c, path, lineno);
        if (!(p.lambda >= 0.0) || !(p.alpha >= -1e-12 && p.alpha <= 1.0 + 1e-12) ||
            !(p.beta >= -1e-12 && p.beta <= 1.0 + 1e-12))
            throw ParseError(path + ": line " + std::to_string(lineno) + ": value out of range");
        curve.points.push_back(p);
    }
    if (curve.points.empty()) throw ParseError(path + ": no curve points");
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        if (!(curve.points[i].lambda > curve.points[i - 1].lambda))
            throw ParseError(path + ": lambda values not strictly increasing");
    return curve;
}

inline nlohmann::json meta_to_json(const CurveMeta& meta) {
    nlohmann::json j;
    j["method"] = meta.method;
    if (meta.k) j["k"] = *meta.k;
    if (meta.sigma) j["sigma"] = *meta.sigma;
    j["split"] = {{"enabled", meta.split.enabled},
                  {"fraction", meta.split.fraction},
                  {"seed", meta.split.seed}};
    j["seed"] = meta.seed;
    j["lambdas"] = meta.lambdas;
    return j;
}

/// Sidecar path convention: `<curve path>.meta.json`.
inline void write_curve_meta(const PRCurve& curve, const std::string& curve_path) {
    std::ofstream out(curve_path + ".meta.json");
    if (!out) throw std::runtime_error("cannot open '" + curve_path + ".meta.json' for writing");
    out << meta_to_json(curve.meta).dump(2) << '\n';
}

}  // namespace prdkit
