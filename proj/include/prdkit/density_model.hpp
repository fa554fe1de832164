#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prdkit/linalg.hpp"
#include "prdkit/rng.hpp"
#include "prdkit/sample_set.hpp"

namespace prdkit {

namespace detail {
constexpr double log_two_pi = 1.8378770664093454836;  // ln(2*pi)
}

/// One Gaussian component. Isotropic components carry no factor (identity
/// covariance); general ones carry the lower-triangular covariance factor.
struct GaussianComponent {
    std::vector<double> mean;
    bool isotropic = true;
    SymmetricFactor factor;  // unused when isotropic

    std::size_t dim() const { return mean.size(); }
};

/// Analytic density: a single Gaussian or a finite Gaussian mixture.
/// Supports exact log-densities and exact sampling.
struct DensityModel {
    std::vector<GaussianComponent> components;
    std::vector<double> weights;

    std::size_t dim() const { return components.empty() ? 0 : components.front().dim(); }
    bool is_mixture() const { return components.size() > 1; }
};

inline void validate(const DensityModel& model) {
    if (model.components.empty()) throw std::invalid_argument("density model: no components");
    if (model.weights.size() != model.components.size())
        throw std::invalid_argument("density model: weights/components size mismatch");
    double total = 0.0;
    for (double w : model.weights) {
        if (w < 0.0) throw std::invalid_argument("density model: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("density model: weights must sum to 1 within 1e-12");
    for (const auto& c : model.components)
        if (c.dim() != model.dim()) throw std::invalid_argument("density model: mixed dimensions");
}

inline DensityModel isotropic_gaussian(std::vector<double> mean) {
    DensityModel m;
    m.components.push_back({std::move(mean), true, {}});
    m.weights = {1.0};
    return m;
}

inline DensityModel general_gaussian(std::vector<double> mean, const Matrix& cov) {
    if (cov.rows != mean.size()) throw std::invalid_argument("general_gaussian: mean/cov size mismatch");
    DensityModel m;
    GaussianComponent c;
    c.mean = std::move(mean);
    c.isotropic = false;
    c.factor = cholesky_jittered(cov);
    m.components.push_back(std::move(c));
    m.weights = {1.0};
    return m;
}

inline DensityModel mixture(std::vector<DensityModel> gaussians, std::vector<double> weights) {
    DensityModel m;
    for (auto& g : gaussians) {
        if (g.components.size() != 1) throw std::invalid_argument("mixture: components must be Gaussians");
        m.components.push_back(std::move(g.components.front()));
    }
    m.weights = std::move(weights);
    validate(m);
    return m;
}

namespace detail {

inline double component_log_pdf(const GaussianComponent& c, std::span<const double> z,
                                std::vector<double>& scratch) {
    const std::size_t d = c.dim();
    if (c.isotropic) {
        double q = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = z[i] - c.mean[i];
            q += diff * diff;
        }
        return -0.5 * static_cast<double>(d) * log_two_pi - 0.5 * q;
    }
    std::vector<double> centered(d);
    for (std::size_t i = 0; i < d; ++i) centered[i] = z[i] - c.mean[i];
    forward_solve(c.factor.l, centered, scratch);
    double q = 0.0, logdet = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        q += scratch[i] * scratch[i];
        logdet += std::log(c.factor.l.at(i, i));
    }
    return -0.5 * static_cast<double>(d) * log_two_pi - logdet - 0.5 * q;
}

}  // namespace detail

/// Exact log density; mixtures go through log-sum-exp with zero-weight
/// components skipped.
inline double log_pdf(const DensityModel& model, std::span<const double> z) {
    if (z.size() != model.dim()) throw std::invalid_argument("log_pdf: dimension mismatch");
    std::vector<double> scratch;
    if (!model.is_mixture()) return detail::component_log_pdf(model.components.front(), z, scratch);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(model.components.size());
    for (std::size_t i = 0; i < model.components.size(); ++i) {
        if (model.weights[i] == 0.0) continue;
        const double t = std::log(model.weights[i]) +
                         detail::component_log_pdf(model.components[i], z, scratch);
        terms.push_back(t);
        max_term = std::max(max_term, t);
    }
    if (terms.empty() || !std::isfinite(max_term)) return -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc);
}

/// n i.i.d. draws. Gaussians transform a standard-normal vector by the
/// covariance factor; mixtures first draw the component index.
inline SampleSet sample(const DensityModel& model, std::size_t n, RngStream& rng,
                        std::string label = "sample") {
    if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
    const std::size_t d = model.dim();
    SampleSet out;
    out.label = std::move(label);
    out.points = Matrix(n, d);
    std::vector<double> w(d);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t comp = 0;
        if (model.is_mixture()) {
            const double u = rng.uniform01();
            double acc = 0.0;
            for (std::size_t c = 0; c < model.weights.size(); ++c) {
                acc += model.weights[c];
                if (u < acc || c + 1 == model.weights.size()) {
                    comp = c;
                    break;
                }
            }
            while (model.weights[comp] == 0.0 && comp > 0) --comp;  // never draw zero-weight modes
        }
        const auto& g = model.components[comp];
        for (std::size_t j = 0; j < d; ++j) w[j] = rng.normal();
        auto row = out.points.row(i);
        if (g.isotropic) {
            for (std::size_t j = 0; j < d; ++j) row[j] = g.mean[j] + w[j];
        } else {
            for (std::size_t j = 0; j < d; ++j) {
                double v = g.mean[j];
                for (std::size_t k = 0; k <= j; ++k) v += g.factor.l.at(j, k) * w[k];
                row[j] = v;
            }
        }
    }
    return out;
}

/// JSON schema:
///   {"type":"gaussian","mean":[...],"cov":[[...]]|"identity"}
///   {"type":"gmm","components":[{"mean":...,"cov":...},...],"weights":[...]}
inline nlohmann::json model_to_json(const DensityModel& model) {
    auto component_json = [](const GaussianComponent& c) {
        nlohmann::json j;
        j["mean"] = c.mean;
        if (c.isotropic) {
            j["cov"] = "identity";
        } else {
            const std::size_t d = c.dim();
            std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j2 = 0; j2 < d; ++j2) {
                    double v = 0.0;
                    for (std::size_t k = 0; k <= std::min(i, j2); ++k)
                        v += c.factor.l.at(i, k) * c.factor.l.at(j2, k);
                    cov[i][j2] = v;
                }
            j["cov"] = cov;
        }
        return j;
    };
    nlohmann::json j;
    if (!model.is_mixture()) {
        j = component_json(model.components.front());
        j["type"] = "gaussian";
    } else {
        j["type"] = "gmm";
        j["weights"] = model.weights;
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : model.components) comps.push_back(component_json(c));
        j["components"] = comps;
    }
    return j;
}

inline DensityModel model_from_json(const nlohmann::json& j, const std::string& where) {
    auto component_from = [&](const nlohmann::json& cj) {
        if (!cj.contains("mean") || !cj["mean"].is_array())
            throw ParseError(where + ": component missing 'mean' array");
        std::vector<double> mean = cj["mean"].get<std::vector<double>>();
        if (!cj.contains("cov") || (cj["cov"].is_string() && cj["cov"] == "identity"))
            return isotropic_gaussian(std::move(mean));
        const auto rows = cj["cov"].get<std::vector<std::vector<double>>>();
        Matrix cov(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw ParseError(where + ": covariance not square");
            for (std::size_t k = 0; k < rows.size(); ++k) cov.at(i, k) = rows[i][k];
        }
        return general_gaussian(std::move(mean), cov);
    };
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "gaussian") return component_from(j);
        if (type == "gmm") {
            std::vector<DensityModel> comps;
            for (const auto& cj : j.at("components")) comps.push_back(component_from(cj));
            return mixture(std::move(comps), j.at("weights").get<std::vector<double>>());
        }
        throw ParseError(where + ": unknown model type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline DensityModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return model_from_json(j, path);
}

inline void save_model(const DensityModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << model_to_json(model).dump(2) << '\n';
}

}  // namespace prdkit
